#pragma once

#include <vector>

#include "finex/rational.hpp"

namespace finex::mmot {

/// min objective . x  subject to  constraints x = rhs, x >= 0.
struct LPInstance {
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> constraints; // m rows of length n
    std::vector<Rational> rhs;                      // length m

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return constraints.size(); }
    void validate() const;
};

enum class LPStatus { optimal, infeasible, unbounded };

/// Result with exact certificates:
///  - optimal:   primal feasible, dual feasible, objective value = rhs . dual
///  - infeasible: Farkas dual with A^T y <= 0 and rhs . y > 0
///  - unbounded: feasible primal plus ray with A ray = 0, ray >= 0,
///               objective . ray < 0
struct LPResult {
    LPStatus status = LPStatus::optimal;
    Rational value;
    std::vector<Rational> primal;
    std::vector<Rational> dual;
    std::vector<Rational> ray;

    /// Exact replay of the relevant certificate against the instance.
    bool verify(const LPInstance& lp) const;
};

/// Two-phase primal simplex on exact rationals with Bland's anti-cycling
/// rule (lowest eligible index enters; lowest-index basic variable leaves
/// among ratio ties).
LPResult simplex_solve(const LPInstance& lp);

} // namespace finex::mmot
