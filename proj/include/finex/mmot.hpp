#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "finex/definetti.hpp"
#include "finex/measures.hpp"
#include "finex/simplex.hpp"

namespace finex::mmot {

/// Symmetric k-body cost on space^k with exact rational values; entries may
/// be +infinity (singular interactions). Symmetry is validated.
class CostTensor {
public:
    CostTensor(measures::StateSpace space, int k, std::vector<Rational> values,
               std::vector<char> infinite = {});

    const measures::StateSpace& space() const { return space_; }
    int k() const { return k_; }
    std::size_t entry_count() const { return values_.size(); }
    const Rational& value(std::size_t flat) const { return values_[flat]; }
    bool is_infinite(std::size_t flat) const { return !infinite_.empty() && infinite_[flat] != 0; }
    bool has_infinite() const;

    std::size_t flatten(std::span<const int> idx) const;

    /// max |Phi| over finite entries.
    Rational max_abs_finite() const;

private:
    measures::StateSpace space_;
    int k_;
    std::vector<Rational> values_;
    std::vector<char> infinite_;
};

/// Integral of the cost against a signed tensor, with the 0 * inf = 0
/// convention: infinite iff any nonzero weight sits on an infinite entry.
struct Contraction {
    bool infinite = false;
    Rational value;
};

Contraction contract(const CostTensor& phi, const measures::SignedTensor& t);

/// P_{N,k}(lambda) = integral of Phi against F_{N,k}(lambda).
Contraction p_nk(const measures::DiscreteMeasure& lam, const CostTensor& phi, int N);

/// P_k(lambda) = integral of Phi against lambda^{tensor k}.
Contraction p_k(const measures::DiscreteMeasure& lam, const CostTensor& phi);

/// Direct oracle for C_{N,k}(rho): exact LP over symmetric N-plans with
/// one variable per S_N-orbit (multiset of size N); the objective
/// coefficient of an orbit is the plain average of Phi over the
/// binom(N,k) position subsets of its representative tuple — computed
/// without any use of the F_{N,k} machinery. Requires l^N <= 10^5.
LPResult solve_primal(int N, const CostTensor& phi, const measures::DiscreteMeasure& rho);

struct ReformulatedSolution {
    LPResult lp;
    /// Optimal prior (present when status == optimal).
    std::optional<definetti::PriorMixture> prior;
    /// Column order used by the LP = enumerate_quantized order (possibly
    /// filtered); kept for certificate replay.
    std::vector<measures::QuantizedMeasure> columns;
    LPInstance instance;
};

/// C_{N,k}(rho) via the quantized-polynomial reformulation: minimize
/// sum alpha_lambda P_{N,k}(lambda) over priors with barycenter rho.
/// offdiag_only restricts columns to urns with all counts <= k-1 (the
/// zero-diagonal extreme points); columns with infinite objective are
/// dropped. Requires binom(N+l-1, l-1) <= 10^6.
ReformulatedSolution solve_reformulated(int N, const CostTensor& phi,
                                        const measures::DiscreteMeasure& rho,
                                        bool offdiag_only = false);

/// Piecewise-linear function given by hull breakpoints (ascending x).
class PiecewiseLinear {
public:
    explicit PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breakpoints);

    const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return points_; }
    Rational operator()(const Rational& x) const;

private:
    std::vector<std::pair<Rational, Rational>> points_;
};

/// Lower convex hull of the N+1 points (m/N, P_{N,k}((m/N, 1-m/N))) on a
/// two-point state space, by a monotone-chain Graham scan over the already
/// sorted abscissae. Evaluating the hull at rho_1 equals the reformulated
/// LP value at rho = (rho_1, 1-rho_1).
PiecewiseLinear convexify_ell2(int N, const CostTensor& phi, int k);

struct GammaGapResult {
    Rational c_value;            // C_{N,k}(rho)
    bool envelope_exact;         // true when P_k was convexity-certified
    Rational envelope;           // P_k**(rho) when exact, else the grid-hull value
    Rational envelope_tolerance; // 0 when exact; one-sided hull error otherwise
    Rational certified_lower;    // prefactor^{-1}-scaled sandwich lower bound
    bool sandwich_lower_ok;
    bool sandwich_upper_ok;
};

/// Checks the uniform-convergence sandwich
///   (N-k)! N^k / N! * (P_k**(rho) - C_k max|Phi| / N) <= C_{N,k}(rho) <= P_k**(rho).
/// P_k** is exact when p_k passes the grid convexity certificate (then
/// P_k** = p_k(rho) by Jensen); otherwise (l = 2 only) it is bracketed by a
/// dyadic grid hull with the stated one-sided tolerance.
GammaGapResult gamma_limit_gap(int N, const CostTensor& phi, const measures::DiscreteMeasure& rho,
                               int grid_resolution = 1024);

} // namespace finex::mmot
