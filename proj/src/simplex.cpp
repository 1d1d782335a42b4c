#include "finex/simplex.hpp"

#include <algorithm>

#include "finex/errors.hpp"

namespace finex::mmot {

void LPInstance::validate() const {
    if (constraints.size() != rhs.size())
        throw ValidationError("LP: constraint row count must match rhs length");
    for (const auto& row : constraints)
        if (row.size() != objective.size())
            throw ValidationError("LP: every constraint row must match the objective length");
}

bool LPResult::verify(const LPInstance& lp) const {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    const auto dot = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        Rational s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    const auto col_dot_dual = [&](std::size_t j) {
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i) s += lp.constraints[i][j] * dual[i];
        return s;
    };
    const auto primal_feasible = [&](const std::vector<Rational>& x) {
        if (x.size() != n) return false;
        for (const auto& v : x)
            if (v < 0) return false;
        for (std::size_t i = 0; i < m; ++i)
            if (dot(lp.constraints[i], x) != lp.rhs[i]) return false;
        return true;
    };

    switch (status) {
    case LPStatus::optimal: {
        if (dual.size() != m) return false;
        if (!primal_feasible(primal)) return false;
        if (dot(lp.objective, primal) != value) return false;
        for (std::size_t j = 0; j < n; ++j)
            if (col_dot_dual(j) > lp.objective[j]) return false;
        return dot(lp.rhs, dual) == value;
    }
    case LPStatus::infeasible: {
        if (dual.size() != m) return false;
        for (std::size_t j = 0; j < n; ++j)
            if (col_dot_dual(j) > 0) return false;
        return dot(lp.rhs, dual) > 0;
    }
    case LPStatus::unbounded: {
        if (ray.size() != n) return false;
        if (!primal_feasible(primal)) return false;
        for (const auto& v : ray)
            if (v < 0) return false;
        for (std::size_t i = 0; i < m; ++i)
            if (dot(lp.constraints[i], ray) != 0) return false;
        return dot(lp.objective, ray) < 0;
    }
    }
    return false;
}

namespace {

class Tableau {
public:
    Tableau(const LPInstance& lp)
        : n_(lp.num_vars()), m_(lp.num_rows()), lp_(lp), row_sign_(m_, 1), basis_(m_) {
        // Columns: n originals, m artificials, rhs. Rows are pre-flipped so
        // the artificial identity basis is feasible.
        t_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
        for (std::size_t i = 0; i < m_; ++i) {
            const bool flip = lp.rhs[i] < 0;
            row_sign_[i] = flip ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j)
                t_[i][j] = flip ? -lp.constraints[i][j] : lp.constraints[i][j];
            t_[i][n_ + i] = 1;
            t_[i][rhs_col()] = flip ? -lp.rhs[i] : lp.rhs[i];
            basis_[i] = n_ + i;
        }
    }

    LPResult solve() {
        // Phase 1: minimize the artificial mass.
        run_phase(/*phase1=*/true);
        Rational infeas = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_) infeas += t_[i][rhs_col()];
        if (infeas > 0) {
            LPResult r;
            r.status = LPStatus::infeasible;
            r.dual = signed_dual(/*phase1=*/true);
            return r;
        }

        // Phase 2 on the original objective.
        const std::size_t unbounded_col = run_phase(/*phase1=*/false);
        LPResult r;
        r.primal = primal_point();
        if (unbounded_col != kNone) {
            r.status = LPStatus::unbounded;
            r.ray.assign(n_, Rational(0));
            r.ray[unbounded_col] = 1;
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] < n_) r.ray[basis_[i]] = -t_[i][unbounded_col];
            return r;
        }
        r.status = LPStatus::optimal;
        Rational v = 0;
        for (std::size_t j = 0; j < n_; ++j) v += lp_.objective[j] * r.primal[j];
        r.value = std::move(v);
        r.dual = signed_dual(/*phase1=*/false);
        return r;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    std::size_t rhs_col() const { return n_ + m_; }

    Rational phase_cost(bool phase1, std::size_t var) const {
        if (phase1) return var >= n_ ? Rational(1) : Rational(0);
        return var < n_ ? lp_.objective[var] : Rational(0);
    }

    Rational reduced_cost(bool phase1, std::size_t col) const {
        Rational r = phase_cost(phase1, col);
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational cb = phase_cost(phase1, basis_[i]);
            if (cb != 0 && t_[i][col] != 0) r -= cb * t_[i][col];
        }
        return r;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational piv = t_[row][col];
        for (auto& v : t_[row]) v /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || t_[i][col] == 0) continue;
            const Rational factor = t_[i][col];
            for (std::size_t j = 0; j <= rhs_col(); ++j)
                if (t_[row][j] != 0) t_[i][j] -= factor * t_[row][j];
        }
        basis_[row] = col;
    }

    /// Runs Bland pivots until no original column prices negative. Returns
    /// the entering column when the problem is unbounded in that direction,
    /// kNone at optimality.
    std::size_t run_phase(bool phase1) {
        while (true) {
            std::size_t enter = kNone;
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic(j)) continue;
                if (reduced_cost(phase1, j) < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == kNone) return kNone;

            // A basic artificial sitting at zero with a nonzero entry in the
            // entering column is pivoted out first (zero-length step), so
            // artificials can never become positive again.
            std::size_t evict = kNone;
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] >= n_ && t_[i][rhs_col()] == 0 && t_[i][enter] != 0) {
                    evict = i;
                    break;
                }
            if (evict != kNone) {
                pivot(evict, enter);
                continue;
            }

            std::size_t leave = kNone;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 0) continue;
                const Rational ratio = t_[i][rhs_col()] / t_[i][enter];
                if (leave == kNone || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == kNone) {
                if (phase1)
                    throw VerificationFailure("phase-1 objective is bounded by construction");
                return enter;
            }
            pivot(leave, enter);
        }
    }

    bool is_basic(std::size_t var) const {
        return std::find(basis_.begin(), basis_.end(), var) != basis_.end();
    }

    std::vector<Rational> primal_point() const {
        std::vector<Rational> x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = t_[i][rhs_col()];
        return x;
    }

    /// Dual vector read off the artificial columns (they carry the basis
    /// inverse), with the phase-1 row flips undone.
    std::vector<Rational> signed_dual(bool phase1) const {
        std::vector<Rational> y(m_, Rational(0));
        for (std::size_t col = 0; col < m_; ++col) {
            Rational v = 0;
            for (std::size_t i = 0; i < m_; ++i) {
                const Rational cb = phase_cost(phase1, basis_[i]);
                if (cb != 0 && t_[i][n_ + col] != 0) v += cb * t_[i][n_ + col];
            }
            y[col] = row_sign_[col] < 0 ? -v : v;
        }
        return y;
    }

    std::size_t n_, m_;
    const LPInstance& lp_;
    std::vector<std::vector<Rational>> t_;
    std::vector<int> row_sign_;
    std::vector<std::size_t> basis_;
};

} // namespace

LPResult simplex_solve(const LPInstance& lp) {
    lp.validate();
    return Tableau(lp).solve();
}

} // namespace finex::mmot
