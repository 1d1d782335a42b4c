#include "finex/mmot.hpp"

#include <algorithm>
#include <array>

namespace finex::mmot {

using measures::DiscreteMeasure;
using measures::QuantizedMeasure;
using measures::SignedTensor;
using measures::StateSpace;

CostTensor::CostTensor(StateSpace space, int k, std::vector<Rational> values, std::vector<char> infinite)
    : space_(std::move(space)), k_(k), values_(std::move(values)), infinite_(std::move(infinite)) {
    if (k_ < 1) throw ValidationError("cost order must be >= 1");
    std::size_t expected = 1;
    for (int i = 0; i < k_; ++i) expected *= static_cast<std::size_t>(space_.size());
    if (values_.size() != expected) throw ValidationError("cost tensor has the wrong entry count");
    if (!infinite_.empty() && infinite_.size() != expected)
        throw ValidationError("cost infinity mask has the wrong entry count");

    // Symmetry: every entry must match its sorted-index representative.
    SignedTensor shape(space_, k_); // index helper
    std::array<int, 32> idx{};
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        shape.unflatten(flat, std::span(idx.data(), static_cast<std::size_t>(k_)));
        std::sort(idx.begin(), idx.begin() + k_);
        const std::size_t rep = shape.flatten(std::span<const int>(idx.data(), static_cast<std::size_t>(k_)));
        if (values_[flat] != values_[rep] || is_infinite(flat) != is_infinite(rep))
            throw ValidationError("cost tensor must be symmetric under index permutations");
    }
}

bool CostTensor::has_infinite() const {
    return std::any_of(infinite_.begin(), infinite_.end(), [](char c) { return c != 0; });
}

std::size_t CostTensor::flatten(std::span<const int> idx) const {
    std::size_t flat = 0;
    for (int t = 0; t < k_; ++t) flat = flat * static_cast<std::size_t>(space_.size()) +
                                        static_cast<std::size_t>(idx[static_cast<std::size_t>(t)]);
    return flat;
}

Rational CostTensor::max_abs_finite() const {
    Rational m = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (is_infinite(i)) continue;
        Rational a = rational_abs(values_[i]);
        if (a > m) m = std::move(a);
    }
    return m;
}

Contraction contract(const CostTensor& phi, const SignedTensor& t) {
    if (phi.space() != t.space() || phi.k() != t.order())
        throw ValidationError("cost and tensor shapes do not match");
    Contraction out;
    for (std::size_t i = 0; i < t.entry_count(); ++i) {
        if (t[i] == 0) continue;
        if (phi.is_infinite(i)) {
            out.infinite = true;
            out.value = 0;
            return out;
        }
        out.value += phi.value(i) * t[i];
    }
    return out;
}

Contraction p_nk(const DiscreteMeasure& lam, const CostTensor& phi, int N) {
    if (phi.k() > N) throw ValidationError("p_nk needs k <= N");
    return contract(phi, extremal::f_nk_explicit(N, lam, phi.k()));
}

Contraction p_k(const DiscreteMeasure& lam, const CostTensor& phi) {
    return contract(phi, measures::tensor_power(lam, phi.k()));
}

namespace {

struct MarginalLP {
    LPInstance lp;
    std::vector<std::size_t> kept; // column index into the urn list
};

/// Constraint block shared by both solvers: barycenter rows then mass.
MarginalLP marginal_constrained_lp(const std::vector<QuantizedMeasure>& urns,
                                   const std::vector<Contraction>& objectives,
                                   const DiscreteMeasure& rho) {
    MarginalLP out;
    for (std::size_t c = 0; c < urns.size(); ++c)
        if (!objectives[c].infinite) out.kept.push_back(c);

    const int ell = rho.size();
    const std::size_t n = out.kept.size();
    out.lp.objective.resize(n);
    out.lp.constraints.assign(static_cast<std::size_t>(ell) + 1, std::vector<Rational>(n, Rational(0)));
    out.lp.rhs.assign(static_cast<std::size_t>(ell) + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        const auto& urn = urns[out.kept[j]];
        out.lp.objective[j] = objectives[out.kept[j]].value;
        for (int i = 0; i < ell; ++i)
            out.lp.constraints[static_cast<std::size_t>(i)][j] = Rational(urn.count(i), urn.N());
        out.lp.constraints[static_cast<std::size_t>(ell)][j] = 1;
    }
    for (int i = 0; i < ell; ++i) out.lp.rhs[static_cast<std::size_t>(i)] = rho.weight(i);
    out.lp.rhs[static_cast<std::size_t>(ell)] = 1;
    return out;
}

/// Average of Phi over the binom(N,k) position subsets of the urn's sorted
/// ball tuple. Pure combinatorial enumeration; the oracle side of the
/// reformulation identity.
Contraction subset_average_cost(const QuantizedMeasure& urn, const CostTensor& phi) {
    const int N = urn.N();
    const int k = phi.k();
    const std::vector<int> balls = urn.balls();
    Contraction out;
    Int hits = 0;
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    while (true) {
        for (int i = 0; i < k; ++i)
            idx[static_cast<std::size_t>(i)] = balls[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])];
        const std::size_t flat = phi.flatten(idx);
        if (phi.is_infinite(flat)) {
            out.infinite = true;
            out.value = 0;
            return out;
        }
        out.value += phi.value(flat);
        hits += 1;
        int pos = k - 1;
        while (pos >= 0 && comb[static_cast<std::size_t>(pos)] == N - k + pos) --pos;
        if (pos < 0) break;
        ++comb[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            comb[static_cast<std::size_t>(i)] = comb[static_cast<std::size_t>(i) - 1] + 1;
    }
    out.value /= Rational(hits, 1);
    return out;
}

} // namespace

LPResult solve_primal(int N, const CostTensor& phi, const DiscreteMeasure& rho) {
    if (phi.space() != rho.space()) throw ValidationError("cost and marginal spaces do not match");
    if (phi.k() > N) throw ValidationError("solve_primal needs k <= N");
    double raw = 1;
    for (int i = 0; i < N; ++i) raw *= rho.size();
    if (raw > 100'000.0) throw BudgetExceeded("solve_primal is restricted to l^N <= 10^5");

    const auto urns = extremal::enumerate_quantized(N, rho.space());
    std::vector<Contraction> objectives;
    objectives.reserve(urns.size());
    for (const auto& urn : urns) objectives.push_back(subset_average_cost(urn, phi));

    const MarginalLP built = marginal_constrained_lp(urns, objectives, rho);
    return simplex_solve(built.lp);
}

ReformulatedSolution solve_reformulated(int N, const CostTensor& phi, const DiscreteMeasure& rho,
                                        bool offdiag_only) {
    if (phi.space() != rho.space()) throw ValidationError("cost and marginal spaces do not match");
    const int k = phi.k();
    if (k > N) throw ValidationError("solve_reformulated needs k <= N");
    const int ell = rho.size();
    if (binomial(N + ell - 1, ell - 1) > 1'000'000)
        throw BudgetExceeded("solve_reformulated exceeds the 10^6 column budget");

    auto urns = extremal::enumerate_quantized(N, rho.space());
    if (offdiag_only) {
        std::erase_if(urns, [&](const QuantizedMeasure& u) { return !extremal::is_offdiagonal_extreme(u, k); });
        if (urns.empty()) throw ValidationError("no off-diagonal extreme urns exist for this (N, k)");
    }
    std::vector<Contraction> objectives;
    objectives.reserve(urns.size());
    for (const auto& urn : urns) objectives.push_back(p_nk(urn.to_measure(), phi, N));

    MarginalLP built = marginal_constrained_lp(urns, objectives, rho);
    ReformulatedSolution out;
    out.lp = simplex_solve(built.lp);
    for (std::size_t j = 0; j < built.kept.size(); ++j)
        out.columns.push_back(urns[built.kept[j]]);
    out.instance = std::move(built.lp);
    if (out.lp.status == LPStatus::optimal) {
        std::vector<definetti::PriorMixture::Atom> atoms;
        for (std::size_t j = 0; j < out.columns.size(); ++j)
            if (out.lp.primal[j] > 0) atoms.push_back({out.lp.primal[j], out.columns[j]});
        out.prior = definetti::PriorMixture(rho.space(), N, std::move(atoms));
    }
    return out;
}

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breakpoints)
    : points_(std::move(breakpoints)) {
    if (points_.empty()) throw ValidationError("piecewise-linear function needs breakpoints");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i].first <= points_[i - 1].first)
            throw ValidationError("breakpoints must have strictly increasing abscissae");
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
    if (x < points_.front().first || x > points_.back().first)
        throw ValidationError("evaluation point outside the hull domain");
    std::size_t lo = 0, hi = points_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (points_[mid].first <= x) lo = mid;
        else hi = mid;
    }
    if (x == points_[lo].first) return points_[lo].second;
    const auto& [x0, y0] = points_[lo];
    const auto& [x1, y1] = points_[lo + 1];
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

namespace {

PiecewiseLinear lower_hull(const std::vector<std::pair<Rational, Rational>>& pts) {
    std::vector<std::pair<Rational, Rational>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull[hull.size() - 1];
            // pop a unless (o, a, p) makes a strict left turn
            const Rational cross = (a.first - o.first) * (p.second - o.second) -
                                   (a.second - o.second) * (p.first - o.first);
            if (cross > 0) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return PiecewiseLinear(std::move(hull));
}

DiscreteMeasure two_point_measure(const StateSpace& space, const Rational& t) {
    return DiscreteMeasure(space, {t, 1 - t});
}

} // namespace

PiecewiseLinear convexify_ell2(int N, const CostTensor& phi, int k) {
    if (phi.space().size() != 2) throw ValidationError("convexify_ell2 needs a two-point state space");
    if (k != phi.k()) throw ValidationError("cost order does not match k");
    if (k > N) throw ValidationError("convexify_ell2 needs k <= N");
    std::vector<std::pair<Rational, Rational>> pts;
    for (int m = 0; m <= N; ++m) {
        const Rational t(m, N);
        const Contraction v = p_nk(two_point_measure(phi.space(), t), phi, N);
        if (v.infinite) continue;
        pts.emplace_back(t, v.value);
    }
    if (pts.empty()) throw ValidationError("every quantized point has infinite cost");
    return lower_hull(pts);
}

GammaGapResult gamma_limit_gap(int N, const CostTensor& phi, const DiscreteMeasure& rho,
                               int grid_resolution) {
    const int k = phi.k();
    if (k > N) throw ValidationError("gamma_limit_gap needs k <= N");
    if (phi.has_infinite())
        throw ValidationError("gamma_limit_gap needs a finite cost");
    if (grid_resolution < 64) throw ValidationError("grid resolution too coarse");

    GammaGapResult out;
    const ReformulatedSolution sol = solve_reformulated(N, phi, rho);
    if (sol.lp.status != LPStatus::optimal)
        throw VerificationFailure("reformulated LP should be solvable for a finite cost");
    out.c_value = sol.lp.value;

    const int ell = rho.size();
    bool certified_convex = false;
    if (ell == 2) {
        // Second-difference certificate on a dyadic grid.
        certified_convex = true;
        const int g = 256;
        Rational prev = p_k(two_point_measure(rho.space(), Rational(0)), phi).value;
        Rational cur = p_k(two_point_measure(rho.space(), Rational(1, g)), phi).value;
        for (int i = 1; i < g && certified_convex; ++i) {
            Rational next = p_k(two_point_measure(rho.space(), Rational(i + 1, g)), phi).value;
            if (prev - 2 * cur + next < 0) certified_convex = false;
            prev = std::move(cur);
            cur = std::move(next);
        }
    } else {
        // Midpoint-convexity certificate over a deterministic simplex grid.
        certified_convex = true;
        const int g = 4;
        std::vector<DiscreteMeasure> grid;
        std::vector<std::int64_t> c(static_cast<std::size_t>(ell), 0);
        auto rec = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == ell - 1) {
                c[static_cast<std::size_t>(pos)] = remaining;
                std::vector<Rational> w;
                for (auto v : c) w.emplace_back(v, g);
                grid.push_back(DiscreteMeasure(rho.space(), std::move(w)));
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                c[static_cast<std::size_t>(pos)] = v;
                self(self, pos + 1, remaining - v);
            }
        };
        rec(rec, 0, g);
        for (std::size_t a = 0; a < grid.size() && certified_convex; ++a) {
            for (std::size_t b = a + 1; b < grid.size() && certified_convex; ++b) {
                std::vector<Rational> mid;
                for (int i = 0; i < ell; ++i)
                    mid.push_back((grid[a].weight(i) + grid[b].weight(i)) / 2);
                const Rational lhs = p_k(DiscreteMeasure(rho.space(), std::move(mid)), phi).value;
                const Rational rhs = (p_k(grid[a], phi).value + p_k(grid[b], phi).value) / 2;
                if (lhs > rhs) certified_convex = false;
            }
        }
        if (!certified_convex)
            throw ValidationError("envelope is only computable for l = 2 or certified-convex costs");
    }

    if (certified_convex) {
        out.envelope_exact = true;
        out.envelope = p_k(rho, phi).value;
        out.envelope_tolerance = 0;
    } else {
        // l = 2 grid hull bracket: P_k** lies in [hull - tol, hull] with the
        // one-sided error 2 max|Phi| * (grid step).
        std::vector<std::pair<Rational, Rational>> pts;
        for (int i = 0; i <= grid_resolution; ++i) {
            const Rational t(i, grid_resolution);
            pts.emplace_back(t, p_k(two_point_measure(rho.space(), t), phi).value);
        }
        const PiecewiseLinear hull = lower_hull(pts);
        out.envelope_exact = false;
        out.envelope = hull(rho.weight(0));
        out.envelope_tolerance = 2 * phi.max_abs_finite() / grid_resolution;
    }

    const Rational pref = extremal::prefactor(N, k);
    const Rational ck(extremal::series_constant(k), 1);
    out.certified_lower =
        pref * (out.envelope - out.envelope_tolerance - ck * phi.max_abs_finite() / N);
    out.sandwich_lower_ok = out.certified_lower <= out.c_value;
    out.sandwich_upper_ok = out.c_value <= out.envelope;
    return out;
}

} // namespace finex::mmot
