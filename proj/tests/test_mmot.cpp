#include <doctest.h>

#include "finex/mmot.hpp"

using namespace finex;
using namespace finex::measures;
using namespace finex::mmot;

namespace {

StateSpace ab() { return StateSpace({"a", "b"}); }

/// Phi(x, y) = 1 iff x = y, the two-point coincidence cost.
CostTensor diag_indicator2() {
    return CostTensor(ab(), 2, {Rational(1), Rational(0), Rational(0), Rational(1)});
}

CostTensor constant_cost(const StateSpace& s, int k, const Rational& c) {
    SignedTensor shape(s, k);
    return CostTensor(s, k, std::vector<Rational>(shape.entry_count(), c));
}

DiscreteMeasure two_point(const Rational& t) { return DiscreteMeasure(ab(), {t, 1 - t}); }

DiscreteMeasure random_measure(const StateSpace& s, definetti::SplitMix64& rng) {
    std::vector<std::int64_t> raw(static_cast<std::size_t>(s.size()));
    std::int64_t total = 0;
    for (auto& v : raw) {
        v = static_cast<std::int64_t>(rng.below(7));
        total += v;
    }
    if (total == 0) {
        raw[0] = 1;
        total = 1;
    }
    std::vector<Rational> w;
    for (auto v : raw) w.emplace_back(v, total);
    return DiscreteMeasure(s, std::move(w));
}

CostTensor random_symmetric_cost(const StateSpace& s, int k, definetti::SplitMix64& rng) {
    SignedTensor shape(s, k);
    std::vector<Rational> values(shape.entry_count());
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        shape.unflatten(flat, idx);
        std::vector<int> sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t rep = shape.flatten(sorted);
        values[flat] = flat == rep ? Rational(static_cast<std::int64_t>(rng.below(13)) - 6,
                                              1 + static_cast<std::int64_t>(rng.below(3)))
                                   : values[rep];
    }
    return CostTensor(s, k, std::move(values));
}

} // namespace

TEST_CASE("cost validation") {
    CHECK_THROWS_AS(CostTensor(ab(), 2, {Rational(1), Rational(2), Rational(3), Rational(4)}),
                    ValidationError);
    CHECK_NOTHROW(diag_indicator2());
}

TEST_CASE("p_nk closed forms") {
    // two-point diag indicator at lambda = (1/2, 1/2): (N-2)/(2(N-1))
    for (int N = 2; N <= 12; ++N) {
        const auto v = p_nk(two_point(Rational(1, 2)), diag_indicator2(), N);
        REQUIRE_FALSE(v.infinite);
        CHECK(v.value == Rational(N - 2, 2 * (N - 1)));
    }

    // constant cost integrates to the constant
    definetti::SplitMix64 rng(43);
    for (int rep = 0; rep < 5; ++rep) {
        const auto lam = random_measure(ab(), rng);
        CHECK(p_nk(lam, constant_cost(ab(), 2, Rational(7, 3)), 5).value == Rational(7, 3));
    }

    // k = 2 closed form on random inputs
    for (int rep = 0; rep < 10; ++rep) {
        const auto lam = random_measure(ab(), rng);
        const auto phi = random_symmetric_cost(ab(), 2, rng);
        const int N = 3 + static_cast<int>(rng.below(5));
        Rational direct = 0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                direct += phi.value(phi.flatten(std::vector<int>{x, y})) * lam.weight(x) * lam.weight(y);
        direct *= Rational(N, N - 1);
        for (int x = 0; x < 2; ++x)
            direct -= Rational(1, N - 1) * phi.value(phi.flatten(std::vector<int>{x, x})) * lam.weight(x);
        CHECK(p_nk(lam, phi, N).value == direct);
    }

    // k = 3 three-term display on random inputs
    const auto s3 = StateSpace({"a", "b", "c"});
    for (int rep = 0; rep < 6; ++rep) {
        const auto lam = random_measure(s3, rng);
        const auto phi = random_symmetric_cost(s3, 3, rng);
        const int N = 3 + static_cast<int>(rng.below(4));
        Rational t1 = 0, t2 = 0, t3 = 0;
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < 3; ++y) {
                for (int z = 0; z < 3; ++z)
                    t1 += phi.value(phi.flatten(std::vector<int>{x, y, z})) * lam.weight(x) *
                          lam.weight(y) * lam.weight(z);
                t2 += phi.value(phi.flatten(std::vector<int>{x, x, y})) * lam.weight(x) * lam.weight(y);
            }
            t3 += phi.value(phi.flatten(std::vector<int>{x, x, x})) * lam.weight(x);
        }
        const Rational den((N - 1) * (N - 2), 1);
        const Rational expect = Rational(N * N, 1) / den * t1 - Rational(3 * N, 1) / den * t2 +
                                Rational(2, 1) / den * t3;
        CHECK(p_nk(lam, phi, N).value == expect);
    }
}

TEST_CASE("p_k and its large-N relation to p_nk") {
    // diag indicator: t^2 + (1-t)^2
    for (int num = 0; num <= 8; ++num) {
        const Rational t(num, 8);
        CHECK(p_k(two_point(t), diag_indicator2()).value == t * t + (1 - t) * (1 - t));
    }

    // relabeling symmetry
    const auto phi = diag_indicator2();
    CHECK(p_k(two_point(Rational(1, 3)), phi).value == p_k(two_point(Rational(2, 3)), phi).value);

    // |p_nk - p_k| <= maxPhi * ((pref - 1) + pref * C_k / N), from the
    // mean-field truncation bound applied to the contraction
    definetti::SplitMix64 rng(47);
    const int N = 1000;
    for (int rep = 0; rep < 5; ++rep) {
        const auto lam = random_measure(ab(), rng);
        const auto cost = random_symmetric_cost(ab(), 3, rng);
        const Rational gap = rational_abs(p_nk(lam, cost, N).value - p_k(lam, cost).value);
        const Rational pref = extremal::prefactor(N, 3);
        const Rational bound =
            cost.max_abs_finite() *
            ((pref - 1) + pref * Rational(extremal::series_constant(3), 1) / N);
        CHECK(gap <= bound);
    }
}

TEST_CASE("primal oracle solves tiny instances") {
    // N = 2: perfect anticorrelation costs nothing
    const auto rho = two_point(Rational(1, 2));
    const auto r2 = solve_primal(2, diag_indicator2(), rho);
    REQUIRE(r2.status == LPStatus::optimal);
    CHECK(r2.value == 0);

    // constant cost: value is the constant
    const auto rc = solve_primal(3, constant_cost(ab(), 2, Rational(5, 7)), rho);
    CHECK(rc.value == Rational(5, 7));

    // N = 4: (N-2)/(2(N-1)) = 1/3
    const auto r4 = solve_primal(4, diag_indicator2(), rho);
    CHECK(r4.value == Rational(1, 3));

    CHECK_THROWS_AS(solve_primal(30, diag_indicator2(), rho), BudgetExceeded);
}

TEST_CASE("reformulated solver agrees with the oracle") {
    definetti::SplitMix64 rng(53);
    std::vector<CostTensor> costs;
    costs.push_back(diag_indicator2());
    for (int i = 0; i < 3; ++i) costs.push_back(random_symmetric_cost(ab(), 2, rng));

    for (const auto& phi : costs)
        for (int N = 2; N <= 6; ++N)
            for (int num = 0; num <= 4; ++num) {
                const auto rho = two_point(Rational(num, 4));
                const auto oracle = solve_primal(N, phi, rho);
                const auto fast = solve_reformulated(N, phi, rho);
                REQUIRE(oracle.status == LPStatus::optimal);
                REQUIRE(fast.lp.status == LPStatus::optimal);
                CHECK(oracle.value == fast.lp.value);
                CHECK(fast.lp.verify(fast.instance));
                // the optimal prior replays the optimal value
                REQUIRE(fast.prior.has_value());
                Rational mixed = 0;
                for (const auto& atom : fast.prior->atoms())
                    mixed += atom.weight * p_nk(atom.measure.to_measure(), phi, N).value;
                CHECK(mixed == fast.lp.value);
            }
}

TEST_CASE("balanced urn point mass is optimal for the coincidence cost") {
    for (int N = 2; N <= 8; N += 2) {
        const auto sol = solve_reformulated(N, diag_indicator2(), two_point(Rational(1, 2)));
        REQUIRE(sol.prior.has_value());
        REQUIRE(sol.prior->atoms().size() == 1);
        CHECK(sol.prior->atoms()[0].measure.counts() ==
              std::vector<std::int64_t>{N / 2, N / 2});
        CHECK(sol.lp.value == Rational(N - 2, 2 * (N - 1)));
    }
}

TEST_CASE("hull of an affine polynomial is the polynomial") {
    // Phi = [x==a] + [y==a] integrates to 2 lambda_a against any plan with
    // both marginals lambda, so p_nk is affine in t
    const CostTensor phi(ab(), 2, {Rational(2), Rational(1), Rational(1), Rational(0)});
    const auto hull = convexify_ell2(8, phi, 2);
    CHECK(hull.breakpoints().size() == 2);
    for (int num = 0; num <= 8; ++num)
        CHECK(hull(Rational(num, 8)) == Rational(2 * num, 8));
}

TEST_CASE("hull evaluation equals the reformulated LP") {
    definetti::SplitMix64 rng(59);
    std::vector<CostTensor> costs;
    costs.push_back(diag_indicator2());
    costs.push_back(random_symmetric_cost(ab(), 2, rng));
    costs.push_back(random_symmetric_cost(ab(), 3, rng));
    for (const auto& phi : costs) {
        const int N = 12;
        const auto hull = convexify_ell2(N, phi, phi.k());
        for (int m = 0; m <= N; ++m) {
            const Rational t(m, N);
            CHECK(hull(t) == solve_reformulated(N, phi, two_point(t)).lp.value);
        }
        for (int i = 1; i <= 10; ++i) {
            const Rational t(i, 11);
            CHECK(hull(t) == solve_reformulated(N, phi, two_point(t)).lp.value);
        }
    }
    CHECK_THROWS_AS(convexify_ell2(4, random_symmetric_cost(StateSpace({"a", "b", "c"}), 2, rng), 2),
                    ValidationError);
}

TEST_CASE("gamma limit sandwich for the coincidence cost") {
    for (int N = 2; N <= 20; ++N) {
        const auto g = gamma_limit_gap(N, diag_indicator2(), two_point(Rational(1, 2)));
        CHECK(g.envelope_exact); // p_k is convex, certified on the grid
        CHECK(g.envelope == Rational(1, 2));
        CHECK(g.c_value == Rational(N - 2, 2 * (N - 1)));
        CHECK(g.c_value - g.envelope == Rational(-1, 2 * (N - 1)));
        CHECK(g.sandwich_lower_ok);
        CHECK(g.sandwich_upper_ok);
    }
}

TEST_CASE("gamma limit with a constant cost has zero gap") {
    const auto g = gamma_limit_gap(6, constant_cost(ab(), 2, Rational(3)), two_point(Rational(1, 4)));
    CHECK(g.envelope_exact);
    CHECK(g.c_value == 3);
    CHECK(g.envelope == 3);
    CHECK(g.sandwich_lower_ok);
    CHECK(g.sandwich_upper_ok);
}

TEST_CASE("gamma limit brackets a concave cost with the grid hull") {
    // p_2(t) = 2 t (1 - t) is concave; its envelope is the zero chord
    const CostTensor phi(ab(), 2, {Rational(0), Rational(1), Rational(1), Rational(0)});
    const auto g = gamma_limit_gap(8, phi, two_point(Rational(1, 2)));
    CHECK_FALSE(g.envelope_exact);
    CHECK(g.envelope == 0); // hull through the two zero endpoints
    CHECK(g.envelope_tolerance == Rational(2, 1024));
    CHECK(g.c_value == 0);
    CHECK(g.sandwich_lower_ok);
    CHECK(g.sandwich_upper_ok);
}

TEST_CASE("singular costs restrict to off-diagonal urns") {
    // infinite on the diagonal: draws must avoid coincidences. At N = 2 on
    // two points only the (1,1) urn survives the off-diagonal filter.
    CostTensor phi(ab(), 2, {Rational(0), Rational(1), Rational(1), Rational(0)},
                   {1, 0, 0, 1});
    const auto sol = solve_reformulated(2, phi, two_point(Rational(1, 2)), true);
    REQUIRE(sol.lp.status == LPStatus::optimal);
    REQUIRE(sol.prior.has_value());
    REQUIRE(sol.prior->atoms().size() == 1);
    CHECK(sol.prior->atoms()[0].measure.counts() == std::vector<std::int64_t>{1, 1});
    CHECK(sol.lp.value == 1); // all mass on the two off-diagonal cells
    for (const auto& atom : sol.prior->atoms())
        CHECK(extremal::is_offdiagonal_extreme(atom.measure, 2));
}

TEST_CASE("offdiag filter rejects when nothing remains") {
    CostTensor phi(ab(), 2, {Rational(0), Rational(1), Rational(1), Rational(0)}, {1, 0, 0, 1});
    // N = 3 on two points: every urn has a count >= 2, nothing is off-diagonal
    CHECK_THROWS_AS(solve_reformulated(3, phi, two_point(Rational(1, 2)), true), ValidationError);
}
