#include <doctest.h>

#include "finex/definetti.hpp"
#include "finex/extremal.hpp"

using namespace finex;
using namespace finex::measures;
using namespace finex::extremal;

namespace {

StateSpace rgb() { return StateSpace({"r", "g", "b"}); }

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

StateSpace letters(int ell) {
    std::vector<std::string> labels;
    for (int i = 0; i < ell; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
    return StateSpace(std::move(labels));
}

} // namespace

TEST_CASE("prefactor and series constant") {
    CHECK(prefactor(4, 4) == Rational(64, 6));
    CHECK(prefactor(5, 2) == Rational(5, 4));
    CHECK(series_constant(4) == 23); // 6 + 11 + 6
    CHECK_THROWS_AS(prefactor(3, 4), ValidationError);
}

TEST_CASE("series terms carry the sum rule") {
    const auto lam = DiscreteMeasure(rgb(), {Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    for (int k = 2; k <= 5; ++k) {
        const auto terms = f_series(lam, k);
        REQUIRE(static_cast<int>(terms.size()) == k);
        CHECK(!terms[0].contributions[0].p.has_value());
        CHECK(terms[0].contributions[0].d == 1);
        for (const auto& term : terms) {
            Rational dsum = 0;
            for (const auto& c : term.contributions) {
                CHECK(c.tensor.total_mass() == 1); // symmetrized monomials are probabilities
                dsum += c.d;
            }
            if (term.j == 0) CHECK(dsum == 1);
            else CHECK(dsum == Rational(partitions::coefficient_c(k, term.j), 1));
        }
    }
}

TEST_CASE("explicit route matches the k=2 closed form") {
    definetti::SplitMix64 rng(23);
    for (int N = 2; N <= 6; ++N)
        for (int rep = 0; rep < 5; ++rep) {
            const auto lam = random_measure(rgb(), rng);
            auto expect = tensor_power(lam, 2);
            expect *= Rational(N, N - 1);
            auto diag = diagonal_push(lam, 2);
            diag *= Rational(1, N - 1);
            expect -= diag;
            CHECK(f_nk_explicit(N, lam, 2) == expect);
        }
}

TEST_CASE("single point urn gives the diagonal Dirac") {
    const QuantizedMeasure urn(rgb(), 4, {0, 4, 0});
    const auto f = f_nk_explicit(4, urn.to_measure(), 4);
    CHECK(f.at(std::vector<int>{1, 1, 1, 1}) == 1);
    CHECK(f.total_mass() == 1);
    CHECK(f == f_nk_bruteforce(urn, 4));
}

TEST_CASE("the rrg urn at N = k = 3") {
    const QuantizedMeasure urn(rgb(), 3, {2, 1, 0});
    const auto f = f_nk_explicit(3, urn.to_measure(), 3);
    // mass 1/3 on each arrangement of (r, r, g), zero elsewhere
    CHECK(f.at(std::vector<int>{0, 0, 1}) == Rational(1, 3));
    CHECK(f.at(std::vector<int>{0, 1, 0}) == Rational(1, 3));
    CHECK(f.at(std::vector<int>{1, 0, 0}) == Rational(1, 3));
    CHECK(f.at(std::vector<int>{0, 0, 0}) == 0);
    CHECK(f.at(std::vector<int>{1, 1, 0}) == 0);
    CHECK(f.total_mass() == 1);
    CHECK(f == f_nk_bruteforce(urn, 3));
    CHECK(f == f_nk_recursive(3, urn.to_measure(), 3));
    CHECK(f == f_nk_partition(3, urn.to_measure(), 3));
}

TEST_CASE("three routes agree on arbitrary rational measures") {
    definetti::SplitMix64 rng(29);
    for (int N = 2; N <= 5; ++N)
        for (int k = 2; k <= N; ++k)
            for (int rep = 0; rep < 4; ++rep) {
                const auto lam = random_measure(letters(3), rng);
                const auto a = f_nk_explicit(N, lam, k);
                CHECK(a == f_nk_recursive(N, lam, k));
                CHECK(a == f_nk_partition(N, lam, k));
                CHECK(a.total_mass() == 1); // signed cancellation identity
            }
}

TEST_CASE("brute force oracle agreement on a spot-check sweep") {
    for (int ell = 1; ell <= 3; ++ell)
        for (int N = 2; N <= 5; ++N)
            for (const auto& urn : enumerate_quantized(N, letters(ell)))
                for (int k = 2; k <= N; ++k) {
                    const auto oracle = f_nk_bruteforce(urn, k);
                    CHECK(oracle == f_nk_explicit(N, urn.to_measure(), k));
                }
}

TEST_CASE("k = 1 returns the measure itself") {
    const auto lam = DiscreteMeasure(rgb(), {Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    const auto f = f_nk_explicit(5, lam, 1);
    for (int i = 0; i < 3; ++i) CHECK(f[static_cast<std::size_t>(i)] == lam.weight(i));
    CHECK(f_nk_recursive(5, lam, 1) == f);
}

TEST_CASE("marginal consistency of the family") {
    definetti::SplitMix64 rng(31);
    for (int N = 3; N <= 5; ++N)
        for (int rep = 0; rep < 3; ++rep) {
            const auto lam = random_measure(letters(3), rng);
            const auto f4 = f_nk_explicit(N, lam, std::min(4, N));
            for (int j = 1; j <= std::min(4, N); ++j)
                CHECK(marginal(f4, j) == f_nk_explicit(N, lam, j));
        }
}

TEST_CASE("nonnegativity holds exactly on quantized measures") {
    for (int ell = 2; ell <= 3; ++ell)
        for (int N = 2; N <= 5; ++N)
            for (const auto& urn : enumerate_quantized(N, letters(ell)))
                for (int k = 2; k <= N; ++k) {
                    const auto f = f_nk_explicit(N, urn.to_measure(), k);
                    for (std::size_t i = 0; i < f.entry_count(); ++i) CHECK(f[i] >= 0);
                }
}

TEST_CASE("a non-quantized measure with a negative entry exists") {
    // search a small rational grid at N = 3, k = 2
    bool found = false;
    for (int den = 2; den <= 8 && !found; ++den)
        for (int num = 1; num < den && !found; ++num) {
            const DiscreteMeasure lam(letters(2), {Rational(num, den), Rational(den - num, den)});
            const auto f = f_nk_explicit(3, lam, 2);
            for (std::size_t i = 0; i < f.entry_count(); ++i)
                if (f[i] < 0) found = true;
        }
    CHECK(found);
}

TEST_CASE("injectivity on urns") {
    for (int ell = 2; ell <= 3; ++ell)
        for (int N = 2; N <= 4; ++N)
            for (int k = 1; k <= N; ++k) {
                const auto urns = enumerate_quantized(N, letters(ell));
                for (std::size_t a = 0; a < urns.size(); ++a)
                    for (std::size_t b = a + 1; b < urns.size(); ++b)
                        CHECK(f_nk_explicit(N, urns[a].to_measure(), k) !=
                              f_nk_explicit(N, urns[b].to_measure(), k));
            }
}

TEST_CASE("truncation residuals and bounds") {
    for (int ell = 2; ell <= 3; ++ell)
        for (int N = 2; N <= 5; ++N)
            for (const auto& urn : enumerate_quantized(N, letters(ell)))
                for (int k = 2; k <= N; ++k) {
                    const auto lam = urn.to_measure();
                    const auto full = f_nk_explicit(N, lam, k);
                    for (int p = 0; p <= k - 2; ++p) {
                        const auto tr = f_nk_truncated(N, lam, k, p);
                        CHECK(tr.approx + tr.residual == full);
                        CHECK(mass_norm(tr.residual) <= tr.bound);
                    }
                    // p = k-2: the residual is exactly the last series term
                    const auto last = f_nk_truncated(N, lam, k, k - 2);
                    Rational expect = prefactor(N, k) * Rational(factorial(k - 1), 1);
                    for (int i = 0; i < k - 1; ++i) expect /= N;
                    CHECK(mass_norm(last.residual) == expect);
                }
    const auto lam = DiscreteMeasure(letters(2), {Rational(1, 2), Rational(1, 2)});
    CHECK_THROWS_AS(f_nk_truncated(5, lam, 3, 2), ValidationError);
    CHECK_THROWS_AS(f_nk_truncated(5, lam, 3, -1), ValidationError);
}

TEST_CASE("diagonal factorization") {
    // a factor vanishes when the count is below k
    const QuantizedMeasure urn(letters(2), 4, {3, 1});
    CHECK(diagonal_mass(urn, 2, 1) == 0); // count 1 < k = 2? no: k=2, count 1 -> lam=1/4, product (1/4)(1/4-1/4)=0
    CHECK(diagonal_mass(urn, 2, 0) == Rational(1, 2)); // (4/3)*(3/4)*(2/4)

    const QuantizedMeasure full(letters(2), 3, {3, 0});
    CHECK(diagonal_mass(full, 3, 0) == 1);

    // matches both the explicit tensor entry and the brute force oracle
    for (int ell = 2; ell <= 3; ++ell)
        for (int N = 2; N <= 5; ++N)
            for (const auto& u : enumerate_quantized(N, letters(ell)))
                for (int k = 2; k <= N; ++k) {
                    const auto f = f_nk_bruteforce(u, k);
                    for (int x = 0; x < ell; ++x) {
                        std::vector<int> idx(static_cast<std::size_t>(k), x);
                        CHECK(f.at(idx) == diagonal_mass(u, k, x));
                    }
                }
}

TEST_CASE("off-diagonal classification") {
    // k = 2: extreme iff all balls distinct
    CHECK(is_offdiagonal_extreme(QuantizedMeasure(rgb(), 3, {1, 1, 1}), 2));
    CHECK_FALSE(is_offdiagonal_extreme(QuantizedMeasure(rgb(), 3, {2, 1, 0}), 2));

    // rrg at N = k = 3: counts <= 2, and the tensor has zero diagonal
    const QuantizedMeasure rrg(rgb(), 3, {2, 1, 0});
    CHECK(is_offdiagonal_extreme(rrg, 3));
    const auto f = f_nk_explicit(3, rrg.to_measure(), 3);
    for (int x = 0; x < 3; ++x) CHECK(f.at(std::vector<int>{x, x, x}) == 0);

    // criterion equivalence sweep
    for (int ell = 2; ell <= 3; ++ell)
        for (int N = 2; N <= 5; ++N)
            for (const auto& u : enumerate_quantized(N, letters(ell)))
                for (int k = 2; k <= N; ++k) {
                    bool zero_diag = true;
                    for (int x = 0; x < ell; ++x)
                        if (diagonal_mass(u, k, x) != 0) zero_diag = false;
                    CHECK(is_offdiagonal_extreme(u, k) == zero_diag);
                }
}

TEST_CASE("quantized enumeration") {
    const auto q = enumerate_quantized(3, rgb());
    REQUIRE(q.size() == 10);
    CHECK(q[0].counts() == std::vector<std::int64_t>{3, 0, 0});
    CHECK(q[1].counts() == std::vector<std::int64_t>{2, 1, 0});
    CHECK(q[2].counts() == std::vector<std::int64_t>{1, 2, 0});
    CHECK(q[3].counts() == std::vector<std::int64_t>{0, 3, 0});

    const auto diracs = enumerate_quantized(1, rgb());
    REQUIRE(diracs.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(diracs[static_cast<std::size_t>(i)].count(i) == 1);

    for (int N = 1; N <= 8; ++N)
        for (int ell = 1; ell <= 5; ++ell)
            CHECK(Int(enumerate_quantized(N, letters(ell)).size()) == binomial(N + ell - 1, ell - 1));

    // colex order is strictly increasing
    for (std::size_t i = 1; i < q.size(); ++i) CHECK(colex_less(q[i - 1].counts(), q[i].counts()));
}

TEST_CASE("term mass table reproduces the k = 4 figure claims") {
    const auto at = [](int N) {
        const auto rows = term_mass_table(N, 4);
        return rows[1].second / rows[0].second; // first correction over mean field
    };
    CHECK(at(5) == Rational(6, 5));   // correction exceeds the leading term
    CHECK(at(6) == Rational(1));      // equal at N = 6
    CHECK(at(20) == Rational(3, 10)); // 30 percent at N = 20
    CHECK(at(100) == Rational(3, 50));
}
