#include "finex/extremal.hpp"

#include <algorithm>

namespace finex::extremal {

using measures::DiscreteMeasure;
using measures::QuantizedMeasure;
using measures::SignedTensor;
using measures::StateSpace;
using partitions::IntegerPartition;
using partitions::SetPartition;

namespace {

SignedTensor as_order1(const DiscreteMeasure& lam) {
    SignedTensor t(lam.space(), 1);
    for (int i = 0; i < lam.size(); ++i) t[static_cast<std::size_t>(i)] = lam.weight(i);
    return t;
}

void require_k_range(int N, int k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (k > N) throw ValidationError("F_{N,k} needs k <= N");
}

/// The canonical set partition whose blocks have sizes p_1+1, ..., p_n+1
/// followed by singletons, taken consecutively; its G_P is the p-monomial
/// id^{p_1+1}_# lam tensor ... tensor lam^{tensor (k-j-n)}.
SetPartition monomial_partition(const IntegerPartition& p, int k) {
    std::vector<std::vector<int>> blocks;
    int next = 1;
    for (int part : p.parts) {
        std::vector<int> block;
        for (int i = 0; i < part + 1; ++i) block.push_back(next++);
        blocks.push_back(std::move(block));
    }
    while (next <= k) blocks.push_back({next++});
    return SetPartition(std::move(blocks));
}

/// R_i push-forward: duplicates coordinate i (0-based) into a new last slot.
SignedTensor duplicate_coordinate(const SignedTensor& t, int i) {
    const int j = t.order();
    const int ell = t.space().size();
    SignedTensor out(t.space(), j + 1);
    std::vector<int> idx(static_cast<std::size_t>(j));
    for (std::size_t flat = 0; flat < t.entry_count(); ++flat) {
        if (t[flat] == 0) continue;
        t.unflatten(flat, idx);
        const std::size_t base = flat * static_cast<std::size_t>(ell);
        out[base + static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] += t[flat];
    }
    return out;
}

} // namespace

std::vector<FSeriesTerm> f_series(const DiscreteMeasure& lam, int k) {
    if (k < 2) throw ValidationError("the correction series is defined for k >= 2");
    std::vector<FSeriesTerm> terms;
    terms.push_back({0, {}});
    terms.back().contributions.push_back({std::nullopt, Rational(1), measures::tensor_power(lam, k)});
    for (int j = 1; j <= k - 1; ++j) {
        FSeriesTerm term{j, {}};
        for (const auto& p : partitions::enumerate_integer_partitions(j, k - j)) {
            const Rational d = partitions::coefficient_d(k, p);
            SignedTensor monomial = measures::block_push(lam, monomial_partition(p, k));
            term.contributions.push_back({p, d, measures::symmetrize(monomial)});
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

Rational prefactor(int N, int k) {
    require_k_range(N, k);
    Int num = 1;
    for (int i = 1; i <= k - 1; ++i) num *= N;
    Int den = 1;
    for (int i = 1; i <= k - 1; ++i) den *= (N - i);
    return Rational(num, den);
}

Int series_constant(int k) {
    Int c = 0;
    for (int j = 1; j <= k - 1; ++j) c += partitions::coefficient_c(k, j);
    return c;
}

measures::SignedTensor f_nk_explicit(int N, const DiscreteMeasure& lam, int k) {
    require_k_range(N, k);
    if (k == 1) return as_order1(lam);
    SignedTensor acc(lam.space(), k);
    Rational npow = 1;
    int sign = 1;
    for (const auto& term : f_series(lam, k)) {
        for (const auto& c : term.contributions) {
            SignedTensor piece = c.tensor;
            piece *= c.d * sign / npow;
            acc += piece;
        }
        npow *= N;
        sign = -sign;
    }
    acc *= prefactor(N, k);
    return acc;
}

measures::SignedTensor f_nk_recursive(int N, const DiscreteMeasure& lam, int k) {
    require_k_range(N, k);
    SignedTensor mu = as_order1(lam);
    const SignedTensor lam1 = mu;
    for (int j = 1; j < k; ++j) {
        // mu_{j+1} = N/(N-j) mu_j tensor lambda - 1/(N-j) sum_i R_i# mu_j
        SignedTensor next = measures::outer(mu, lam1);
        next *= Rational(N, N - j);
        for (int i = 0; i < j; ++i) {
            SignedTensor dup = duplicate_coordinate(mu, i);
            dup *= Rational(1, N - j);
            next -= dup;
        }
        mu = std::move(next);
    }
    return mu;
}

measures::SignedTensor f_nk_partition(int N, const DiscreteMeasure& lam, int k) {
    require_k_range(N, k);
    if (k == 1) return as_order1(lam);
    SignedTensor acc(lam.space(), k);
    for (const auto& P : partitions::enumerate_set_partitions(k)) {
        const int n = P.block_count();
        Int beta = 1;
        for (const auto& block : P.blocks) beta *= factorial(static_cast<int>(block.size()) - 1);
        Int npow = 1;
        for (int i = 0; i < n; ++i) npow *= N;
        Rational coeff(((k - n) % 2 == 0 ? beta : -beta) * npow, 1);
        SignedTensor piece = measures::block_push(lam, P);
        piece *= coeff;
        acc += piece;
    }
    acc *= Rational(1, falling_factorial(N, k));
    return acc;
}

measures::SignedTensor f_nk_bruteforce(const QuantizedMeasure& urn, int k) {
    const int N = urn.N();
    require_k_range(N, k);
    double size = 1;
    for (int i = 0; i < k; ++i) size *= N;
    if (size > 10'000'000.0) throw BudgetExceeded("brute-force route exceeds the N^k <= 10^7 budget");

    const std::vector<int> balls = urn.balls();
    SignedTensor t(urn.space(), k);
    std::vector<std::int64_t> hits(t.entry_count(), 0);
    std::vector<int> m(static_cast<std::size_t>(k), 0);
    std::vector<int> idx(static_cast<std::size_t>(k));
    while (true) {
        bool distinct = true;
        for (int a = 0; a < k && distinct; ++a)
            for (int b = a + 1; b < k; ++b)
                if (m[static_cast<std::size_t>(a)] == m[static_cast<std::size_t>(b)]) {
                    distinct = false;
                    break;
                }
        if (distinct) {
            for (int a = 0; a < k; ++a)
                idx[static_cast<std::size_t>(a)] = balls[static_cast<std::size_t>(m[static_cast<std::size_t>(a)])];
            hits[t.flatten(idx)] += 1;
        }
        int pos = k - 1;
        while (pos >= 0 && m[static_cast<std::size_t>(pos)] == N - 1) {
            m[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++m[static_cast<std::size_t>(pos)];
    }

    const Int scale = falling_factorial(N, k);
    for (std::size_t i = 0; i < t.entry_count(); ++i)
        if (hits[i] != 0) t[i] = Rational(Int(hits[i]), scale);
    return t;
}

TruncationResult f_nk_truncated(int N, const DiscreteMeasure& lam, int k, int p) {
    require_k_range(N, k);
    if (k < 2) throw ValidationError("truncation is defined for k >= 2");
    if (p < 0 || p > k - 2) throw ValidationError("truncation order p must lie in 0..k-2");

    const auto terms = f_series(lam, k);
    SignedTensor approx(lam.space(), k);
    SignedTensor residual(lam.space(), k);
    Rational npow = 1;
    int sign = 1;
    for (const auto& term : terms) {
        SignedTensor sum_j(lam.space(), k);
        for (const auto& c : term.contributions) {
            SignedTensor piece = c.tensor;
            piece *= c.d * sign / npow;
            sum_j += piece;
        }
        if (term.j <= p) approx += sum_j;
        else residual += sum_j;
        npow *= N;
        sign = -sign;
    }
    const Rational pref = prefactor(N, k);
    approx *= pref;
    residual *= pref;

    Rational bound = pref * Rational(series_constant(k), 1);
    for (int i = 0; i < p + 1; ++i) bound /= N;
    return {std::move(approx), std::move(residual), std::move(bound)};
}

Rational diagonal_mass(const QuantizedMeasure& lam, int k, int x) {
    const int N = lam.N();
    require_k_range(N, k);
    if (x < 0 || x >= lam.space().size()) throw ValidationError("diagonal_mass: state index out of range");
    const Rational lx(Int(lam.count(x)), Int(N));
    Rational prod = 1;
    for (int i = 0; i < k; ++i) prod *= (lx - Rational(i, N));
    return prefactor(N, k) * prod;
}

bool is_offdiagonal_extreme(const QuantizedMeasure& lam, int k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    for (int i = 0; i < lam.space().size(); ++i)
        if (lam.count(i) > k - 1) return false;
    return true;
}

bool colex_less(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

std::vector<std::pair<int, Rational>> term_mass_table(int N, int k) {
    require_k_range(N, k);
    if (k < 2) throw ValidationError("the series table is defined for k >= 2");
    const Rational pref = prefactor(N, k);
    std::vector<std::pair<int, Rational>> rows;
    Rational npow = 1;
    for (int j = 0; j <= k - 1; ++j) {
        const Rational cj = j == 0 ? Rational(1) : Rational(partitions::coefficient_c(k, j), 1);
        rows.emplace_back(j, pref * cj / npow);
        npow *= N;
    }
    return rows;
}

std::vector<QuantizedMeasure> enumerate_quantized(int N, const StateSpace& space) {
    if (N < 1) throw ValidationError("enumerate_quantized needs N >= 1");
    const int ell = space.size();
    if (binomial(N + ell - 1, ell - 1) > 10'000'000)
        throw BudgetExceeded("quantized-measure enumeration exceeds the 10^7 budget");

    std::vector<QuantizedMeasure> out;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(ell), 0);
    // Ascending colex: the last coordinate varies slowest.
    auto rec = [&](auto&& self, int pos, std::int64_t remaining) -> void {
        if (pos == 0) {
            counts[0] = remaining;
            out.emplace_back(space, N, counts);
            return;
        }
        for (std::int64_t c = 0; c <= remaining; ++c) {
            counts[static_cast<std::size_t>(pos)] = c;
            self(self, pos - 1, remaining - c);
        }
    };
    rec(rec, ell - 1, N);
    return out;
}

} // namespace finex::extremal
