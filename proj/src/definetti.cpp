#include "finex/definetti.hpp"

#include <algorithm>
#include <map>

namespace finex::definetti {

using measures::DiscreteMeasure;
using measures::QuantizedMeasure;
using measures::SignedTensor;
using measures::StateSpace;

PriorMixture::PriorMixture(StateSpace space, int N, std::vector<Atom> atoms)
    : space_(std::move(space)), N_(N) {
    if (N_ < 1) throw ValidationError("prior needs N >= 1");
    if (atoms.empty()) throw ValidationError("prior needs at least one atom");
    std::map<std::vector<std::int64_t>, Rational> merged;
    Rational total = 0;
    for (auto& atom : atoms) {
        if (atom.weight <= 0) throw ValidationError("prior weights must be positive");
        if (atom.measure.space() != space_ || atom.measure.N() != N_)
            throw ValidationError("prior atoms must live on the prior's (space, N)");
        total += atom.weight;
        merged[atom.measure.counts()] += atom.weight;
    }
    if (total != 1) throw ValidationError("prior weights must sum to 1");
    std::vector<std::pair<std::vector<std::int64_t>, Rational>> sorted(merged.begin(), merged.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return extremal::colex_less(a.first, b.first);
    });
    for (auto& [counts, weight] : sorted)
        atoms_.push_back({std::move(weight), QuantizedMeasure(space_, N_, std::move(counts))});
}

bool PriorMixture::operator==(const PriorMixture& other) const {
    if (space_ != other.space_ || N_ != other.N_ || atoms_.size() != other.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].weight != other.atoms_[i].weight || atoms_[i].measure != other.atoms_[i].measure)
            return false;
    return true;
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("cannot draw below 0");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = next();
    } while (r >= limit);
    return r % bound;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return g.next();
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t fnv1a_str(std::uint64_t h, const std::string& s) { return fnv1a(h, s.data(), s.size()); }

} // namespace

std::uint64_t prior_hash(const PriorMixture& prior) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const std::int64_t n = prior.N();
    h = fnv1a(h, &n, sizeof(n));
    for (const auto& label : prior.space().labels()) h = fnv1a_str(h, label);
    for (const auto& atom : prior.atoms()) {
        h = fnv1a_str(h, to_string(atom.weight));
        for (auto c : atom.measure.counts()) h = fnv1a(h, &c, sizeof(c));
    }
    return h;
}

SignedTensor mix(const PriorMixture& prior, int k) {
    if (k > prior.N()) throw ValidationError("mix needs k <= N");
    SignedTensor acc(prior.space(), k);
    for (const auto& atom : prior.atoms()) {
        SignedTensor f = extremal::f_nk_explicit(prior.N(), atom.measure.to_measure(), k);
        f *= atom.weight;
        acc += f;
    }
    return acc;
}

PriorMixture decompose(const SignedTensor& gamma, int N) {
    if (gamma.order() != N) throw ValidationError("decompose needs a tensor of order N");
    if (!gamma.is_probability()) throw ValidationError("decompose needs a probability tensor");
    if (!gamma.is_symmetric()) throw ValidationError("decompose needs a symmetric tensor");

    std::map<std::vector<std::int64_t>, Rational> weights;
    std::vector<int> idx(static_cast<std::size_t>(N));
    for (std::size_t flat = 0; flat < gamma.entry_count(); ++flat) {
        if (gamma[flat] == 0) continue;
        gamma.unflatten(flat, idx);
        std::vector<std::int64_t> counts(static_cast<std::size_t>(gamma.space().size()), 0);
        for (int i : idx) counts[static_cast<std::size_t>(i)] += 1;
        weights[std::move(counts)] += gamma[flat];
    }
    std::vector<PriorMixture::Atom> atoms;
    for (auto& [counts, weight] : weights)
        atoms.push_back({weight, QuantizedMeasure(gamma.space(), N, counts)});
    return PriorMixture(gamma.space(), N, std::move(atoms));
}

bool InfeasibilityCertificate::verify() const {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    if (row_multipliers.size() != m) return false;
    for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i) s += lp.constraints[i][j] * row_multipliers[i];
        if (s > 0) return false;
    }
    Rational by = 0;
    for (std::size_t i = 0; i < m; ++i) by += lp.rhs[i] * row_multipliers[i];
    return by > 0;
}

RepresentabilityResult is_representable(const SignedTensor& mu_k, int N) {
    const int k = mu_k.order();
    if (k > N) throw ValidationError("is_representable needs k <= N");
    if (!mu_k.is_probability()) throw ValidationError("is_representable needs a probability tensor");
    if (!mu_k.is_symmetric()) throw ValidationError("is_representable needs a symmetric tensor");

    const auto columns = extremal::enumerate_quantized(N, mu_k.space());
    if (columns.size() > 1'000'000) throw BudgetExceeded("representability LP exceeds the column budget");

    // Both sides are symmetric, so one equation per sorted multi-index
    // suffices. Rows: sorted-index equations, then total mass.
    std::vector<std::size_t> rep_rows;
    {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (std::size_t flat = 0; flat < mu_k.entry_count(); ++flat) {
            mu_k.unflatten(flat, idx);
            if (std::is_sorted(idx.begin(), idx.end())) rep_rows.push_back(flat);
        }
    }

    mmot::LPInstance lp;
    const std::size_t m = rep_rows.size() + 1;
    lp.objective.assign(columns.size(), Rational(0));
    lp.constraints.assign(m, std::vector<Rational>(columns.size(), Rational(0)));
    lp.rhs.assign(m, Rational(0));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const SignedTensor f = extremal::f_nk_explicit(N, columns[c].to_measure(), k);
        for (std::size_t r = 0; r < rep_rows.size(); ++r) lp.constraints[r][c] = f[rep_rows[r]];
        lp.constraints[m - 1][c] = 1;
    }
    for (std::size_t r = 0; r < rep_rows.size(); ++r) lp.rhs[r] = mu_k[rep_rows[r]];
    lp.rhs[m - 1] = 1;

    const mmot::LPResult res = mmot::simplex_solve(lp);
    if (res.status == mmot::LPStatus::infeasible) {
        InfeasibilityCertificate cert{res.dual, std::move(lp)};
        return {false, std::nullopt, std::move(cert)};
    }
    std::vector<PriorMixture::Atom> atoms;
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (res.primal[c] > 0) atoms.push_back({res.primal[c], columns[c]});
    return {true, PriorMixture(mu_k.space(), N, std::move(atoms)), std::nullopt};
}

std::vector<int> sample_urn(const QuantizedMeasure& urn, int k, SplitMix64& rng) {
    const int N = urn.N();
    if (k > N) throw ValidationError("cannot draw more balls than the urn holds");
    std::vector<std::int64_t> remaining = urn.counts();
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        std::uint64_t u = rng.below(static_cast<std::uint64_t>(N - t));
        int state = 0;
        while (u >= static_cast<std::uint64_t>(remaining[static_cast<std::size_t>(state)])) {
            u -= static_cast<std::uint64_t>(remaining[static_cast<std::size_t>(state)]);
            ++state;
        }
        remaining[static_cast<std::size_t>(state)] -= 1;
        out.push_back(state);
    }
    return out;
}

namespace {

/// Picks an atom index from the prior: a 64-bit uniform draw compared
/// against the exact rational CDF (granularity 2^-64).
std::size_t draw_atom(const PriorMixture& prior, SplitMix64& rng) {
    const Rational u(Int(rng.next()), Int(1) << 64);
    Rational cdf = 0;
    for (std::size_t i = 0; i < prior.atoms().size(); ++i) {
        cdf += prior.atoms()[i].weight;
        if (u < cdf) return i;
    }
    return prior.atoms().size() - 1;
}

} // namespace

SampleBatch sample_exchangeable(const PriorMixture& prior, int k, int n, std::uint64_t seed) {
    if (k > prior.N()) throw ValidationError("sample_exchangeable needs k <= N");
    if (n < 1) throw ValidationError("need at least one sample");
    SampleBatch batch;
    batch.seed = seed;
    batch.N = prior.N();
    batch.k = k;
    batch.prior_hash = prior_hash(prior);
    batch.sequences.reserve(static_cast<std::size_t>(n));
    for (int nu = 0; nu < n; ++nu) {
        SplitMix64 rng(split_seed(seed, static_cast<std::uint64_t>(nu)));
        const auto& atom = prior.atoms()[draw_atom(prior, rng)];
        batch.sequences.push_back(sample_urn(atom.measure, k, rng));
    }
    return batch;
}

PriorMixture empirical_prior(const SampleBatch& batch, const StateSpace& space) {
    if (batch.k != batch.N) throw ValidationError("empirical prior recovery needs k = N");
    if (batch.sequences.empty()) throw ValidationError("empty sample batch");
    const auto n = static_cast<std::int64_t>(batch.sequences.size());
    std::map<std::vector<std::int64_t>, std::int64_t> hits;
    for (const auto& seq : batch.sequences) {
        if (static_cast<int>(seq.size()) != batch.N)
            throw ValidationError("sequence length must equal N");
        std::vector<std::int64_t> counts(static_cast<std::size_t>(space.size()), 0);
        for (int i : seq) {
            if (i < 0 || i >= space.size()) throw ValidationError("sequence entry out of range");
            counts[static_cast<std::size_t>(i)] += 1;
        }
        hits[std::move(counts)] += 1;
    }
    std::vector<PriorMixture::Atom> atoms;
    for (auto& [counts, c] : hits)
        atoms.push_back({Rational(c, n), QuantizedMeasure(space, batch.N, counts)});
    return PriorMixture(space, batch.N, std::move(atoms));
}

Rational prior_tv(const PriorMixture& a, const PriorMixture& b) {
    if (a.space() != b.space() || a.N() != b.N())
        throw ValidationError("prior TV needs matching (space, N)");
    std::map<std::vector<std::int64_t>, Rational> diff;
    for (const auto& atom : a.atoms()) diff[atom.measure.counts()] += atom.weight;
    for (const auto& atom : b.atoms()) diff[atom.measure.counts()] -= atom.weight;
    Rational l1 = 0;
    for (const auto& [counts, d] : diff) l1 += rational_abs(d);
    return l1 / 2;
}

DfGapResult df_gap(const SignedTensor& mu_k, const PriorMixture& prior, int p, MeanFieldForm form) {
    const int k = mu_k.order();
    const int N = prior.N();
    if (mix(prior, k) != mu_k) throw ValidationError("df_gap: prior does not mix to mu_k");
    if (p < 0 || p > k - 2) throw ValidationError("df_gap: p must lie in 0..k-2");

    SignedTensor approx(mu_k.space(), k);
    for (const auto& atom : prior.atoms()) {
        const DiscreteMeasure lam = atom.measure.to_measure();
        SignedTensor piece = (p == 0 && form == MeanFieldForm::bare)
                                 ? measures::tensor_power(lam, k)
                                 : extremal::f_nk_truncated(N, lam, k, p).approx;
        piece *= atom.weight;
        approx += piece;
    }
    Rational bound = extremal::prefactor(N, k) * Rational(extremal::series_constant(k), 1);
    for (int i = 0; i < p + 1; ++i) bound /= N;
    return {measures::set_sup_norm(mu_k - approx), std::move(bound)};
}

} // namespace finex::definetti
