#include "finex/measures.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace finex::measures {

namespace {

constexpr std::size_t kMaxTensorEntries = 10'000'000;
constexpr int kMaxIndexOrder = 32;

std::size_t checked_entry_count(int ell, int order) {
    std::size_t n = 1;
    for (int i = 0; i < order; ++i) {
        if (n > kMaxTensorEntries / static_cast<std::size_t>(ell))
            throw BudgetExceeded("tensor exceeds the 10^7 entry budget");
        n *= static_cast<std::size_t>(ell);
    }
    return n;
}

} // namespace

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ValidationError("state space needs at least one point");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_)
        if (!seen.insert(l).second) throw ValidationError("state space labels must be distinct");
}

std::optional<int> StateSpace::index_of(std::string_view label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[static_cast<std::size_t>(i)] == label) return i;
    return std::nullopt;
}

DiscreteMeasure::DiscreteMeasure(StateSpace space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (static_cast<int>(weights_.size()) != space_.size())
        throw ValidationError("measure weight count must match the state space size");
    Rational mass = 0;
    for (const auto& w : weights_) {
        if (w < 0) throw ValidationError("probability weights must be nonnegative");
        mass += w;
    }
    if (mass != 1) throw ValidationError("probability weights must sum to 1");
}

QuantizedMeasure::QuantizedMeasure(StateSpace space, int N, std::vector<std::int64_t> counts)
    : space_(std::move(space)), N_(N), counts_(std::move(counts)) {
    if (N_ < 1) throw ValidationError("quantized measure needs N >= 1");
    if (static_cast<int>(counts_.size()) != space_.size())
        throw ValidationError("count vector must match the state space size");
    std::int64_t total = 0;
    for (auto c : counts_) {
        if (c < 0) throw ValidationError("urn counts must be nonnegative");
        total += c;
    }
    if (total != N_) throw ValidationError("urn counts must sum to N");
}

DiscreteMeasure QuantizedMeasure::to_measure() const {
    std::vector<Rational> w;
    w.reserve(counts_.size());
    for (auto c : counts_) w.emplace_back(Int(c), Int(N_));
    return DiscreteMeasure(space_, std::move(w));
}

QuantizedMeasure QuantizedMeasure::from_measure(const DiscreteMeasure& lam, int N) {
    std::vector<std::int64_t> counts;
    counts.reserve(static_cast<std::size_t>(lam.size()));
    for (int i = 0; i < lam.size(); ++i) {
        Rational scaled = lam.weight(i) * N;
        if (denominator(scaled) != 1)
            throw ValidationError("measure is not 1/N-quantized: weight " + to_string(lam.weight(i)));
        counts.push_back(numerator(scaled).convert_to<std::int64_t>());
    }
    return QuantizedMeasure(lam.space(), N, std::move(counts));
}

std::vector<int> QuantizedMeasure::balls() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(N_));
    for (int i = 0; i < space_.size(); ++i)
        for (std::int64_t c = 0; c < counts_[static_cast<std::size_t>(i)]; ++c) out.push_back(i);
    return out;
}

SignedTensor::SignedTensor(StateSpace space, int order) : space_(std::move(space)), order_(order) {
    if (order_ < 1) throw ValidationError("tensor order must be >= 1");
    if (order_ > kMaxIndexOrder) throw BudgetExceeded("tensor order exceeds supported maximum");
    weights_.assign(checked_entry_count(space_.size(), order_), Rational(0));
}

std::size_t SignedTensor::flatten(std::span<const int> idx) const {
    std::size_t flat = 0;
    const auto ell = static_cast<std::size_t>(space_.size());
    for (int t = 0; t < order_; ++t) {
        const int i = idx[static_cast<std::size_t>(t)];
        flat = flat * ell + static_cast<std::size_t>(i);
    }
    return flat;
}

void SignedTensor::unflatten(std::size_t flat, std::span<int> idx) const {
    const auto ell = static_cast<std::size_t>(space_.size());
    for (int t = order_ - 1; t >= 0; --t) {
        idx[static_cast<std::size_t>(t)] = static_cast<int>(flat % ell);
        flat /= ell;
    }
}

Rational SignedTensor::total_mass() const {
    Rational m = 0;
    for (const auto& w : weights_) m += w;
    return m;
}

bool SignedTensor::is_probability() const {
    for (const auto& w : weights_)
        if (w < 0) return false;
    return total_mass() == 1;
}

bool SignedTensor::is_symmetric() const {
    return *this == symmetrize(*this);
}

SignedTensor& SignedTensor::operator+=(const SignedTensor& other) {
    if (space_ != other.space_ || order_ != other.order_)
        throw ValidationError("tensor shapes do not match");
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += other.weights_[i];
    return *this;
}

SignedTensor& SignedTensor::operator-=(const SignedTensor& other) {
    if (space_ != other.space_ || order_ != other.order_)
        throw ValidationError("tensor shapes do not match");
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] -= other.weights_[i];
    return *this;
}

SignedTensor& SignedTensor::operator*=(const Rational& scalar) {
    for (auto& w : weights_) w *= scalar;
    return *this;
}

SignedTensor tensor_power(const DiscreteMeasure& lam, int k) {
    SignedTensor t(lam.space(), k);
    std::array<int, kMaxIndexOrder> idx{};
    for (std::size_t flat = 0; flat < t.entry_count(); ++flat) {
        t.unflatten(flat, std::span(idx.data(), static_cast<std::size_t>(k)));
        Rational w = 1;
        for (int s = 0; s < k; ++s) {
            w *= lam.weight(idx[static_cast<std::size_t>(s)]);
            if (w == 0) break;
        }
        t[flat] = std::move(w);
    }
    return t;
}

SignedTensor diagonal_push(const DiscreteMeasure& lam, int m) {
    SignedTensor t(lam.space(), m);
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < lam.size(); ++i) {
        std::fill(idx.begin(), idx.end(), i);
        t.at(idx) = lam.weight(i);
    }
    return t;
}

SignedTensor block_push(const DiscreteMeasure& lam, const partitions::SetPartition& P) {
    const int k = P.universe();
    SignedTensor t(lam.space(), k);
    const int n = P.block_count();
    const int ell = lam.size();
    // Only l^{n(P)} entries are nonzero: one per assignment of a state to
    // each block.
    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        Rational w = 1;
        for (int b = 0; b < n; ++b) {
            const int state = choice[static_cast<std::size_t>(b)];
            w *= lam.weight(state);
            for (int coord : P.blocks[static_cast<std::size_t>(b)])
                idx[static_cast<std::size_t>(coord) - 1] = state;
        }
        if (w != 0) t.at(idx) = std::move(w);
        int b = n - 1;
        while (b >= 0 && choice[static_cast<std::size_t>(b)] == ell - 1) {
            choice[static_cast<std::size_t>(b)] = 0;
            --b;
        }
        if (b < 0) break;
        ++choice[static_cast<std::size_t>(b)];
    }
    return t;
}

SignedTensor outer(const SignedTensor& a, const SignedTensor& b) {
    if (a.space() != b.space()) throw ValidationError("outer product needs a common state space");
    SignedTensor t(a.space(), a.order() + b.order());
    for (std::size_t i = 0; i < a.entry_count(); ++i) {
        if (a[i] == 0) continue;
        const std::size_t base = i * b.entry_count();
        for (std::size_t j = 0; j < b.entry_count(); ++j) {
            if (b[j] == 0) continue;
            t[base + j] = a[i] * b[j];
        }
    }
    return t;
}

SignedTensor permute(const SignedTensor& t, std::span<const int> sigma) {
    const int k = t.order();
    if (static_cast<int>(sigma.size()) != k) throw ValidationError("permutation length must equal the order");
    SignedTensor out(t.space(), k);
    std::array<int, kMaxIndexOrder> x{};
    std::array<int, kMaxIndexOrder> j{};
    for (std::size_t flat = 0; flat < t.entry_count(); ++flat) {
        if (t[flat] == 0) continue;
        t.unflatten(flat, std::span(x.data(), static_cast<std::size_t>(k)));
        for (int s = 0; s < k; ++s)
            j[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(sigma[static_cast<std::size_t>(s)])];
        out.at(std::span<const int>(j.data(), static_cast<std::size_t>(k))) += t[flat];
    }
    return out;
}

SignedTensor symmetrize(const SignedTensor& t) {
    const int k = t.order();
    // Orbit averaging: the symmetrization is constant on each S_k-orbit and
    // equals the orbit mean, so one accumulation pass keyed by the sorted
    // index suffices instead of a k! sum.
    SignedTensor sums(t.space(), k);
    std::vector<std::int64_t> orbit(t.entry_count(), 0);
    std::array<int, kMaxIndexOrder> idx{};
    for (std::size_t flat = 0; flat < t.entry_count(); ++flat) {
        t.unflatten(flat, std::span(idx.data(), static_cast<std::size_t>(k)));
        std::sort(idx.begin(), idx.begin() + k);
        const std::size_t key = t.flatten(std::span<const int>(idx.data(), static_cast<std::size_t>(k)));
        if (t[flat] != 0) sums[key] += t[flat];
        orbit[key] += 1;
    }
    SignedTensor out(t.space(), k);
    for (std::size_t flat = 0; flat < t.entry_count(); ++flat) {
        out.unflatten(flat, std::span(idx.data(), static_cast<std::size_t>(k)));
        std::sort(idx.begin(), idx.begin() + k);
        const std::size_t key = out.flatten(std::span<const int>(idx.data(), static_cast<std::size_t>(k)));
        if (sums[key] != 0) out[flat] = sums[key] / orbit[key];
    }
    return out;
}

SignedTensor marginal(const SignedTensor& t, int k) {
    const int n = t.order();
    if (k < 1 || k > n) throw ValidationError("marginal order must lie in 1..order");
    if (k == n) return t;
    SignedTensor out(t.space(), k);
    std::size_t tail = 1;
    for (int i = 0; i < n - k; ++i) tail *= static_cast<std::size_t>(t.space().size());
    for (std::size_t head = 0; head < out.entry_count(); ++head) {
        Rational s = 0;
        const std::size_t base = head * tail;
        for (std::size_t r = 0; r < tail; ++r) s += t[base + r];
        out[head] = std::move(s);
    }
    return out;
}

Rational mass_norm(const SignedTensor& t) {
    Rational s = 0;
    for (std::size_t i = 0; i < t.entry_count(); ++i) s += rational_abs(t[i]);
    return s;
}

Rational set_sup_norm(const SignedTensor& t) {
    Rational pos = 0, neg = 0;
    for (std::size_t i = 0; i < t.entry_count(); ++i) {
        if (t[i] > 0) pos += t[i];
        else neg -= t[i];
    }
    return std::max(pos, neg);
}

QuantizationCheck verify_quantization(const DiscreteMeasure& lam, int N) {
    const int ell = lam.size();
    if (N < 1) throw ValidationError("verify_quantization needs N >= 1");
    if (ell > 16) throw BudgetExceeded("verify_quantization enumerates subsets; supported up to 16 states");
    for (std::uint32_t mask = 1; mask < (1u << ell); ++mask) {
        Rational lamA = 0;
        for (int i = 0; i < ell; ++i)
            if (mask & (1u << i)) lamA += lam.weight(i);
        for (int k = 0; k < N; ++k) {
            // (t - k/N)(t - (k+1)/N) >= 0
            const Rational f = (lamA - Rational(k, N)) * (lamA - Rational(k + 1, N));
            if (f < 0) {
                QuantizationWitness w;
                for (int i = 0; i < ell; ++i)
                    if (mask & (1u << i)) w.subset.push_back(i);
                w.k = k;
                return {false, std::move(w)};
            }
        }
    }
    return {true, std::nullopt};
}

} // namespace finex::measures
