#include "finex/partitions.hpp"

#include <algorithm>
#include <map>

namespace finex::partitions {

namespace {

constexpr int kMaxIntegerPartitionArg = 21;
constexpr int kMaxSetPartitionArg = 12;

void require_valid_parts(const std::vector<int>& parts) {
    if (parts.empty()) throw ValidationError("integer partition needs at least one part");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 1) throw ValidationError("integer partition parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1])
            throw ValidationError("integer partition parts must be weakly decreasing");
    }
}

} // namespace

IntegerPartition::IntegerPartition(std::vector<int> p) : parts(std::move(p)) {
    require_valid_parts(parts);
}

int IntegerPartition::sum() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
}

Int IntegerPartition::multiplicity_factorial() const {
    Int r = 1;
    int run = 1;
    for (std::size_t i = 1; i <= parts.size(); ++i) {
        if (i < parts.size() && parts[i] == parts[i - 1]) {
            ++run;
        } else {
            r *= factorial(run);
            run = 1;
        }
    }
    return r;
}

SetPartition::SetPartition(std::vector<std::vector<int>> b) : blocks(std::move(b)) {
    if (blocks.empty()) throw ValidationError("set partition needs at least one block");
    int k = 0;
    for (auto& block : blocks) {
        if (block.empty()) throw ValidationError("set partition blocks must be nonempty");
        std::sort(block.begin(), block.end());
        k += static_cast<int>(block.size());
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<char> seen(static_cast<std::size_t>(k) + 1, 0);
    for (const auto& block : blocks) {
        for (int e : block) {
            if (e < 1 || e > k || seen[static_cast<std::size_t>(e)])
                throw ValidationError("set partition blocks must partition {1..k}");
            seen[static_cast<std::size_t>(e)] = 1;
        }
    }
}

int SetPartition::universe() const {
    int k = 0;
    for (const auto& block : blocks) k += static_cast<int>(block.size());
    return k;
}

std::vector<IntegerPartition> enumerate_integer_partitions(int j, std::optional<int> max_length) {
    if (j < 1) throw ValidationError("partitions are defined for positive integers");
    if (j > kMaxIntegerPartitionArg)
        throw BudgetExceeded("integer partition enumeration supported up to 21");
    if (max_length && *max_length < 1) throw ValidationError("max_length must be >= 1");

    std::vector<IntegerPartition> out;
    std::vector<int> current;
    // Descending-part recursion; order fixed by the final sort.
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.emplace_back();
            out.back().parts = current;
            return;
        }
        if (max_length && static_cast<int>(current.size()) == *max_length) return;
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            current.push_back(p);
            self(self, remaining - p, p);
            current.pop_back();
        }
    };
    rec(rec, j, j);
    std::sort(out.begin(), out.end(),
              [](const IntegerPartition& a, const IntegerPartition& b) { return a.parts < b.parts; });
    return out;
}

std::vector<SetPartition> enumerate_set_partitions(int k) {
    if (k < 1) throw ValidationError("set partitions are defined for positive integers");
    if (k > kMaxSetPartitionArg) throw BudgetExceeded("set partition enumeration supported up to 12");

    // Restricted growth strings: a[0]=0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<SetPartition> out;
    std::vector<int> a(static_cast<std::size_t>(k), 0);
    auto emit = [&] {
        int nblocks = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(nblocks));
        for (int i = 0; i < k; ++i) blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(i + 1);
        out.emplace_back();
        out.back().blocks = std::move(blocks); // already canonical: block b's min increases with b
    };
    auto rec = [&](auto&& self, int i, int maxval) -> void {
        if (i == k) {
            emit();
            return;
        }
        for (int v = 0; v <= maxval + 1; ++v) {
            a[static_cast<std::size_t>(i)] = v;
            self(self, i + 1, std::max(maxval, v));
        }
    };
    a[0] = 0;
    rec(rec, 1, 0);
    return out;
}

Rational coefficient_d(int k, const IntegerPartition& p) {
    require_valid_parts(p.parts);
    const int j = p.sum();
    const int n = p.length();
    if (j < 1 || j > k - 1)
        throw ValidationError("coefficient_d: sum of the partition must lie in 1..k-1");
    if (j + n > k)
        throw ValidationError("coefficient_d: partition does not contribute (j + n(p) > k)");

    Rational d(factorial(k), factorial(k - j - n));
    for (int part : p.parts) d /= (part + 1);
    d /= p.multiplicity_factorial();
    return d;
}

Int coefficient_c(int k, int j) {
    if (k < 2) throw ValidationError("coefficient_c requires k >= 2");
    if (j < 1 || j > k - 1) throw ValidationError("coefficient_c requires 1 <= j <= k-1");
    // e_j(1,...,k-1) by the standard one-row recurrence.
    std::vector<Int> e(static_cast<std::size_t>(j) + 1, 0);
    e[0] = 1;
    for (int v = 1; v <= k - 1; ++v)
        for (int t = std::min(j, v); t >= 1; --t)
            e[static_cast<std::size_t>(t)] += Int(v) * e[static_cast<std::size_t>(t) - 1];
    return e[static_cast<std::size_t>(j)];
}

Int stirling_first_unsigned(int q, int r) {
    if (q < 0 || r < 0) throw ValidationError("stirling_first_unsigned: arguments must be nonnegative");
    if (r > q) throw ValidationError("stirling_first_unsigned: r must not exceed q");
    std::vector<Int> row(static_cast<std::size_t>(r) + 1, 0);
    row[0] = 1; // s(0,0)
    for (int n = 1; n <= q; ++n) {
        for (int m = std::min(n, r); m >= 1; --m)
            row[static_cast<std::size_t>(m)] = row[static_cast<std::size_t>(m) - 1]
                                             + Int(n - 1) * row[static_cast<std::size_t>(m)];
        row[0] = 0; // s(n,0) = 0 for n >= 1
    }
    return row[static_cast<std::size_t>(r)];
}

Rational ewens(const IntegerPartition& p_prime, const Rational& theta) {
    require_valid_parts(p_prime.parts);
    const int k = p_prime.sum();
    const int n = p_prime.length();
    if (denominator(theta) == 1) {
        const Int t = numerator(theta);
        if (t <= -1 && t >= -(k - 1))
            throw PoleError("ewens: theta = " + t.str() + " is a pole for k = " + std::to_string(k));
    }
    // theta^n / (theta*(theta+1)*...*(theta+k-1)) with the leading theta cancelled.
    Rational value(factorial(k), 1);
    value *= pow_rational(theta, n - 1);
    for (int i = 1; i <= k - 1; ++i) value /= (theta + i);
    for (int part : p_prime.parts) value /= part;
    value /= p_prime.multiplicity_factorial();
    return value;
}

AllelicVector to_allelic(const IntegerPartition& p_prime) {
    require_valid_parts(p_prime.parts);
    const int k = p_prime.sum();
    AllelicVector av;
    av.m.assign(static_cast<std::size_t>(k), 0);
    for (int part : p_prime.parts) av.m[static_cast<std::size_t>(part) - 1] += 1;
    return av;
}

IntegerPartition from_allelic(const AllelicVector& av) {
    std::vector<int> parts;
    Int total = 0;
    for (int q = av.k(); q >= 1; --q) {
        const Int& mq = av.m[static_cast<std::size_t>(q) - 1];
        if (mq < 0) throw ValidationError("allelic multiplicities must be nonnegative");
        for (Int c = 0; c < mq; ++c) parts.push_back(q);
        total += Int(q) * mq;
    }
    if (total != av.k()) throw ValidationError("allelic vector does not describe a partition of k");
    return IntegerPartition(std::move(parts));
}

} // namespace finex::partitions
