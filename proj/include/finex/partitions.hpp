#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "finex/rational.hpp"

namespace finex::partitions {

/// Integer partition in standard representation: weakly decreasing positive
/// parts. sum() is the partitioned integer, length() the number of parts.
struct IntegerPartition {
    std::vector<int> parts;

    IntegerPartition() = default;
    explicit IntegerPartition(std::vector<int> p);

    int sum() const;
    int length() const { return static_cast<int>(parts.size()); }

    /// Product over the distinct part values q of multiplicity(q)!.
    Int multiplicity_factorial() const;

    auto operator<=>(const IntegerPartition&) const = default;
};

/// Allelic view of a partition of k: m[q-1] = number of parts equal to q,
/// q = 1..k, with sum q*m_q = k.
struct AllelicVector {
    std::vector<Int> m;

    int k() const { return static_cast<int>(m.size()); }
};

/// Set partition of {1..k}: disjoint nonempty blocks covering {1..k}.
/// Canonical form: each block sorted ascending, blocks ordered by minimum.
struct SetPartition {
    std::vector<std::vector<int>> blocks;

    SetPartition() = default;
    explicit SetPartition(std::vector<std::vector<int>> b);

    int universe() const; // k
    int block_count() const { return static_cast<int>(blocks.size()); }

    bool operator==(const SetPartition&) const = default;
};

/// All partitions of j (optionally of length <= max_length), each with weakly
/// decreasing parts, listed in ascending lexicographic order of the part
/// lists: for j=4 that is (1,1,1,1), (2,1,1), (2,2), (3,1), (4).
/// Supported up to j = 21.
std::vector<IntegerPartition> enumerate_integer_partitions(int j, std::optional<int> max_length = std::nullopt);

/// All set partitions of {1..k}, canonical form, in restricted-growth-string
/// order. Supported up to k = 12 (Bell-number growth).
std::vector<SetPartition> enumerate_set_partitions(int k);

/// Coefficient d_p^(k) of the p-monomial in the 1/N^j correction of order
/// j = sum(p):
///   k!/(k-j-n(p))! * prod_i 1/(p_i+1) * prod_{q in Ran p} 1/mult(q)!.
/// Requires 1 <= j <= k-1 and j + n(p) <= k.
Rational coefficient_d(int k, const IntegerPartition& p);

/// c_j^(k) = sum over 1 <= i_1 < ... < i_j <= k-1 of i_1*...*i_j, the
/// elementary symmetric polynomial e_j(1,...,k-1). Requires 1 <= j <= k-1.
Int coefficient_c(int k, int j);

/// Unsigned Stirling number of the first kind: permutations of {1..q} with
/// exactly r cycles. s(0,0) = 1; s(q,0) = s(0,r) = 0 for q,r > 0.
Int stirling_first_unsigned(int q, int r);

/// theta hit a pole of the Ewens function ({-1, ..., -(k-1)}).
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Ewens function on partitions p' of k, analytically continued in theta:
///   k!/(theta*(theta+1)*...*(theta+k-1)) * theta^{n(p')}
///     * prod_i 1/p'_i * prod_q 1/mult(q)!.
/// The theta factor cancels one zero of the denominator, so theta = 0 is a
/// regular point; poles are exactly theta in {-1, ..., -(k-1)}.
Rational ewens(const IntegerPartition& p_prime, const Rational& theta);

AllelicVector to_allelic(const IntegerPartition& p_prime);
IntegerPartition from_allelic(const AllelicVector& m);

} // namespace finex::partitions
