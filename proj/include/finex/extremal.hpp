#pragma once

#include <optional>
#include <vector>

#include "finex/measures.hpp"
#include "finex/partitions.hpp"

namespace finex::extremal {

/// One symmetrized contribution to the 1/N^j correction: the partition p of
/// j it comes from, its coefficient d_p^(k), and S_k applied to the
/// p-monomial. The j=0 term is the mean field lambda^{tensor k} with d = 1
/// and no partition.
struct SeriesContribution {
    std::optional<partitions::IntegerPartition> p;
    Rational d;
    measures::SignedTensor tensor;
};

struct FSeriesTerm {
    int j;
    std::vector<SeriesContribution> contributions;
};

/// N-independent series terms for orders j = 0..k-1. Within each term the
/// coefficients sum to c_j^(k).
std::vector<FSeriesTerm> f_series(const measures::DiscreteMeasure& lam, int k);

/// N^{k-1} / prod_{i=1}^{k-1} (N - i).
Rational prefactor(int N, int k);

/// C_k = sum_{j=1}^{k-1} c_j^(k), the truncation-bound constant.
Int series_constant(int k);

/// F_{N,k}(lambda) from the explicit expansion:
///   prefactor * [lambda^{tensor k} + sum_j (-1)^j / N^j * S_k P_j^(k)(lambda)].
/// Defined for any probability measure lambda (total mass is always 1);
/// entrywise nonnegativity is guaranteed only for 1/N-quantized lambda.
/// k = 1 returns lambda itself.
measures::SignedTensor f_nk_explicit(int N, const measures::DiscreteMeasure& lam, int k);

/// Same value via the recursion
///   mu_{j+1} = N/(N-j) mu_j tensor lambda - 1/(N-j) sum_i R_i# mu_j,
/// where R_i duplicates coordinate i into the new last slot.
measures::SignedTensor f_nk_recursive(int N, const measures::DiscreteMeasure& lam, int k);

/// Same value via the set-partition representation
///   (N-k)!/N! sum_{P} (-1)^{k-n(P)} N^{n(P)} beta_P G_P(lambda),
/// beta_P = prod over blocks of (|B|-1)!. Requires k <= 12.
measures::SignedTensor f_nk_partition(int N, const measures::DiscreteMeasure& lam, int k);

/// Independent oracle: (N-k)!/N! sum over pairwise-distinct index tuples
/// (m_1..m_k) in {1..N}^k of the Dirac at (x_{m_1}..x_{m_k}) where the urn
/// realizes (x_1..x_N). Requires N^k <= 10^7.
measures::SignedTensor f_nk_bruteforce(const measures::QuantizedMeasure& urn, int k);

struct TruncationResult {
    measures::SignedTensor approx;   // prefactor * [mean field + corrections up to order p]
    measures::SignedTensor residual; // exact F minus approx
    Rational bound;                  // prefactor * C_k / N^{p+1}, certified mass bound
};

/// Truncates the correction series after order p (p = 0 keeps only the mean
/// field). Requires 0 <= p <= k-2.
TruncationResult f_nk_truncated(int N, const measures::DiscreteMeasure& lam, int k, int p);

/// Mass of F_{N,k}(lambda) at the diagonal point (x,..,x), via the
/// factorization prefactor * lam_x (lam_x - 1/N) ... (lam_x - (k-1)/N).
Rational diagonal_mass(const measures::QuantizedMeasure& lam, int k, int x);

/// Extreme point of the zero-diagonal set: true iff every urn count <= k-1,
/// equivalently F_{N,k} puts no mass on any diagonal point.
bool is_offdiagonal_extreme(const measures::QuantizedMeasure& lam, int k);

/// All 1/N-quantized measures on the space (compositions of N into l parts),
/// in ascending colex order on count vectors. Count is binom(N+l-1, l-1),
/// budget-checked against 10^7.
std::vector<measures::QuantizedMeasure> enumerate_quantized(int N, const measures::StateSpace& space);

/// Comparator giving the enumerate_quantized order.
bool colex_less(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

/// Masses of the series terms of F_{N,k}: rows (j, prefactor * c_j^(k) / N^j)
/// for j = 0..k-1, with c_0 = 1. This is the data behind the term-size
/// plots (the j=1 entry equals and then overtakes the mean field as N drops
/// to c_1).
std::vector<std::pair<int, Rational>> term_mass_table(int N, int k);

} // namespace finex::extremal
