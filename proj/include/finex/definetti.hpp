#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "finex/extremal.hpp"
#include "finex/measures.hpp"
#include "finex/simplex.hpp"

namespace finex::definetti {

/// Finitely supported prior on 1/N-quantized measures. Canonical form:
/// atoms sorted by counts in colex order, pairwise distinct, weights > 0
/// summing to 1. Construction merges duplicates and sorts.
class PriorMixture {
public:
    struct Atom {
        Rational weight;
        measures::QuantizedMeasure measure;
    };

    PriorMixture(measures::StateSpace space, int N, std::vector<Atom> atoms);

    const measures::StateSpace& space() const { return space_; }
    int N() const { return N_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    bool operator==(const PriorMixture& other) const;

private:
    measures::StateSpace space_;
    int N_;
    std::vector<Atom> atoms_;
};

/// SplitMix64: the 64-bit generator of Steele, Lea and Flood (as used for
/// seeding in the xoshiro family). Chosen for bit-reproducible output
/// independent of the C++ standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform draw from {0, ..., bound-1} by rejection (unbiased).
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

/// Deterministic per-sequence seed so that parallel and serial batch
/// generation agree.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

struct SampleBatch {
    std::vector<std::vector<int>> sequences; // state indices, 0-based
    std::uint64_t seed = 0;
    int N = 0;
    int k = 0;
    std::uint64_t prior_hash = 0;
};

/// Stable 64-bit hash of the canonical prior content (FNV-1a).
std::uint64_t prior_hash(const PriorMixture& prior);

/// sum_i w_i F_{N,k}(lambda_i): an N-representable probability k-plan.
measures::SignedTensor mix(const PriorMixture& prior, int k);

/// Unique prior of a symmetric probability N-plan: pushes each support
/// point to its count vector. mix(decompose(gamma, N), N) = gamma.
PriorMixture decompose(const measures::SignedTensor& gamma, int N);

struct InfeasibilityCertificate {
    /// One multiplier per constraint row of the representability LP: the
    /// rows are (sorted k-index equations ..., total mass). Satisfies
    /// A^T y <= 0 and rhs . y > 0 for that LP.
    std::vector<Rational> row_multipliers;
    mmot::LPInstance lp; // the exact LP the certificate refers to
    bool verify() const;
};

struct RepresentabilityResult {
    bool representable;
    std::optional<PriorMixture> witness;
    std::optional<InfeasibilityCertificate> certificate;
};

/// Exact feasibility LP over all quantized measures: find alpha >= 0 with
/// sum alpha_lambda F_{N,k}(lambda) = mu_k and sum alpha = 1.
RepresentabilityResult is_representable(const measures::SignedTensor& mu_k, int N);

/// k draws without replacement from the urn's multiset.
std::vector<int> sample_urn(const measures::QuantizedMeasure& urn, int k, SplitMix64& rng);

/// n independent sequences: each picks an urn from the prior, then draws k
/// balls without replacement. Sequence nu uses split_seed(seed, nu).
SampleBatch sample_exchangeable(const PriorMixture& prior, int k, int n, std::uint64_t seed);

/// Empirical prior (1/n) sum of Diracs at the count vectors of the
/// sequences. Requires k = N.
PriorMixture empirical_prior(const SampleBatch& batch, const measures::StateSpace& space);

/// Total variation distance between two priors on the same (space, N):
/// half the l1 distance over the union of atoms.
Rational prior_tv(const PriorMixture& a, const PriorMixture& b);

/// Mean-field form used at p = 0: `bare` mixes plain lambda^{tensor k}
/// (the classical bound's comparison point), `prefactor` scales it by
/// N^{k-1}/prod(N-i) (the truncated-series form). For p >= 1 both agree.
enum class MeanFieldForm { bare, prefactor };

struct DfGapResult {
    Rational gap;   // set_sup_norm(mu_k - truncated mixture)
    Rational bound; // prefactor * C_k / N^{p+1}
};

/// Distance between mu_k and the p-th order truncated mixture of its prior.
/// Requires mix(prior, k) = mu_k exactly and 0 <= p <= k-2.
DfGapResult df_gap(const measures::SignedTensor& mu_k, const PriorMixture& prior, int p,
                   MeanFieldForm form = MeanFieldForm::bare);

} // namespace finex::definetti
