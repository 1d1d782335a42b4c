#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finex/partitions.hpp"
#include "finex/rational.hpp"

namespace finex::measures {

/// Finite state space {a_1, ..., a_l}: an ordered list of distinct labels.
class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<int> index_of(std::string_view label) const;

    bool operator==(const StateSpace&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Probability measure on a StateSpace: nonnegative rational weights, mass 1.
class DiscreteMeasure {
public:
    DiscreteMeasure(StateSpace space, std::vector<Rational> weights);

    const StateSpace& space() const { return space_; }
    int size() const { return space_.size(); }
    const Rational& weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
    const std::vector<Rational>& weights() const { return weights_; }

    bool operator==(const DiscreteMeasure&) const = default;

private:
    StateSpace space_;
    std::vector<Rational> weights_;
};

/// 1/N-quantized measure stored as an urn: multiplicity counts summing to N.
class QuantizedMeasure {
public:
    QuantizedMeasure(StateSpace space, int N, std::vector<std::int64_t> counts);

    const StateSpace& space() const { return space_; }
    int N() const { return N_; }
    std::int64_t count(int i) const { return counts_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    DiscreteMeasure to_measure() const;
    /// Requires every N*weight to be an integer.
    static QuantizedMeasure from_measure(const DiscreteMeasure& lam, int N);

    /// The urn as a length-N list of state indices (sorted ascending).
    std::vector<int> balls() const;

    bool operator==(const QuantizedMeasure&) const = default;

private:
    StateSpace space_;
    int N_;
    std::vector<std::int64_t> counts_;
};

/// Dense signed measure on space^order, row-major with the last index
/// fastest. Multi-indices are 0-based in code, 1-based in serialization.
/// Probability-ness (nonnegative, mass 1) is a checked view, not a type.
class SignedTensor {
public:
    SignedTensor(StateSpace space, int order);

    const StateSpace& space() const { return space_; }
    int order() const { return order_; }
    std::size_t entry_count() const { return weights_.size(); }

    const Rational& operator[](std::size_t flat) const { return weights_[flat]; }
    Rational& operator[](std::size_t flat) { return weights_[flat]; }
    const Rational& at(std::span<const int> idx) const { return weights_[flatten(idx)]; }
    Rational& at(std::span<const int> idx) { return weights_[flatten(idx)]; }

    std::size_t flatten(std::span<const int> idx) const;
    void unflatten(std::size_t flat, std::span<int> idx) const;

    Rational total_mass() const;
    bool is_probability() const; // nonnegative entries, mass 1
    bool is_symmetric() const;

    SignedTensor& operator+=(const SignedTensor& other);
    SignedTensor& operator-=(const SignedTensor& other);
    SignedTensor& operator*=(const Rational& scalar);
    friend SignedTensor operator+(SignedTensor a, const SignedTensor& b) { return a += b; }
    friend SignedTensor operator-(SignedTensor a, const SignedTensor& b) { return a -= b; }
    friend SignedTensor operator*(const Rational& s, SignedTensor t) { return t *= s; }

    bool operator==(const SignedTensor&) const = default;

private:
    StateSpace space_;
    int order_;
    std::vector<Rational> weights_;
};

/// lam^{tensor k}: independent product weights.
SignedTensor tensor_power(const DiscreteMeasure& lam, int k);

/// id^{tensor m}_# lam: mass lam_i on the diagonal point (i,...,i).
SignedTensor diagonal_push(const DiscreteMeasure& lam, int m);

/// G_P(lam): per block of P, one lambda factor pushed onto the diagonal of
/// the coordinates in that block; zero unless indices are constant on blocks.
SignedTensor block_push(const DiscreteMeasure& lam, const partitions::SetPartition& P);

/// Outer product of two tensors on the same space.
SignedTensor outer(const SignedTensor& a, const SignedTensor& b);

/// Coordinate permutation push-forward: out(j) = in(x) with x_{sigma(t)} = j_t
/// (sigma is 0-based here).
SignedTensor permute(const SignedTensor& t, std::span<const int> sigma);

/// (1/k!) sum over permutations; computed by orbit averaging.
SignedTensor symmetrize(const SignedTensor& t);

/// Sums out the last order-k indices. marginal(t, order) = t.
SignedTensor marginal(const SignedTensor& t, int k);

/// Sum of |weights|.
Rational mass_norm(const SignedTensor& t);

/// sup over index sets A of |t(A)| = max(positive part mass, negative part mass).
Rational set_sup_norm(const SignedTensor& t);

struct QuantizationWitness {
    std::vector<int> subset; // state indices (0-based)
    int k;                   // lambda(A) lies in (k/N, (k+1)/N)
};

struct QuantizationCheck {
    bool quantized;
    std::optional<QuantizationWitness> witness;
};

/// Quadratic-constraint characterization of P_{1/N}: checks
/// lam(A)^2 - ((2k+1)/N) lam(A) + k(k+1)/N^2 >= 0 for every subset A of
/// states and k = 0..N-1. Agrees with "all N*lam_i are integers".
/// Requires l <= 16 (subset enumeration).
QuantizationCheck verify_quantization(const DiscreteMeasure& lam, int N);

} // namespace finex::measures
