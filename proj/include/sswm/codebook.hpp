#pragma once

// Spreading patterns: keyed PN sequences, Walsh/Hadamard modulation and
// Gram-Schmidt orthogonalization into zero-mean, norm-sqrt(L) patterns.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sswm/ca_auth.hpp"

namespace sswm {

using Sequence = std::vector<double>;

bool is_power_of_two(std::size_t n) noexcept;

/// Bipolar +/-1 sequence from a keyed 64-bit LCG, one sample per high bit.
std::vector<int> pn_sequence(const SecretKey& key, std::uint64_t index, std::size_t length);

/// Sylvester Hadamard entry H(row, col) in {-1, +1}.
inline int hadamard_entry(std::size_t row, std::size_t col) noexcept {
    return (std::popcount(row & col) & 1) ? -1 : 1;
}

/// Elementwise product with row `walsh_row` of the order-L Sylvester Hadamard matrix.
std::vector<int> walsh_modulate(std::span<const int> pn, std::size_t walsh_row, std::size_t length);

/// Incremental Gram-Schmidt against the constant vector and all accepted
/// outputs, with one re-orthogonalization pass. Accepted outputs are
/// zero-mean with Euclidean norm sqrt(L).
class Orthogonalizer {
public:
    explicit Orthogonalizer(std::size_t length);

    /// Returns nothing when the residual is below 1e-8 of the input norm.
    std::optional<Sequence> try_add(std::span<const double> v);

    std::size_t rank() const noexcept { return basis_.size(); }

private:
    std::size_t length_;
    std::vector<Sequence> basis_; // unit-norm, includes the constant vector first
};

/// Throws ErrorKind::degenerate on rank deficiency and ErrorKind::capacity
/// when there are more sequences than zero-mean dimensions.
std::vector<Sequence> gram_schmidt(std::span<const Sequence> sequences);

/// positions() x alphabet() grid of mutually orthogonal patterns of one length.
class PatternBank {
public:
    PatternBank(std::size_t positions, std::size_t alphabet, std::size_t length)
        : positions_(positions), alphabet_(alphabet), length_(length), patterns_(positions * alphabet) {}

    std::size_t positions() const noexcept { return positions_; }
    std::size_t alphabet() const noexcept { return alphabet_; }
    std::size_t length() const noexcept { return length_; }

    std::span<const double> pattern(std::size_t position, std::size_t symbol) const {
        return patterns_[position * alphabet_ + symbol];
    }
    Sequence& mutable_pattern(std::size_t position, std::size_t symbol) {
        return patterns_[position * alphabet_ + symbol];
    }

    bool operator==(const PatternBank&) const = default;

private:
    std::size_t positions_;
    std::size_t alphabet_;
    std::size_t length_;
    std::vector<Sequence> patterns_;
};

/// `stream` selects a disjoint range of PN indices, so distinct streams of
/// one key give independent banks. Requires L a power of two and H*M < L.
PatternBank build_pattern_bank(const SecretKey& key, std::size_t positions, std::size_t alphabet,
                               std::size_t length, std::uint64_t stream = 0);

} // namespace sswm
