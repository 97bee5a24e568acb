#include "sswm/codebook.hpp"

#include <cmath>
#include <string>

#include "sswm/error.hpp"
#include "sswm/rng.hpp"

namespace sswm {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::vector<int> pn_sequence(const SecretKey& key, std::uint64_t index, std::size_t length) {
    require(length >= 2, ErrorKind::input, "PN sequence length must be >= 2");
    Lcg64 lcg(mix64(key.pattern_seed() ^ mix64(index + 0x632BE59BD9B4E019ULL)));
    std::vector<int> out(length);
    for (auto& v : out) v = lcg.next_sign();
    return out;
}

std::vector<int> walsh_modulate(std::span<const int> pn, std::size_t walsh_row, std::size_t length) {
    require(is_power_of_two(length), ErrorKind::config, "Walsh length must be a power of two");
    require(pn.size() == length, ErrorKind::dimension, "PN length does not match Walsh length");
    require(walsh_row < length, ErrorKind::index,
            "Walsh row " + std::to_string(walsh_row) + " out of range for order " + std::to_string(length));
    std::vector<int> out(length);
    for (std::size_t k = 0; k < length; ++k) out[k] = pn[k] * hadamard_entry(walsh_row, k);
    return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

Orthogonalizer::Orthogonalizer(std::size_t length) : length_(length) {
    require(length >= 2, ErrorKind::input, "pattern length must be >= 2");
    basis_.emplace_back(length, 1.0 / std::sqrt(static_cast<double>(length)));
}

std::optional<Sequence> Orthogonalizer::try_add(std::span<const double> v) {
    require(v.size() == length_, ErrorKind::dimension, "sequence length mismatch in Gram-Schmidt");
    Sequence r(v.begin(), v.end());
    const double input_norm = std::sqrt(dot(r, r));
    if (input_norm == 0.0) return std::nullopt;

    // Classical Gram-Schmidt, then one re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> coeffs(basis_.size());
        for (std::size_t j = 0; j < basis_.size(); ++j) coeffs[j] = dot(basis_[j], r);
        for (std::size_t j = 0; j < basis_.size(); ++j)
            for (std::size_t k = 0; k < length_; ++k) r[k] -= coeffs[j] * basis_[j][k];
    }
    const double residual = std::sqrt(dot(r, r));
    if (residual < 1e-8 * input_norm) return std::nullopt;

    for (auto& x : r) x /= residual;
    basis_.push_back(r);

    // Zero-mean correction and renormalization to sqrt(L).
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(length_);
    for (auto& x : r) x -= mean;
    const double scale = std::sqrt(static_cast<double>(length_) / dot(r, r));
    for (auto& x : r) x *= scale;
    return r;
}

std::vector<Sequence> gram_schmidt(std::span<const Sequence> sequences) {
    require(!sequences.empty(), ErrorKind::input, "Gram-Schmidt needs at least one sequence");
    const std::size_t length = sequences.front().size();
    require(sequences.size() < length, ErrorKind::capacity,
            std::to_string(sequences.size()) + " sequences exceed the " + std::to_string(length - 1) +
                " zero-mean dimensions of length " + std::to_string(length));
    Orthogonalizer gs(length);
    std::vector<Sequence> out;
    out.reserve(sequences.size());
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        auto p = gs.try_add(sequences[i]);
        require(p.has_value(), ErrorKind::degenerate,
                "sequence " + std::to_string(i) + " is linearly dependent on its predecessors");
        out.push_back(std::move(*p));
    }
    return out;
}

PatternBank build_pattern_bank(const SecretKey& key, std::size_t positions, std::size_t alphabet,
                               std::size_t length, std::uint64_t stream) {
    require(positions >= 1 && alphabet >= 1, ErrorKind::input, "pattern bank needs H >= 1 and M >= 1");
    require(is_power_of_two(length), ErrorKind::config,
            "pattern length " + std::to_string(length) + " is not a power of two");
    const std::size_t count = positions * alphabet;
    require(count < length, ErrorKind::capacity,
            "H*M = " + std::to_string(count) + " patterns do not fit " + std::to_string(length - 1) +
                " zero-mean dimensions of length " + std::to_string(length));

    constexpr std::size_t max_retries = 64;
    PatternBank bank(positions, alphabet, length);
    Orthogonalizer gs(length);
    std::uint64_t pn_index = stream << 32;
    for (std::size_t j = 0; j < count; ++j) {
        std::optional<Sequence> p;
        for (std::size_t attempt = 0; attempt <= max_retries && !p; ++attempt) {
            const auto walsh = walsh_modulate(pn_sequence(key, pn_index++, length), j % length, length);
            const Sequence seq(walsh.begin(), walsh.end());
            p = gs.try_add(seq);
        }
        require(p.has_value(), ErrorKind::degenerate, "could not extend pattern bank past " + std::to_string(j));
        bank.mutable_pattern(j / alphabet, j % alphabet) = std::move(*p);
    }
    return bank;
}

} // namespace sswm
