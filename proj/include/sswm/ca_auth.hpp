#pragma once

// Hybrid rule-90/150 cellular automata over GF(2) with null boundary, and
// the keyed authentication tag built on them.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sswm/bits.hpp"

namespace sswm {

enum class CaRule : std::uint8_t { rule90 = 90, rule150 = 150 };

class RuleVector {
public:
    RuleVector() = default;
    /// Throws ErrorKind::input when fewer than two cells are given.
    explicit RuleVector(std::vector<CaRule> rules);
    /// Accepts raw rule numbers; anything other than 90 or 150 is rejected.
    static RuleVector from_numbers(std::span<const int> numbers);
    static RuleVector uniform(std::size_t n, CaRule rule);

    std::size_t size() const noexcept { return rules_.size(); }
    CaRule operator[](std::size_t i) const noexcept { return rules_[i]; }

    bool operator==(const RuleVector&) const = default;

private:
    std::vector<CaRule> rules_;
};

using CaState = Bits;

/// n x n matrix over GF(2), each row stored as bits.
class CharMatrix {
public:
    explicit CharMatrix(std::size_t n) : n_(n), rows_(n, Bits(n, 0)) {}

    static CharMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::uint8_t at(std::size_t r, std::size_t c) const noexcept { return rows_[r][c]; }
    void set(std::size_t r, std::size_t c, std::uint8_t v) noexcept { rows_[r][c] = v & 1U; }

    CaState apply(std::span<const std::uint8_t> state) const;
    CharMatrix operator*(const CharMatrix& rhs) const;
    CharMatrix power(std::uint64_t p) const;
    /// Rank over GF(2).
    std::size_t rank() const;

    bool operator==(const CharMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<Bits> rows_;
};

CaState ca_step(std::span<const std::uint8_t> state, const RuleVector& rules);
CharMatrix characteristic_matrix(const RuleVector& rules);
/// p successive steps; p must be positive.
CaState ca_evolve(std::span<const std::uint8_t> state, const RuleVector& rules, std::uint64_t p);

/// Shared secret: seed bytes plus tag geometry.
struct SecretKey {
    static constexpr std::size_t min_seed_bytes = 16;
    static constexpr std::uint16_t default_tag_len = 32;
    static constexpr std::uint16_t default_rounds = 48;

    std::vector<std::uint8_t> seed;
    std::uint16_t tag_len = default_tag_len;
    std::uint16_t rounds = default_rounds;

    /// Throws ErrorKind::key if the invariants (seed >= 128 bits, p >= 1, tag_len >= 2) fail.
    void validate() const;

    std::uint64_t rule_seed() const;
    std::uint64_t state_seed() const;
    std::uint64_t pattern_seed() const;

    bool operator==(const SecretKey&) const = default;
};

/// Deterministic key from a 64-bit seed; OS entropy when seed is empty.
SecretKey make_key(std::optional<std::uint64_t> seed,
                   std::uint16_t tag_len = SecretKey::default_tag_len,
                   std::uint16_t rounds = SecretKey::default_rounds);

/// Bit i of the rule-seed stream picks 90 (0) or 150 (1).
RuleVector derive_rules(const SecretKey& key, std::size_t n);

using AuthTag = Bits;

AuthTag generate_tag(std::span<const std::uint8_t> message, const SecretKey& key, std::size_t tag_len);
bool verify_tag(std::span<const std::uint8_t> message, const SecretKey& key, std::span<const std::uint8_t> tag);

// Key file: "SSWK", version, tag_len (u16), rounds (u16), seed length (u16), seed bytes.
// Multi-byte fields are big-endian.
inline constexpr std::uint8_t key_file_version = 1;

std::vector<std::uint8_t> serialize_key(const SecretKey& key);
SecretKey parse_key(std::span<const std::uint8_t> bytes);
SecretKey load_key(const std::filesystem::path& path);
void save_key(const std::filesystem::path& path, const SecretKey& key);

} // namespace sswm
