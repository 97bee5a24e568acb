#include "sswm/ca_auth.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "sswm/error.hpp"
#include "sswm/image.hpp"
#include "sswm/rng.hpp"

namespace sswm {

RuleVector::RuleVector(std::vector<CaRule> rules) : rules_(std::move(rules)) {
    require(rules_.size() >= 2, ErrorKind::input, "rule vector needs at least two cells");
    for (auto r : rules_)
        require(r == CaRule::rule90 || r == CaRule::rule150, ErrorKind::input, "rule must be 90 or 150");
}

RuleVector RuleVector::from_numbers(std::span<const int> numbers) {
    std::vector<CaRule> rules;
    rules.reserve(numbers.size());
    for (int n : numbers) {
        require(n == 90 || n == 150, ErrorKind::input, "rule must be 90 or 150, got " + std::to_string(n));
        rules.push_back(n == 90 ? CaRule::rule90 : CaRule::rule150);
    }
    return RuleVector(std::move(rules));
}

RuleVector RuleVector::uniform(std::size_t n, CaRule rule) {
    return RuleVector(std::vector<CaRule>(n, rule));
}

CharMatrix CharMatrix::identity(std::size_t n) {
    CharMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i][i] = 1;
    return m;
}

CaState CharMatrix::apply(std::span<const std::uint8_t> state) const {
    require(state.size() == n_, ErrorKind::dimension, "state length does not match matrix");
    CaState out(n_, 0);
    for (std::size_t r = 0; r < n_; ++r) {
        std::uint8_t acc = 0;
        for (std::size_t c = 0; c < n_; ++c) acc ^= rows_[r][c] & state[c];
        out[r] = acc;
    }
    return out;
}

CharMatrix CharMatrix::operator*(const CharMatrix& rhs) const {
    require(n_ == rhs.n_, ErrorKind::dimension, "matrix size mismatch");
    CharMatrix out(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t k = 0; k < n_; ++k)
            if (rows_[r][k])
                for (std::size_t c = 0; c < n_; ++c) out.rows_[r][c] ^= rhs.rows_[k][c];
    return out;
}

CharMatrix CharMatrix::power(std::uint64_t p) const {
    CharMatrix result = identity(n_);
    CharMatrix base = *this;
    while (p > 0) {
        if (p & 1U) result = result * base;
        p >>= 1;
        if (p > 0) base = base * base;
    }
    return result;
}

std::size_t CharMatrix::rank() const {
    auto rows = rows_;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n_ && rank < n_; ++c) {
        auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                                  [c](const Bits& row) { return row[c] != 0; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
        for (std::size_t r = 0; r < n_; ++r)
            if (r != rank && rows[r][c])
                for (std::size_t k = 0; k < n_; ++k) rows[r][k] ^= rows[rank][k];
        ++rank;
    }
    return rank;
}

CaState ca_step(std::span<const std::uint8_t> state, const RuleVector& rules) {
    const std::size_t n = rules.size();
    require(state.size() == n, ErrorKind::dimension,
            "CA state has " + std::to_string(state.size()) + " cells, rules have " + std::to_string(n));
    CaState next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t left = i > 0 ? state[i - 1] : 0;
        const std::uint8_t right = i + 1 < n ? state[i + 1] : 0;
        std::uint8_t v = left ^ right;
        if (rules[i] == CaRule::rule150) v ^= state[i];
        next[i] = v & 1U;
    }
    return next;
}

CharMatrix characteristic_matrix(const RuleVector& rules) {
    const std::size_t n = rules.size();
    CharMatrix t(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) t.set(i, i - 1, 1);
        if (i + 1 < n) t.set(i, i + 1, 1);
        t.set(i, i, rules[i] == CaRule::rule150 ? 1 : 0);
    }
    return t;
}

CaState ca_evolve(std::span<const std::uint8_t> state, const RuleVector& rules, std::uint64_t p) {
    require(p >= 1, ErrorKind::input, "CA evolution needs p >= 1");
    CaState s(state.begin(), state.end());
    for (std::uint64_t i = 0; i < p; ++i) s = ca_step(s, rules);
    return s;
}

namespace {

std::uint64_t keyed_hash(std::span<const std::uint8_t> seed, std::uint64_t domain) {
    // FNV-1a over the seed, finalized per domain.
    std::uint64_t h = 0xCBF29CE484222325ULL ^ mix64(domain);
    for (auto b : seed) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return mix64(h ^ (domain * 0x9E3779B97F4A7C15ULL));
}

} // namespace

void SecretKey::validate() const {
    require(seed.size() >= min_seed_bytes, ErrorKind::key,
            "key seed must be at least 128 bits, got " + std::to_string(seed.size() * 8));
    require(rounds >= 1, ErrorKind::key, "key rounds must be >= 1");
    require(tag_len >= 2, ErrorKind::key, "tag length must be >= 2");
}

std::uint64_t SecretKey::rule_seed() const { return keyed_hash(seed, 0x72756C65); }
std::uint64_t SecretKey::state_seed() const { return keyed_hash(seed, 0x73746174); }
std::uint64_t SecretKey::pattern_seed() const { return keyed_hash(seed, 0x7061746E); }

SecretKey make_key(std::optional<std::uint64_t> seed, std::uint16_t tag_len, std::uint16_t rounds) {
    SecretKey key;
    key.tag_len = tag_len;
    key.rounds = rounds;
    key.seed.resize(32);
    if (seed) {
        SplitMix64 gen(*seed);
        for (std::size_t i = 0; i < key.seed.size(); i += 8) {
            const auto v = gen.next();
            for (std::size_t j = 0; j < 8; ++j) key.seed[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
        }
    } else {
        std::random_device rd;
        for (auto& b : key.seed) b = static_cast<std::uint8_t>(rd());
    }
    key.validate();
    return key;
}

RuleVector derive_rules(const SecretKey& key, std::size_t n) {
    SplitMix64 stream(key.rule_seed());
    std::vector<CaRule> rules(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) word = stream.next();
        rules[i] = ((word >> (i % 64)) & 1U) ? CaRule::rule150 : CaRule::rule90;
    }
    return RuleVector(std::move(rules));
}

AuthTag generate_tag(std::span<const std::uint8_t> message, const SecretKey& key, std::size_t tag_len) {
    require(!message.empty(), ErrorKind::input, "message must not be empty");
    require(tag_len >= 2, ErrorKind::input, "tag length must be >= 2");
    key.validate();

    const std::size_t n = tag_len;
    const RuleVector rules = derive_rules(key, n);

    // Initial state: seed bits folded over the cells, whitened by the state stream.
    CaState state(n, 0);
    const Bits seed_bits = bytes_to_bits(key.seed);
    for (std::size_t i = 0; i < seed_bits.size(); ++i) state[i % n] ^= seed_bits[i];
    SplitMix64 whitening(key.state_seed());
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) word = whitening.next();
        state[i] ^= static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
    }

    // 1 then 0s up to a block boundary.
    Bits padded(message.begin(), message.end());
    padded.push_back(1);
    while (padded.size() % n != 0) padded.push_back(0);

    for (std::size_t off = 0; off < padded.size(); off += n) {
        for (std::size_t i = 0; i < n; ++i) state[i] ^= padded[off + i] & 1U;
        state = ca_evolve(state, rules, key.rounds);
    }
    return state;
}

bool verify_tag(std::span<const std::uint8_t> message, const SecretKey& key, std::span<const std::uint8_t> tag) {
    if (message.empty() || tag.size() < 2) return false;
    const auto expected = generate_tag(message, key, tag.size());
    return std::equal(expected.begin(), expected.end(), tag.begin(), tag.end());
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> bytes, std::size_t off) {
    return static_cast<std::uint16_t>((bytes[off] << 8) | bytes[off + 1]);
}

} // namespace

std::vector<std::uint8_t> serialize_key(const SecretKey& key) {
    key.validate();
    require(key.seed.size() <= 0xFFFF, ErrorKind::key, "key seed too long");
    std::vector<std::uint8_t> out = {'S', 'S', 'W', 'K', key_file_version};
    put_u16(out, key.tag_len);
    put_u16(out, key.rounds);
    put_u16(out, static_cast<std::uint16_t>(key.seed.size()));
    out.insert(out.end(), key.seed.begin(), key.seed.end());
    return out;
}

SecretKey parse_key(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t header = 11;
    require(bytes.size() >= header, ErrorKind::key, "key file truncated");
    require(std::equal(bytes.begin(), bytes.begin() + 4, "SSWK"), ErrorKind::key, "key file: bad magic");
    require(bytes[4] == key_file_version, ErrorKind::key,
            "key file: unsupported version " + std::to_string(bytes[4]));
    SecretKey key;
    key.tag_len = get_u16(bytes, 5);
    key.rounds = get_u16(bytes, 7);
    const std::size_t seed_len = get_u16(bytes, 9);
    require(bytes.size() == header + seed_len, ErrorKind::key, "key file: seed length mismatch");
    key.seed.assign(bytes.begin() + header, bytes.end());
    key.validate();
    return key;
}

SecretKey load_key(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return parse_key(bytes);
}

void save_key(const std::filesystem::path& path, const SecretKey& key) {
    write_file(path, serialize_key(key));
}

} // namespace sswm
