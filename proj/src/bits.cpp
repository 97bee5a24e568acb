#include "sswm/bits.hpp"

#include "sswm/error.hpp"

namespace sswm {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::input: return "input";
    case ErrorKind::config: return "config";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::corrupt_stream: return "corrupt-stream";
    case ErrorKind::index: return "index";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::key: return "key";
    case ErrorKind::model: return "model";
    }
    return "unknown";
}

Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (auto byte : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((byte >> i) & 1U));
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    return bytes;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
    require(hex.size() % 2 == 0, ErrorKind::input, "hex string has odd length");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        require(hi >= 0 && lo >= 0, ErrorKind::input, "invalid hex digit in message");
        out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

std::string bits_to_hex(std::span<const std::uint8_t> bits) {
    const auto bytes = bits_to_bytes(bits);
    return to_hex(bytes);
}

void append_uint(Bits& out, std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) out.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
}

std::uint64_t read_uint(std::span<const std::uint8_t> bits, std::size_t offset, unsigned width) {
    require(offset + width <= bits.size(), ErrorKind::corrupt_stream, "bit stream too short");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (bits[offset + i] & 1U);
    return v;
}

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    require(a.size() == b.size(), ErrorKind::dimension, "hamming distance needs equal lengths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

} // namespace sswm
