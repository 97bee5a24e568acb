#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sswm {

/// One element per bit, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// MSB-first expansion of bytes.
Bits bytes_to_bits(std::span<const std::uint8_t> bytes);

/// Packs bits MSB-first; the tail byte is zero-padded.
std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits);

/// Parses an even-length hex string (optional 0x prefix). Throws ErrorKind::input.
std::vector<std::uint8_t> parse_hex(std::string_view hex);

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Hex of the packed bits.
std::string bits_to_hex(std::span<const std::uint8_t> bits);

/// Appends the low `width` bits of value, MSB first.
void append_uint(Bits& out, std::uint64_t value, unsigned width);

/// Reads `width` bits MSB first starting at offset.
std::uint64_t read_uint(std::span<const std::uint8_t> bits, std::size_t offset, unsigned width);

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

} // namespace sswm
