#pragma once

// Embedded bit string: 16-bit message length, message bits, tag bits;
// M-ary symbol mapping and block interleaving of the symbol stream.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sswm/bits.hpp"

namespace sswm {

using SymbolStream = std::vector<std::uint16_t>;

inline constexpr unsigned length_field_bits = 16;

/// MSB-first m-bit groups; the tail is zero-padded. m must be in 1..4.
SymbolStream mary_map(std::span<const std::uint8_t> bits, unsigned m);
/// Inverse of mary_map truncated to bit_len bits.
Bits mary_unmap(std::span<const std::uint16_t> symbols, unsigned m, std::size_t bit_len);

/// Column-write / row-read permutation of exactly l*l symbols.
SymbolStream interleave(std::span<const std::uint16_t> symbols, std::size_t degree);
SymbolStream deinterleave(std::span<const std::uint16_t> symbols, std::size_t degree);

/// Smallest l with l*l >= count.
std::size_t auto_degree(std::size_t count);

/// Symbol-stream geometry derived from the payload size.
struct StreamShape {
    std::size_t payload_bits = 0; ///< 16 + N + tag_len
    std::size_t symbols = 0;      ///< ceil(payload_bits / m)
    std::size_t degree = 0;       ///< interleaver degree l
    std::size_t padded = 0;       ///< symbols rounded up to a multiple of l*l
};

/// `degree` 0 selects auto_degree (one l*l interleaver block).
StreamShape stream_shape(std::size_t message_bits, std::size_t tag_len, unsigned m, std::size_t degree);

Bits assemble_payload(std::span<const std::uint8_t> message, std::span<const std::uint8_t> tag);

/// Full forward path: payload bits -> symbols -> zero-pad -> interleave per l*l block.
SymbolStream encode_stream(std::span<const std::uint8_t> payload_bits, unsigned m, const StreamShape& shape);
/// 1 where the interleaved stream holds a payload symbol, 0 for padding.
std::vector<char> carried_mask(const StreamShape& shape);
/// Inverse: deinterleave per block, unmap, truncated to shape.payload_bits.
Bits decode_stream(std::span<const std::uint16_t> symbols, unsigned m, const StreamShape& shape);

struct PayloadFields {
    Bits message;
    Bits tag;
};

/// Splits a decoded payload; nothing when the length field is inconsistent.
std::optional<PayloadFields> split_payload(std::span<const std::uint8_t> bits, std::size_t tag_len);

} // namespace sswm
