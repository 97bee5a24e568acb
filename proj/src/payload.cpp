#include "sswm/payload.hpp"

#include <cmath>
#include <string>

#include "sswm/error.hpp"

namespace sswm {

SymbolStream mary_map(std::span<const std::uint8_t> bits, unsigned m) {
    require(m >= 1 && m <= 4, ErrorKind::config, "bits per symbol must be 1..4, got " + std::to_string(m));
    SymbolStream out((bits.size() + m - 1) / m, 0);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::uint16_t v = 0;
        for (unsigned b = 0; b < m; ++b) {
            const std::size_t i = s * m + b;
            v = static_cast<std::uint16_t>((v << 1) | (i < bits.size() ? (bits[i] & 1U) : 0U));
        }
        out[s] = v;
    }
    return out;
}

Bits mary_unmap(std::span<const std::uint16_t> symbols, unsigned m, std::size_t bit_len) {
    require(m >= 1 && m <= 4, ErrorKind::config, "bits per symbol must be 1..4, got " + std::to_string(m));
    require(bit_len <= symbols.size() * m, ErrorKind::corrupt_stream, "bit length exceeds symbol stream");
    Bits out;
    out.reserve(bit_len);
    for (auto s : symbols) {
        require(s < (1U << m), ErrorKind::corrupt_stream,
                "symbol " + std::to_string(s) + " out of range for M = " + std::to_string(1U << m));
        for (unsigned b = m; b-- > 0 && out.size() < bit_len;) out.push_back(static_cast<std::uint8_t>((s >> b) & 1U));
    }
    return out;
}

SymbolStream interleave(std::span<const std::uint16_t> symbols, std::size_t degree) {
    require(degree >= 1 && symbols.size() == degree * degree, ErrorKind::dimension,
            "interleaver needs exactly l*l = " + std::to_string(degree * degree) + " symbols, got " +
                std::to_string(symbols.size()));
    SymbolStream out(symbols.size());
    for (std::size_t r = 0; r < degree; ++r)
        for (std::size_t c = 0; c < degree; ++c) out[r * degree + c] = symbols[c * degree + r];
    return out;
}

SymbolStream deinterleave(std::span<const std::uint16_t> symbols, std::size_t degree) {
    require(degree >= 1 && symbols.size() == degree * degree, ErrorKind::dimension,
            "deinterleaver needs exactly l*l = " + std::to_string(degree * degree) + " symbols, got " +
                std::to_string(symbols.size()));
    SymbolStream out(symbols.size());
    for (std::size_t r = 0; r < degree; ++r)
        for (std::size_t c = 0; c < degree; ++c) out[c * degree + r] = symbols[r * degree + c];
    return out;
}

std::size_t auto_degree(std::size_t count) {
    auto l = static_cast<std::size_t>(std::sqrt(static_cast<double>(count)));
    while (l * l < count) ++l;
    while (l > 1 && (l - 1) * (l - 1) >= count) --l;
    return std::max<std::size_t>(l, 1);
}

StreamShape stream_shape(std::size_t message_bits, std::size_t tag_len, unsigned m, std::size_t degree) {
    require(m >= 1 && m <= 4, ErrorKind::config, "bits per symbol must be 1..4, got " + std::to_string(m));
    StreamShape shape;
    shape.payload_bits = length_field_bits + message_bits + tag_len;
    shape.symbols = (shape.payload_bits + m - 1) / m;
    shape.degree = degree == 0 ? auto_degree(shape.symbols) : degree;
    const std::size_t block = shape.degree * shape.degree;
    shape.padded = (shape.symbols + block - 1) / block * block;
    return shape;
}

Bits assemble_payload(std::span<const std::uint8_t> message, std::span<const std::uint8_t> tag) {
    require(!message.empty(), ErrorKind::input, "message must not be empty");
    require(message.size() < (1U << length_field_bits), ErrorKind::capacity, "message longer than 65535 bits");
    Bits out;
    out.reserve(length_field_bits + message.size() + tag.size());
    append_uint(out, message.size(), length_field_bits);
    out.insert(out.end(), message.begin(), message.end());
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

SymbolStream encode_stream(std::span<const std::uint8_t> payload_bits, unsigned m, const StreamShape& shape) {
    auto symbols = mary_map(payload_bits, m);
    require(symbols.size() == shape.symbols, ErrorKind::dimension, "payload does not match stream shape");
    symbols.resize(shape.padded, 0);
    const std::size_t block = shape.degree * shape.degree;
    SymbolStream out;
    out.reserve(shape.padded);
    for (std::size_t off = 0; off < shape.padded; off += block) {
        const auto part = interleave(std::span(symbols).subspan(off, block), shape.degree);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<char> carried_mask(const StreamShape& shape) {
    SymbolStream flags(shape.padded, 0);
    std::fill_n(flags.begin(), std::min(shape.symbols, shape.padded), std::uint16_t{1});
    const std::size_t block = shape.degree * shape.degree;
    std::vector<char> out;
    out.reserve(shape.padded);
    for (std::size_t off = 0; off < shape.padded; off += block) {
        const auto part = interleave(std::span(flags).subspan(off, block), shape.degree);
        for (auto f : part) out.push_back(static_cast<char>(f));
    }
    return out;
}

Bits decode_stream(std::span<const std::uint16_t> symbols, unsigned m, const StreamShape& shape) {
    require(symbols.size() == shape.padded, ErrorKind::dimension, "symbol stream does not match shape");
    const std::size_t block = shape.degree * shape.degree;
    SymbolStream plain;
    plain.reserve(shape.padded);
    for (std::size_t off = 0; off < shape.padded; off += block) {
        const auto part = deinterleave(symbols.subspan(off, block), shape.degree);
        plain.insert(plain.end(), part.begin(), part.end());
    }
    return mary_unmap(plain, m, shape.payload_bits);
}

std::optional<PayloadFields> split_payload(std::span<const std::uint8_t> bits, std::size_t tag_len) {
    if (bits.size() < length_field_bits) return std::nullopt;
    const auto n = static_cast<std::size_t>(read_uint(bits, 0, length_field_bits));
    if (n == 0 || length_field_bits + n + tag_len != bits.size()) return std::nullopt;
    PayloadFields f;
    f.message.assign(bits.begin() + length_field_bits, bits.begin() + static_cast<std::ptrdiff_t>(length_field_bits + n));
    f.tag.assign(bits.begin() + static_cast<std::ptrdiff_t>(length_field_bits + n), bits.end());
    return f;
}

} // namespace sswm
