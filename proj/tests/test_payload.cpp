#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "helpers.hpp"
#include "sswm/error.hpp"
#include "sswm/payload.hpp"

using namespace sswm;

namespace {

SymbolStream iota_stream(std::size_t n, std::uint16_t first = 0) {
    SymbolStream s(n);
    std::iota(s.begin(), s.end(), first);
    return s;
}

// Plain-stream indices hit by a burst at [start, start + b) of the interleaved stream.
std::vector<std::size_t> burst_sources(std::size_t l, std::size_t start, std::size_t b) {
    const auto inter = interleave(iota_stream(l * l), l);
    std::vector<std::size_t> out;
    for (std::size_t k = start; k < start + b; ++k) out.push_back(inter[k]);
    return out;
}

std::size_t min_separation(const std::vector<std::size_t>& v) {
    std::size_t best = SIZE_MAX;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::min(best, v[i] > v[j] ? v[i] - v[j] : v[j] - v[i]);
    return best;
}

} // namespace

TEST_CASE("mary_map examples") {
    CHECK(mary_map(Bits{1, 0}, 2) == SymbolStream{2});
    CHECK(mary_map(Bits{1, 0, 1, 1, 0, 0, 0, 1}, 4) == SymbolStream{11, 1});
    CHECK(mary_map(Bits{1, 1, 1}, 2) == SymbolStream{3, 2});
    CHECK(mary_map(Bits{0, 1, 1}, 1) == SymbolStream{0, 1, 1});
    CHECK_THROWS_AS(mary_map(Bits{1}, 0), Error);
    CHECK_THROWS_AS(mary_map(Bits{1}, 5), Error);
}

TEST_CASE("mary_unmap examples") {
    CHECK(mary_unmap(SymbolStream{3}, 2, 2) == Bits{1, 1});
    CHECK(mary_unmap(SymbolStream{0, 0}, 2, 3) == Bits{0, 0, 0});
    CHECK(mary_unmap(SymbolStream{11, 1}, 4, 8) == Bits{1, 0, 1, 1, 0, 0, 0, 1});
    try {
        mary_unmap(SymbolStream{4}, 2, 2);
        FAIL("expected corrupt stream");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::corrupt_stream);
    }
}

TEST_CASE("mary round trip") {
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const unsigned m = 1 + t % 4;
        const auto bits = testing::random_bits(1 + t % 97, t);
        const auto sym = mary_map(bits, m);
        CHECK(sym.size() == (bits.size() + m - 1) / m);
        for (auto s : sym) CHECK(s < (1U << m));
        CHECK(mary_unmap(sym, m, bits.size()) == bits);
    }
}

TEST_CASE("interleave examples") {
    const SymbolStream in{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const SymbolStream out{1, 4, 7, 2, 5, 8, 3, 6, 9};
    CHECK(interleave(in, 3) == out);
    CHECK(deinterleave(out, 3) == in);
    CHECK(interleave(SymbolStream{5}, 1) == SymbolStream{5});
    CHECK(deinterleave(SymbolStream{5}, 1) == SymbolStream{5});
    try {
        interleave(SymbolStream{1, 2, 3}, 2);
        FAIL("expected dimension error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::dimension);
    }
    CHECK_THROWS_AS(deinterleave(SymbolStream{1, 2, 3, 4, 5}, 2), Error);
}

TEST_CASE("interleave is an inverse pair of permutations") {
    for (std::size_t l = 1; l <= 8; ++l) {
        const auto in = iota_stream(l * l, 100);
        const auto out = interleave(in, l);
        auto sorted = out;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == in);
        CHECK(deinterleave(out, l) == in);
        CHECK(interleave(deinterleave(in, l), l) == in);
        for (std::uint64_t t = 0; t < 20; ++t) {
            SymbolStream r(l * l);
            SplitMix64 rng(t * 31 + l);
            for (auto& v : r) v = static_cast<std::uint16_t>(rng.below(16));
            CHECK(deinterleave(interleave(r, l), l) == r);
        }
    }
}

TEST_CASE("burst dispersion") {
    for (std::size_t l = 2; l <= 8; ++l) {
        // Bursts that stay inside one row of the read-out spread to >= l.
        for (std::size_t row = 0; row < l; ++row)
            for (std::size_t off = 0; off < l; ++off)
                for (std::size_t b = 2; off + b <= l; ++b)
                    CHECK(min_separation(burst_sources(l, row * l + off, b)) >= l);
        // Bursts straddling a row boundary keep at least l - 1.
        for (std::size_t start = 0; start + l <= l * l; ++start)
            CHECK(min_separation(burst_sources(l, start, l)) >= l - 1);
    }
    // The straddling case is tight: reading across a row end meets the next column.
    CHECK(min_separation(burst_sources(3, 2, 3)) == 2);
}

TEST_CASE("auto degree and stream shape") {
    CHECK(auto_degree(1) == 1);
    CHECK(auto_degree(4) == 2);
    CHECK(auto_degree(5) == 3);
    CHECK(auto_degree(9) == 3);
    CHECK(auto_degree(10) == 4);
    const auto s = stream_shape(32, 32, 2, 0);
    CHECK(s.payload_bits == 80);
    CHECK(s.symbols == 40);
    CHECK(s.degree == 7);
    CHECK(s.padded == 49);
    const auto t = stream_shape(32, 32, 3, 2);
    CHECK(t.symbols == 27);
    CHECK(t.degree == 2);
    CHECK(t.padded == 28);
    CHECK_THROWS_AS(stream_shape(8, 32, 5, 0), Error);
}

TEST_CASE("payload assembly and split") {
    const auto msg = testing::random_bits(20, 1);
    const auto tag = testing::random_bits(32, 2);
    const auto p = assemble_payload(msg, tag);
    CHECK(p.size() == 16 + 20 + 32);
    CHECK(read_uint(p, 0, 16) == 20);
    const auto f = split_payload(p, 32);
    REQUIRE(f);
    CHECK(f->message == msg);
    CHECK(f->tag == tag);
    CHECK_FALSE(split_payload(p, 31));
    auto bad = p;
    bad[15] ^= 1;
    CHECK_FALSE(split_payload(bad, 32));
    CHECK_FALSE(split_payload(Bits(10, 0), 0));
    CHECK_FALSE(split_payload(Bits(48, 0), 32));
    CHECK_THROWS_AS(assemble_payload(Bits{}, tag), Error);
}

TEST_CASE("stream encode and decode") {
    for (std::uint64_t t = 0; t < 200; ++t) {
        const unsigned m = 1 + t % 4;
        const std::size_t degree = t % 3 == 0 ? 0 : 2 + t % 5;
        const auto msg = testing::random_bits(1 + t % 60, t);
        const auto tag = testing::random_bits(32, t + 5000);
        const auto shape = stream_shape(msg.size(), 32, m, degree);
        const auto payload = assemble_payload(msg, tag);
        const auto stream = encode_stream(payload, m, shape);
        CHECK(stream.size() == shape.padded);
        CHECK(decode_stream(stream, m, shape) == payload);
        const auto mask = carried_mask(shape);
        REQUIRE(mask.size() == shape.padded);
        CHECK(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)) == shape.symbols);
        // Padding decodes as zero symbols.
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (!mask[i]) CHECK(stream[i] == 0);
    }
}

TEST_CASE("carried mask follows the interleaver") {
    StreamShape s{.payload_bits = 14, .symbols = 7, .degree = 3, .padded = 9};
    // Plain flags 1111111 00 read out column-wise.
    CHECK(carried_mask(s) == std::vector<char>{1, 1, 1, 1, 1, 0, 1, 1, 0});
}
