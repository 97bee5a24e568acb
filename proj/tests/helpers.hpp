#pragma once

#include <cstdint>
#include <string>

#include "sswm/bits.hpp"
#include "sswm/image.hpp"
#include "sswm/rng.hpp"

namespace testing {

inline std::string fixture(const std::string& name) { return std::string(SSWM_FIXTURES) + "/" + name + ".pgm"; }

inline sswm::GrayImage random_image(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    sswm::GrayImage img(rows, cols);
    sswm::SplitMix64 rng(seed);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng.next() >> 56);
    return img;
}

inline sswm::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale = 1.0) {
    sswm::Matrix m(rows, cols);
    sswm::SplitMix64 rng(seed);
    for (auto& v : m.values()) v = scale * (2.0 * rng.uniform() - 1.0);
    return m;
}

inline sswm::Bits random_bits(std::size_t n, std::uint64_t seed) {
    sswm::Bits b(n);
    sswm::SplitMix64 rng(seed);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next() >> 63);
    return b;
}

} // namespace testing
