#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "sswm/codebook.hpp"
#include "sswm/error.hpp"

using namespace sswm;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double mean(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s / static_cast<double>(a.size());
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::input;
}

} // namespace

TEST_CASE("pn sequence") {
    const auto key = make_key(7);
    const auto a = pn_sequence(key, 0, 4096);
    CHECK(a == pn_sequence(key, 0, 4096));
    double s = 0.0;
    for (int v : a) {
        CHECK((v == 1 || v == -1));
        s += v;
    }
    CHECK(std::abs(s / 4096.0) < 0.05);
    const auto b = pn_sequence(key, 1, 4096);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
    CHECK(differ >= 4096 * 4 / 10);
    CHECK(pn_sequence(make_key(8), 0, 4096) != a);
    CHECK_THROWS_AS(pn_sequence(key, 0, 1), Error);
}

TEST_CASE("walsh modulation") {
    const auto pn = pn_sequence(make_key(3), 5, 64);
    CHECK(walsh_modulate(pn, 0, 64) == pn);
    const std::vector<int> ones(4, 1);
    CHECK(walsh_modulate(ones, 1, 4) == std::vector<int>{1, -1, 1, -1});
    CHECK(walsh_modulate(ones, 3, 4) == std::vector<int>{1, -1, -1, 1});
    for (std::size_t r1 = 0; r1 < 64; ++r1)
        for (std::size_t r2 = r1 + 1; r2 < 64; r2 += 7) {
            const auto u = walsh_modulate(pn, r1, 64);
            const auto v = walsh_modulate(pn, r2, 64);
            long c = 0;
            for (std::size_t k = 0; k < 64; ++k) c += u[k] * v[k];
            CHECK(c == 0);
        }
    CHECK(kind_of([&] { walsh_modulate(pn, 64, 64); }) == ErrorKind::index);
    CHECK(kind_of([&] { walsh_modulate(pn, 0, 32); }) == ErrorKind::dimension);
    CHECK(kind_of([&] { walsh_modulate(std::vector<int>(48, 1), 0, 48); }) == ErrorKind::config);
}

TEST_CASE("gram-schmidt of orthonormal rows returns the rows") {
    const std::size_t L = 32;
    std::vector<Sequence> in;
    for (std::size_t r = 1; r <= 8; ++r) {
        Sequence s(L);
        for (std::size_t k = 0; k < L; ++k) s[k] = hadamard_entry(r, k) / std::sqrt(double(L));
        in.push_back(s);
    }
    const auto out = gram_schmidt(in);
    REQUIRE(out.size() == in.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double sign = out[i][0] * in[i][0] > 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < L; ++k) CHECK(out[i][k] == doctest::Approx(sign * in[i][k] * std::sqrt(double(L))));
    }
}

TEST_CASE("gram-schmidt outputs") {
    const std::size_t L = 64;
    std::vector<Sequence> in;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto m = testing::random_matrix(1, L, 100 + i);
        in.emplace_back(m.values().begin(), m.values().end());
    }
    const auto out = gram_schmidt(in);
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(std::abs(mean(out[i])) < 1e-12);
        CHECK(std::sqrt(dot(out[i], out[i])) == doctest::Approx(std::sqrt(double(L))).epsilon(1e-9));
        for (std::size_t j = i + 1; j < out.size(); ++j) CHECK(std::abs(dot(out[i], out[j])) < 1e-10);
    }
    auto dup = in;
    dup.push_back(in[3]);
    CHECK(kind_of([&] { gram_schmidt(dup); }) == ErrorKind::degenerate);
    std::vector<Sequence> constant{Sequence(L, 1.0)};
    CHECK(kind_of([&] { gram_schmidt(constant); }) == ErrorKind::degenerate);
    std::vector<Sequence> many(L, Sequence(L, 0.0));
    CHECK(kind_of([&] { gram_schmidt(many); }) == ErrorKind::capacity);
}

TEST_CASE("pattern bank gram matrix, H=4 M=4 L=64") {
    const auto bank = build_pattern_bank(make_key(11), 4, 4, 64);
    std::vector<std::span<const double>> all;
    for (std::size_t h = 0; h < 4; ++h)
        for (std::size_t s = 0; s < 4; ++s) all.push_back(bank.pattern(h, s));
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].size() == 64);
        CHECK(std::abs(mean(all[i])) < 1e-12);
        for (std::size_t j = 0; j < all.size(); ++j) {
            const double g = dot(all[i], all[j]);
            if (i == j)
                CHECK(g == doctest::Approx(64.0).epsilon(1e-9));
            else
                CHECK(std::abs(g) < 1e-10);
        }
    }
}

TEST_CASE("pattern bank determinism and key separation") {
    const auto key = make_key(21);
    CHECK(build_pattern_bank(key, 3, 8, 32) == build_pattern_bank(key, 3, 8, 32));
    CHECK(build_pattern_bank(key, 3, 8, 32, 1) != build_pattern_bank(key, 3, 8, 32, 0));

    const std::size_t L = 64;
    double total = 0.0;
    std::size_t count = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto a = build_pattern_bank(make_key(1000 + 2 * k), 2, 4, L);
        const auto b = build_pattern_bank(make_key(1001 + 2 * k), 2, 4, L);
        for (std::size_t h = 0; h < 2; ++h)
            for (std::size_t s = 0; s < 4; ++s) {
                total += std::abs(dot(a.pattern(h, s), b.pattern(h, s))) / double(L);
                ++count;
            }
    }
    CHECK(total / double(count) < 3.0 / std::sqrt(double(L)));
}

TEST_CASE("pattern bank errors") {
    const auto key = make_key(1);
    CHECK(kind_of([&] { build_pattern_bank(key, 4, 4, 16); }) == ErrorKind::capacity);
    CHECK(kind_of([&] { build_pattern_bank(key, 2, 2, 24); }) == ErrorKind::config);
    CHECK(kind_of([&] { build_pattern_bank(key, 0, 2, 16); }) == ErrorKind::input);
    CHECK_NOTHROW(build_pattern_bank(key, 15, 1, 16));
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(64));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(96));
}
