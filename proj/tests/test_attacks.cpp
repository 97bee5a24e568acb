#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sswm/attacks.hpp"
#include "sswm/error.hpp"
#include "sswm/metrics.hpp"

using namespace sswm;

namespace {

double mean_abs_error(const GrayImage& a, const GrayImage& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(double(a.pixels()[k]) - double(b.pixels()[k]));
    return s / double(a.size());
}

double mean_detail(const GrayImage& img) {
    const auto sb = dwt2_forward(img, WaveletFamily::biorthogonal_cdf97, 1);
    double s = 0.0;
    std::size_t n = 0;
    for (const Matrix* m : {&sb.details[0].lh, &sb.details[0].hl, &sb.details[0].hh})
        for (double v : m->values()) {
            s += std::abs(v);
            ++n;
        }
    return s / double(n);
}

double mean_hh(const GrayImage& img) {
    const auto sb = dwt2_forward(img, WaveletFamily::biorthogonal_cdf97, 1);
    double s = 0.0;
    for (double v : sb.details[0].hh.values()) s += std::abs(v);
    return s / double(sb.details[0].hh.size());
}

const char* const fixtures[] = {"camera", "astronaut", "coffee"};

} // namespace

TEST_CASE("parse attack") {
    const auto c = parse_attack("compress:50");
    CHECK(c.kind == AttackKind::compress);
    CHECK(c.param == 50.0);
    CHECK(parse_attack("sharpen").kind == AttackKind::sharpen);
    CHECK(parse_attack("hist_eq").kind == AttackKind::hist_eq);
    CHECK(parse_attack("none").kind == AttackKind::none);
    CHECK(parse_attack("awgn:2.5", 9).seed == 9);
    CHECK(to_string(parse_attack("median:5")) == "median:5");
    CHECK(to_string(parse_attack("salt_pepper:0.01")) == "salt_pepper:0.01");
    for (const char* bad : {"blur:4", "blur:1", "blur", "compress:101", "awgn:-1", "salt_pepper:2", "rotate:5",
                            "compress:abc", "compress:"}) {
        try {
            parse_attack(bad);
            FAIL(bad);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::config);
        }
    }
}

TEST_CASE("attacks are deterministic and in range") {
    const auto img = read_pgm(testing::fixture("camera"));
    for (const char* text : {"compress:30", "blur:5", "median:3", "sharpen", "hist_eq", "awgn:4", "salt_pepper:0.05"}) {
        const auto spec = parse_attack(text, 17);
        const auto a = apply_attack(img, spec);
        CHECK(a == apply_attack(img, spec));
        CHECK(a.rows() == img.rows());
        CHECK(a.cols() == img.cols());
    }
    CHECK(awgn(img, 4, 1) != awgn(img, 4, 2));
    CHECK(salt_pepper(img, 0.0, 3) == img);
    CHECK(awgn(img, 0.0, 3) == img);
    CHECK(apply_attack(img, parse_attack("none")) == img);
    // Extreme noise saturates rather than wrapping.
    const auto loud = awgn(GrayImage(32, 32, 250), 100.0, 5);
    std::size_t at_top = 0;
    for (auto p : loud.pixels()) at_top += p == 255;
    CHECK(at_top > 300);
}

TEST_CASE("filters on a constant image") {
    const GrayImage flat(40, 30, 77);
    CHECK(blur(flat, 3) == flat);
    CHECK(blur(flat, 7) == flat);
    CHECK(median(flat, 5) == flat);
    CHECK(sharpen(flat) == flat);
    CHECK(hist_eq(flat) == flat);
    CHECK_THROWS_AS(blur(flat, 4), Error);
    CHECK_THROWS_AS(median(flat, 1), Error);
}

TEST_CASE("median removes isolated impulses") {
    GrayImage img(16, 16, 100);
    img(5, 5) = 255;
    img(10, 3) = 0;
    CHECK(median(img, 3) == GrayImage(16, 16, 100));
}

TEST_CASE("hist_eq spreads the range") {
    GrayImage img(16, 16);
    for (std::size_t k = 0; k < img.size(); ++k) img.pixels()[k] = static_cast<std::uint8_t>(100 + k % 20);
    const auto eq = hist_eq(img);
    std::uint8_t lo = 255, hi = 0;
    for (auto p : eq.pixels()) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    CHECK(lo == 0);
    CHECK(hi == 255);
}

TEST_CASE("compression surrogate") {
    CHECK(surrogate_step(100, 64) == 1.0);
    CHECK(surrogate_step(0, 64) == 64.0);
    CHECK(surrogate_step(50, 64) == doctest::Approx(8.0));
    for (const char* name : fixtures) {
        const auto img = read_pgm(testing::fixture(name));
        const auto q100 = compress_surrogate(img, 100);
        for (std::size_t k = 0; k < img.size(); ++k)
            CHECK(std::abs(int(q100.pixels()[k]) - int(img.pixels()[k])) <= 1);
        CHECK(mean_abs_error(img, compress_surrogate(img, 0)) >= 3.0);
        double last = 1e9;
        for (double qf : {100, 75, 50, 25, 0}) {
            const double p = psnr(img, compress_surrogate(img, qf));
            CHECK(p < last);
            last = p;
        }
    }
    CHECK_THROWS_AS(compress_surrogate(GrayImage(64, 64), 120), Error);
}

TEST_CASE("attack categories") {
    for (const char* name : fixtures) {
        const auto img = read_pgm(testing::fixture(name));
        const double base = mean_detail(img);
        CHECK(mean_hh(blur(img, 3)) <= mean_hh(img));
        CHECK(mean_hh(sharpen(img)) >= mean_hh(img));
        CHECK(mean_detail(blur(img, 3)) < base);
        CHECK(mean_detail(compress_surrogate(img, 50)) < base);
        CHECK(mean_detail(sharpen(img)) >= base);
        CHECK(mean_detail(hist_eq(img)) >= base);
    }
}
