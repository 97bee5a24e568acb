#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "sswm/embed.hpp"
#include "sswm/error.hpp"
#include "sswm/metrics.hpp"

using namespace sswm;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::input;
}

EmbedConfig fixed(double alpha) {
    EmbedConfig cfg;
    cfg.alpha = alpha;
    cfg.adaptive = false;
    return cfg;
}

} // namespace

TEST_CASE("embed_block examples") {
    const std::vector<double> I{2.0, -2.0}, w{1.0, 1.0};
    CHECK(embed_block(I, w, 0.5, Polarity::positive) == Sequence{2.5, -2.5});
    CHECK(embed_block(I, w, 0.5, Polarity::negative) == Sequence{1.5, -1.5});
    const auto x = testing::random_matrix(1, 64, 4, 30.0);
    const auto p = testing::random_matrix(1, 64, 5);
    const Sequence xs(x.values().begin(), x.values().end());
    CHECK(embed_block(xs, p.values(), 0.0, Polarity::positive) == xs);
    CHECK(embed_block(xs, p.values(), 0.0, Polarity::negative) == xs);
    // sign(0) = +1
    CHECK(embed_block(std::vector<double>{0.0}, std::vector<double>{1.0}, 2.0, Polarity::negative) == Sequence{-2.0});
    CHECK(kind_of([&] { embed_block(I, std::vector<double>{1.0}, 1.0, Polarity::positive); }) == ErrorKind::dimension);
}

TEST_CASE("structure comparison") {
    CHECK(structure_comparison(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) == doctest::Approx(2.0));
    const std::vector<double> a{4, -1, 7, 2, 0.5};
    double m = 0.0;
    for (double v : a) m += v;
    m /= 5.0;
    double var = 0.0;
    for (double v : a) var += (v - m) * (v - m);
    var /= 4.0;
    CHECK(structure_comparison(a, a) == doctest::Approx(var));
    CHECK(structure_comparison(a, std::vector<double>(5, 3.0)) == 0.0);
    CHECK(sample_stddev(a) == doctest::Approx(std::sqrt(var)));
    CHECK(kind_of([] { structure_comparison(std::vector<double>{1}, std::vector<double>{1}); }) == ErrorKind::input);
    CHECK(kind_of([] { structure_comparison(std::vector<double>{1, 2}, std::vector<double>{1}); }) ==
          ErrorKind::dimension);
}

TEST_CASE("choose_alpha") {
    const std::vector<double> block{1, -1, 1, -1, 1, -1, 1, -1};
    const double s = sample_stddev(block);
    auto cfg = fixed(1.5);
    CHECK(choose_alpha(block, 123.0, cfg) == 1.5);
    cfg.adaptive = true;
    CHECK(choose_alpha(block, s, cfg) == doctest::Approx(1.5));
    CHECK(choose_alpha(block, s / 10.0, cfg) == doctest::Approx(6.0));
    CHECK(choose_alpha(block, s * 10.0, cfg) == doctest::Approx(1.5 * 0.25));
    cfg.masking_exponent = 1.0;
    CHECK(choose_alpha(block, s / 2.0, cfg) == doctest::Approx(3.0));
    cfg.masking_exponent = 0.0;
    CHECK(choose_alpha(block, s / 10.0, cfg) == doctest::Approx(1.5));
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(fixed(0.0).validate());
    CHECK_NOTHROW(fixed(20.0).validate());
    CHECK(kind_of([] { fixed(-0.1).validate(); }) == ErrorKind::config);
    CHECK(kind_of([] { fixed(20.5).validate(); }) == ErrorKind::config);
    EmbedConfig cfg;
    cfg.m = 5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.block_length = 48;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.block_length = 16;
    cfg.m = 4;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    CHECK(cfg.resolved_block_length() == 64);
    cfg.m = 4;
    cfg.dense = 4;
    CHECK(cfg.resolved_block_length() == 128);
}

TEST_CASE("spread") {
    const auto bank = build_pattern_bank(make_key(2), 2, 4, 64);
    std::vector<std::optional<std::uint16_t>> one{std::uint16_t{0}, std::nullopt};
    const auto w0 = spread(one, bank);
    for (std::size_t k = 0; k < 64; ++k) CHECK(w0[k] == bank.pattern(0, 0)[k]);
    std::vector<std::optional<std::uint16_t>> two{std::uint16_t{3}, std::uint16_t{1}};
    const auto w = spread(two, bank);
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(w[k] == doctest::Approx(bank.pattern(0, 3)[k] + bank.pattern(1, 1)[k]).epsilon(1e-12));
    double self = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < 64; ++k) {
        self += w0[k] * bank.pattern(0, 0)[k];
        cross += w0[k] * bank.pattern(0, 1)[k];
    }
    CHECK(self == doctest::Approx(64.0));
    CHECK(std::abs(cross) < 1e-10);
    std::vector<std::optional<std::uint16_t>> bad{std::uint16_t{4}, std::nullopt};
    CHECK(kind_of([&] { spread(bad, bank); }) == ErrorKind::corrupt_stream);
    CHECK(kind_of([&] { spread(std::vector<std::optional<std::uint16_t>>(3), bank); }) == ErrorKind::dimension);
}

TEST_CASE("layout copies") {
    const auto key = make_key(4);
    for (unsigned m = 1; m <= 4; ++m) {
        auto cfg = fixed(1.0);
        cfg.m = m;
        const auto channel = channel_layout(128, 128, cfg, key);
        CHECK(channel.blocks == 128 * 128 / channel.block_length);
        for (std::size_t degree : {0, 2, 3}) {
            const auto shape = stream_shape(32, 32, m, degree);
            const auto layout = with_positions(channel, shape);
            CHECK(layout.carried == shape.symbols);
            CHECK(layout.repeats == layout.slots() / shape.symbols);
            std::size_t total = 0;
            for (std::size_t j = 0; j < layout.positions; ++j) {
                const auto c = layout.copies(j);
                total += c;
                if (layout.carries(j))
                    CHECK((c == layout.repeats || c == layout.repeats + 1));
                else
                    CHECK(c == 0);
            }
            CHECK(total == layout.slots());
            const auto by = slots_by_position(layout);
            for (std::size_t j = 0; j < layout.positions; ++j) CHECK(by[j].size() == layout.copies(j));
        }
    }
    // Keyed: another key scatters differently.
    auto cfg = fixed(1.0);
    const auto shape = stream_shape(32, 32, 2, 0);
    const auto a = with_positions(channel_layout(128, 128, cfg, make_key(1)), shape);
    const auto b = with_positions(channel_layout(128, 128, cfg, make_key(2)), shape);
    CHECK(a.assign != b.assign);
    CHECK(a.assign == with_positions(channel_layout(128, 128, cfg, make_key(1)), shape).assign);
}

TEST_CASE("scatter stripes hold each position once") {
    std::vector<std::size_t> pos{0, 2, 3, 5, 7};
    const auto s = scatter_positions(23, pos, 99);
    for (std::size_t start = 0; start < s.size(); start += pos.size()) {
        std::set<std::size_t> seen;
        for (std::size_t k = start; k < std::min(s.size(), start + pos.size()); ++k) {
            CHECK(std::find(pos.begin(), pos.end(), s[k]) != pos.end());
            CHECK(seen.insert(s[k]).second);
        }
    }
}

TEST_CASE("capacity") {
    const auto key = make_key(3);
    const auto cfg = fixed(1.0);
    CHECK(kind_of([&] {
              Layout l = channel_layout(8, 8, cfg, key);
              with_positions(l, stream_shape(32, 32, 2, 0));
          }) == ErrorKind::capacity);
    const GrayImage img = read_pgm(testing::fixture("camera"));
    const auto max_bits = max_message_bits(img.rows(), img.cols(), key, cfg);
    CHECK(max_bits > 128);
    CHECK_NOTHROW(embed_image(img, testing::random_bits(max_bits, 1), key, cfg));
    CHECK(kind_of([&] { embed_image(img, testing::random_bits(max_bits + 1, 1), key, cfg); }) == ErrorKind::capacity);
    CHECK(kind_of([&] { embed_image(img, Bits{}, key, cfg); }) == ErrorKind::input);
}

TEST_CASE("zero strength is the identity") {
    const auto img = read_pgm(testing::fixture("coffee"));
    const auto key = make_key(5);
    for (auto f : {WaveletFamily::orthogonal_d4, WaveletFamily::biorthogonal_cdf97}) {
        auto cfg = fixed(0.0);
        cfg.family = f;
        const auto r = embed_image(img, testing::random_bits(32, 2), key, cfg);
        CHECK(r.watermarked == img);
        CHECK(r.marked_subbands.details[0].lh == r.cover_subbands.details[0].lh);
        const auto banks = build_block_banks(key, r.layout);
        const auto same = embed_complementary(r.cover_subbands, r.stream, banks, r.layout, cfg);
        CHECK(same.band(1, Band::hl) == r.cover_subbands.band(1, Band::hl));
    }
}

TEST_CASE("only the deepest LH and HL change") {
    const auto img = read_pgm(testing::fixture("astronaut"));
    auto cfg = fixed(2.0);
    cfg.levels = 2;
    const auto r = embed_image(img, testing::random_bits(32, 3), make_key(6), cfg);
    CHECK(r.marked_subbands.ll == r.cover_subbands.ll);
    CHECK(r.marked_subbands.details[0].lh == r.cover_subbands.details[0].lh);
    CHECK(r.marked_subbands.details[0].hl == r.cover_subbands.details[0].hl);
    CHECK(r.marked_subbands.details[0].hh == r.cover_subbands.details[0].hh);
    CHECK(r.marked_subbands.details[1].hh == r.cover_subbands.details[1].hh);
    CHECK(r.marked_subbands.details[1].lh != r.cover_subbands.details[1].lh);
    CHECK(r.marked_subbands.details[1].hl != r.cover_subbands.details[1].hl);
}

TEST_CASE("complementary rule moves magnitudes in opposite directions") {
    const auto img = read_pgm(testing::fixture("camera"));
    const auto cfg = fixed(2.0);
    const auto key = make_key(8);
    const auto r = embed_image(img, testing::random_bits(32, 4), key, cfg);
    const auto banks = build_block_banks(key, r.layout);
    const auto w = spread(r.stream, banks, r.layout);
    const auto& lh0 = r.cover_subbands.band(1, Band::lh);
    const auto& lh1 = r.marked_subbands.band(1, Band::lh);
    const auto& hl0 = r.cover_subbands.band(1, Band::hl);
    const auto& hl1 = r.marked_subbands.band(1, Band::hl);
    for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t k = 0; k < r.layout.block_length; ++k) {
            const std::size_t i = b * r.layout.block_length + k;
            const double d_lh = std::abs(lh1.values()[i]) - std::abs(lh0.values()[i]);
            const double d_hl = std::abs(hl1.values()[i]) - std::abs(hl0.values()[i]);
            // Holds while the mark does not flip the coefficient's sign.
            if (std::abs(lh0.values()[i]) > 2.0 * std::abs(w[b][k]))
                CHECK(d_lh == doctest::Approx(2.0 * w[b][k]).epsilon(1e-9));
            if (std::abs(hl0.values()[i]) > 2.0 * std::abs(w[b][k]))
                CHECK(d_hl == doctest::Approx(-2.0 * w[b][k]).epsilon(1e-9));
        }
}

TEST_CASE("psnr falls as alpha grows") {
    for (const char* name : {"camera", "astronaut", "coffee"}) {
        const auto img = read_pgm(testing::fixture(name));
        const auto msg = testing::random_bits(64, 7);
        double last = 1e9;
        for (double a : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            auto cfg = EmbedConfig{};
            cfg.alpha = a;
            const double p = psnr(img, embed_image(img, msg, make_key(9), cfg).watermarked);
            CHECK(p <= last);
            last = p;
        }
    }
}

TEST_CASE("embed is deterministic") {
    const auto img = read_pgm(testing::fixture("camera"));
    const auto msg = testing::random_bits(40, 8);
    const EmbedConfig cfg;
    CHECK(embed_image(img, msg, make_key(10), cfg).watermarked == embed_image(img, msg, make_key(10), cfg).watermarked);
    CHECK(embed_image(img, msg, make_key(10), cfg).watermarked != embed_image(img, msg, make_key(11), cfg).watermarked);
}
