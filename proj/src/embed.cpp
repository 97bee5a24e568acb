#include "sswm/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sswm/error.hpp"
#include "sswm/rng.hpp"

namespace sswm {

void EmbedConfig::validate() const {
    require(alpha >= 0.0 && alpha <= 20.0, ErrorKind::config, "alpha must lie in [0, 20]");
    require(m >= 1 && m <= 4, ErrorKind::config, "m must be 1..4 (M in {2,4,8,16})");
    require(levels >= 1 && levels <= 6, ErrorKind::config, "levels must be 1..6");
    require(masking_exponent >= 0.0 && masking_exponent <= 4.0, ErrorKind::config, "masking exponent must lie in [0, 4]");
    require(dense >= 1 && dense <= 8, ErrorKind::config, "dense symbol count must be 1..8");
    require(block_length == 0 || is_power_of_two(block_length), ErrorKind::config,
            "block length must be a power of two");
    require(block_length == 0 || dense * alphabet() < block_length, ErrorKind::config,
            "block length too short for dense*M orthogonal patterns");
}

std::size_t EmbedConfig::resolved_block_length() const {
    if (block_length != 0) return block_length;
    std::size_t l = 64;
    while (l <= dense * alphabet()) l *= 2;
    return l;
}

Layout channel_layout(std::size_t band_rows, std::size_t band_cols, const EmbedConfig& cfg, const SecretKey& key) {
    cfg.validate();
    Layout layout;
    layout.band_rows = band_rows;
    layout.band_cols = band_cols;
    layout.block_length = cfg.resolved_block_length();
    layout.blocks = band_rows * band_cols / layout.block_length;
    layout.per_block = cfg.dense;
    layout.m = cfg.m;
    layout.scatter_seed = mix64(key.pattern_seed() ^ 0x5CA77E5ULL);
    return layout;
}

std::vector<std::size_t> scatter_positions(std::size_t slots, std::span<const std::size_t> positions,
                                           std::uint64_t seed) {
    std::vector<std::size_t> out(slots);
    const std::size_t c = positions.size();
    if (c == 0) return out;
    SplitMix64 rng(seed ^ mix64(c));
    std::vector<std::size_t> order(positions.begin(), positions.end());
    for (std::size_t start = 0; start < slots; start += c) {
        for (std::size_t i = c; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        // A short last stripe takes a random subset.
        const std::size_t n = std::min(c, slots - start);
        std::copy_n(order.begin(), n, out.begin() + static_cast<std::ptrdiff_t>(start));
    }
    return out;
}

std::vector<std::vector<std::size_t>> slots_by_position(const Layout& layout) {
    std::vector<std::vector<std::size_t>> out(layout.positions);
    for (std::size_t k = 0; k < layout.used_slots(); ++k) out[*layout.position_of(k)].push_back(k);
    return out;
}

Layout with_positions(Layout layout, const StreamShape& shape) {
    require(shape.padded >= 1 && shape.symbols >= 1, ErrorKind::input, "stream must have at least one position");
    layout.mask = carried_mask(shape);
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < layout.mask.size(); ++j)
        if (layout.mask[j]) live.push_back(j);
    require(live.size() <= layout.slots(), ErrorKind::capacity,
            std::to_string(live.size()) + " symbols exceed the " + std::to_string(layout.slots()) + " available slots");
    layout.positions = shape.padded;
    layout.carried = live.size();
    layout.repeats = layout.slots() / live.size();
    layout.assign = scatter_positions(layout.slots(), live, layout.scatter_seed);
    return layout;
}

std::vector<PatternBank> build_block_banks(const SecretKey& key, const Layout& layout) {
    std::vector<PatternBank> banks;
    banks.reserve(layout.blocks);
    for (std::size_t b = 0; b < layout.blocks; ++b)
        banks.push_back(build_pattern_bank(key, layout.per_block, layout.alphabet(), layout.block_length, b + 1));
    return banks;
}

WatermarkSignal spread(std::span<const std::optional<std::uint16_t>> slot_symbols, const PatternBank& bank) {
    require(slot_symbols.size() == bank.positions(), ErrorKind::dimension, "slot count does not match bank");
    WatermarkSignal w(bank.length(), 0.0);
    for (std::size_t t = 0; t < slot_symbols.size(); ++t) {
        if (!slot_symbols[t]) continue;
        const auto s = *slot_symbols[t];
        require(s < bank.alphabet(), ErrorKind::corrupt_stream,
                "symbol " + std::to_string(s) + " >= M = " + std::to_string(bank.alphabet()));
        const auto p = bank.pattern(t, s);
        for (std::size_t k = 0; k < w.size(); ++k) w[k] += p[k];
    }
    return w;
}

std::vector<WatermarkSignal> spread(std::span<const std::uint16_t> stream, std::span<const PatternBank> banks,
                                    const Layout& layout) {
    require(stream.size() == layout.positions, ErrorKind::dimension, "stream length does not match layout");
    require(banks.size() == layout.blocks, ErrorKind::dimension, "bank count does not match layout");
    std::vector<WatermarkSignal> out;
    out.reserve(layout.blocks);
    std::vector<std::optional<std::uint16_t>> slots(layout.per_block);
    for (std::size_t b = 0; b < layout.blocks; ++b) {
        for (std::size_t t = 0; t < layout.per_block; ++t) {
            const auto pos = layout.position_of(b * layout.per_block + t);
            slots[t] = pos ? std::optional<std::uint16_t>(stream[*pos]) : std::nullopt;
        }
        out.push_back(spread(slots, banks[b]));
    }
    return out;
}

Sequence embed_block(std::span<const double> coeffs, std::span<const double> w, double alpha, Polarity polarity) {
    require(coeffs.size() == w.size(), ErrorKind::dimension, "coefficient block and watermark lengths differ");
    const double dir = polarity == Polarity::positive ? 1.0 : -1.0;
    Sequence out(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double sgn = coeffs[k] < 0.0 ? -1.0 : 1.0;
        out[k] = coeffs[k] + dir * alpha * sgn * w[k];
    }
    return out;
}

double structure_comparison(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::dimension, "structure comparison needs equal lengths");
    require(a.size() >= 2, ErrorKind::input, "structure comparison needs at least two samples");
    const auto n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / (n - 1.0);
}

double sample_stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    return std::sqrt(structure_comparison(x, x));
}

double choose_alpha(std::span<const double> block, double band_std, const EmbedConfig& cfg) {
    if (!cfg.adaptive) return cfg.alpha;
    if (band_std <= 0.0) return cfg.alpha;
    const double ratio = std::clamp(std::pow(sample_stddev(block) / band_std, cfg.masking_exponent), 0.25, 4.0);
    return cfg.alpha * ratio;
}

Sequence block_view(const Matrix& band, const Layout& layout, std::size_t block) {
    const auto values = band.values();
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(block * layout.block_length);
    return Sequence(first, first + static_cast<std::ptrdiff_t>(layout.block_length));
}

namespace {

void embed_band(Matrix& band, std::span<const WatermarkSignal> watermark, const Layout& layout,
                const EmbedConfig& cfg, Polarity polarity) {
    const double band_std = sample_stddev(band.values());
    auto values = band.values();
    for (std::size_t b = 0; b < layout.blocks; ++b) {
        const auto block = block_view(band, layout, b);
        const double alpha = choose_alpha(block, band_std, cfg);
        const auto marked = embed_block(block, watermark[b], alpha, polarity);
        std::copy(marked.begin(), marked.end(), values.begin() + static_cast<std::ptrdiff_t>(b * layout.block_length));
    }
}

std::pair<std::size_t, std::size_t> deepest_band_shape(std::size_t rows, std::size_t cols, std::size_t levels) {
    for (std::size_t i = 0; i < levels; ++i) {
        rows = (rows + 1) / 2;
        cols = (cols + 1) / 2;
    }
    return {rows, cols};
}

} // namespace

SubbandSet embed_complementary(const SubbandSet& subbands, std::span<const std::uint16_t> stream,
                               std::span<const PatternBank> banks, const Layout& layout, const EmbedConfig& cfg) {
    const std::size_t level = subbands.levels();
    const auto& lh = subbands.band(level, Band::lh);
    require(lh.rows() == layout.band_rows && lh.cols() == layout.band_cols, ErrorKind::dimension,
            "layout does not match subband shape");
    require(layout.blocks * layout.block_length <= lh.size(), ErrorKind::capacity,
            "H*L exceeds subband size");
    const auto watermark = spread(stream, banks, layout);
    SubbandSet out = subbands;
    embed_band(out.band(level, Band::hl), watermark, layout, cfg, Polarity::negative);
    embed_band(out.band(level, Band::lh), watermark, layout, cfg, Polarity::positive);
    return out;
}

EmbedResult embed_image(const GrayImage& cover, std::span<const std::uint8_t> message, const SecretKey& key,
                        const EmbedConfig& cfg) {
    cfg.validate();
    key.validate();
    require(!message.empty(), ErrorKind::input, "message must not be empty");

    EmbedResult r;
    r.cover_subbands = dwt2_forward(cover, cfg.family, cfg.levels);
    const auto& lh = r.cover_subbands.band(cfg.levels, Band::lh);
    const Layout channel = channel_layout(lh.rows(), lh.cols(), cfg, key);

    r.shape = stream_shape(message.size(), key.tag_len, cfg.m, cfg.degree);
    if (r.shape.symbols > channel.slots()) {
        fail(ErrorKind::capacity, "message of " + std::to_string(message.size()) + " bits does not fit; max is " +
                                      std::to_string(max_message_bits(cover.rows(), cover.cols(), key, cfg)) +
                                      " bits");
    }
    r.layout = with_positions(channel, r.shape);

    const auto tag = generate_tag(message, key, key.tag_len);
    r.payload = assemble_payload(message, tag);
    r.stream = encode_stream(r.payload, cfg.m, r.shape);

    const auto banks = build_block_banks(key, r.layout);
    r.marked_subbands = embed_complementary(r.cover_subbands, r.stream, banks, r.layout, cfg);
    r.watermarked_real = dwt2_inverse(r.marked_subbands);
    r.watermarked = to_gray(r.watermarked_real);
    return r;
}

std::size_t max_message_bits(std::size_t rows, std::size_t cols, const SecretKey& key, const EmbedConfig& cfg) {
    const auto [br, bc] = deepest_band_shape(rows, cols, cfg.levels);
    const Layout channel = channel_layout(br, bc, cfg, key);
    std::size_t best = 0;
    const std::size_t upper = std::min<std::size_t>(channel.slots() * cfg.m, (1U << length_field_bits) - 1);
    for (std::size_t n = 1; n <= upper; ++n) {
        if (stream_shape(n, key.tag_len, cfg.m, cfg.degree).symbols <= channel.slots()) best = n;
    }
    return best;
}

} // namespace sswm
