#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sswm/ca_auth.hpp"
#include "sswm/codebook.hpp"
#include "sswm/image.hpp"
#include "sswm/payload.hpp"
#include "sswm/transform.hpp"

namespace sswm {

struct EmbedConfig {
    static constexpr double default_alpha = 1.9;

    double alpha = default_alpha; ///< modulation index, coefficient units, (0, 20]
    bool adaptive = true;          ///< scale alpha per block by texture, see choose_alpha
    double masking_exponent = 1.5; ///< [0, 4]
    WaveletFamily family = WaveletFamily::biorthogonal_cdf97;
    std::size_t levels = 1;       ///< watermark goes into the deepest level's LH/HL
    unsigned m = 2;               ///< bits per symbol, M = 2^m
    std::size_t degree = 0;       ///< interleaver degree l, 0 = smallest square
    std::size_t dense = 1;        ///< symbols superimposed per block
    std::size_t block_length = 0; ///< L, 0 = derived from M and dense

    std::size_t alphabet() const noexcept { return std::size_t{1} << m; }
    /// Throws ErrorKind::config on out-of-range fields. alpha == 0 is accepted
    /// (identity embedding) so quality sweeps can include it.
    void validate() const;
    std::size_t resolved_block_length() const;
};

enum class Polarity {
    negative, ///< MF(+,-) / MF(-,+): magnitude shrinks by alpha*w
    positive, ///< MF(+,+) / MF(-,-): magnitude grows by alpha*w
};

/// Where symbols live inside one detail band. Blocks are row-major runs of
/// L coefficients; each block carries `per_block` slots. Slot k carries
/// stream position_of(k). Padding positions get no slots. The C carried
/// positions are dealt out in stripes of C consecutive slots, each stripe in
/// a keyed pseudorandom order, so every carried position appears R or R+1
/// times, at most once per stripe.
struct Layout {
    std::size_t band_rows = 0;
    std::size_t band_cols = 0;
    std::size_t block_length = 0;
    std::size_t blocks = 0;
    std::size_t per_block = 1;
    unsigned m = 1;
    std::size_t positions = 0; ///< P, padded stream length
    std::size_t carried = 0;   ///< C, positions holding payload symbols
    std::size_t repeats = 0;   ///< R = floor(slots / C)
    std::uint64_t scatter_seed = 0;
    std::vector<std::size_t> assign; ///< position per slot, set by with_positions
    std::vector<char> mask;          ///< carried_mask of the stream

    std::size_t alphabet() const noexcept { return std::size_t{1} << m; }
    std::size_t slots() const noexcept { return blocks * per_block; }
    std::size_t used_slots() const noexcept { return carried == 0 ? 0 : slots(); }
    bool carries(std::size_t j) const noexcept { return j < mask.size() && mask[j]; }
    /// Stream position carried by slot k, if any.
    std::optional<std::size_t> position_of(std::size_t slot) const noexcept {
        if (slot >= used_slots()) return std::nullopt;
        return assign[slot];
    }
    /// Number of slots carrying position j.
    std::size_t copies(std::size_t j) const noexcept {
        return static_cast<std::size_t>(std::count(assign.begin(), assign.begin() + static_cast<std::ptrdiff_t>(used_slots()), j));
    }
};

/// Block geometry of a band; positions/repeats left at zero.
Layout channel_layout(std::size_t band_rows, std::size_t band_cols, const EmbedConfig& cfg, const SecretKey& key);
/// Stripe assignment of the listed positions to `slots` slots.
std::vector<std::size_t> scatter_positions(std::size_t slots, std::span<const std::size_t> positions, std::uint64_t seed);
/// Slots carrying each position, in increasing slot order.
std::vector<std::vector<std::size_t>> slots_by_position(const Layout& layout);
/// Throws ErrorKind::capacity when fewer than C slots exist.
Layout with_positions(Layout layout, const StreamShape& shape);

/// One bank per block, each of per_block x M patterns of length L.
std::vector<PatternBank> build_block_banks(const SecretKey& key, const Layout& layout);

using WatermarkSignal = Sequence;

/// Superposition of pattern (t, s_t) over each occupied slot t of a block.
/// Symbols >= M throw ErrorKind::corrupt_stream.
WatermarkSignal spread(std::span<const std::optional<std::uint16_t>> slot_symbols, const PatternBank& bank);

/// Per-block watermark for the whole stream.
std::vector<WatermarkSignal> spread(std::span<const std::uint16_t> stream, std::span<const PatternBank> banks,
                                    const Layout& layout);

/// out_k = I_k -/+ alpha * sign(I_k) * w_k, sign(0) = +1.
Sequence embed_block(std::span<const double> coeffs, std::span<const double> w, double alpha, Polarity polarity);

/// Sample covariance (1/(N-1)) * sum (a - mean a)(b - mean b).
double structure_comparison(std::span<const double> a, std::span<const double> b);

double sample_stddev(std::span<const double> x);

/// Block strength: cfg.alpha, or in adaptive mode
/// cfg.alpha * clamp((std(block) / band_std)^masking_exponent, 0.25, 4).
double choose_alpha(std::span<const double> block, double band_std, const EmbedConfig& cfg);

/// Copies the coefficients of one block out of a band.
Sequence block_view(const Matrix& band, const Layout& layout, std::size_t block);

/// Same stream twice: negative rule into HL, positive rule into LH of the
/// deepest level. LL and HH are left untouched.
SubbandSet embed_complementary(const SubbandSet& subbands, std::span<const std::uint16_t> stream,
                               std::span<const PatternBank> banks, const Layout& layout, const EmbedConfig& cfg);

struct EmbedResult {
    GrayImage watermarked;
    Matrix watermarked_real; ///< before 8-bit re-quantization
    SubbandSet cover_subbands;
    SubbandSet marked_subbands;
    Layout layout;
    StreamShape shape;
    SymbolStream stream; ///< interleaved symbols, one per position
    Bits payload;
};

/// tag -> payload -> M-ary -> interleave -> spread -> complementary embed -> inverse DWT -> 8-bit.
EmbedResult embed_image(const GrayImage& cover, std::span<const std::uint8_t> message, const SecretKey& key,
                        const EmbedConfig& cfg);

/// Largest message (bits) that fits the image under cfg.
std::size_t max_message_bits(std::size_t rows, std::size_t cols, const SecretKey& key, const EmbedConfig& cfg);

} // namespace sswm
