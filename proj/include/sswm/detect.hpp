#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sswm/embed.hpp"

namespace sswm {

enum class Decoder { mf, sic, pic };

std::string_view to_string(Decoder d) noexcept;
Decoder parse_decoder(std::string_view name);

/// (1/L) * sum s_k r_k
double zero_lag_corr(std::span<const double> s, std::span<const double> r);

/// Zero-lag correlation of the mean-removed pattern with the mean-removed block.
double decision_statistic(std::span<const double> block, std::span<const double> pattern);

/// positions x M matrix of combined decision statistics.
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    CorrelationMatrix(std::size_t positions, std::size_t alphabet)
        : positions_(positions), alphabet_(alphabet), values_(positions * alphabet, 0.0) {}

    std::size_t positions() const noexcept { return positions_; }
    std::size_t alphabet() const noexcept { return alphabet_; }
    double& operator()(std::size_t i, std::size_t s) noexcept { return values_[i * alphabet_ + s]; }
    double operator()(std::size_t i, std::size_t s) const noexcept { return values_[i * alphabet_ + s]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * alphabet_, alphabet_}; }

    /// argmax with ties resolved to the lowest symbol.
    std::uint16_t best(std::size_t i) const noexcept;
    /// Best minus runner-up statistic at position i.
    double margin(std::size_t i) const noexcept;

private:
    std::size_t positions_ = 0;
    std::size_t alphabet_ = 0;
    std::vector<double> values_;
};

/// Magnitudes above clip * median(|block|) + clip_floor are limited before
/// correlation, so strong edges do not swamp the statistic.
inline constexpr double default_clip = 1.0;
inline constexpr double clip_floor = 0.5;

/// Received detail-band blocks of the deepest level plus the banks that
/// generated them. Built once per image; decoders only read it.
struct Observation {
    Layout channel;                 ///< positions/repeats unset
    std::vector<Sequence> positive; ///< LH blocks, signed coefficients
    std::vector<Sequence> negative; ///< HL blocks
    std::vector<double> positive_limit;
    std::vector<double> negative_limit;
    std::vector<double> positive_weight; ///< per block combining weight
    std::vector<double> negative_weight;
    std::vector<PatternBank> banks;
};

/// clip <= 0 disables the limiter.
Observation observe(const SubbandSet& subbands, const SecretKey& key, const EmbedConfig& cfg,
                    double clip = default_clip);

/// Limiter level for one block of received coefficients.
double magnitude_limit(std::span<const double> block, double clip);

struct DecodeResult {
    SymbolStream symbols;
    CorrelationMatrix correlations;
    std::size_t iterations = 1;
    bool converged = true;
};

/// Per-position argmax of d_pos - d_neg, averaged over the position's slots.
DecodeResult matched_filter_decode(const Observation& obs, const Layout& layout);
/// Decides the strongest remaining position, cancels its estimated
/// contribution from its blocks, re-correlates, repeats.
DecodeResult sic_decode(const Observation& obs, const Layout& layout);
/// All positions re-decoded in parallel against the other positions'
/// previous estimates until two consecutive symbol vectors agree.
DecodeResult pic_decode(const Observation& obs, const Layout& layout, std::size_t max_iterations = 20);

DecodeResult decode(const Observation& obs, const Layout& layout, Decoder decoder);

struct FixedPointResult {
    SymbolStream symbols;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Iterates `step` from `initial` (iteration 1) until two consecutive
/// outputs are equal or max_iterations is reached.
FixedPointResult iterate_until_stable(const SymbolStream& initial,
                                      const std::function<SymbolStream(const SymbolStream&)>& step,
                                      std::size_t max_iterations);

struct DetectionReport {
    Decoder decoder = Decoder::mf;
    bool integrity_ok = false; ///< a self-consistent length header was found
    bool auth_ok = false;
    SymbolStream symbols;
    Bits message;
    Bits tag;
    std::optional<double> ber; ///< against the expected message, when supplied
    std::size_t positions = 0;
    std::size_t repeats = 0;
    std::size_t iterations = 0;
    bool converged = true;
    double margin = 0.0; ///< mean best-minus-runner-up statistic
    std::string note;
};

/// Blind extraction: only the key and the embedding parameters are needed.
DetectionReport extract_and_verify(const GrayImage& image, const SecretKey& key, const EmbedConfig& cfg,
                                   Decoder decoder = Decoder::mf,
                                   std::optional<std::span<const std::uint8_t>> expected = std::nullopt);

/// Flat key=value lines.
std::string to_text(const DetectionReport& report);

} // namespace sswm
