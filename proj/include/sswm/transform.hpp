#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sswm/image.hpp"

namespace sswm {

enum class WaveletFamily { orthogonal_d4, biorthogonal_cdf97 };

std::string_view to_string(WaveletFamily f) noexcept;
/// Accepts "d4" / "cdf97". Throws ErrorKind::config otherwise.
WaveletFamily parse_family(std::string_view name);

/// Analysis/synthesis taps, each centered at index size()/2 for the
/// symmetric CDF 9/7 bank and starting at index 0 for D4.
struct FilterBank {
    WaveletFamily family;
    std::vector<double> analysis_lowpass;
    std::vector<double> analysis_highpass;
    std::vector<double> synthesis_lowpass;
    std::vector<double> synthesis_highpass;

    /// Smallest extent a line may have at any decomposition level.
    std::size_t support() const noexcept { return analysis_lowpass.size(); }
};

const FilterBank& filter_bank(WaveletFamily family);

enum class Band { lh, hl, hh };

/// Detail bands of one level plus the extents of that level's input.
struct DetailLevel {
    Matrix lh; ///< lowpass along rows, highpass along columns (horizontal edges)
    Matrix hl; ///< highpass along rows, lowpass along columns (vertical edges)
    Matrix hh;
    std::size_t input_rows = 0;
    std::size_t input_cols = 0;
};

struct SubbandSet {
    WaveletFamily family = WaveletFamily::orthogonal_d4;
    Matrix ll;                        ///< approximation at the deepest level
    std::vector<DetailLevel> details; ///< details[0] is the finest level

    std::size_t levels() const noexcept { return details.size(); }
    /// level is 1-based; level == levels() is the deepest.
    Matrix& band(std::size_t level, Band b);
    const Matrix& band(std::size_t level, Band b) const;
};

enum class Exec { serial, parallel };

/// Separable 2-D DWT, recursing on LL. Odd extents are padded to even per
/// level by repeating the last row/column; the original extents are kept.
SubbandSet dwt2_forward(const Matrix& image, WaveletFamily family, std::size_t levels,
                        Exec exec = Exec::parallel);
SubbandSet dwt2_forward(const GrayImage& image, WaveletFamily family, std::size_t levels,
                        Exec exec = Exec::parallel);

/// Throws ErrorKind::dimension when `family` differs from the one the set was built with
/// or the band shapes are inconsistent.
Matrix dwt2_inverse(const SubbandSet& subbands, WaveletFamily family, Exec exec = Exec::parallel);
Matrix dwt2_inverse(const SubbandSet& subbands, Exec exec = Exec::parallel);

} // namespace sswm
