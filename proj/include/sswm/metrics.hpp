#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sswm/image.hpp"
#include "sswm/transform.hpp"

namespace sswm {

inline constexpr double psnr_cap_db = 99.0;

/// 10 log10(255^2 / MSE), capped at 99 dB.
double psnr(const GrayImage& a, const GrayImage& b);

/// Mean SSIM over 11x11 Gaussian windows (sigma 1.5), valid positions only.
double ssim(const GrayImage& a, const GrayImage& b);

/// Relative entropy D(p || q) of 64-bin add-one histograms over the joint range.
double kl_security(std::span<const double> cover, std::span<const double> marked);

/// kl_security over the deepest level's LH and HL coefficients.
double kl_security(const SubbandSet& cover, const SubbandSet& marked);

double ber(std::span<const std::uint8_t> sent, std::span<const std::uint8_t> received);

struct QualityReport {
    double psnr = 0.0;
    double ssim = 0.0;
    double kl_security = 0.0;
};

/// Gaussian description of the decision statistics for one transmitted symbol:
/// the statistic of the sent pattern and of each competing pattern.
struct SymbolModel {
    double mean_correct = 0.0;
    double var_correct = 0.0;
    double mean_other = 0.0;
    double var_other = 0.0;
};

struct ErrorModelParams {
    std::vector<SymbolModel> symbols; ///< N entries
    std::size_t block_length = 0;     ///< L
};

/// Standard normal upper tail.
double q_function(double x);

/// (1/N) sum_i min(1, (M-1) Q((mu_c - mu_o) / sqrt(var_c + var_o))).
/// Non-positive variance throws ErrorKind::model.
double psym_gaussian(const ErrorModelParams& params, std::size_t alphabet);

/// Pools measured statistic rows (one row of M values per transmission) by
/// transmitted symbol value; one SymbolModel per value that occurs.
ErrorModelParams estimate_error_model(std::span<const std::vector<double>> rows,
                                      std::span<const std::uint16_t> sent, std::size_t block_length);

} // namespace sswm
