#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "sswm/error.hpp"
#include "sswm/kernels.hpp"

namespace sswm::kernels {

namespace {

// Daubechies 4-tap orthogonal lowpass.
const std::array<double, 4> d4_low = [] {
    const double s3 = std::sqrt(3.0);
    const double norm = 4.0 * std::numbers::sqrt2;
    return std::array<double, 4>{(1 + s3) / norm, (3 + s3) / norm, (3 - s3) / norm, (1 - s3) / norm};
}();
const std::array<double, 4> d4_high = {d4_low[3], -d4_low[2], d4_low[1], -d4_low[0]};

// CDF 9/7 lifting constants.
constexpr double lift_a = -1.586134342059924;
constexpr double lift_b = -0.052980118572961;
constexpr double lift_c = 0.882911075530934;
constexpr double lift_d = 0.443506852043971;
constexpr double lift_k = 1.230174104914001;
constexpr double low_gain = std::numbers::sqrt2 / lift_k;
constexpr double high_gain = lift_k / std::numbers::sqrt2;

// Whole-sample symmetric extension: x[-i] = x[i], x[n-1+i] = x[n-1-i].
inline std::size_t mirror(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return static_cast<std::size_t>(i);
}

void lift(std::vector<double>& x, std::size_t parity, double w) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(parity); i < n; i += 2)
        x[static_cast<std::size_t>(i)] += w * (x[mirror(i - 1, n)] + x[mirror(i + 1, n)]);
}

thread_local std::vector<double> scratch;

} // namespace

void analyze_line(WaveletFamily family, std::span<const double> in, std::span<double> low,
                  std::span<double> high) {
    const std::size_t n = in.size();
    const std::size_t half = n / 2;
    if (family == WaveletFamily::orthogonal_d4) {
        for (std::size_t k = 0; k < half; ++k) {
            double lo = 0.0;
            double hi = 0.0;
            for (std::size_t j = 0; j < 4; ++j) {
                const double v = in[(2 * k + j) % n];
                lo += d4_low[j] * v;
                hi += d4_high[j] * v;
            }
            low[k] = lo;
            high[k] = hi;
        }
        return;
    }
    scratch.assign(in.begin(), in.end());
    lift(scratch, 1, lift_a);
    lift(scratch, 0, lift_b);
    lift(scratch, 1, lift_c);
    lift(scratch, 0, lift_d);
    for (std::size_t k = 0; k < half; ++k) {
        low[k] = scratch[2 * k] * low_gain;
        high[k] = scratch[2 * k + 1] * high_gain;
    }
}

void synthesize_line(WaveletFamily family, std::span<const double> low, std::span<const double> high,
                     std::span<double> out) {
    const std::size_t n = out.size();
    const std::size_t half = n / 2;
    if (family == WaveletFamily::orthogonal_d4) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
        for (std::size_t k = 0; k < half; ++k)
            for (std::size_t j = 0; j < 4; ++j) out[(2 * k + j) % n] += d4_low[j] * low[k] + d4_high[j] * high[k];
        return;
    }
    scratch.resize(n);
    for (std::size_t k = 0; k < half; ++k) {
        scratch[2 * k] = low[k] / low_gain;
        scratch[2 * k + 1] = high[k] / high_gain;
    }
    lift(scratch, 0, -lift_d);
    lift(scratch, 1, -lift_c);
    lift(scratch, 0, -lift_b);
    lift(scratch, 1, -lift_a);
    for (std::size_t i = 0; i < n; ++i) out[i] = scratch[i];
}

} // namespace sswm::kernels
