#pragma once

// Row/column kernels shared by the transform and the attack filters.
// Each kernel exists as a serial reference and an OpenMP version; both
// evaluate every output with the same arithmetic so results are bit-identical.

#include <cstddef>
#include <span>

#include "sswm/image.hpp"
#include "sswm/transform.hpp"

namespace sswm::kernels {

// One-dimensional lines. `low`/`high` have n/2 entries; n must be even.
void analyze_line(WaveletFamily family, std::span<const double> in, std::span<double> low,
                  std::span<double> high);
void synthesize_line(WaveletFamily family, std::span<const double> low, std::span<const double> high,
                     std::span<double> out);

struct LevelBands {
    Matrix ll, lh, hl, hh;
};

namespace serial {
LevelBands forward_level(WaveletFamily family, const Matrix& even_input);
Matrix inverse_level(WaveletFamily family, const LevelBands& bands);
GrayImage box_blur(const GrayImage& img, std::size_t kernel);
GrayImage median(const GrayImage& img, std::size_t kernel);
} // namespace serial

namespace omp {
LevelBands forward_level(WaveletFamily family, const Matrix& even_input);
Matrix inverse_level(WaveletFamily family, const LevelBands& bands);
GrayImage box_blur(const GrayImage& img, std::size_t kernel);
GrayImage median(const GrayImage& img, std::size_t kernel);
} // namespace omp

inline LevelBands forward_level(WaveletFamily f, const Matrix& x, Exec exec) {
    return exec == Exec::serial ? serial::forward_level(f, x) : omp::forward_level(f, x);
}
inline Matrix inverse_level(WaveletFamily f, const LevelBands& b, Exec exec) {
    return exec == Exec::serial ? serial::inverse_level(f, b) : omp::inverse_level(f, b);
}

/// Number of worker threads the OpenMP kernels will use.
int thread_count();

} // namespace sswm::kernels
