// OpenMP kernels. Rows (and then columns) are independent; each line is
// computed with the same sequence of operations as the serial reference.

#include <algorithm>
#include <vector>

#include <omp.h>

#include "sswm/kernels.hpp"

namespace sswm::kernels {

int thread_count() { return omp_get_max_threads(); }

namespace omp {

LevelBands forward_level(WaveletFamily family, const Matrix& x) {
    const auto rows = static_cast<std::ptrdiff_t>(x.rows());
    const std::size_t hr = x.rows() / 2;
    const auto hc = static_cast<std::ptrdiff_t>(x.cols() / 2);

    Matrix row_low(x.rows(), x.cols() / 2);
    Matrix row_high(x.rows(), x.cols() / 2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        analyze_line(family, x.row(ur), row_low.row(ur), row_high.row(ur));
    }

    LevelBands out{Matrix(hr, x.cols() / 2), Matrix(hr, x.cols() / 2), Matrix(hr, x.cols() / 2),
                   Matrix(hr, x.cols() / 2)};
#pragma omp parallel
    {
        std::vector<double> column(x.rows()), lo(hr), hi(hr);
#pragma omp for schedule(static)
        for (std::ptrdiff_t sc = 0; sc < hc; ++sc) {
            const auto c = static_cast<std::size_t>(sc);
            for (std::size_t r = 0; r < x.rows(); ++r) column[r] = row_low(r, c);
            analyze_line(family, column, lo, hi);
            for (std::size_t r = 0; r < hr; ++r) {
                out.ll(r, c) = lo[r];
                out.lh(r, c) = hi[r];
            }
            for (std::size_t r = 0; r < x.rows(); ++r) column[r] = row_high(r, c);
            analyze_line(family, column, lo, hi);
            for (std::size_t r = 0; r < hr; ++r) {
                out.hl(r, c) = lo[r];
                out.hh(r, c) = hi[r];
            }
        }
    }
    return out;
}

Matrix inverse_level(WaveletFamily family, const LevelBands& b) {
    const std::size_t hr = b.ll.rows();
    const std::size_t hc = b.ll.cols();
    const std::size_t rows = 2 * hr;
    const std::size_t cols = 2 * hc;

    Matrix row_low(rows, hc);
    Matrix row_high(rows, hc);
#pragma omp parallel
    {
        std::vector<double> column(rows), lo(hr), hi(hr);
#pragma omp for schedule(static)
        for (std::ptrdiff_t sc = 0; sc < static_cast<std::ptrdiff_t>(hc); ++sc) {
            const auto c = static_cast<std::size_t>(sc);
            for (std::size_t r = 0; r < hr; ++r) {
                lo[r] = b.ll(r, c);
                hi[r] = b.lh(r, c);
            }
            synthesize_line(family, lo, hi, column);
            for (std::size_t r = 0; r < rows; ++r) row_low(r, c) = column[r];
            for (std::size_t r = 0; r < hr; ++r) {
                lo[r] = b.hl(r, c);
                hi[r] = b.hh(r, c);
            }
            synthesize_line(family, lo, hi, column);
            for (std::size_t r = 0; r < rows; ++r) row_high(r, c) = column[r];
        }
    }

    Matrix out(rows, cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t sr = 0; sr < static_cast<std::ptrdiff_t>(rows); ++sr) {
        const auto r = static_cast<std::size_t>(sr);
        synthesize_line(family, row_low.row(r), row_high.row(r), out.row(r));
    }
    return out;
}

namespace {

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

} // namespace

GrayImage box_blur(const GrayImage& img, std::size_t kernel) {
    const auto half = static_cast<std::ptrdiff_t>(kernel / 2);
    const std::uint32_t area = static_cast<std::uint32_t>(kernel * kernel);
    GrayImage out(img.rows(), img.cols());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(img.rows()); ++r) {
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(img.cols()); ++c) {
            std::uint32_t sum = 0;
            for (std::ptrdiff_t dr = -half; dr <= half; ++dr)
                for (std::ptrdiff_t dc = -half; dc <= half; ++dc)
                    sum += img(clamp_index(r + dr, img.rows()), clamp_index(c + dc, img.cols()));
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
                static_cast<std::uint8_t>((sum + area / 2) / area);
        }
    }
    return out;
}

GrayImage median(const GrayImage& img, std::size_t kernel) {
    const auto half = static_cast<std::ptrdiff_t>(kernel / 2);
    GrayImage out(img.rows(), img.cols());
#pragma omp parallel
    {
        std::vector<std::uint8_t> window(kernel * kernel);
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(img.rows()); ++r) {
            for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(img.cols()); ++c) {
                std::size_t k = 0;
                for (std::ptrdiff_t dr = -half; dr <= half; ++dr)
                    for (std::ptrdiff_t dc = -half; dc <= half; ++dc)
                        window[k++] = img(clamp_index(r + dr, img.rows()), clamp_index(c + dc, img.cols()));
                auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
                std::nth_element(window.begin(), mid, window.end());
                out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = *mid;
            }
        }
    }
    return out;
}

} // namespace omp
} // namespace sswm::kernels
