#include "sswm/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sswm/error.hpp"
#include "sswm/kernels.hpp"

namespace sswm {

std::string_view to_string(WaveletFamily f) noexcept {
    return f == WaveletFamily::orthogonal_d4 ? "d4" : "cdf97";
}

WaveletFamily parse_family(std::string_view name) {
    if (name == "d4" || name == "db2") return WaveletFamily::orthogonal_d4;
    if (name == "cdf97") return WaveletFamily::biorthogonal_cdf97;
    fail(ErrorKind::config, "unknown transform '" + std::string(name) + "' (expected d4 or cdf97)");
}

namespace {

FilterBank make_d4() {
    const double s3 = std::sqrt(3.0);
    const double norm = 4.0 * std::numbers::sqrt2;
    std::vector<double> h = {(1 + s3) / norm, (3 + s3) / norm, (3 - s3) / norm, (1 - s3) / norm};
    std::vector<double> g = {h[3], -h[2], h[1], -h[0]};
    return {WaveletFamily::orthogonal_d4, h, g, {h.rbegin(), h.rend()}, {g.rbegin(), g.rend()}};
}

FilterBank make_cdf97() {
    const std::vector<double> lo = {0.037828455506995, -0.023849465019380, -0.110624404418423,
                                    0.377402855612654, 0.852698679009403,  0.377402855612654,
                                    -0.110624404418423, -0.023849465019380, 0.037828455506995};
    const std::vector<double> hi = {0.064538882628938, -0.040689417609558, -0.418092273222212,
                                    0.788485616405664, -0.418092273222212, -0.040689417609558,
                                    0.064538882628938};
    // Synthesis pair: modulated cross-filters.
    std::vector<double> syn_lo(hi.size());
    std::vector<double> syn_hi(lo.size());
    for (std::size_t i = 0; i < hi.size(); ++i) syn_lo[i] = (i % 2 == 0 ? -1.0 : 1.0) * hi[i];
    for (std::size_t i = 0; i < lo.size(); ++i) syn_hi[i] = (i % 2 == 0 ? 1.0 : -1.0) * lo[i];
    return {WaveletFamily::biorthogonal_cdf97, lo, hi, syn_lo, syn_hi};
}

Matrix pad_to_even(const Matrix& x) {
    const std::size_t rows = x.rows() + (x.rows() % 2);
    const std::size_t cols = x.cols() + (x.cols() % 2);
    if (rows == x.rows() && cols == x.cols()) return x;
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out(r, c) = x(std::min(r, x.rows() - 1), std::min(c, x.cols() - 1));
    return out;
}

Matrix crop(const Matrix& x, std::size_t rows, std::size_t cols) {
    if (rows == x.rows() && cols == x.cols()) return x;
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out(r, c) = x(r, c);
    return out;
}

} // namespace

const FilterBank& filter_bank(WaveletFamily family) {
    static const FilterBank d4 = make_d4();
    static const FilterBank cdf97 = make_cdf97();
    return family == WaveletFamily::orthogonal_d4 ? d4 : cdf97;
}

Matrix& SubbandSet::band(std::size_t level, Band b) {
    require(level >= 1 && level <= details.size(), ErrorKind::index, "subband level out of range");
    auto& d = details[level - 1];
    return b == Band::lh ? d.lh : (b == Band::hl ? d.hl : d.hh);
}

const Matrix& SubbandSet::band(std::size_t level, Band b) const {
    return const_cast<SubbandSet*>(this)->band(level, b);
}

SubbandSet dwt2_forward(const Matrix& image, WaveletFamily family, std::size_t levels, Exec exec) {
    require(levels >= 1, ErrorKind::input, "decomposition needs at least one level");
    const std::size_t support = filter_bank(family).support();
    SubbandSet out;
    out.family = family;
    Matrix current = image;
    for (std::size_t level = 1; level <= levels; ++level) {
        require(current.rows() >= support && current.cols() >= support, ErrorKind::dimension,
                "level " + std::to_string(level) + " input " + std::to_string(current.rows()) + "x" +
                    std::to_string(current.cols()) + " is smaller than the " + std::to_string(support) +
                    "-tap filter support");
        DetailLevel detail;
        detail.input_rows = current.rows();
        detail.input_cols = current.cols();
        auto bands = kernels::forward_level(family, pad_to_even(current), exec);
        detail.lh = std::move(bands.lh);
        detail.hl = std::move(bands.hl);
        detail.hh = std::move(bands.hh);
        out.details.push_back(std::move(detail));
        current = std::move(bands.ll);
    }
    out.ll = std::move(current);
    return out;
}

SubbandSet dwt2_forward(const GrayImage& image, WaveletFamily family, std::size_t levels, Exec exec) {
    return dwt2_forward(to_matrix(image), family, levels, exec);
}

Matrix dwt2_inverse(const SubbandSet& subbands, WaveletFamily family, Exec exec) {
    require(family == subbands.family, ErrorKind::dimension,
            "subbands were produced by " + std::string(to_string(subbands.family)) + ", not " +
                std::string(to_string(family)));
    require(!subbands.details.empty(), ErrorKind::dimension, "subband set has no levels");
    Matrix current = subbands.ll;
    for (std::size_t level = subbands.levels(); level >= 1; --level) {
        const auto& d = subbands.details[level - 1];
        const std::size_t hr = (d.input_rows + 1) / 2;
        const std::size_t hc = (d.input_cols + 1) / 2;
        const auto shape_ok = [&](const Matrix& m) { return m.rows() == hr && m.cols() == hc; };
        require(shape_ok(current) && shape_ok(d.lh) && shape_ok(d.hl) && shape_ok(d.hh), ErrorKind::dimension,
                "inconsistent subband shapes at level " + std::to_string(level));
        kernels::LevelBands bands{current, d.lh, d.hl, d.hh};
        current = crop(kernels::inverse_level(family, bands, exec), d.input_rows, d.input_cols);
    }
    return current;
}

Matrix dwt2_inverse(const SubbandSet& subbands, Exec exec) { return dwt2_inverse(subbands, subbands.family, exec); }

} // namespace sswm
