#include "sswm/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "sswm/bits.hpp"
#include "sswm/error.hpp"

namespace sswm {

namespace {

void same_shape(const GrayImage& a, const GrayImage& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::dimension,
            "image dimensions differ: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

} // namespace

double psnr(const GrayImage& a, const GrayImage& b) {
    same_shape(a, b);
    require(a.size() > 0, ErrorKind::dimension, "empty image");
    double sse = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = double(a.pixels()[k]) - double(b.pixels()[k]);
        sse += d * d;
    }
    if (sse == 0.0) return psnr_cap_db;
    const double mse = sse / double(a.size());
    return std::min(psnr_cap_db, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const GrayImage& a, const GrayImage& b) {
    same_shape(a, b);
    constexpr std::size_t win = 11;
    constexpr double sigma = 1.5;
    require(a.rows() >= win && a.cols() >= win, ErrorKind::dimension, "SSIM needs at least 11x11 pixels");
    if (a == b) return 1.0;

    std::array<double, win> g{};
    double gsum = 0.0;
    for (std::size_t k = 0; k < win; ++k) {
        const double x = double(k) - double(win / 2);
        g[k] = std::exp(-x * x / (2 * sigma * sigma));
        gsum += g[k];
    }
    for (auto& v : g) v /= gsum;

    constexpr double c1 = (0.01 * 255) * (0.01 * 255);
    constexpr double c2 = (0.03 * 255) * (0.03 * 255);
    const std::size_t out_r = a.rows() - win + 1;
    const std::size_t out_c = a.cols() - win + 1;
    double total = 0.0;
    for (std::size_t r = 0; r < out_r; ++r) {
        for (std::size_t c = 0; c < out_c; ++c) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (std::size_t i = 0; i < win; ++i) {
                for (std::size_t j = 0; j < win; ++j) {
                    const double w = g[i] * g[j];
                    const double x = a(r + i, c + j);
                    const double y = b(r + i, c + j);
                    ma += w * x;
                    mb += w * y;
                    saa += w * x * x;
                    sbb += w * y * y;
                    sab += w * x * y;
                }
            }
            const double va = saa - ma * ma;
            const double vb = sbb - mb * mb;
            const double cov = sab - ma * mb;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    }
    return total / double(out_r * out_c);
}

double kl_security(std::span<const double> cover, std::span<const double> marked) {
    require(!cover.empty() && !marked.empty(), ErrorKind::input, "KL distance of an empty sample");
    constexpr std::size_t bins = 64;
    const auto [cmin, cmax] = std::minmax_element(cover.begin(), cover.end());
    const auto [mmin, mmax] = std::minmax_element(marked.begin(), marked.end());
    const double lo = std::min(*cmin, *mmin);
    const double hi = std::max(*cmax, *mmax);
    if (!(hi > lo)) return 0.0;

    const auto histogram = [&](std::span<const double> x) {
        std::vector<double> h(bins, 1.0);
        for (double v : x) {
            auto k = static_cast<std::size_t>((v - lo) / (hi - lo) * bins);
            ++h[std::min(k, bins - 1)];
        }
        const double n = double(x.size() + bins);
        for (auto& v : h) v /= n;
        return h;
    };
    const auto p = histogram(cover);
    const auto q = histogram(marked);
    double d = 0.0;
    for (std::size_t k = 0; k < bins; ++k) d += p[k] * std::log(p[k] / q[k]);
    return std::max(0.0, d);
}

double kl_security(const SubbandSet& cover, const SubbandSet& marked) {
    require(cover.levels() == marked.levels() && cover.levels() >= 1, ErrorKind::dimension,
            "subband sets have different depths");
    const std::size_t level = cover.levels();
    std::vector<double> a;
    std::vector<double> b;
    for (Band band : {Band::lh, Band::hl}) {
        const auto ca = cover.band(level, band).values();
        const auto cb = marked.band(level, band).values();
        a.insert(a.end(), ca.begin(), ca.end());
        b.insert(b.end(), cb.begin(), cb.end());
    }
    return kl_security(a, b);
}

double ber(std::span<const std::uint8_t> sent, std::span<const std::uint8_t> received) {
    require(sent.size() == received.size(), ErrorKind::dimension, "bit strings differ in length");
    require(!sent.empty(), ErrorKind::input, "empty bit string");
    return double(hamming_distance(sent, received)) / double(sent.size());
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double psym_gaussian(const ErrorModelParams& params, std::size_t alphabet) {
    require(!params.symbols.empty(), ErrorKind::model, "error model has no symbols");
    require(alphabet >= 2, ErrorKind::model, "alphabet must have at least two symbols");
    double acc = 0.0;
    for (const auto& s : params.symbols) {
        require(s.var_correct > 0.0 && s.var_other > 0.0, ErrorKind::model, "error model variance must be positive");
        const double z = (s.mean_correct - s.mean_other) / std::sqrt(s.var_correct + s.var_other);
        acc += std::min(1.0, double(alphabet - 1) * q_function(z));
    }
    return acc / double(params.symbols.size());
}

ErrorModelParams estimate_error_model(std::span<const std::vector<double>> rows, std::span<const std::uint16_t> sent,
                                      std::size_t block_length) {
    require(rows.size() == sent.size(), ErrorKind::dimension, "one transmitted symbol per statistic row");
    struct Acc {
        double sc = 0, scc = 0, so = 0, soo = 0;
        std::size_t nc = 0, no = 0;
    };
    std::map<std::uint16_t, Acc> groups;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& row = rows[t];
        require(sent[t] < row.size(), ErrorKind::index, "transmitted symbol outside the statistic row");
        auto& g = groups[sent[t]];
        for (std::size_t s = 0; s < row.size(); ++s) {
            if (s == sent[t]) {
                g.sc += row[s];
                g.scc += row[s] * row[s];
                ++g.nc;
            } else {
                g.so += row[s];
                g.soo += row[s] * row[s];
                ++g.no;
            }
        }
    }
    ErrorModelParams out;
    out.block_length = block_length;
    for (const auto& [sym, g] : groups) {
        SymbolModel m;
        m.mean_correct = g.sc / double(g.nc);
        m.mean_other = g.no ? g.so / double(g.no) : 0.0;
        m.var_correct = g.nc > 1 ? (g.scc - g.nc * m.mean_correct * m.mean_correct) / double(g.nc - 1) : 0.0;
        m.var_other = g.no > 1 ? (g.soo - g.no * m.mean_other * m.mean_other) / double(g.no - 1) : 0.0;
        out.symbols.push_back(m);
    }
    return out;
}

} // namespace sswm
