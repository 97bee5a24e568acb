#include "sswm/attacks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "sswm/error.hpp"
#include "sswm/kernels.hpp"
#include "sswm/rng.hpp"

namespace sswm {

std::string_view to_string(AttackKind kind) noexcept {
    switch (kind) {
    case AttackKind::none: return "none";
    case AttackKind::compress: return "compress";
    case AttackKind::blur: return "blur";
    case AttackKind::median: return "median";
    case AttackKind::sharpen: return "sharpen";
    case AttackKind::hist_eq: return "hist_eq";
    case AttackKind::awgn: return "awgn";
    case AttackKind::salt_pepper: return "salt_pepper";
    }
    return "none";
}

namespace {

void check_kernel(std::size_t kernel) {
    require(kernel >= 3 && kernel % 2 == 1, ErrorKind::config,
            "kernel size must be odd and at least 3, got " + std::to_string(kernel));
}

bool has_param(AttackKind k) {
    return k != AttackKind::none && k != AttackKind::sharpen && k != AttackKind::hist_eq;
}

constexpr std::array<AttackKind, 8> all_kinds{AttackKind::none,    AttackKind::compress, AttackKind::blur,
                                              AttackKind::median,  AttackKind::sharpen,  AttackKind::hist_eq,
                                              AttackKind::awgn,    AttackKind::salt_pepper};

std::uint8_t saturate(double v) { return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0)); }

} // namespace

void AttackSpec::validate() const {
    switch (kind) {
    case AttackKind::compress:
        require(param >= 0.0 && param <= 100.0, ErrorKind::config, "quality factor must be in [0, 100]");
        break;
    case AttackKind::blur:
    case AttackKind::median:
        require(param == std::floor(param) && param >= 0.0, ErrorKind::config, "kernel size must be an integer");
        check_kernel(static_cast<std::size_t>(param));
        break;
    case AttackKind::awgn:
        require(param >= 0.0 && std::isfinite(param), ErrorKind::config, "noise sigma must be non-negative");
        break;
    case AttackKind::salt_pepper:
        require(param >= 0.0 && param <= 1.0, ErrorKind::config, "flip probability must be in [0, 1]");
        break;
    default: break;
    }
}

AttackSpec parse_attack(std::string_view text, std::uint64_t seed) {
    AttackSpec spec;
    spec.seed = seed;
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    const auto found = std::find_if(all_kinds.begin(), all_kinds.end(), [&](AttackKind k) { return to_string(k) == name; });
    require(found != all_kinds.end(), ErrorKind::config, "unknown attack '" + std::string(name) + "'");
    spec.kind = *found;
    if (colon == std::string_view::npos) {
        require(!has_param(spec.kind), ErrorKind::config, "attack '" + std::string(name) + "' needs a parameter");
        return spec;
    }
    const std::string value(text.substr(colon + 1));
    std::size_t used = 0;
    try {
        spec.param = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(!value.empty() && used == value.size(), ErrorKind::config, "bad attack parameter '" + value + "'");
    spec.validate();
    return spec;
}

std::string to_string(const AttackSpec& spec) {
    std::ostringstream out;
    out << to_string(spec.kind);
    if (has_param(spec.kind)) out << ':' << spec.param;
    return out.str();
}

double surrogate_step(double qf, double max_step) { return std::pow(max_step, (100.0 - qf) / 100.0); }

namespace {

// Rounding offset below one half widens the zero bin to 1.2 steps.
constexpr double rounding_offset = 0.4;

void deadzone(Matrix& band, double step) {
    for (double& c : band.values()) c = std::copysign(std::floor(std::fabs(c) / step + rounding_offset) * step, c);
}

} // namespace

GrayImage compress_surrogate(const GrayImage& img, double qf, Exec exec) {
    require(qf >= 0.0 && qf <= 100.0, ErrorKind::config, "quality factor must be in [0, 100]");
    auto sb = dwt2_forward(img, WaveletFamily::biorthogonal_cdf97, 2, exec);
    constexpr std::array<double, 2> detail_max{64.0, 32.0};
    for (std::size_t level = 1; level <= 2; ++level) {
        const double step = surrogate_step(qf, detail_max[level - 1]);
        for (Band b : {Band::lh, Band::hl, Band::hh}) deadzone(sb.band(level, b), step);
    }
    deadzone(sb.ll, surrogate_step(qf, 8.0));
    return to_gray(dwt2_inverse(sb, exec));
}

GrayImage blur(const GrayImage& img, std::size_t kernel, Exec exec) {
    check_kernel(kernel);
    return exec == Exec::serial ? kernels::serial::box_blur(img, kernel) : kernels::omp::box_blur(img, kernel);
}

GrayImage median(const GrayImage& img, std::size_t kernel, Exec exec) {
    check_kernel(kernel);
    return exec == Exec::serial ? kernels::serial::median(img, kernel) : kernels::omp::median(img, kernel);
}

GrayImage sharpen(const GrayImage& img) {
    const auto smooth = blur(img, 3);
    GrayImage out(img.rows(), img.cols());
    for (std::size_t k = 0; k < img.size(); ++k)
        out.pixels()[k] = saturate(2.0 * img.pixels()[k] - smooth.pixels()[k]);
    return out;
}

GrayImage hist_eq(const GrayImage& img) {
    require(img.size() > 0, ErrorKind::input, "empty image");
    std::array<std::size_t, 256> hist{};
    for (auto p : img.pixels()) ++hist[p];
    std::array<std::size_t, 256> cdf{};
    std::size_t run = 0;
    for (std::size_t v = 0; v < 256; ++v) cdf[v] = run += hist[v];
    const std::size_t cdf_min = *std::find_if(cdf.begin(), cdf.end(), [](std::size_t c) { return c > 0; });
    GrayImage out(img.rows(), img.cols());
    const std::size_t total = img.size();
    for (std::size_t k = 0; k < total; ++k) {
        const auto c = cdf[img.pixels()[k]];
        out.pixels()[k] = total == cdf_min
                              ? img.pixels()[k]
                              : saturate(255.0 * double(c - cdf_min) / double(total - cdf_min));
    }
    return out;
}

GrayImage awgn(const GrayImage& img, double sigma, std::uint64_t seed) {
    require(sigma >= 0.0, ErrorKind::config, "noise sigma must be non-negative");
    SplitMix64 rng(seed);
    GrayImage out(img.rows(), img.cols());
    for (std::size_t k = 0; k < img.size(); ++k) out.pixels()[k] = saturate(img.pixels()[k] + sigma * rng.normal());
    return out;
}

GrayImage salt_pepper(const GrayImage& img, double probability, std::uint64_t seed) {
    require(probability >= 0.0 && probability <= 1.0, ErrorKind::config, "flip probability must be in [0, 1]");
    SplitMix64 rng(seed);
    GrayImage out = img;
    for (auto& p : out.pixels()) {
        const double u = rng.uniform();
        const bool salt = rng.next() >> 63;
        if (u < probability) p = salt ? 255 : 0;
    }
    return out;
}

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
    spec.validate();
    switch (spec.kind) {
    case AttackKind::none: return img;
    case AttackKind::compress: return compress_surrogate(img, spec.param);
    case AttackKind::blur: return blur(img, static_cast<std::size_t>(spec.param));
    case AttackKind::median: return median(img, static_cast<std::size_t>(spec.param));
    case AttackKind::sharpen: return sharpen(img);
    case AttackKind::hist_eq: return hist_eq(img);
    case AttackKind::awgn: return awgn(img, spec.param, spec.seed);
    case AttackKind::salt_pepper: return salt_pepper(img, spec.param, spec.seed);
    }
    return img;
}

} // namespace sswm
