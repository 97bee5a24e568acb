#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sswm/image.hpp"
#include "sswm/transform.hpp"

namespace sswm {

enum class AttackKind { none, compress, blur, median, sharpen, hist_eq, awgn, salt_pepper };

std::string_view to_string(AttackKind kind) noexcept;

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    double param = 0.0; ///< QF, kernel size, noise sigma or flip probability
    std::uint64_t seed = 0;

    /// Throws ErrorKind::config when param is out of range for the kind.
    void validate() const;
};

/// "compress:50", "blur:3", "median:5", "sharpen", "hist_eq", "awgn:2.5", "salt_pepper:0.01", "none".
AttackSpec parse_attack(std::string_view text, std::uint64_t seed = 0);
std::string to_string(const AttackSpec& spec);

/// Quantization step for a band: max_step^((100 - qf) / 100).
double surrogate_step(double qf, double max_step);

/// Two-level CDF 9/7 decomposition, deadzone quantization, reconstruction.
GrayImage compress_surrogate(const GrayImage& img, double qf, Exec exec = Exec::parallel);
GrayImage blur(const GrayImage& img, std::size_t kernel, Exec exec = Exec::parallel);
GrayImage median(const GrayImage& img, std::size_t kernel, Exec exec = Exec::parallel);
/// img + (img - blur3(img)).
GrayImage sharpen(const GrayImage& img);
GrayImage hist_eq(const GrayImage& img);
GrayImage awgn(const GrayImage& img, double sigma, std::uint64_t seed);
GrayImage salt_pepper(const GrayImage& img, double probability, std::uint64_t seed);

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec);

} // namespace sswm
