#pragma once

// Robustness sweep over compression strength, alphabet size and decoder,
// the shape of a Table-II style report.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sswm/detect.hpp"

namespace sswm {

struct SweepConfig {
    std::vector<double> qfs{100, 75, 50, 25, 0};
    std::vector<unsigned> ms{1, 2, 3, 4};
    std::vector<Decoder> decoders{Decoder::sic, Decoder::pic};
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    std::size_t message_bits = 16;
    EmbedConfig embed = sweep_defaults();

    /// Level-2 embedding survives the strongest surrogate settings without
    /// saturating, so the trends stay visible. Flatter masking than the
    /// default keeps more of the mark in smooth blocks.
    static EmbedConfig sweep_defaults() {
        EmbedConfig cfg;
        cfg.alpha = 10.0;
        cfg.masking_exponent = 1.0;
        cfg.levels = 2;
        cfg.degree = 2;
        return cfg;
    }
};

struct SweepRow {
    double qf = 0.0;
    unsigned m = 1;
    Decoder decoder = Decoder::mf;
    double ber = 0.0; ///< NaN when every trial of the cell failed
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// Trial t uses image t mod images.size(), a fresh key and a fresh message,
/// all derived from cfg.seed; every cell sees the same trials. Rows come out
/// in (qf, m, decoder) order.
std::vector<SweepRow> run_sweep(const std::vector<GrayImage>& images, const SweepConfig& cfg);

/// Header `qf,m,decoder,ber,trials,seed`; m is written as the alphabet size M.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Rows matching (qf, m, decoder), if present.
const SweepRow* find_row(const std::vector<SweepRow>& rows, double qf, unsigned m, Decoder decoder);

} // namespace sswm
