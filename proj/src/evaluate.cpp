#include "sswm/evaluate.hpp"

#include <cmath>
#include <iomanip>

#include "sswm/attacks.hpp"
#include "sswm/error.hpp"
#include "sswm/rng.hpp"

namespace sswm {

namespace {

struct Trial {
    std::size_t image = 0;
    std::uint64_t key_seed = 0;
    Bits message;
};

Trial make_trial(const SweepConfig& cfg, std::size_t t, std::size_t images) {
    Trial trial;
    SplitMix64 rng(mix64(cfg.seed) ^ mix64(t + 1));
    trial.image = t % images;
    trial.key_seed = rng.next();
    trial.message.resize(cfg.message_bits);
    for (auto& b : trial.message) b = static_cast<std::uint8_t>(rng.next() >> 63);
    return trial;
}

// errors[cell] for one trial, NaN on failure.
void run_trial(const GrayImage& image, const Trial& trial, const SweepConfig& cfg, std::vector<double>& errors) {
    const auto key = make_key(trial.key_seed);
    const std::size_t nd = cfg.decoders.size();
    const std::size_t nm = cfg.ms.size();
    for (std::size_t mi = 0; mi < nm; ++mi) {
        EmbedConfig ecfg = cfg.embed;
        ecfg.m = cfg.ms[mi];
        std::optional<EmbedResult> marked;
        try {
            marked = embed_image(image, trial.message, key, ecfg);
        } catch (const Error&) {
        }
        for (std::size_t qi = 0; qi < cfg.qfs.size(); ++qi) {
            const std::size_t base = (qi * nm + mi) * nd;
            if (!marked) {
                for (std::size_t di = 0; di < nd; ++di) errors[base + di] = NAN;
                continue;
            }
            const auto attacked = compress_surrogate(marked->watermarked, cfg.qfs[qi], Exec::serial);
            const auto subbands = dwt2_forward(attacked, ecfg.family, ecfg.levels, Exec::serial);
            const auto obs = observe(subbands, key, ecfg);
            const auto layout = with_positions(obs.channel, marked->shape);
            for (std::size_t di = 0; di < nd; ++di) {
                const auto decoded = decode(obs, layout, cfg.decoders[di]);
                const auto bits = decode_stream(decoded.symbols, ecfg.m, marked->shape);
                const std::span<const std::uint8_t> got(bits.data() + length_field_bits, trial.message.size());
                errors[base + di] = static_cast<double>(hamming_distance(got, trial.message));
            }
        }
    }
}

} // namespace

std::vector<SweepRow> run_sweep(const std::vector<GrayImage>& images, const SweepConfig& cfg) {
    require(!images.empty(), ErrorKind::input, "sweep needs at least one image");
    require(cfg.trials >= 1, ErrorKind::config, "sweep needs at least one trial");
    require(cfg.message_bits >= 1, ErrorKind::config, "sweep message must be non-empty");
    const std::size_t cells = cfg.qfs.size() * cfg.ms.size() * cfg.decoders.size();
    std::vector<std::vector<double>> per_trial(cfg.trials, std::vector<double>(cells, NAN));

    const auto trials = static_cast<std::ptrdiff_t>(cfg.trials);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < trials; ++t) {
        const auto trial = make_trial(cfg, static_cast<std::size_t>(t), images.size());
        run_trial(images[trial.image], trial, cfg, per_trial[static_cast<std::size_t>(t)]);
    }

    std::vector<SweepRow> rows;
    rows.reserve(cells);
    std::size_t cell = 0;
    for (double qf : cfg.qfs) {
        for (unsigned m : cfg.ms) {
            for (Decoder d : cfg.decoders) {
                double errors = 0.0;
                std::size_t ok = 0;
                for (const auto& trial : per_trial) {
                    if (std::isnan(trial[cell])) continue;
                    errors += trial[cell];
                    ++ok;
                }
                SweepRow row;
                row.qf = qf;
                row.m = m;
                row.decoder = d;
                row.trials = ok;
                row.seed = cfg.seed;
                row.ber = ok == 0 ? NAN : errors / static_cast<double>(ok * cfg.message_bits);
                rows.push_back(row);
                ++cell;
            }
        }
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "qf,m,decoder,ber,trials,seed\n";
    for (const auto& r : rows) {
        out << r.qf << ',' << (1U << r.m) << ',' << to_string(r.decoder) << ',';
        if (std::isnan(r.ber))
            out << "nan";
        else
            out << std::fixed << std::setprecision(4) << r.ber << std::defaultfloat;
        out << ',' << r.trials << ',' << r.seed << '\n';
    }
}

const SweepRow* find_row(const std::vector<SweepRow>& rows, double qf, unsigned m, Decoder decoder) {
    for (const auto& r : rows)
        if (r.qf == qf && r.m == m && r.decoder == decoder) return &r;
    return nullptr;
}

} // namespace sswm
