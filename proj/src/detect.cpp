#include "sswm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sswm/error.hpp"

namespace sswm {

std::string_view to_string(Decoder d) noexcept {
    switch (d) {
    case Decoder::mf: return "mf";
    case Decoder::sic: return "sic";
    case Decoder::pic: return "pic";
    }
    return "mf";
}

Decoder parse_decoder(std::string_view name) {
    if (name == "mf") return Decoder::mf;
    if (name == "sic") return Decoder::sic;
    if (name == "pic") return Decoder::pic;
    fail(ErrorKind::config, "unknown decoder '" + std::string(name) + "' (expected mf, sic or pic)");
}

double zero_lag_corr(std::span<const double> s, std::span<const double> r) {
    require(s.size() == r.size(), ErrorKind::dimension, "zero-lag correlation needs equal lengths");
    require(!s.empty(), ErrorKind::dimension, "zero-lag correlation of empty sequences");
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) acc += s[k] * r[k];
    return acc / static_cast<double>(s.size());
}

double decision_statistic(std::span<const double> block, std::span<const double> pattern) {
    require(block.size() == pattern.size(), ErrorKind::dimension, "block and pattern lengths differ");
    require(!block.empty(), ErrorKind::dimension, "empty block");
    const auto n = static_cast<double>(block.size());
    double mb = 0.0;
    double mp = 0.0;
    for (std::size_t k = 0; k < block.size(); ++k) {
        mb += block[k];
        mp += pattern[k];
    }
    mb /= n;
    mp /= n;
    double acc = 0.0;
    for (std::size_t k = 0; k < block.size(); ++k) acc += (pattern[k] - mp) * (block[k] - mb);
    return acc / n;
}

std::uint16_t CorrelationMatrix::best(std::size_t i) const noexcept {
    const auto r = row(i);
    std::size_t best = 0;
    for (std::size_t s = 1; s < r.size(); ++s)
        if (r[s] > r[best]) best = s;
    return static_cast<std::uint16_t>(best);
}

double CorrelationMatrix::margin(std::size_t i) const noexcept {
    const auto r = row(i);
    if (r.size() < 2) return 0.0;
    const std::size_t b = best(i);
    double runner = -INFINITY;
    for (std::size_t s = 0; s < r.size(); ++s)
        if (s != b) runner = std::max(runner, r[s]);
    return r[b] - runner;
}

namespace {

Sequence magnitudes(std::span<const double> x) {
    Sequence out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = std::fabs(x[k]);
    return out;
}

// Per-slot statistics for one band: slots x M.
using SlotStats = std::vector<std::vector<double>>;

struct BandState {
    std::vector<Sequence> residual; // per block, coefficient magnitudes
    std::vector<double> limit;      // per block
    SlotStats stats;                // per slot, per symbol
};

void slot_statistics(const PatternBank& bank, std::size_t t, const Sequence& residual, double limit,
                     std::vector<double>& row) {
    Sequence clipped = residual;
    for (double& v : clipped) v = std::min(v, limit);
    row.resize(bank.alphabet());
    for (std::size_t s = 0; s < bank.alphabet(); ++s) row[s] = decision_statistic(clipped, bank.pattern(t, s));
}

void compute_slot(const Observation& obs, BandState& band, std::size_t block, std::size_t t) {
    slot_statistics(obs.banks[block], t, band.residual[block], band.limit[block],
                    band.stats[block * obs.channel.per_block + t]);
}

BandState initial_state(const Observation& obs, const std::vector<Sequence>& blocks,
                        const std::vector<double>& limit) {
    BandState st;
    st.residual.resize(blocks.size());
    st.limit = limit;
    st.stats.resize(obs.channel.slots());
    const auto nblocks = static_cast<std::ptrdiff_t>(blocks.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t sb = 0; sb < nblocks; ++sb) {
        const auto b = static_cast<std::size_t>(sb);
        st.residual[b] = magnitudes(blocks[b]);
        for (std::size_t t = 0; t < obs.channel.per_block; ++t) compute_slot(obs, st, b, t);
    }
    return st;
}

// Magnitude-domain cancellation: |y - dir * a * u|, dir = +1 for the positive band.
void cancel(Sequence& residual, std::span<const double> pattern, double amplitude, double dir) {
    if (amplitude <= 0.0) return;
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] = std::fabs(residual[k] - dir * amplitude * pattern[k]);
}


CorrelationMatrix combine(const Observation& obs, const BandState& pos, const BandState& neg, const Layout& layout) {
    CorrelationMatrix c(layout.positions, layout.alphabet());
    std::vector<double> total(layout.positions, 0.0);
    for (std::size_t k = 0; k < layout.used_slots(); ++k) {
        const std::size_t j = *layout.position_of(k);
        const std::size_t b = k / layout.per_block;
        const double wp = obs.positive_weight[b];
        const double wn = obs.negative_weight[b];
        total[j] += 0.5 * (wp + wn);
        for (std::size_t s = 0; s < layout.alphabet(); ++s) c(j, s) += wp * pos.stats[k][s] - wn * neg.stats[k][s];
    }
    for (std::size_t j = 0; j < layout.positions; ++j) {
        const double inv = total[j] > 0.0 ? 1.0 / total[j] : 0.0;
        for (std::size_t s = 0; s < layout.alphabet(); ++s) c(j, s) *= inv;
    }
    return c;
}

SymbolStream argmax_all(const CorrelationMatrix& c) {
    SymbolStream out(c.positions());
    for (std::size_t j = 0; j < c.positions(); ++j) out[j] = c.best(j);
    return out;
}

void check_layout(const Observation& obs, const Layout& layout) {
    require(layout.carried >= 1 && layout.repeats >= 1, ErrorKind::dimension, "layout has no positions");
    require(layout.blocks == obs.banks.size() && layout.block_length == obs.channel.block_length &&
                layout.per_block == obs.channel.per_block && layout.m == obs.channel.m,
            ErrorKind::dimension, "layout does not match the observation");
}

struct RawStats {
    BandState pos;
    BandState neg;
};

RawStats raw_stats(const Observation& obs) {
    return {initial_state(obs, obs.positive, obs.positive_limit), initial_state(obs, obs.negative, obs.negative_limit)};
}

} // namespace

double magnitude_limit(std::span<const double> block, double clip) {
    if (clip <= 0.0) return INFINITY;
    Sequence mag = magnitudes(block);
    const auto mid = mag.begin() + static_cast<std::ptrdiff_t>(mag.size() / 2);
    std::nth_element(mag.begin(), mid, mag.end());
    return clip * *mid + clip_floor;
}

namespace {

double limited_variance(std::span<const double> block, double limit) {
    double s = 0.0;
    double ss = 0.0;
    for (double v : block) {
        const double y = std::min(std::fabs(v), limit);
        s += y;
        ss += y * y;
    }
    const auto n = static_cast<double>(block.size());
    return std::max(0.0, ss / n - (s / n) * (s / n));
}

// Inverse-variance weighting shrunk toward equal weights by the band's
// median block variance; blocks emptied by quantization would otherwise
// dominate.
std::vector<double> band_weights(const std::vector<Sequence>& blocks, const std::vector<double>& limits,
                                 double band_std, const EmbedConfig& cfg) {
    std::vector<double> var(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) var[b] = limited_variance(blocks[b], limits[b]);
    auto sorted = var;
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double floor = *mid + 1e-3;
    std::vector<double> w(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) w[b] = choose_alpha(blocks[b], band_std, cfg) / (var[b] + floor);
    return w;
}

} // namespace

Observation observe(const SubbandSet& subbands, const SecretKey& key, const EmbedConfig& cfg, double clip) {
    cfg.validate();
    require(subbands.levels() == cfg.levels, ErrorKind::dimension, "subband depth does not match configuration");
    require(subbands.family == cfg.family, ErrorKind::dimension, "subband family does not match configuration");
    const auto& lh = subbands.band(cfg.levels, Band::lh);
    const auto& hl = subbands.band(cfg.levels, Band::hl);
    Observation obs;
    obs.channel = channel_layout(lh.rows(), lh.cols(), cfg, key);
    require(obs.channel.blocks >= 1, ErrorKind::capacity, "detail band smaller than one block");
    const double pos_std = sample_stddev(lh.values());
    const double neg_std = sample_stddev(hl.values());
    obs.positive.reserve(obs.channel.blocks);
    obs.negative.reserve(obs.channel.blocks);
    for (std::size_t b = 0; b < obs.channel.blocks; ++b) {
        obs.positive.push_back(block_view(lh, obs.channel, b));
        obs.negative.push_back(block_view(hl, obs.channel, b));
        // Headroom for the expected mark amplitude, so flat blocks keep it.
        obs.positive_limit.push_back(magnitude_limit(obs.positive.back(), clip) +
                                     choose_alpha(obs.positive.back(), pos_std, cfg));
        obs.negative_limit.push_back(magnitude_limit(obs.negative.back(), clip) +
                                     choose_alpha(obs.negative.back(), neg_std, cfg));
    }
    obs.positive_weight = band_weights(obs.positive, obs.positive_limit, pos_std, cfg);
    obs.negative_weight = band_weights(obs.negative, obs.negative_limit, neg_std, cfg);
    obs.banks = build_block_banks(key, obs.channel);
    return obs;
}

DecodeResult matched_filter_decode(const Observation& obs, const Layout& layout) {
    check_layout(obs, layout);
    const auto raw = raw_stats(obs);
    DecodeResult r;
    r.correlations = combine(obs, raw.pos, raw.neg, layout);
    r.symbols = argmax_all(r.correlations);
    return r;
}

DecodeResult sic_decode(const Observation& obs, const Layout& layout) {
    check_layout(obs, layout);
    auto [pos, neg] = raw_stats(obs);
    const std::size_t S = layout.per_block;
    const std::size_t M = layout.alphabet();

    DecodeResult r;
    r.correlations = CorrelationMatrix(layout.positions, M);
    r.symbols.assign(layout.positions, 0);
    std::vector<char> decided(layout.positions, 0);
    std::vector<char> slot_done(layout.slots(), 0);
    const auto carriers = slots_by_position(layout);

    for (std::size_t round = 0; round < layout.positions; ++round) {
        const auto current = combine(obs, pos, neg, layout);
        std::size_t pick = layout.positions;
        double pick_score = -INFINITY;
        for (std::size_t j = 0; j < layout.positions; ++j) {
            if (decided[j]) continue;
            const double score = current(j, current.best(j));
            if (pick == layout.positions || score > pick_score) {
                pick = j;
                pick_score = score;
            }
        }
        const std::uint16_t sym = current.best(pick);
        decided[pick] = 1;
        r.symbols[pick] = sym;
        for (std::size_t s = 0; s < M; ++s) r.correlations(pick, s) = current(pick, s);

        for (std::size_t k : carriers[pick]) {
            slot_done[k] = 1;
            if (S == 1) continue;
            const std::size_t b = k / S;
            const std::size_t t = k % S;
            const auto u = obs.banks[b].pattern(t, sym);
            cancel(pos.residual[b], u, pos.stats[k][sym], 1.0);
            cancel(neg.residual[b], u, -neg.stats[k][sym], -1.0);
            for (std::size_t t2 = 0; t2 < S; ++t2) {
                if (slot_done[b * S + t2]) continue;
                compute_slot(obs, pos, b, t2);
                compute_slot(obs, neg, b, t2);
            }
        }
    }
    return r;
}

FixedPointResult iterate_until_stable(const SymbolStream& initial,
                                      const std::function<SymbolStream(const SymbolStream&)>& step,
                                      std::size_t max_iterations) {
    FixedPointResult r;
    r.symbols = initial;
    r.iterations = 1;
    while (r.iterations < max_iterations) {
        auto next = step(r.symbols);
        ++r.iterations;
        if (next == r.symbols) {
            r.converged = true;
            return r;
        }
        r.symbols = std::move(next);
    }
    return r;
}

DecodeResult pic_decode(const Observation& obs, const Layout& layout, std::size_t max_iterations) {
    check_layout(obs, layout);
    const auto raw = raw_stats(obs);
    const std::size_t S = layout.per_block;

    DecodeResult r;
    r.correlations = combine(obs, raw.pos, raw.neg, layout);
    const auto initial = argmax_all(r.correlations);

    // Amplitude estimates come from the previous round's slot statistics.
    BandState prev_pos = raw.pos;
    BandState prev_neg = raw.neg;

    const auto step = [&](const SymbolStream& current) {
        BandState pos = raw.pos;
        BandState neg = raw.neg;
        const auto nblocks = static_cast<std::ptrdiff_t>(layout.blocks);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t sb = 0; sb < nblocks; ++sb) {
            const auto b = static_cast<std::size_t>(sb);
            for (std::size_t t = 0; t < S; ++t) {
                const std::size_t k = b * S + t;
                if (!layout.position_of(k)) continue;
                Sequence res_pos = raw.pos.residual[b];
                Sequence res_neg = raw.neg.residual[b];
                for (std::size_t t2 = 0; t2 < S; ++t2) {
                    const std::size_t k2 = b * S + t2;
                    const auto other = layout.position_of(k2);
                    if (t2 == t || !other) continue;
                    const std::uint16_t sym = current[*other];
                    const auto u = obs.banks[b].pattern(t2, sym);
                    cancel(res_pos, u, prev_pos.stats[k2][sym], 1.0);
                    cancel(res_neg, u, -prev_neg.stats[k2][sym], -1.0);
                }
                slot_statistics(obs.banks[b], t, res_pos, pos.limit[b], pos.stats[k]);
                slot_statistics(obs.banks[b], t, res_neg, neg.limit[b], neg.stats[k]);
            }
        }
        r.correlations = combine(obs, pos, neg, layout);
        prev_pos = std::move(pos);
        prev_neg = std::move(neg);
        return argmax_all(r.correlations);
    };

    const auto fixed = iterate_until_stable(initial, step, max_iterations);
    r.symbols = fixed.symbols;
    r.iterations = fixed.iterations;
    r.converged = fixed.converged;
    return r;
}

DecodeResult decode(const Observation& obs, const Layout& layout, Decoder decoder) {
    switch (decoder) {
    case Decoder::sic: return sic_decode(obs, layout);
    case Decoder::pic: return pic_decode(obs, layout);
    case Decoder::mf: break;
    }
    return matched_filter_decode(obs, layout);
}

namespace {

double mean_margin(const CorrelationMatrix& c, const Layout& layout) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < c.positions(); ++j) {
        if (!layout.carries(j)) continue;
        acc += c.margin(j);
        ++n;
    }
    return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

struct Candidate {
    StreamShape shape;
    Layout layout;
};

std::vector<Candidate> candidate_shapes(const Observation& obs, const SecretKey& key, const EmbedConfig& cfg) {
    std::vector<Candidate> out;
    const std::size_t slots = obs.channel.slots();
    const std::size_t upper = std::min<std::size_t>(slots * cfg.m, (1U << length_field_bits) - 1);
    for (std::size_t n = 1; n <= upper; ++n) {
        const auto shape = stream_shape(n, key.tag_len, cfg.m, cfg.degree);
        if (shape.symbols > slots) break;
        if (!out.empty() && out.back().shape.symbols == shape.symbols && out.back().shape.degree == shape.degree)
            continue;
        // Decode every carried symbol; the header decides how much is payload.
        auto full = shape;
        full.payload_bits = shape.symbols * cfg.m;
        out.push_back({full, with_positions(obs.channel, shape)});
    }
    return out;
}

struct Attempt {
    DecodeResult decoded;
    Bits payload;
    std::optional<PayloadFields> fields;
    bool consistent = false;
    bool authentic = false;
};

Attempt try_candidate(const Observation& obs, const Candidate& cand, const SecretKey& key, const EmbedConfig& cfg,
                      Decoder decoder) {
    Attempt a;
    a.decoded = decode(obs, cand.layout, decoder);
    a.payload = decode_stream(a.decoded.symbols, cfg.m, cand.shape);
    // The header fixes how many bits the stream should have had.
    const auto n = static_cast<std::size_t>(read_uint(a.payload, 0, length_field_bits));
    if (n == 0) return a;
    const auto implied = stream_shape(n, key.tag_len, cfg.m, cfg.degree);
    if (implied.symbols != cand.shape.symbols || implied.degree != cand.shape.degree) return a;
    a.payload.resize(std::min(a.payload.size(), implied.payload_bits));
    if (a.payload.size() != implied.payload_bits) return a;
    a.fields = split_payload(a.payload, key.tag_len);
    a.consistent = a.fields.has_value();
    if (a.consistent) a.authentic = verify_tag(a.fields->message, key, a.fields->tag);
    return a;
}

} // namespace

DetectionReport extract_and_verify(const GrayImage& image, const SecretKey& key, const EmbedConfig& cfg,
                                   Decoder decoder, std::optional<std::span<const std::uint8_t>> expected) {
    key.validate();
    DetectionReport report;
    report.decoder = decoder;

    const auto subbands = dwt2_forward(image, cfg.family, cfg.levels);
    const auto obs = observe(subbands, key, cfg);
    const auto candidates = candidate_shapes(obs, key, cfg);

    // Candidate selection with the matched filter; the chosen decoder then
    // re-runs on every self-consistent length.
    std::optional<std::size_t> chosen;
    Attempt chosen_attempt;
    double chosen_margin = -INFINITY;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        Attempt a = try_candidate(obs, candidates[i], key, cfg, Decoder::mf);
        if (!a.consistent) continue;
        if (decoder != Decoder::mf) a = try_candidate(obs, candidates[i], key, cfg, decoder);
        if (!a.consistent) continue;
        const double margin = mean_margin(a.decoded.correlations, candidates[i].layout);
        if (a.authentic) {
            chosen = i;
            chosen_attempt = std::move(a);
            break;
        }
        if (!chosen || margin > chosen_margin) {
            chosen = i;
            chosen_margin = margin;
            chosen_attempt = std::move(a);
        }
    }

    if (chosen) {
        const auto& cand = candidates[*chosen];
        report.integrity_ok = true;
        report.auth_ok = chosen_attempt.authentic;
        report.symbols = chosen_attempt.decoded.symbols;
        report.message = chosen_attempt.fields->message;
        report.tag = chosen_attempt.fields->tag;
        report.positions = cand.layout.positions;
        report.repeats = cand.layout.repeats;
        report.iterations = chosen_attempt.decoded.iterations;
        report.converged = chosen_attempt.decoded.converged;
        report.margin = mean_margin(chosen_attempt.decoded.correlations, cand.layout);
        if (!report.auth_ok) report.note = "tag mismatch";
    } else {
        report.note = "no self-consistent length header";
    }

    if (expected) {
        const auto truth = *expected;
        if (report.integrity_ok && report.message.size() == truth.size()) {
            report.ber = static_cast<double>(hamming_distance(report.message, truth)) / double(truth.size());
        } else {
            // Decode at the layout the true length implies.
            const auto shape = stream_shape(truth.size(), key.tag_len, cfg.m, cfg.degree);
            if (shape.symbols <= obs.channel.slots()) {
                const auto layout = with_positions(obs.channel, shape);
                const auto d = decode(obs, layout, decoder);
                const auto bits = decode_stream(d.symbols, cfg.m, shape);
                const std::span<const std::uint8_t> msg(bits.data() + length_field_bits, truth.size());
                report.ber = static_cast<double>(hamming_distance(msg, truth)) / double(truth.size());
            } else {
                report.ber = 1.0;
            }
        }
    }
    return report;
}

std::string to_text(const DetectionReport& r) {
    std::ostringstream out;
    out << "decoder=" << to_string(r.decoder) << '\n';
    out << "auth_ok=" << (r.auth_ok ? "true" : "false") << '\n';
    out << "integrity_ok=" << (r.integrity_ok ? "true" : "false") << '\n';
    out << "message_bits=" << r.message.size() << '\n';
    out << "message_hex=" << bits_to_hex(r.message) << '\n';
    out << "tag_hex=" << bits_to_hex(r.tag) << '\n';
    out << "positions=" << r.positions << '\n';
    out << "repeats=" << r.repeats << '\n';
    out << "iterations=" << r.iterations << '\n';
    out << "converged=" << (r.converged ? "true" : "false") << '\n';
    out << "margin=" << r.margin << '\n';
    if (r.ber) out << "ber=" << *r.ber << '\n';
    if (!r.note.empty()) out << "note=" << r.note << '\n';
    return out.str();
}

} // namespace sswm
