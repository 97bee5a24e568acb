// sswm: keygen / embed / detect / attack / evaluate front end.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sswm/attacks.hpp"
#include "sswm/detect.hpp"
#include "sswm/error.hpp"
#include "sswm/evaluate.hpp"
#include "sswm/metrics.hpp"

namespace fs = std::filesystem;
using namespace sswm;

namespace {

enum Exit : int { ok = 0, failure = 1, bad_input = 2, capacity = 3, auth_failed = 4 };

struct RunConfig {
    std::string key_path;
    std::vector<std::string> inputs;
    std::string output;
    std::string message_hex;
    std::string message_file;
    std::string expect_hex;
    double alpha = EmbedConfig::default_alpha;
    unsigned m = 2;
    std::size_t degree = 0;
    std::string transform = "cdf97";
    std::size_t levels = 1;
    std::string decoder = "mf";
    std::string attack;
    std::optional<std::uint64_t> seed;
    std::size_t dense = 1;
    std::size_t block_length = 0;
    double masking = 1.5;
    bool fixed_alpha = false;
    std::size_t trials = 50;
    std::size_t message_bits = 16;

    EmbedConfig embed_config() const {
        EmbedConfig cfg;
        cfg.alpha = alpha;
        cfg.m = m;
        cfg.degree = degree;
        cfg.family = parse_family(transform);
        cfg.levels = levels;
        cfg.dense = dense;
        cfg.block_length = block_length;
        cfg.masking_exponent = masking;
        cfg.adaptive = !fixed_alpha;
        cfg.validate();
        return cfg;
    }
};

void add_embedding_flags(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--alpha", rc.alpha, "modulation index")->capture_default_str();
    cmd.add_option("--m", rc.m, "bits per symbol, M = 2^m")->capture_default_str();
    cmd.add_option("--l", rc.degree, "interleaver degree, 0 = smallest square")->capture_default_str();
    cmd.add_option("--transform", rc.transform, "d4 | cdf97")->capture_default_str();
    cmd.add_option("--levels", rc.levels, "decomposition depth")->capture_default_str();
    cmd.add_option("--dense", rc.dense, "symbols superimposed per block")->capture_default_str();
    cmd.add_option("--block-length", rc.block_length, "pattern length, 0 = automatic");
    cmd.add_option("--masking", rc.masking, "texture masking exponent")->capture_default_str();
    cmd.add_flag("--fixed-alpha", rc.fixed_alpha, "same alpha in every block");
}

Bits message_bits(const RunConfig& rc) {
    if (!rc.message_file.empty()) return bytes_to_bits(read_file(rc.message_file));
    return bytes_to_bits(parse_hex(rc.message_hex));
}

void print_quality(const QualityReport& q) {
    std::cout << "psnr=" << q.psnr << "\nssim=" << q.ssim << "\nkl=" << q.kl_security << '\n';
}

int cmd_keygen(const RunConfig& rc) {
    save_key(rc.output, make_key(rc.seed));
    std::cout << "key=" << rc.output << '\n';
    return ok;
}

int cmd_embed(const RunConfig& rc) {
    const auto cfg = rc.embed_config();
    const auto key = load_key(rc.key_path);
    const auto cover = read_pgm(rc.inputs.at(0));
    const auto msg = message_bits(rc);
    const auto r = embed_image(cover, msg, key, cfg);
    write_pgm(rc.output, r.watermarked);
    QualityReport q;
    q.psnr = psnr(cover, r.watermarked);
    q.ssim = ssim(cover, r.watermarked);
    q.kl_security = kl_security(r.cover_subbands, dwt2_forward(r.watermarked, cfg.family, cfg.levels));
    std::cout << "message_bits=" << msg.size() << "\nsymbols=" << r.shape.symbols << "\nrepeats=" << r.layout.repeats
              << '\n';
    print_quality(q);
    return ok;
}

int cmd_detect(const RunConfig& rc) {
    const auto cfg = rc.embed_config();
    const auto key = load_key(rc.key_path);
    const auto image = read_pgm(rc.inputs.at(0));
    std::optional<Bits> expected;
    if (!rc.expect_hex.empty()) expected = bytes_to_bits(parse_hex(rc.expect_hex));
    const auto report = expected ? extract_and_verify(image, key, cfg, parse_decoder(rc.decoder), *expected)
                                 : extract_and_verify(image, key, cfg, parse_decoder(rc.decoder));
    std::cout << to_text(report);
    return report.auth_ok ? ok : auth_failed;
}

int cmd_attack(const RunConfig& rc) {
    const auto image = read_pgm(rc.inputs.at(0));
    const auto spec = parse_attack(rc.attack, rc.seed.value_or(0));
    write_pgm(rc.output, apply_attack(image, spec));
    std::cout << "attack=" << to_string(spec) << '\n';
    return ok;
}

std::vector<GrayImage> load_images(const std::vector<std::string>& inputs) {
    std::vector<fs::path> paths;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(in))
                if (e.path().extension() == ".pgm") found.push_back(e.path());
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else {
            paths.emplace_back(in);
        }
    }
    require(!paths.empty(), ErrorKind::input, "no .pgm images found");
    std::vector<GrayImage> images;
    for (const auto& p : paths) images.push_back(read_pgm(p));
    return images;
}

int cmd_evaluate(const RunConfig& rc, const CLI::App& cmd) {
    SweepConfig sweep;
    sweep.trials = rc.trials;
    sweep.seed = rc.seed.value_or(1);
    sweep.message_bits = rc.message_bits;
    // Flags left unset keep the sweep's own defaults.
    auto& e = sweep.embed;
    if (cmd.count("--alpha")) e.alpha = rc.alpha;
    if (cmd.count("--levels")) e.levels = rc.levels;
    if (cmd.count("--l")) e.degree = rc.degree;
    if (cmd.count("--masking")) e.masking_exponent = rc.masking;
    e.family = parse_family(rc.transform);
    e.dense = rc.dense;
    e.block_length = rc.block_length;
    e.adaptive = !rc.fixed_alpha;
    e.validate();
    if (cmd.count("--m")) sweep.ms = {rc.m};
    if (cmd.count("--decoder")) sweep.decoders = {parse_decoder(rc.decoder)};

    const auto rows = run_sweep(load_images(rc.inputs), sweep);
    if (rc.output.empty() || rc.output == "-") {
        write_csv(std::cout, rows);
    } else {
        std::ofstream out(rc.output);
        require(static_cast<bool>(out), ErrorKind::io, "cannot write " + rc.output);
        write_csv(out, rows);
    }
    return ok;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::capacity: return capacity;
    case ErrorKind::input:
    case ErrorKind::config:
    case ErrorKind::io:
    case ErrorKind::format:
    case ErrorKind::key:
    case ErrorKind::dimension: return bad_input;
    default: return failure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spread-spectrum M-ary wavelet watermarking"};
    app.require_subcommand(1);
    RunConfig rc;

    auto* keygen = app.add_subcommand("keygen", "write a new secret key");
    keygen->add_option("--out", rc.output, "key file")->required();
    keygen->add_option("--seed", rc.seed, "deterministic seed, OS entropy otherwise");

    auto* embed = app.add_subcommand("embed", "embed a message into a P5 image");
    embed->add_option("--key", rc.key_path)->required();
    embed->add_option("--in", rc.inputs, "cover image")->required()->expected(1);
    embed->add_option("--out", rc.output, "watermarked image")->required();
    auto* hex = embed->add_option("--message", rc.message_hex, "message as hex");
    auto* file = embed->add_option("--message-file", rc.message_file, "message as raw bytes");
    hex->excludes(file);
    embed->callback([&] {
        if (rc.message_hex.empty() && rc.message_file.empty())
            throw CLI::ValidationError("--message", "one of --message or --message-file is required");
    });
    add_embedding_flags(*embed, rc);

    auto* detect = app.add_subcommand("detect", "blind extraction and authentication");
    detect->add_option("--key", rc.key_path)->required();
    detect->add_option("--in", rc.inputs, "image to inspect")->required()->expected(1);
    detect->add_option("--decoder", rc.decoder, "mf | sic | pic")->capture_default_str();
    detect->add_option("--expect", rc.expect_hex, "true message as hex, reports ber");
    add_embedding_flags(*detect, rc);

    auto* attack = app.add_subcommand("attack", "apply one attack");
    attack->add_option("--in", rc.inputs)->required()->expected(1);
    attack->add_option("--out", rc.output)->required();
    attack->add_option("--attack", rc.attack, "kind:param")->required();
    attack->add_option("--seed", rc.seed, "noise seed");

    auto* evaluate = app.add_subcommand("evaluate", "QF x M x decoder compression sweep, CSV");
    evaluate->add_option("--in", rc.inputs, "images or directories of .pgm")->required();
    evaluate->add_option("--out", rc.output, "CSV path, stdout if omitted");
    evaluate->add_option("--trials", rc.trials)->capture_default_str();
    evaluate->add_option("--seed", rc.seed, "sweep seed (default 1)");
    evaluate->add_option("--message-bits", rc.message_bits)->capture_default_str();
    evaluate->add_option("--decoder", rc.decoder, "restrict to one decoder");
    add_embedding_flags(*evaluate, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_input;
    }

    try {
        if (*keygen) return cmd_keygen(rc);
        if (*embed) return cmd_embed(rc);
        if (*detect) return cmd_detect(rc);
        if (*attack) return cmd_attack(rc);
        if (*evaluate) return cmd_evaluate(rc, *evaluate);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
