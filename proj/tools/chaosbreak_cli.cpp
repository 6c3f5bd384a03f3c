#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/errors.hpp"
#include "chaosbreak/isbda.hpp"
#include "chaosbreak/keyrec.hpp"
#include "chaosbreak/oracle.hpp"
#include "chaosbreak/pgm.hpp"
#include "chaosbreak/pipeline_json.hpp"
#include "chaosbreak/stats.hpp"
#include "chaosbreak/testdata.hpp"
#include "demos.hpp"

namespace {

using namespace chaosbreak;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAttackInapplicable = 3;

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

struct ReportWriter {
    std::string path;
    json doc;

    explicit ReportWriter(std::string command) { doc["command"] = std::move(command); }

    void input_digest(const std::string& name, const ByteImage& img) {
        doc["inputs"][name] = hex64(fnv1a(img.data()));
    }

    ~ReportWriter() {
        if (path.empty()) return;
        std::ofstream out(path);
        out << doc.dump(2) << '\n';
    }
};

json layers_to_json(const std::vector<RecoveredLayer>& layers) {
    json arr = json::array();
    for (const auto& l : layers)
        arr.push_back({{"role", l.role}, {"map", l.perm.to_one_based()}});
    return arr;
}

std::vector<RecoveredLayer> layers_from_json(const json& doc) {
    std::vector<RecoveredLayer> layers;
    for (const auto& l : doc)
        layers.push_back({l.at("role").get<std::string>(),
                          Permutation(l.at("map").get<std::vector<std::uint32_t>>())});
    return layers;
}

void print_stats_table(const StatsReport& plain, const StatsReport* cipher) {
    auto row = [](const std::string& name, double p, const double* c) {
        std::cout << "  " << std::left << std::setw(22) << name << std::setprecision(6)
                  << std::fixed << std::setw(12) << p;
        if (c) std::cout << std::setw(12) << *c;
        std::cout << "\n";
    };
    std::cout << "  " << std::left << std::setw(22) << "indicator" << std::setw(12)
              << "plaintext";
    if (cipher) std::cout << std::setw(12) << "ciphertext";
    std::cout << "\n";
    row("corr horizontal", plain.corr_horizontal,
        cipher ? &cipher->corr_horizontal : nullptr);
    row("corr vertical", plain.corr_vertical, cipher ? &cipher->corr_vertical : nullptr);
    row("corr diagonal", plain.corr_diagonal, cipher ? &cipher->corr_diagonal : nullptr);
    row("entropy bits", plain.entropy_bits, cipher ? &cipher->entropy_bits : nullptr);
    if (cipher && cipher->has_diff_stats) {
        std::cout << "  " << std::left << std::setw(22) << "npcr %" << std::setw(12) << ""
                  << std::setw(12) << cipher->npcr_percent << "\n";
        std::cout << "  " << std::left << std::setw(22) << "uaci %" << std::setw(12) << ""
                  << std::setw(12) << cipher->uaci_percent << "\n";
    }
}

StatsReport indicators(const ByteImage& img) {
    StatsReport r;
    r.histogram = histogram(img);
    r.corr_horizontal = adjacent_correlation(img, Direction::horizontal).value;
    r.corr_vertical = adjacent_correlation(img, Direction::vertical).value;
    r.corr_diagonal = adjacent_correlation(img, Direction::diagonal).value;
    r.entropy_bits = entropy_bits(img);
    return r;
}

int run_encrypt_decrypt(bool encrypt, const std::string& config, const std::string& input,
                        const std::string& output, int rounds_override,
                        const std::string& report_path) {
    ReportWriter report(encrypt ? "encrypt" : "decrypt");
    report.path = report_path;

    CipherPipeline pipe = load_pipeline(config);
    if (rounds_override > 0)
        pipe = CipherPipeline(pipe.length(), pipe.stages(), rounds_override);
    const ByteImage in = load_pgm(input);
    report.input_digest(input, in);

    const ByteImage out = encrypt ? pipe.encrypt(in) : pipe.decrypt(in);
    save_pgm(out, output);
    report.doc["outputs"] = {output};
    report.doc["metrics"] = {{"success", true}};
    std::cout << (encrypt ? "encrypted " : "decrypted ") << input << " -> " << output << "\n";
    return kExitOk;
}

int run_stats(const std::string& input, const std::string& config, int rounds_override,
              std::uint64_t /*seed*/, const std::string& report_path) {
    ReportWriter report(config.empty() ? "stats" : "stats+encrypt");
    report.path = report_path;

    const ByteImage plain = load_pgm(input);
    report.input_digest(input, plain);
    const StatsReport plain_stats = indicators(plain);
    report.doc["plaintext"] = stats_report_to_json(plain_stats);

    if (config.empty()) {
        print_stats_table(plain_stats, nullptr);
        report.doc["metrics"] = {{"success", true}};
        return kExitOk;
    }

    CipherPipeline pipe = load_pipeline(config);
    if (rounds_override > 0)
        pipe = CipherPipeline(pipe.length(), pipe.stages(), rounds_override);
    if (pipe.length() != plain.size())
        throw DimensionError("stats: pipeline length != image size");

    const ByteImage cipher = pipe.encrypt(plain);
    StatsReport cipher_stats = indicators(cipher);

    // Differential indicators: the center pixel shifted by +121 (odd, so the
    // differential lattice covers Z/256, and near 128 so early-feedback positions
    // contribute full-strength differences).
    ByteImage flipped = plain;
    const std::size_t center = (plain.height() / 2) * plain.width() + plain.width() / 2 + 1;
    flipped.pixel(center) = static_cast<std::uint8_t>(flipped.pixel(center) + 121);
    const ByteImage cipher2 = pipe.encrypt(flipped);
    cipher_stats.npcr_percent = npcr(cipher, cipher2);
    cipher_stats.uaci_percent = uaci(cipher, cipher2);
    cipher_stats.has_diff_stats = true;

    print_stats_table(plain_stats, &cipher_stats);
    std::cout << "  chi-square (cipher)   " << chi_square_uniform(cipher_stats.histogram)
              << " (pass < " << kChiSquare255Critical << ")\n";

    report.doc["ciphertext"] = stats_report_to_json(cipher_stats);
    report.doc["metrics"] = {{"success", true}};
    return kExitOk;
}

int run_attack_isbda(const std::string& oracle_config, std::size_t width, std::size_t height,
                     const std::string& report_path) {
    ReportWriter report("attack isbda");
    report.path = report_path;

    AttackOracle oracle(load_pipeline(oracle_config), width, height);
    const auto start = std::chrono::steady_clock::now();
    const IsbdaResult result = isbda_attack(oracle, width, height);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();

    std::cout << "isbda: recovered 3-stage pipeline in " << result.scan_encrypt_queries
              << " chosen-plaintext queries (+" << result.extra_encrypt_queries
              << " extra, " << result.decrypt_queries << " decrypt), " << ms << " ms\n";

    report.doc["payload"] = {
        {"pre_inverse", result.recovered.pre_perm.to_one_based()},
        {"diffusion_key", result.recovered.diffusion_key.values},
        {"post_inverse", result.recovered.post_perm.to_one_based()}};
    report.doc["metrics"] = {{"encrypt_queries", result.scan_encrypt_queries},
                             {"extra_encrypt_queries", result.extra_encrypt_queries},
                             {"decrypt_queries", result.decrypt_queries},
                             {"wall_ms", ms},
                             {"success", true}};
    return kExitOk;
}

int run_attack_chain(const std::string& oracle_config, const std::string& pattern_tokens,
                     std::size_t width, std::size_t height, const std::string& report_path) {
    ReportWriter report("attack chain");
    report.path = report_path;

    const StagePattern pattern(pattern_tokens);
    AttackOracle oracle(load_pipeline(oracle_config), width, height);
    const auto start = std::chrono::steady_clock::now();
    const ChainAttackResult result = chain_attack(oracle, pattern, width, height);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();

    std::cout << "chain: recovered " << result.layers.size() << " permutation layer(s) in "
              << result.decrypt_queries << " chosen-ciphertext queries, " << ms << " ms\n";
    std::cout << "  search steps " << result.stats.steps << ", backtracks "
              << result.stats.backtracks << ", candidates " << result.stats.chains_tried
              << (result.keys_gauge_free ? ", keys normalized from a gauge class" : "")
              << "\n";

    report.doc["payload"] = {{"layers", layers_to_json(result.layers)},
                             {"outer_key", result.outer_key.values},
                             {"inner_key", result.inner_key.values},
                             {"keys_gauge_free", result.keys_gauge_free}};
    report.doc["metrics"] = {{"decrypt_queries", result.decrypt_queries},
                             {"search_steps", result.stats.steps},
                             {"backtracks", result.stats.backtracks},
                             {"candidates", result.stats.chains_tried},
                             {"wall_ms", ms},
                             {"success", true}};
    return kExitOk;
}

int run_attack_keys(const std::string& oracle_config, const std::string& perms_path,
                    const std::string& pattern_tokens, const std::string& report_path) {
    ReportWriter report("attack keys");
    report.path = report_path;

    std::ifstream in(perms_path);
    if (!in) throw FormatError("cannot open " + perms_path);
    json doc;
    in >> doc;
    const StagePattern pattern(
        doc.contains("pattern") ? doc["pattern"].get<std::string>() : pattern_tokens);
    const auto layers = layers_from_json(doc.at("layers"));

    CipherPipeline hidden = load_pipeline(oracle_config);
    const std::size_t n = hidden.length();
    AttackOracle oracle(std::move(hidden), n, 1);
    const RecoveredKeys keys = recover_diffusion_keys(oracle, pattern, layers);

    const auto candidate =
        assemble_pipeline(pattern, layers, keys.outer_key, keys.inner_key, n);
    const auto equivalence = verify_equivalence(candidate, oracle, 100);

    std::cout << "keys: recovered " << (pattern.diffusion_count() == 1 ? "one stream" : "two streams")
              << " with " << keys.extra_decrypt_queries << " decrypt queries; equivalence "
              << (equivalence.equivalent ? "verified" : "FAILED") << "\n";

    report.doc["payload"] = {{"outer_key", keys.outer_key.values},
                             {"inner_key", keys.inner_key.values},
                             {"gauge_free", keys.gauge_free}};
    report.doc["metrics"] = {{"decrypt_queries", keys.extra_decrypt_queries},
                             {"equivalence_trials", equivalence.trials},
                             {"success", equivalence.equivalent}};
    return equivalence.equivalent ? kExitOk : kExitAttackInapplicable;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"permutation-diffusion cipher workbench: build, measure and break"};
    app.require_subcommand(1);

    std::string config, input, output, report_path, oracle_config, perms_path, image_path;
    std::string pattern_tokens = "PDPDP";
    std::string outdir = ".";
    std::size_t width = 64, height = 64;
    int rounds = 0;
    std::uint64_t seed = 1;

    auto add_report = [&](CLI::App* cmd) {
        cmd->add_option("--report", report_path, "write a JSON run report to this path");
    };

    auto* enc = app.add_subcommand("encrypt", "encrypt a PGM image with a pipeline config");
    enc->add_option("--config", config, "pipeline JSON")->required();
    enc->add_option("--input", input, "input PGM")->required();
    enc->add_option("--output", output, "output PGM")->required();
    enc->add_option("--rounds", rounds, "override the configured round count");
    add_report(enc);

    auto* dec = app.add_subcommand("decrypt", "decrypt a PGM image with a pipeline config");
    dec->add_option("--config", config, "pipeline JSON")->required();
    dec->add_option("--input", input, "input PGM")->required();
    dec->add_option("--output", output, "output PGM")->required();
    dec->add_option("--rounds", rounds, "override the configured round count");
    add_report(dec);

    auto* st = app.add_subcommand("stats", "statistical indicators of an image (and its ciphertext)");
    st->add_option("--input", input, "input PGM")->required();
    st->add_option("--config", config, "pipeline JSON; adds ciphertext-side indicators");
    st->add_option("--rounds", rounds, "override the configured round count");
    st->add_option("--seed", seed, "seed echoed into the report");
    add_report(st);

    auto* attack = app.add_subcommand("attack", "run a cryptanalytic attack against an oracle");
    attack->require_subcommand(1);

    auto* isbda_cmd = attack->add_subcommand("isbda", "impulse-step differential attack (3-stage)");
    isbda_cmd->add_option("--oracle", oracle_config, "hidden pipeline JSON")->required();
    isbda_cmd->add_option("--width", width, "image width")->required();
    isbda_cmd->add_option("--height", height, "image height")->required();
    add_report(isbda_cmd);

    auto* chain_cmd = attack->add_subcommand("chain", "chain attack (multi-stage)");
    chain_cmd->add_option("--oracle", oracle_config, "hidden pipeline JSON")->required();
    chain_cmd->add_option("--pattern", pattern_tokens, "stage pattern, e.g. PDPDP")->required();
    chain_cmd->add_option("--width", width, "image width")->required();
    chain_cmd->add_option("--height", height, "image height")->required();
    add_report(chain_cmd);

    auto* keys_cmd = attack->add_subcommand("keys", "diffusion key recovery from recovered permutations");
    keys_cmd->add_option("--oracle", oracle_config, "hidden pipeline JSON")->required();
    keys_cmd->add_option("--perms", perms_path, "recovered layers JSON")->required();
    keys_cmd->add_option("--pattern", pattern_tokens, "stage pattern if absent from --perms");
    add_report(keys_cmd);

    auto* demo = app.add_subcommand("demo", "worked demonstrations");
    demo->require_subcommand(1);

    auto* wex = demo->add_subcommand("worked-example", "nine-pixel five-stage chain-attack walkthrough");
    wex->add_option("--seed", seed, "key-stream seed");
    add_report(wex);

    auto* b3 = demo->add_subcommand("break3", "end-to-end break of a seeded 3-stage cipher");
    b3->add_option("--width", width, "image width");
    b3->add_option("--height", height, "image height");
    b3->add_option("--seed", seed, "instance seed");
    b3->add_option("--image", image_path, "plaintext PGM (default: bundled test image)");
    b3->add_option("--outdir", outdir, "output directory");
    add_report(b3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (enc->parsed())
            return run_encrypt_decrypt(true, config, input, output, rounds, report_path);
        if (dec->parsed())
            return run_encrypt_decrypt(false, config, input, output, rounds, report_path);
        if (st->parsed()) return run_stats(input, config, rounds, seed, report_path);
        if (isbda_cmd->parsed())
            return run_attack_isbda(oracle_config, width, height, report_path);
        if (chain_cmd->parsed())
            return run_attack_chain(oracle_config, pattern_tokens, width, height, report_path);
        if (keys_cmd->parsed())
            return run_attack_keys(oracle_config, perms_path, pattern_tokens, report_path);
        if (wex->parsed()) {
            ReportWriter report("demo worked-example");
            report.path = report_path;
            return demos::worked_example(seed, report.doc);
        }
        if (b3->parsed()) {
            ReportWriter report("demo break3");
            report.path = report_path;
            return demos::break3(width, height, seed, image_path, outdir, report.doc);
        }
    } catch (const AttackError& e) {
        std::cerr << "attack inapplicable: " << e.what() << "\n";
        return kExitAttackInapplicable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
