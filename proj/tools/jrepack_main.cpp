// jrepack command-line front end: compress / decompress / analyze / bench.
//
// Exit codes: 0 success, 2 usage or input problem (including unsupported
// JPEG), 3 corrupt container, 4 verify mismatch.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jrepack/jrepack.hpp"

namespace fs = std::filesystem;
using jrepack::Bytes;

namespace {

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw jrepack::Error("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const Bytes& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw jrepack::Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw jrepack::Error("write failed for " + path);
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw jrepack::Error("cannot write " + path);
    out << text;
}

double gain_percent(std::size_t original, std::size_t recompressed) {
    return (1.0 - static_cast<double>(recompressed) / static_cast<double>(original)) * 100.0;
}

struct CompressCli {
    jrepack::container::Options opts;
    bool force_msac = false;
    bool force_rlgr = false;
    std::string config_path;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--alpha", opts.params.alpha, "smoothing weight (0,1)");
        cmd->add_option("--blend-a", opts.params.blend_a, "horizontal/vertical blend weight");
        cmd->add_option("--blend-b", opts.params.blend_b, "diagonal blend weight");
        cmd->add_option("--gamma", opts.params.gamma, "cross-bucket smoothing weight");
        cmd->add_option("--sigma-init", opts.params.sigma_init, "initial sigma per bucket");
        cmd->add_option("--sigma-min", opts.params.sigma_min, "sigma floor");
        cmd->add_option("--threshold", opts.zero_threshold,
                        "zero fraction above which a bucket uses the run-length coder");
        cmd->add_flag("--cross-bucket", opts.params.cross_bucket, "enable cross-bucket prediction");
        cmd->add_flag("--sorting", opts.sorting, "sort run-length buckets by the previous bucket");
        cmd->add_flag("--variance-mode", opts.params.variance_mode,
                      "smooth variances instead of scales");
        auto* fm = cmd->add_flag("--force-msac", force_msac, "use the arithmetic coder for all buckets");
        auto* fr = cmd->add_flag("--force-rlgr", force_rlgr, "use the run-length coder for all buckets");
        fm->excludes(fr);
        fr->excludes(fm);
        cmd->add_option("--config", config_path, "key=value file with parameter defaults");
    }

    // config file supplies defaults; explicit flags win
    void apply_config(const CLI::App* cmd) {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw jrepack::Error("cannot open config " + config_path);
        std::map<std::string, std::string> kv;
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        auto set_num = [&](const char* key, const char* flag, double& target) {
            const auto it = kv.find(key);
            if (it != kv.end() && cmd->count(flag) == 0) target = std::stod(it->second);
        };
        auto set_bool = [&](const char* key, const char* flag, bool& target) {
            const auto it = kv.find(key);
            if (it != kv.end() && cmd->count(flag) == 0)
                target = it->second == "1" || it->second == "true" || it->second == "on";
        };
        set_num("alpha", "--alpha", opts.params.alpha);
        set_num("blend_a", "--blend-a", opts.params.blend_a);
        set_num("blend_b", "--blend-b", opts.params.blend_b);
        set_num("gamma", "--gamma", opts.params.gamma);
        set_num("sigma_init", "--sigma-init", opts.params.sigma_init);
        set_num("sigma_min", "--sigma-min", opts.params.sigma_min);
        set_num("threshold", "--threshold", opts.zero_threshold);
        set_bool("cross_bucket", "--cross-bucket", opts.params.cross_bucket);
        set_bool("sorting", "--sorting", opts.sorting);
        set_bool("variance_mode", "--variance-mode", opts.params.variance_mode);
    }

    jrepack::container::Options options() const {
        jrepack::container::Options o = opts;
        if (force_msac) o.force = jrepack::container::Options::Force::kMsac;
        if (force_rlgr) o.force = jrepack::container::Options::Force::kRlgr;
        return o;
    }
};

int cmd_compress(const std::string& input, const std::string& output, const CompressCli& cli) {
    Bytes in;
    try {
        in = read_file(input);
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    try {
        const Bytes out = jrepack::container::compress(in, cli.options());
        write_file(output, out);
        std::fprintf(stderr, "original %zu bytes, recompressed %zu bytes, gain %.2f%%\n",
                     in.size(), out.size(), gain_percent(in.size(), out.size()));
        return 0;
    } catch (const jrepack::UnsupportedJpeg& e) {
        std::fprintf(stderr, "unsupported JPEG: %s\n", e.what());
        return 2;
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int cmd_decompress(const std::string& input, const std::string& output,
                   const std::string& verify) {
    Bytes in;
    try {
        in = read_file(input);
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    Bytes out;
    try {
        out = jrepack::container::decompress(in);
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "corrupt container: %s\n", e.what());
        return 3;
    }
    try {
        write_file(output, out);
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    if (!verify.empty()) {
        Bytes ref;
        try {
            ref = read_file(verify);
        } catch (const jrepack::Error& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
        if (ref != out) {
            std::fprintf(stderr, "verify failed: output differs from %s\n", verify.c_str());
            return 4;
        }
        std::fprintf(stderr, "verify ok: output matches %s\n", verify.c_str());
    }
    return 0;
}

int cmd_analyze(const std::string& input, const std::string& report, const std::string& out_path,
                int component, int bucket, bool deltas, int bootstrap, double alpha, double beta,
                double scale, int kmax, std::uint64_t trials, std::uint64_t seed) {
    using namespace jrepack;
    try {
        if (report == "process") {
            const auto rep = stats::simulate_sigma_process(alpha, beta, scale, kmax,
                                                           static_cast<std::size_t>(trials), seed);
            write_text(out_path, stats::process_csv(rep));
            return 0;
        }
        const Bytes in = read_file(input);
        const jpeg::QuantizedImage img = jpeg::parse_jpeg(in);
        if (component < 0 || component >= static_cast<int>(img.components.size()))
            throw Error("component out of range");
        if (report == "corr") {
            const auto rep = stats::bucket_correlations(img, component, bootstrap, seed);
            write_text(out_path, stats::correlation_csv(rep));
        } else if (report == "stdmap") {
            write_text(out_path, stats::std_map_csv(stats::position_std_map(img, component)));
        } else if (report == "overlay") {
            coeff::BucketView view(img.components[static_cast<std::size_t>(component)], component,
                                   bucket);
            const auto vals = view.to_vector();
            write_text(out_path, stats::overlay_csv(stats::distribution_overlay(vals, deltas)));
        } else if (report == "zeros") {
            write_text(out_path, stats::zero_fractions_csv(stats::zero_fractions(img, component)));
        } else {
            std::fprintf(stderr, "unknown report type: %s\n", report.c_str());
            return 2;
        }
        return 0;
    } catch (const jrepack::UnsupportedJpeg& e) {
        std::fprintf(stderr, "unsupported JPEG: %s\n", e.what());
        return 2;
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int cmd_bench(const std::string& dir, const std::string& json_path, const CompressCli& cli) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) {
        std::fprintf(stderr, "error: cannot read directory %s\n", dir.c_str());
        return 2;
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::fprintf(stderr, "error: no files in %s\n", dir.c_str());
        return 2;
    }

    nlohmann::json jfiles = nlohmann::json::array();
    double gain_sum = 0.0;
    std::size_t ok_count = 0;
    std::printf("%-24s %12s %14s %8s\n", "image name", "original", "re-compressed", "gain, %");
    for (const auto& f : files) {
        const std::string name = f.filename().string();
        try {
            const Bytes in = read_file(f.string());
            const Bytes out = jrepack::container::compress(in, cli.options());
            const double g = gain_percent(in.size(), out.size());
            gain_sum += g;
            ++ok_count;
            std::printf("%-24s %12zu %14zu %8.2f\n", name.c_str(), in.size(), out.size(), g);
            jfiles.push_back({{"name", name},
                              {"original", in.size()},
                              {"recompressed", out.size()},
                              {"gain_percent", g}});
        } catch (const jrepack::Error& e) {
            std::printf("%-24s %12s %14s %8s  (%s)\n", name.c_str(), "-", "-", "error", e.what());
            jfiles.push_back({{"name", name}, {"error", e.what()}});
        }
    }
    if (ok_count == 0) {
        std::fprintf(stderr, "error: no file could be processed\n");
        return 2;
    }
    const double mean = gain_sum / static_cast<double>(ok_count);
    std::printf("%-24s %12s %14s %8.2f\n", "average", "", "", mean);

    if (!json_path.empty()) {
        nlohmann::json j{{"files", jfiles}, {"mean_gain_percent", mean}, {"count", ok_count}};
        write_text(json_path, j.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lossless JPEG re-compressor"};
    app.require_subcommand(1);

    // compress
    auto* comp = app.add_subcommand("compress", "re-compress a baseline JPEG");
    std::string c_in, c_out;
    comp->add_option("input", c_in, "input JPEG")->required();
    comp->add_option("output", c_out, "output container")->required();
    CompressCli c_cli;
    c_cli.add_options(comp);

    // decompress
    auto* dec = app.add_subcommand("decompress", "restore the original JPEG");
    std::string d_in, d_out, d_verify;
    dec->add_option("input", d_in, "input container")->required();
    dec->add_option("output", d_out, "output JPEG")->required();
    dec->add_option("--verify", d_verify, "reference file to byte-compare against");

    // analyze
    auto* ana = app.add_subcommand("analyze", "statistics reports (CSV)");
    std::string a_in, a_report, a_out = "-";
    int a_component = 0, a_bucket = 0, a_bootstrap = 32, a_kmax = 100;
    bool a_deltas = false;
    double a_alpha = 0.5, a_beta = 1.0, a_scale = 1.0;
    std::uint64_t a_trials = 10000, a_seed = 1;
    ana->add_option("input", a_in, "input JPEG (not needed for --report process)");
    ana->add_option("--report", a_report, "corr | stdmap | overlay | zeros | process")->required();
    ana->add_option("--out", a_out, "output file ('-' = stdout)");
    ana->add_option("--component", a_component, "component index");
    ana->add_option("--bucket", a_bucket, "bucket for the overlay report");
    ana->add_flag("--deltas", a_deltas, "difference the bucket before the overlay");
    ana->add_option("--bootstrap", a_bootstrap, "bootstrap draws for stderr");
    ana->add_option("--alpha", a_alpha, "process simulation alpha");
    ana->add_option("--beta", a_beta, "process simulation beta");
    ana->add_option("--scale", a_scale, "Laplace scale of the Z samples");
    ana->add_option("--kmax", a_kmax, "number of process steps");
    ana->add_option("--trials", a_trials, "Monte-Carlo trials");
    ana->add_option("--seed", a_seed, "RNG seed");

    // bench
    auto* ben = app.add_subcommand("bench", "re-compress every file in a directory");
    std::string b_dir, b_json;
    ben->add_option("dir", b_dir, "directory of JPEG files")->required();
    ben->add_option("--json", b_json, "write a machine-readable summary to this file");
    CompressCli b_cli;
    b_cli.add_options(ben);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (comp->parsed()) {
            c_cli.apply_config(comp);
            return cmd_compress(c_in, c_out, c_cli);
        }
        if (dec->parsed()) return cmd_decompress(d_in, d_out, d_verify);
        if (ana->parsed()) {
            if (a_report != "process" && a_in.empty()) {
                std::fprintf(stderr, "error: input JPEG required for report %s\n",
                             a_report.c_str());
                return 2;
            }
            return cmd_analyze(a_in, a_report, a_out, a_component, a_bucket, a_deltas, a_bootstrap,
                               a_alpha, a_beta, a_scale, a_kmax, a_trials, a_seed);
        }
        if (ben->parsed()) {
            b_cli.apply_config(ben);
            return cmd_bench(b_dir, b_json, b_cli);
        }
    } catch (const jrepack::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
