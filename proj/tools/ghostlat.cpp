// Command-line workbench: identity verification, sample dumps, experiments.
//
// Exit codes: 0 success, 1 verification failed, 2 usage error,
// 3 configuration error, 4 oracle capacity exceeded, 5 I/O error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghostlat/config.hpp"
#include "ghostlat/corpus.hpp"
#include "ghostlat/exact.hpp"
#include "ghostlat/experiments.hpp"
#include "ghostlat/geometry.hpp"
#include "ghostlat/lattice.hpp"
#include "ghostlat/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ghostlat;

namespace {

constexpr const char* kVersion = "ghostlat 0.1.0";

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kConfig = 3, kCapacity = 4, kIo = 5 };

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int workers = 0;
    double budget_scale = 1.0;
};

Config resolve_config(const CommonOpts& opts) {
    Config cfg = opts.config_path.empty() ? Config() : Config::load(opts.config_path);
    if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
    if (opts.workers > 0) cfg.set("workers", std::to_string(opts.workers));
    if (opts.budget_scale != 1.0) cfg.set("budget_scale", fmt_num(opts.budget_scale));
    if (!opts.out_dir.empty()) cfg.set("out", opts.out_dir);
    return cfg;
}

int resolved_workers(const Config& cfg) {
    long w = cfg.get_long("workers", 0);
    if (w > 0) return (int)w;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 1;
}

void write_file(const fs::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << data;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const Config& cfg,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = seed;
    m["config"] = json::object();
    for (auto& [k, v] : cfg.entries()) m["config"][k] = v;
    m["outputs"] = outputs;
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["wall_clock"] = buf;  // informational only; excluded from determinism checks
    write_file(dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// verify

std::vector<std::pair<std::string, GhostGraph>> load_verify_corpus(const Config& cfg) {
    std::vector<std::pair<std::string, GhostGraph>> graphs;
    if (cfg.has("verify.graphs")) {
        std::istringstream ss(cfg.get_str("verify.graphs"));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            std::ifstream in(tok);
            if (!in) throw std::runtime_error("cannot read graph file: " + tok);
            std::ostringstream body;
            body << in.rdbuf();
            graphs.emplace_back(tok, GhostGraph::parse(body.str()));
        }
        return graphs;
    }
    auto spacings = cfg.get_doubles("verify.spacings", {1.0, 0.5});
    auto fields = cfg.get_doubles("verify.fields", {0.0, 0.1, 0.7});
    for (const std::string& name : corpus_names())
        for (double a : spacings)
            for (double h : fields)
                graphs.emplace_back(name + " a=" + fmt_num(a) + " h=" + fmt_num(h),
                                    corpus_graph(name, a, h));
    return graphs;
}

int cmd_verify(const CommonOpts& opts) {
    Config cfg = resolve_config(opts);
    auto graphs = load_verify_corpus(cfg);
    if (graphs.empty()) {
        std::cerr << "verify: no graphs in corpus\n";
        return kVerifyFailed;
    }
    const double tol = cfg.get_double("verify.tolerance", 1e-10);
    const std::vector<exact::Identity> ids = {
        exact::Identity::ES,           exact::Identity::SWITCHING,
        exact::Identity::UEG,          exact::Identity::SECH,
        exact::Identity::GHS_MONOTONE, exact::Identity::FINITE_ENERGY,
        exact::Identity::PARITY};
    json report;
    report["graphs"] = graphs.size();
    report["tolerance"] = tol;
    bool all_ok = true;
    // structural validation first: identities hold for arbitrary couplings,
    // so corrupted constants are only caught here
    for (auto& [name, g] : graphs) {
        std::string diag = g.validate();
        if (!diag.empty()) {
            all_ok = false;
            report["structural_failures"].push_back({{"graph", name}, {"diagnostic", diag}});
            std::cerr << "verify: " << name << ": " << diag << "\n";
        }
    }
    for (exact::Identity id : ids) {
        double worst = 0;
        std::string worst_graph;
        for (auto& [name, g] : graphs) {
            double dev = exact::verify_identity(g, id);
            if (dev >= worst) {
                worst = dev;
                worst_graph = name;
            }
        }
        bool ok = worst <= tol;
        all_ok = all_ok && ok;
        report["identities"].push_back({{"identity", exact::identity_name(id)},
                                        {"worst_deviation", worst},
                                        {"worst_graph", worst_graph},
                                        {"pass", ok}});
        std::cout << exact::identity_name(id) << ": worst " << fmt_num(worst) << " on "
                  << worst_graph << (ok ? " [pass]" : " [FAIL]") << "\n";
    }
    report["pass"] = all_ok;
    fs::create_directories(opts.out_dir);
    write_file(fs::path(opts.out_dir) / "verify_report.json", report.dump(2) + "\n");
    return all_ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// sample

GhostGraph graph_from_config(const Config& cfg) {
    const double a = cfg.get_double("sample.spacing", 1.0);
    const double h = cfg.get_double("sample.field", 0.0);
    if (cfg.has("sample.graph_file")) {
        std::string path = cfg.get_str("sample.graph_file");
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read graph file: " + path);
        std::ostringstream body;
        body << in.rdbuf();
        return GhostGraph::parse(body.str());
    }
    if (cfg.has("sample.graph")) return corpus_graph(cfg.get_str("sample.graph"), a, h);
    const long n = cfg.get_long("sample.size", 16);
    return GhostGraph::build(Rect(0, 0, (double)(n - 1) * a, (double)(n - 1) * a), a, h);
}

// bit-packed bond configurations with a self-describing header
void dump_samples(std::ostream& out, const GhostGraph& g, std::uint64_t seed,
                  const std::vector<BondConfig>& samples) {
    out << "glsd 1\n";
    out << "graph_hash " << g.hash() << "\n";
    out << "seed " << seed << "\n";
    out << "edges " << g.edge_count() << "\n";
    out << "samples " << samples.size() << "\n";
    for (const BondConfig& w : samples) {
        std::string packed((w.size() + 7) / 8, '\0');
        for (std::size_t e = 0; e < w.size(); ++e)
            if (w[e]) packed[e / 8] |= (char)(1 << (e % 8));
        out.write(packed.data(), (std::streamsize)packed.size());
    }
}

int cmd_sample(const CommonOpts& opts) {
    Config cfg = resolve_config(opts);
    const std::uint64_t seed = cfg.require_u64("seed");
    GhostGraph g = graph_from_config(cfg);
    const std::string what = cfg.get_str("sample.representation", "fk");
    const std::string bc_name = cfg.get_str("sample.bc", "free");
    if (bc_name != "free" && bc_name != "wired")
        throw config_error("sample.bc must be free or wired");
    const SampleBc bc = bc_name == "wired" ? SampleBc::Wired : SampleBc::Free;
    const long count = cfg.get_long("sample.count", 100);
    const int thin = (int)cfg.get_long("sample.thin", 1);
    const long burn = cfg.get_long("sample.burnin", default_burnin(g));
    if (count <= 0 || thin <= 0) throw config_error("sample.count and sample.thin must be > 0");

    RngStream rng(seed, 0);
    std::vector<BondConfig> samples;
    samples.reserve((std::size_t)count);
    if (what == "fk") {
        FkChain fk(g, bc, rng);
        fk.burn((int)burn);
        for (long i = 0; i < count; ++i) samples.push_back(fk.next(thin));
    } else if (what == "trace") {
        if (bc == SampleBc::Wired) throw config_error("current traces use free boundary");
        FkChain fk(g, bc, rng.substream(0));
        fk.burn((int)burn);
        RngStream aux = rng.substream(1);
        for (long i = 0; i < count; ++i) {
            BondConfig omega = fk.next(thin);
            samples.push_back(sech_augment(uniform_even_subgraph(omega, g, aux), g, aux));
        }
    } else {
        throw config_error("sample.representation must be fk or trace");
    }

    fs::create_directories(opts.out_dir);
    fs::path path = fs::path(opts.out_dir) / "samples.glsd";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    dump_samples(out, g, seed, samples);
    if (!out) throw std::runtime_error("write failed: " + path.string());
    write_manifest(opts.out_dir, "sample", cfg, seed, {"samples.glsd"});
    std::cout << "wrote " << count << " " << what << " samples to " << path.string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// experiment

json fit_json(const FitResult& f) {
    return {{"slope", f.slope},
            {"intercept", f.intercept},
            {"se_slope", f.se_slope},
            {"se_intercept", f.se_intercept},
            {"points", f.points},
            {"ok", f.ok}};
}

int cmd_experiment(const std::string& name, const CommonOpts& opts) {
    Config cfg = resolve_config(opts);
    const std::uint64_t seed = cfg.require_u64("seed");
    const int workers = resolved_workers(cfg);
    const double scale = cfg.get_double("budget_scale", 1.0);
    if (!(scale > 0)) throw config_error("budget_scale must be positive");

    std::string csv;
    json summary;
    summary["experiment"] = name;
    summary["seed"] = seed;

    if (name == "decay") {
        DecayResult r = decay_scan(DecayParams::from_config(cfg, scale), seed, workers);
        csv = r.csv();
        for (auto& f : r.fits)
            summary["fits"].push_back({{"h", f.h},
                                       {"fitted", f.fitted},
                                       {"m", f.m},
                                       {"ratio", f.ratio},
                                       {"window", {f.window_lo, f.window_hi}},
                                       {"fit", fit_json(f.fit)}});
        summary["zero_field_flat"] = r.zero_field_flat;
        summary["band_ok"] = r.band_ok;
        summary["band_spread"] = r.band_spread;
        summary["pass"] = r.band_ok && r.zero_field_flat;
    } else if (name == "onearm") {
        OnearmResult r = onearm_scan(OnearmParams::from_config(cfg, scale), seed, workers);
        csv = r.csv();
        summary["fit"] = fit_json(r.fit);
        summary["exponent"] = r.exponent;
        summary["monotone"] = r.monotone;
        summary["envelope_ok"] = r.envelope_ok;
        summary["pass"] = r.fit.ok && r.exponent > 0.095 && r.exponent < 0.155;
    } else if (name == "rsw") {
        RswResult r = rsw_probe(RswParams::from_config(cfg, scale), seed, workers);
        csv = r.csv();
        summary["min_lower"] = r.min_lower;
        summary["threshold"] = r.params.threshold;
        summary["positive"] = r.positive;
        summary["pass"] = r.positive;
    } else if (name == "hR") {
        HrResult r = hR_probe(HrParams::from_config(cfg, scale), seed, workers);
        csv = r.csv();
        summary["e1_positive"] = r.e1_positive;
        summary["h_positive"] = r.h_positive;
        summary["h_stable"] = r.h_stable;
        summary["n_stable"] = r.n_stable;
        summary["m1_band_ok"] = r.m1_band_ok;
        summary["m2_bounded"] = r.m2_bounded;
        summary["pass"] = r.e1_positive && r.h_positive && r.h_stable && r.n_stable &&
                          r.m1_band_ok && r.m2_bounded;
    } else if (name == "loops") {
        LoopCountResult r = loop_count_probe(LoopCountParams::from_config(cfg, scale), seed,
                                             workers);
        csv = r.csv();
        summary["fit"] = fit_json(r.fit);
        summary["decreasing"] = r.decreasing;
        summary["pass"] = r.decreasing;
    } else {
        std::cerr << "unknown experiment: " << name
                  << " (expected decay|onearm|rsw|hR|loops)\n";
        return kUsage;
    }

    fs::create_directories(opts.out_dir);
    const std::string csv_name = name + ".csv", json_name = name + "_summary.json";
    write_file(fs::path(opts.out_dir) / csv_name, csv);
    write_file(fs::path(opts.out_dir) / json_name, summary.dump(2) + "\n");
    write_manifest(opts.out_dir, "experiment " + name, cfg, seed, {csv_name, json_name});
    std::cout << name << ": " << (summary["pass"].get<bool>() ? "pass" : "FAIL") << ", outputs in "
              << opts.out_dir << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical Ising workbench: graphical representations, exact small-graph "
                 "verification, Monte Carlo experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "configuration file (key=value sections)");
        sub->add_option("--seed", opts.seed, "master seed (overrides config)");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--workers", opts.workers, "parallel worker cap (default: cores)");
        sub->add_option("--budget-scale", opts.budget_scale,
                        "multiply all sweep/sample budgets (smoke runs)");
    };
    CLI::App* verify = app.add_subcommand("verify", "run the exact identity suite on the corpus");
    add_common(verify);
    CLI::App* sample = app.add_subcommand("sample", "draw and dump Monte Carlo samples");
    add_common(sample);
    CLI::App* experiment = app.add_subcommand("experiment", "run a named experiment");
    std::string exp_name;
    experiment->add_option("name", exp_name, "decay|onearm|rsw|hR|loops")->required();
    add_common(experiment);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(opts);
        if (sample->parsed()) return cmd_sample(opts);
        return cmd_experiment(exp_name, opts);
    } catch (const exact::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    }
}
