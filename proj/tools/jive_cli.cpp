// Command-line front end: generate instances, run estimators, run sweeps and
// figure presets, verify identifiability, check Gaussian moment identities,
// fit scaling-law slopes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jive/bench.hpp"
#include "jive/estimators.hpp"
#include "jive/kernels.hpp"
#include "jive/linalg.hpp"
#include "jive/metrics.hpp"
#include "jive/model.hpp"
#include "jive/moments.hpp"
#include "jive/rng.hpp"

namespace fs = std::filesystem;
using namespace jive;

namespace {

std::string meta_text(const JiveConfig& c, const GroundTruth& t) {
    std::ostringstream out;
    out << "n=" << c.n << "\n";
    out << "d=" << c.d << "\n";
    out << "K=" << c.K << "\n";
    out << "r=" << c.r << "\n";
    out << "rk=" << c.r_k << "\n";
    out << "theta=" << format_double(c.theta) << "\n";
    out << "sigma=" << format_double(c.sigma) << "\n";
    out << "gamma=" << format_double(c.gamma) << "\n";
    out << "misalign_scheme=" << to_string(c.misalign) << "\n";
    out << "loading_scheme=" << to_string(c.loading) << "\n";
    out << "seed=" << c.seed << "\n";
    out << "measured_theta=" << format_double(t.measured_theta) << "\n";
    out << "sigma_min=" << format_double(t.sigma_min) << "\n";
    out << "sigma_max=" << format_double(t.sigma_max) << "\n";
    out << "kappa=" << format_double(t.kappa) << "\n";
    return out.str();
}

std::map<std::string, std::string> read_meta(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("bad meta line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

JiveConfig config_from_meta(const std::map<std::string, std::string>& kv) {
    JiveConfig c;
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw IoError("meta missing key: " + key);
        return it->second;
    };
    c.n = std::stoull(need("n"));
    c.d = std::stoull(need("d"));
    c.K = std::stoull(need("K"));
    c.r = std::stoull(need("r"));
    c.r_k = std::stoull(need("rk"));
    c.theta = std::stod(need("theta"));
    c.sigma = std::stod(need("sigma"));
    c.gamma = std::stod(need("gamma"));
    c.misalign = parse_misalign_scheme(need("misalign_scheme"));
    c.loading = parse_loading_scheme(need("loading_scheme"));
    c.seed = std::stoull(need("seed"));
    return c;
}

struct GenArgs {
    JiveConfig cfg;
    std::string misalign = "randomized";
    std::string loading = "random";
    std::string out;
};

struct EstimateArgs {
    std::string method = "ajive";
    std::string in;
    std::string out;
    std::size_t r_override = 0;
    std::size_t rk_override = 0;
};

struct SweepArgs {
    JiveConfig cfg;
    std::string misalign = "randomized";
    std::string loading = "random";
    std::string axis = "n";
    std::string values;
    std::string methods = "ajive";
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string out;
    bool timing = false;
};

struct PresetArgs {
    std::string name;
    std::size_t trials = 0;  // 0 = keep preset default
    std::uint64_t seed = 0;
    std::string out;
    bool timing = false;
};

struct VerifyArgs {
    std::string in;
};

struct MomentsArgs {
    std::string identity = "EAET";
    std::size_t samples = 1000000;
    std::uint64_t seed = 1;
    std::size_t n1 = 3;
    std::size_t n2 = 4;
    double sigma = 1.0;
};

struct SlopeArgs {
    std::string csv;
    std::string method = "ajive";
};

std::vector<double> parse_value_list(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            const std::string tok = s.substr(start, i - start);
            if (!tok.empty()) out.push_back(std::stod(tok));
            start = i + 1;
        }
    }
    if (out.empty()) throw InvalidConfig("empty value list");
    return out;
}

std::vector<Method> parse_method_list(const std::string& s) {
    std::vector<Method> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            const std::string tok = s.substr(start, i - start);
            if (!tok.empty()) out.push_back(parse_method(tok));
            start = i + 1;
        }
    }
    if (out.empty()) throw InvalidConfig("no methods given");
    return out;
}

int run_gen(GenArgs& a) {
    a.cfg.misalign = parse_misalign_scheme(a.misalign);
    a.cfg.loading = parse_loading_scheme(a.loading);
    const Dataset ds = generate(a.cfg);
    const fs::path dir(a.out);
    fs::create_directories(dir);
    for (std::size_t k = 0; k < ds.a.size(); ++k) {
        write_matrix(dir / ("A_" + std::to_string(k) + ".mat"), ds.a[k]);
    }
    write_matrix(dir / "u_star.mat", ds.truth->u_star.mat());
    std::ofstream meta(dir / "truth.meta");
    if (!meta) throw IoError("cannot write truth.meta");
    meta << meta_text(ds.config, *ds.truth);
    std::cout << "out=" << dir.string() << " K=" << ds.a.size()
              << " measured_theta=" << format_double(ds.truth->measured_theta)
              << " sigma_min=" << format_double(ds.truth->sigma_min) << "\n";
    return 0;
}

int run_estimate(EstimateArgs& a) {
    const fs::path dir(a.in);
    const auto kv = read_meta(dir / "truth.meta");
    const JiveConfig cfg = config_from_meta(kv);
    const std::size_t r = a.r_override ? a.r_override : cfg.r;
    const std::size_t rk = a.rk_override ? a.rk_override : cfg.r_k;

    Dataset ds;
    ds.config = cfg;
    ds.a.reserve(cfg.K);
    for (std::size_t k = 0; k < cfg.K; ++k) {
        ds.a.push_back(read_matrix(dir / ("A_" + std::to_string(k) + ".mat")));
    }
    const std::vector<std::size_t> r_k_list(cfg.K, rk);

    const fs::path u_star_path = dir / "u_star.mat";
    std::optional<OrthonormalBasis> u_star;
    if (fs::exists(u_star_path)) u_star.emplace(read_matrix(u_star_path));

    const auto t0 = std::chrono::steady_clock::now();
    Estimate est = [&] {
        if (a.method == "ajive") return ajive(ds, r, r_k_list);
        if (a.method == "stacked") return stacked_svd(ds, r);
        if (a.method == "oracle") {
            if (!u_star) throw IoError("oracle method needs u_star.mat in the input directory");
            return oracle_estimate(ds, r, r_k_list, *u_star);
        }
        throw InvalidConfig("unknown method: " + a.method);
    }();
    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const fs::path out = a.out.empty() ? dir / "u_hat.mat" : fs::path(a.out);
    write_matrix(out, est.u_hat.mat());

    const double err =
        u_star ? subspace_error(est.u_hat, *u_star) : std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
    if (est.aggregate_eigenvalues.size() > r) {
        gap = est.aggregate_eigenvalues[r - 1] - est.aggregate_eigenvalues[r];
    }
    std::cout << "method=" << a.method << " error=" << format_double(err)
              << " gap=" << format_double(gap) << " wall_ms=" << format_double(wall_ms)
              << " degenerate_gap=" << (est.degenerate_gap ? 1 : 0) << "\n";
    return 0;
}

int run_sweep_cmd(SweepArgs& a) {
    SweepConfig cfg;
    cfg.base = a.cfg;
    cfg.base.misalign = parse_misalign_scheme(a.misalign);
    cfg.base.loading = parse_loading_scheme(a.loading);
    cfg.axis = parse_axis(a.axis);
    cfg.axis_values = parse_value_list(a.values);
    cfg.methods = parse_method_list(a.methods);
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.record_timing = a.timing;
    const auto records = run_sweep(cfg);
    write_sweep_outputs(a.out, records, cfg.axis);
    std::cout << "csv=" << a.out << " rows=" << records.size() << "\n";
    return 0;
}

int run_preset(PresetArgs& a) {
    SweepConfig cfg = preset(a.name);
    if (a.trials) cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.record_timing = a.timing;
    const std::string out = a.out.empty() ? a.name + ".csv" : a.out;
    const auto records = run_sweep(cfg);
    write_sweep_outputs(out, records, cfg.axis);
    std::cout << "csv=" << out << " rows=" << records.size() << "\n";
    return 0;
}

int run_verify(VerifyArgs& a) {
    const fs::path dir(a.in);
    const auto kv = read_meta(dir / "truth.meta");
    const JiveConfig cfg = config_from_meta(kv);
    const Dataset ds = generate(cfg);
    const IdentifiabilityReport rep = identifiability_check(*ds.truth);
    std::cout << rep.to_string();
    return 0;
}

int run_moments(MomentsArgs& a) {
    const MomentIdentity id = parse_moment_identity(a.identity);
    const MomentShapes shp = moment_shapes(id, a.n1, a.n2);
    Rng rng(Rng::derive(a.seed, {0xABC}));
    auto random_matrix = [&](std::size_t rr, std::size_t cc) {
        Matrix m(rr, cc);
        for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.next_gaussian();
        return m;
    };
    const Matrix am = random_matrix(shp.a_rows, shp.a_cols);
    std::optional<Matrix> bm, cm;
    if (shp.degree == 4) {
        bm = random_matrix(shp.b_rows, shp.b_cols);
        cm = random_matrix(shp.c_rows, shp.c_cols);
    }
    const MomentReport rep = mc_verify(id, am, bm ? &*bm : nullptr, cm ? &*cm : nullptr, a.sigma,
                                       a.n1, a.n2, a.samples, a.seed);
    const bool pass = rep.max_abs_dev <= 5.0 * rep.max_std_err || rep.max_abs_dev == 0.0;
    std::cout << "identity=" << to_string(id) << " n1=" << a.n1 << " n2=" << a.n2
              << " sigma=" << format_double(a.sigma) << " samples=" << rep.samples
              << " max_abs_dev=" << format_double(rep.max_abs_dev)
              << " max_std_err=" << format_double(rep.max_std_err)
              << " pass=" << (pass ? 1 : 0) << "\n";
    return pass ? 0 : 2;
}

int run_slope(SlopeArgs& a) {
    std::ifstream in(a.csv);
    if (!in) throw IoError("cannot open: " + a.csv);
    std::ostringstream ss;
    ss << in.rdbuf();
    const ParsedSweep sweep = parse_csv(ss.str());
    const SlopeFit fit = fit_loglog(sweep.records, parse_method(a.method));
    std::cout << "slope=" << format_double(fit.slope)
              << " intercept=" << format_double(fit.intercept)
              << " r_squared=" << format_double(fit.r_squared) << "\n";
    return 0;
}

void add_base_config_flags(CLI::App* cmd, JiveConfig& cfg, std::string& misalign,
                           std::string& loading) {
    cmd->add_option("--n", cfg.n, "Row dimension");
    cmd->add_option("--d", cfg.d, "Column dimension (common across matrices)");
    cmd->add_option("--K", cfg.K, "Number of matrices");
    cmd->add_option("--r", cfg.r, "Shared rank");
    cmd->add_option("--rk", cfg.r_k, "Unique rank (common)");
    cmd->add_option("--theta", cfg.theta, "Target misalignment in (0, 1-1/K]");
    cmd->add_option("--sigma", cfg.sigma, "Noise standard deviation");
    cmd->add_option("--gamma", cfg.gamma, "Unique-loading scale");
    cmd->add_option("--misalign", misalign, "Misalignment scheme: randomized|twogroup");
    cmd->add_option("--loading", loading, "Loading scheme: random|shared|oraclehard");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "jive: shared-subspace estimation workbench (instances, estimators, sweeps).\n"
        "Environment: JIVE_THREADS caps sweep parallelism (0 = auto);\n"
        "JIVE_KERNELS=scalar|avx2 pins the kernel backend."};
    app.name("jive");
    app.require_subcommand(1);
    int rc = 0;

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance; writes A_<k>.mat, "
                                              "u_star.mat and truth.meta");
    add_base_config_flags(gen_cmd, gen_args.cfg, gen_args.misalign, gen_args.loading);
    gen_cmd->add_option("--seed", gen_args.cfg.seed, "Instance seed");
    gen_cmd->add_option("--out", gen_args.out, "Output directory")->required();
    gen_cmd->callback([&] { rc = run_gen(gen_args); });

    EstimateArgs est_args;
    auto* est_cmd = app.add_subcommand(
        "estimate", "Run an estimator on an instance directory; writes u_hat.mat and prints "
                    "a one-line report");
    est_cmd->add_option("--method", est_args.method, "ajive|oracle|stacked")->required();
    est_cmd->add_option("--in", est_args.in, "Instance directory (from gen)")->required();
    est_cmd->add_option("--out", est_args.out, "Output path for u_hat.mat");
    est_cmd->add_option("--r", est_args.r_override, "Override shared rank");
    est_cmd->add_option("--rk", est_args.rk_override, "Override unique rank");
    est_cmd->callback([&] { rc = run_estimate(est_args); });

    SweepArgs sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Run a custom parameter sweep; writes CSV + plot data");
    add_base_config_flags(sweep_cmd, sweep_args.cfg, sweep_args.misalign, sweep_args.loading);
    sweep_cmd->add_option("--axis", sweep_args.axis, "Sweep axis: n|K|theta|sigma|d")->required();
    sweep_cmd->add_option("--values", sweep_args.values, "Comma-separated axis values")
        ->required();
    sweep_cmd->add_option("--methods", sweep_args.methods,
                          "Comma-separated methods (ajive,oracle,stacked)");
    sweep_cmd->add_option("--trials", sweep_args.trials, "Trials per cell");
    sweep_cmd->add_option("--seed", sweep_args.seed, "Master seed");
    sweep_cmd->add_option("--out", sweep_args.out, "Output CSV path")->required();
    sweep_cmd->add_flag("--timing", sweep_args.timing,
                        "Record measured wall times (off keeps CSV deterministic)");
    sweep_cmd->callback([&] { rc = run_sweep_cmd(sweep_args); });

    PresetArgs preset_args;
    auto* preset_cmd =
        app.add_subcommand("preset", "Run a named figure preset sweep (fig1a fig1b fig2a fig2b "
                                     "fig2c fig3a fig3b fig5a fig5b)");
    preset_cmd->add_option("name", preset_args.name, "Preset name")->required();
    preset_cmd->add_option("--trials", preset_args.trials, "Override trials per cell");
    preset_cmd->add_option("--seed", preset_args.seed, "Master seed");
    preset_cmd->add_option("--out", preset_args.out, "Output CSV path (default <name>.csv)");
    preset_cmd->add_flag("--timing", preset_args.timing,
                         "Record measured wall times (off keeps CSV deterministic)");
    preset_cmd->callback([&] { rc = run_preset(preset_args); });

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand(
        "verify", "Regenerate the instance from truth.meta and print the identifiability report");
    verify_cmd->add_option("--in", verify_args.in, "Instance directory (from gen)")->required();
    verify_cmd->callback([&] { rc = run_verify(verify_args); });

    MomentsArgs moments_args;
    auto* moments_cmd = app.add_subcommand(
        "moments", "Monte-Carlo check of one Gaussian moment identity (key=value report)");
    moments_cmd
        ->add_option("--identity", moments_args.identity,
                     "EAE|EAET|TrEAE|D4_1..D4_8|Odd3")
        ->required();
    moments_cmd->add_option("--samples", moments_args.samples, "Sample count (>= 1e4)");
    moments_cmd->add_option("--seed", moments_args.seed, "Stream seed");
    moments_cmd->add_option("--n1", moments_args.n1, "Noise rows");
    moments_cmd->add_option("--n2", moments_args.n2, "Noise cols");
    moments_cmd->add_option("--sigma", moments_args.sigma, "Noise std");
    moments_cmd->callback([&] { rc = run_moments(moments_args); });

    SlopeArgs slope_args;
    auto* slope_cmd =
        app.add_subcommand("slope", "Fit log-log slope of mean_error vs axis from a sweep CSV");
    slope_cmd->add_option("csv", slope_args.csv, "Sweep CSV path")->required();
    slope_cmd->add_option("--method", slope_args.method, "Method column to fit");
    slope_cmd->callback([&] { rc = run_slope(slope_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
