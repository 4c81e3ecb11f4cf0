// Command-line front end: closed-form vs numeric verification, risk reports,
// prior-width sweeps, and the consistency self-check battery.
//
// Exit codes: 0 success, 1 check/computation failure, 2 usage or config error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gqpred/io.hpp"
#include "gqpred/monte_carlo.hpp"
#include "gqpred/risk.hpp"
#include "gqpred/rng.hpp"
#include "gqpred/selftest.hpp"
#include "gqpred/verification.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gqpred;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    bool fast = false;
};

io::RunConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) {
        throw std::invalid_argument("a --config file is required for this command");
    }
    io::RunConfig cfg = io::parse_run_config(io::read_file(opts.config_path));
    if (opts.seed_given) cfg.seed = opts.seed;
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

/// Deterministic per-row seed for sweep Monte Carlo columns.
std::uint64_t row_seed(std::uint64_t base, std::size_t row) {
    return sim::detail::splitmix64_mix(base + 0x9E3779B97F4A7C15ULL * (row + 1));
}

int cmd_verify_rela(int dim, double tol, const CommonOpts& opts) {
    ensure_out_dir(opts.out_dir);
    if (dim < 40) {
        std::cerr << "verify-rela: truncation too coarse for a reliable comparison "
                  << "(dim " << dim << " < 40); refusing to certify agreement\n";
        return kExitCheckFailed;
    }

    const auto states = verify::default_grid_states(opts.fast);
    const auto grid = verify::rel_entropy_grid(states, dim);

    io::CsvBuilder csv({"rho_mean_re", "rho_mean_im", "rho_photon", "sigma_mean_re", "sigma_mean_im",
                        "sigma_photon", "closed", "numeric", "abs_diff", "pass"});
    double worst = 0.0;
    int failures = 0;
    for (const auto& p : grid) {
        worst = std::max(worst, p.abs_diff);
        const bool pass = p.abs_diff <= tol;
        if (!pass) ++failures;
        csv.row({io::fmt_double(p.rho_par.mean.real()), io::fmt_double(p.rho_par.mean.imag()),
                 io::fmt_double(p.rho_par.photon_number), io::fmt_double(p.sigma_par.mean.real()),
                 io::fmt_double(p.sigma_par.mean.imag()), io::fmt_double(p.sigma_par.photon_number),
                 io::fmt_double(p.closed), io::fmt_double(p.numeric), io::fmt_double(p.abs_diff),
                 pass ? "1" : "0"});
    }
    io::write_file(fs::path(opts.out_dir) / "verify_rela.csv", csv.text());
    io::write_manifest(opts.out_dir, "verify-rela", nullptr, 0, {"verify_rela.csv"});

    std::cout << grid.size() << " state pairs at dim " << dim << ": worst |closed - numeric| = "
              << io::fmt_double(worst) << " (tolerance " << io::fmt_double(tol) << ")\n";
    if (failures > 0) {
        std::cerr << "verify-rela: " << failures << " pair(s) exceeded tolerance\n";
        return kExitCheckFailed;
    }
    std::cout << "verify-rela: all pairs within tolerance\n";
    return kExitOk;
}

int cmd_risk(const CommonOpts& opts) {
    const io::RunConfig cfg = load_config(opts);
    ensure_out_dir(opts.out_dir);

    const double rp = risk::risk_plugin_closed(cfg.photon_number, cfg.n, cfg.m);
    const double rb = risk::risk_bayes_closed(cfg.photon_number, cfg.n, cfg.m, cfg.prior);

    json report;
    report["risk_plugin_closed"] = rp;
    report["risk_bayes_closed"] = rb;
    report["seed"] = cfg.seed;
    report["config_hash"] = io::config_hash(cfg);

    io::CsvBuilder csv({"quantity", "value"});
    csv.row({"risk_plugin_closed", io::fmt_double(rp)});
    csv.row({"risk_bayes_closed", io::fmt_double(rb)});

    if (cfg.n == 1 && cfg.m == 1) {
        const double rs = risk::risk_star(cfg.photon_number);
        report["risk_star"] = rs;
        csv.row({"risk_star", io::fmt_double(rs)});
    }

    // Monte Carlo cross-check: prior expectations exist only for an
    // informative prior, so the flat-prior report is closed-form only.
    if (!cfg.prior.noninformative && cfg.mc_samples > 0) {
        risk::McConfig mc;
        mc.photon_number = cfg.photon_number;
        mc.n = cfg.n;
        mc.m = cfg.m;
        mc.prior = cfg.prior;
        mc.mc_samples = cfg.mc_samples;
        mc.seed = cfg.seed;
        const risk::McEstimate ep = risk::mc_risk_plugin(mc, opts.workers);
        const risk::McEstimate eb = risk::mc_risk_bayes(mc, opts.workers);
        report["mc_plugin"] = {{"estimate", ep.estimate},
                               {"std_error", ep.std_error},
                               {"samples", ep.samples}};
        report["mc_bayes"] = {{"estimate", eb.estimate},
                              {"std_error", eb.std_error},
                              {"samples", eb.samples}};
        csv.row({"mc_plugin_estimate", io::fmt_double(ep.estimate)});
        csv.row({"mc_plugin_std_error", io::fmt_double(ep.std_error)});
        csv.row({"mc_bayes_estimate", io::fmt_double(eb.estimate)});
        csv.row({"mc_bayes_std_error", io::fmt_double(eb.std_error)});
    }

    io::write_file(fs::path(opts.out_dir) / "risk_report.json", report.dump(2) + "\n");
    io::write_file(fs::path(opts.out_dir) / "risk_report.csv", csv.text());
    io::write_manifest(opts.out_dir, "risk", &cfg, cfg.seed,
                       {"risk_report.json", "risk_report.csv"});

    std::cout << "risk_plugin_closed = " << io::fmt_double(rp) << "\n"
              << "risk_bayes_closed  = " << io::fmt_double(rb) << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
    const io::RunConfig cfg = load_config(opts);
    if (cfg.tau2_grid.empty()) {
        throw std::invalid_argument("config: sweep requires a nonempty tau2_grid");
    }
    ensure_out_dir(opts.out_dir);

    const std::vector<risk::RiskCurveRow> rows =
        risk::risk_curve(cfg.photon_number, cfg.n, cfg.m, cfg.tau2_grid);
    const bool with_mc = cfg.mc_samples > 0 && !cfg.prior.noninformative;

    std::vector<std::string> header{"tau2", "risk_plugin", "risk_bayes", "gap"};
    if (with_mc) {
        header.push_back("mc_bayes_estimate");
        header.push_back("mc_bayes_std_error");
    }
    io::CsvBuilder csv(header);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::string> cells{io::fmt_double(rows[i].tau2), io::fmt_double(rows[i].risk_plugin),
                                       io::fmt_double(rows[i].risk_bayes), io::fmt_double(rows[i].gap)};
        if (with_mc) {
            risk::McConfig mc;
            mc.photon_number = cfg.photon_number;
            mc.n = cfg.n;
            mc.m = cfg.m;
            mc.prior.mean = cfg.prior.mean;
            mc.prior.tau2 = rows[i].tau2;
            mc.mc_samples = cfg.mc_samples;
            mc.seed = row_seed(cfg.seed, i);
            const risk::McEstimate eb = risk::mc_risk_bayes(mc, opts.workers);
            cells.push_back(io::fmt_double(eb.estimate));
            cells.push_back(io::fmt_double(eb.std_error));
        }
        csv.row(cells);
    }
    io::write_file(fs::path(opts.out_dir) / "sweep.csv", csv.text());
    io::write_manifest(opts.out_dir, "sweep", &cfg, cfg.seed, {"sweep.csv"});

    std::cout << "sweep: " << rows.size() << " prior widths written\n";
    return kExitOk;
}

int cmd_selftest(const CommonOpts& opts) {
    selftest::SelftestOptions so;
    so.fast = opts.fast;
    if (opts.seed_given) so.seed = opts.seed;
    so.workers = opts.workers;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<selftest::CheckResult> results = selftest::run_selftest(so);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    int passed = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
        if (r.pass) ++passed;
    }
    std::cout << "self-check summary: " << passed << "/" << results.size() << " passed in "
              << io::fmt_double(secs) << " s\n";
    return passed == static_cast<int>(results.size()) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian prediction toolkit for displaced thermal states"};
    app.require_subcommand(1);

    CommonOpts verify_opts, risk_opts, sweep_opts, self_opts;
    int verify_dim = 60;
    double verify_tol = 1e-6;

    CLI::App* verify = app.add_subcommand(
        "verify-rela", "Compare closed-form and numeric relative entropy on a state grid");
    verify->add_option("--dim", verify_dim, "Truncation dimension (>= 40 for a meaningful run)");
    verify->add_option("--tol", verify_tol, "Per-pair tolerance");
    verify->add_option("--out", verify_opts.out_dir, "Output directory");
    verify->add_flag("--fast", verify_opts.fast, "Smaller state grid");

    CLI::App* riskc = app.add_subcommand("risk", "Closed-form and Monte Carlo risk report");
    riskc->add_option("--config", risk_opts.config_path, "JSON experiment config")->required();
    riskc->add_option("--seed", risk_opts.seed, "Override the config seed")
        ->each([&](const std::string&) { risk_opts.seed_given = true; });
    riskc->add_option("--workers", risk_opts.workers, "Monte Carlo worker threads");
    riskc->add_option("--out", risk_opts.out_dir, "Output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "Risk curve over a grid of prior widths");
    sweep->add_option("--config", sweep_opts.config_path, "JSON experiment config with tau2_grid")
        ->required();
    sweep->add_option("--seed", sweep_opts.seed, "Override the config seed")
        ->each([&](const std::string&) { sweep_opts.seed_given = true; });
    sweep->add_option("--workers", sweep_opts.workers, "Monte Carlo worker threads");
    sweep->add_option("--out", sweep_opts.out_dir, "Output directory");

    CLI::App* self = app.add_subcommand("selftest", "Run the consistency check battery");
    self->add_flag("--fast", self_opts.fast, "Reduced dimensions and sample counts");
    self->add_option("--seed", self_opts.seed, "Base seed for stochastic checks")
        ->each([&](const std::string&) { self_opts.seed_given = true; });
    self->add_option("--workers", self_opts.workers, "Monte Carlo worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, returns 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify_rela(verify_dim, verify_tol, verify_opts);
        if (riskc->parsed()) return cmd_risk(risk_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (self->parsed()) return cmd_selftest(self_opts);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        // Config and precondition problems are usage errors.
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
