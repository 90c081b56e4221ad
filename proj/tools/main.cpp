// sliceadc command line front-end.
//
//   sliceadc simulate [--config f] [--preset p] [--seed n] [--runs n] [--out d]
//   sliceadc sweep    [--config f] [--preset p] [--freqs g,...] [--threads n] ...
//   sliceadc budget   [--slices M] [--slice-bw-ghz b] [--mll-jitter-s j] ...
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <sliceadc/sliceadc.hpp>

namespace {

using namespace sliceadc;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string preset = "paper";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "scenario config file (JSON)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--preset", o.preset, "base preset the config file overrides")
        ->check(CLI::IsMember({"paper", "desk"}))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--runs", o.runs, "Monte Carlo runs override");
    cmd->add_option("--threads", o.threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
}

ScenarioConfig load_scenario_config(const CommonOpts& o) {
    ScenarioConfig base = o.preset == "desk" ? desk_preset() : paper_preset();
    ScenarioConfig c = base;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot read config file: " + o.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config parse error: " + std::string(e.what()));
        }
        c = load_config(j, base);
    }
    if (o.seed) c.run.master_seed = *o.seed;
    if (o.runs) c.run.runs = *o.runs;
    return c;
}

std::string out_path(const CommonOpts& o, const char* name) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / name).string();
}

void write_scenario_json(const CommonOpts& o, const ScenarioConfig& c) {
    auto f = open_out(out_path(o, "scenario.json"));
    f << save_config(c).dump(2) << "\n";
}

// First 10k samples of the reconstructed power record next to the reference.
void write_overlay_svg(const std::string& path, const RunResult& run) {
    const std::size_t n = std::min<std::size_t>(10000, run.recon_s.size());
    std::vector<std::pair<double, double>> rec(n), ref(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t_ns = run.recon_s.grid.time_at(k) * 1e9;
        rec[k] = {t_ns, run.recon_s.s[k].real()};
        ref[k] = {t_ns, run.reference_s.s[k].real()};
    }
    SvgPlot plot("Reconstructed vs reference power", "time [ns]", "S(t) [a.u.]");
    plot.add_line(std::move(ref), "reference");
    plot.add_line(std::move(rec), "reconstructed");
    plot.write(path);
}

void write_scatter_svg(const std::string& path, const RunResult& run) {
    const std::size_t n = run.recon_s.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 5000);
    std::vector<std::pair<double, double>> pts;
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < n; k += stride) {
        const double x = run.reference_s.s[k].real();
        const double y = run.recon_s.s[k].real();
        pts.emplace_back(x, y);
        lo = std::min({lo, x, y});
        hi = std::max({hi, x, y});
    }
    SvgPlot plot("Reconstruction transfer", "reference S [a.u.]", "reconstructed S [a.u.]");
    plot.add_line({{lo, lo}, {hi, hi}}, "identity");
    plot.add_scatter(std::move(pts), "samples");
    plot.write(path);
}

int cmd_simulate(const CommonOpts& o) {
    const ScenarioConfig c = load_scenario_config(o);
    const Scenario scn = resolve(c);
    const double f_rf = c.signal.freq_ghz * 1e9;

    const TonePrep prep = prepare_tone(scn, f_rf);
    std::vector<RunResult> runs;
    runs.reserve(c.run.runs);
    for (std::size_t ri = 0; ri < c.run.runs; ++ri) {
        const std::uint64_t seed =
            derive_seed(c.run.master_seed, SeedRole::sweep_run, ri, 0);
        runs.push_back(simulate_once(scn, f_rf, seed, &prep, ri == 0));
    }

    write_scenario_json(o, c);
    write_nsr_csv(out_path(o, "nsr.csv"), runs);
    write_overlay_svg(out_path(o, "overlay.svg"), runs.front());
    write_scatter_svg(out_path(o, "recon-vs-input.svg"), runs.front());

    double mean = 0.0;
    for (const auto& r : runs) mean += r.nsr_db;
    mean /= static_cast<double>(runs.size());
    std::cout << "simulate: " << runs.size() << " runs at " << fmt_fixed(c.signal.freq_ghz)
              << " GHz, mean NSR " << fmt_fixed(mean) << " dB\n"
              << "wrote scenario.json, nsr.csv, overlay.svg, recon-vs-input.svg to "
              << o.out_dir << "\n";
    return 0;
}

// Analytic NSR curves sampled densely across the usable band. Non-finite
// values (a curve with its jitter disabled) produce empty series.
void add_analytic_curves(SvgPlot& plot, const Scenario& scn) {
    const double t = scn.grid.duration();
    const double dt_r =
        scn.mll_rf_on() ? record_effective_jitter(scn.noise.mll_rf_lw_hz, t, scn.plan.f_r_hz)
                        : 0.0;
    const double dt_e = scn.elec_on() ? record_effective_jitter(scn.noise.elec_lw_hz, t,
                                                                scn.noise.elec_osc_freq_hz)
                                      : 0.0;
    auto sample = [&](auto f_to_snr, const char* label) {
        std::vector<std::pair<double, double>> pts;
        const double f_max = scn.plan.max_rf_hz();
        const std::size_t steps = 40 * scn.plan.n_slices;
        for (std::size_t k = 0; k < steps; ++k) {
            const double f =
                f_max * (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
            const double snr = f_to_snr(f);
            if (std::isfinite(snr)) pts.emplace_back(f / 1e9, -snr);
        }
        if (!pts.empty()) plot.add_line(std::move(pts), label);
    };
    const double inf = std::numeric_limits<double>::infinity();
    sample([&](double f) { return snr_sliced(f, scn.plan, dt_r, 0.0); }, "MLL jitter only");
    sample([&](double f) { return dt_e > 0 ? snr_electrical(f, dt_e) : inf; },
           "electric clock only");
    sample([&](double f) { return snr_sliced(f, scn.plan, dt_r, dt_e); }, "combined");
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& freqs_ghz) {
    const ScenarioConfig c = load_scenario_config(o);
    const Scenario scn = resolve(c);

    std::vector<double> freqs;
    if (freqs_ghz.empty()) {
        freqs = default_sweep_frequencies(scn);
    } else {
        const double t = scn.grid.duration();
        for (double g : freqs_ghz) {
            const double f = std::round(g * 1e9 * t) / t;  // snap to a grid bin
            if (!(f > 0.0) || !(f < scn.plan.max_rf_hz()))
                throw ConfigError("sweep frequency " + fmt_fixed(g) +
                                  " GHz outside the usable band");
            freqs.push_back(f);
        }
    }
    if (freqs.empty()) throw ConfigError("sweep: empty frequency list");

    const std::vector<SnrReport> reports =
        sweep(scn, freqs, c.run.runs, c.run.master_seed, o.threads);

    write_scenario_json(o, c);
    write_sweep_csv(out_path(o, "sweep.csv"), reports);

    SvgPlot plot("Sliced-ADC noise floor vs signal frequency", "signal frequency [GHz]",
                 "NSR [dB]");
    add_analytic_curves(plot, scn);
    std::vector<std::pair<double, double>> pts;
    std::vector<double> half;
    for (const auto& r : reports) {
        pts.emplace_back(r.freq_hz / 1e9, r.nsr_mean_db);
        half.push_back(r.ci3_db);
    }
    plot.add_errorbars(std::move(pts), std::move(half), "Monte Carlo");
    plot.write(out_path(o, "fig4.svg"));

    std::cout << "sweep: " << reports.size() << " frequencies, " << c.run.runs
              << " runs each\n"
              << "wrote scenario.json, sweep.csv, fig4.svg to " << o.out_dir << "\n";
    return 0;
}

struct BudgetOpts {
    std::size_t n_slices = 4;
    double slice_bw_ghz = 30.0;
    double mll_jitter_s = 870e-18;
    double elec_jitter_s = 6.4e-15;
    std::optional<double> t_from_s;
    std::optional<double> t_to_s;
    std::string out_dir = ".";
};

int cmd_budget(const BudgetOpts& b) {
    if (b.t_from_s.has_value() != b.t_to_s.has_value())
        throw ConfigError("budget: --t-from-s and --t-to-s must be given together");
    std::optional<Rescale> rescale;
    if (b.t_from_s) rescale = Rescale{*b.t_from_s, *b.t_to_s};

    BudgetReport rep;
    try {
        rep = budget(b.n_slices, b.slice_bw_ghz * 1e9, b.mll_jitter_s, b.elec_jitter_s,
                     rescale);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    print_budget(std::cout, rep);
    std::filesystem::create_directories(b.out_dir);
    auto f = open_out((std::filesystem::path(b.out_dir) / "budget.json").string());
    f << budget_to_json(rep).dump(2) << "\n";
    std::cout << "wrote budget.json to " << b.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectrally sliced ADC simulator and jitter budget calculator"};
    app.require_subcommand(1);

    CommonOpts sim_opts, sweep_opts;
    std::vector<double> freqs_ghz;
    BudgetOpts budget_opts;

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo runs at one frequency");
    add_common(sim, sim_opts);

    CLI::App* swp = app.add_subcommand("sweep", "Monte Carlo frequency sweep");
    add_common(swp, sweep_opts);
    swp->add_option("--freqs", freqs_ghz, "sweep frequencies in GHz (default: staircase grid)")
        ->delimiter(',');

    CLI::App* bud = app.add_subcommand("budget", "analytic jitter budget");
    bud->add_option("--slices", budget_opts.n_slices, "number of spectral slices")
        ->capture_default_str();
    bud->add_option("--slice-bw-ghz", budget_opts.slice_bw_ghz, "slice bandwidth in GHz")
        ->capture_default_str();
    bud->add_option("--mll-jitter-s", budget_opts.mll_jitter_s, "comb timing jitter in s")
        ->capture_default_str();
    bud->add_option("--elec-jitter-s", budget_opts.elec_jitter_s, "electric clock jitter in s")
        ->capture_default_str();
    bud->add_option("--t-from-s", budget_opts.t_from_s,
                    "jitter observation time the inputs were measured at");
    bud->add_option("--t-to-s", budget_opts.t_to_s, "observation time to rescale to");
    bud->add_option("--out", budget_opts.out_dir, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (swp->parsed()) return cmd_sweep(sweep_opts, freqs_ghz);
        return cmd_budget(budget_opts);
    } catch (const sliceadc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
