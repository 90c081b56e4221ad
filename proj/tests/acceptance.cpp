// End-to-end acceptance checks: one line per criterion, nonzero exit if any
// fail. Runs the full desk-grid Monte Carlo pipeline, so expect a few
// minutes of wall time.

#include <sliceadc/sliceadc.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace sliceadc;

namespace {

int criteria_failed = 0;

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

class Criterion {
public:
    Criterion(const char* name, double time_limit_s)
        : name_(name), limit_s_(time_limit_s), t0_(std::chrono::steady_clock::now()) {}

    void require(bool cond, const std::string& detail) {
        ok_ &= cond;
        lines_.push_back(std::string(cond ? "    [ok] " : "    [!!] ") + detail);
    }

    void finish() {
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
        require(dt < limit_s_, "runtime " + fmt(dt, "%.2f") + " s (limit " +
                                   fmt(limit_s_, "%.0f") + " s)");
        std::printf("[%s] criterion %s (%.2f s)\n", ok_ ? "PASS" : "FAIL", name_, dt);
        for (const auto& l : lines_) std::printf("%s\n", l.c_str());
        std::fflush(stdout);
        if (!ok_) ++criteria_failed;
    }

private:
    const char* name_;
    double limit_s_;
    std::chrono::steady_clock::time_point t0_;
    bool ok_ = true;
    std::vector<std::string> lines_;
};

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < n; ++k) { ma += a[k]; mb += b[k]; }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

ScenarioConfig desk_with_sources(bool carrier, bool mll_optical, bool mll_rf, bool elec) {
    ScenarioConfig c = desk_preset();
    c.noise.enable.carrier = carrier;
    c.noise.enable.mll_optical = mll_optical;
    c.noise.enable.mll_rf = mll_rf;
    c.noise.enable.elec = elec;
    return c;
}

void criterion_1_budget() {
    Criterion c("1: analytic jitter budget", 1.0);
    const BudgetReport r = budget(4, 30e9, 870e-18, 6.4e-15);
    c.require(std::abs(r.eff_elec_jitter_s / 1.600e-15 - 1.0) < 5e-4,
              "effective clock jitter " + fmt(r.eff_elec_jitter_s) + " s (expect 1.600 fs)");
    c.require(std::abs(r.eff_mll_jitter_s / 652.5e-18 - 1.0) < 5e-4,
              "effective comb jitter " + fmt(r.eff_mll_jitter_s) + " s (expect 652.5 as)");
    c.require(r.worst_enob >= 9.2 && r.worst_enob <= 9.5,
              "worst-case ENOB " + fmt(r.worst_enob, "%.4f") + " (expect 9.2..9.5)");
    c.require(std::abs(r.electric_enob - 7.40) <= 0.01,
              "all-electric ENOB " + fmt(r.electric_enob, "%.4f") + " (expect 7.40 +- 0.01)");
    c.require(r.worst_enob - r.electric_enob >= 1.8,
              "slicing gain " + fmt(r.worst_enob - r.electric_enob, "%.4f") +
                  " bits (expect >= 1.8)");
    c.finish();
}

void criterion_2_rescale() {
    Criterion c("2: budget with observation-time rescale", 1.0);
    const BudgetReport r = budget(4, 30e9, 870e-18, 6.4e-15, Rescale{5e-4, 7.8e-3});
    c.require(std::abs(r.worst_enob - 7.31) <= 0.1,
              "sliced ENOB " + fmt(r.worst_enob, "%.4f") + " (expect 7.31 +- 0.10)");
    c.require(std::abs(r.electric_enob - 5.42) <= 0.05,
              "all-electric ENOB " + fmt(r.electric_enob, "%.4f") + " (expect 5.42 +- 0.05)");
    c.finish();
}

void criterion_3_jitter_growth() {
    Criterion c("3: free-running jitter growth", 60.0);
    const double o1 = jitter_rms(3e3, 3.3e-6, 30e9);
    const double o2 = jitter_rms(180e3, 3.3e-6, 60e9);
    c.require(std::abs(o1 / 1.323e-12 - 1.0) <= 1e-3,
              "closed form 3 kHz/30 GHz: " + fmt(o1) + " s (expect 1.323 ps +- 0.1%)");
    c.require(std::abs(o2 / 5.125e-12 - 1.0) <= 1e-3,
              "closed form 180 kHz/60 GHz: " + fmt(o2) + " s (expect 5.125 ps +- 0.1%)");

    const TimeGrid grid(3.3e-9, 1001); // phase endpoint at exactly 3.3 us
    auto ensemble_rms = [&](double lw, double osc, SeedRole role) {
        double sq = 0.0;
        for (int i = 0; i < 200; ++i) {
            const JitterPath j = path_to_jitter(
                wiener_path(lw, grid, derive_seed(1, role, static_cast<std::uint64_t>(i))), osc);
            sq += j.dt.back() * j.dt.back();
        }
        return std::sqrt(sq / 200.0);
    };
    const double r1 = ensemble_rms(3e3, 30e9, SeedRole::mll_rf_phase);
    const double r2 = ensemble_rms(180e3, 60e9, SeedRole::elec_clock_phase);
    c.require(std::abs(r1 / o1 - 1.0) <= 0.05,
              "200-path ensemble 3 kHz: " + fmt(r1) + " s (" +
                  fmt(100.0 * (r1 / o1 - 1.0), "%+.2f") + "% of closed form)");
    c.require(std::abs(r2 / o2 - 1.0) <= 0.05,
              "200-path ensemble 180 kHz: " + fmt(r2) + " s (" +
                  fmt(100.0 * (r2 / o2 - 1.0), "%+.2f") + "% of closed form)");
    c.finish();
}

void criterion_4_noiseless_floor() {
    Criterion c("4: noiseless end-to-end floor", 30.0);
    const Scenario s = resolve(desk_with_sources(false, false, false, false));
    const RunResult r = simulate_once(s, 100e9, derive_seed(1, SeedRole::sweep_run, 0, 0));
    c.require(r.nsr_db <= -120.0,
              "all-sources-off NSR at 100 GHz: " + fmt(r.nsr_db, "%.1f") +
                  " dB (expect <= -120 dB)");
    c.finish();
}

void criterion_5_carrier_noise() {
    Criterion c("5: carrier linewidth sensitivity to the guard band", 120.0);
    ScenarioConfig cfg = desk_with_sources(true, false, false, false);
    const SnrReport narrow = sweep(resolve(cfg), {100e9}, 65, 1)[0];
    cfg.plan.guard_ghz = 4.0;
    const SnrReport wide = sweep(resolve(cfg), {100e9}, 65, 1)[0];

    c.require(narrow.nsr_mean_db <= -40.0,
              "2 GHz guard, 100 kHz carrier: NSR " + fmt(narrow.nsr_mean_db, "%.2f") +
                  " dB over 65 seeds (expect <= -40 dB)");
    const double gain = narrow.nsr_mean_db - wide.nsr_mean_db;
    c.require(gain >= 1.5 && gain <= 4.5,
              "doubling the guard improves NSR by " + fmt(gain, "%.2f") + " dB to " +
                  fmt(wide.nsr_mean_db, "%.2f") + " dB (expect 3 +- 1.5 dB)");
    c.finish();
}

void criterion_6_rin_cancellation() {
    Criterion c("6: correlated-line power noise cancellation", 120.0);
    ScenarioConfig cfg = desk_with_sources(false, true, false, false);
    cfg.dsp.rin_cancel = true;
    const SnrReport on = sweep(resolve(cfg), {100e9}, 33, 1)[0];
    cfg.dsp.rin_cancel = false;
    const SnrReport off = sweep(resolve(cfg), {100e9}, 33, 1)[0];

    const double gap = off.nsr_mean_db - on.nsr_mean_db;
    c.require(gap >= 15.0,
              "monitor normalization gap " + fmt(gap, "%.2f") + " dB (on " +
                  fmt(on.nsr_mean_db, "%.2f") + " dB, off " + fmt(off.nsr_mean_db, "%.2f") +
                  " dB; expect >= 15 dB)");

    cfg.dsp.rin_cancel = true;
    const Scenario s = resolve(cfg);
    const RunResult run =
        simulate_once(s, 100e9, derive_seed(1, SeedRole::sweep_run, 0, 0), nullptr, true);
    Waveform resid(run.recon_s.grid, Kind::real_signal);
    for (std::size_t k = 0; k < resid.size(); ++k)
        resid.s[k] = run.recon_s.s[k].real() - run.reference_s.s[k].real();
    double worst_rho = 0.0;
    for (std::size_t m = 0; m < run.monitors.size(); ++m) {
        const std::vector<double> r = resample_real_at(resid, run.instants[m]);
        worst_rho = std::max(worst_rho, std::abs(pearson(run.monitors[m], r)));
    }
    c.require(worst_rho < 0.05, "worst residual-vs-monitor correlation |rho| = " +
                                    fmt(worst_rho, "%.4f") + " (expect < 0.05)");
    c.finish();
}

void criterion_7_frequency_sweeps() {
    Criterion c("7: Monte Carlo frequency sweeps vs analytic curves", 900.0);
    const Scenario s_mll = resolve(desk_with_sources(false, false, true, false));
    const Scenario s_comb = resolve(desk_with_sources(false, false, true, true));
    const std::vector<double> freqs = default_sweep_frequencies(s_mll);
    const std::size_t runs = 33;

    const std::vector<SnrReport> mll = sweep(s_mll, freqs, runs, 1);
    const std::vector<SnrReport> comb = sweep(s_comb, freqs, runs, 1);

    // (a) comb-jitter-only noise is flat within each slice
    double worst_pair = -1e9;
    for (std::size_t i = 0; i < mll.size(); ++i) {
        const std::size_t mi = s_mll.plan.slice_index(mll[i].freq_hz);
        if (mi < 1) continue;
        for (std::size_t j = i + 1; j < mll.size(); ++j) {
            if (s_mll.plan.slice_index(mll[j].freq_hz) != mi) continue;
            const double excess = std::abs(mll[i].nsr_mean_db - mll[j].nsr_mean_db) -
                                  std::hypot(mll[i].ci3_db, mll[j].ci3_db);
            worst_pair = std::max(worst_pair, excess);
        }
    }
    c.require(worst_pair <= 0.0, "within-slice plateau: worst pairwise excess over the "
                                 "combined 3-sigma window = " +
                                     fmt(worst_pair, "%.3f") + " dB (expect <= 0)");

    // (b) plateau step between the third and fourth slice
    auto slice_stats = [&](std::size_t m) {
        double sum = 0.0, ci_sq = 0.0;
        std::size_t n = 0;
        for (const auto& r : mll) {
            if (s_mll.plan.slice_index(r.freq_hz) != m) continue;
            sum += r.nsr_mean_db;
            ci_sq += r.ci3_db * r.ci3_db;
            ++n;
        }
        return std::pair<double, double>(sum / static_cast<double>(n),
                                         std::sqrt(ci_sq) / static_cast<double>(n));
    };
    const auto [mu2, ci2] = slice_stats(2);
    const auto [mu3, ci3] = slice_stats(3);
    const double jump = mu3 - mu2;
    const double expect_jump = 20.0 * std::log10(1.5);
    c.require(std::abs(jump - expect_jump) <= std::hypot(ci2, ci3),
              "slice 2 -> 3 plateau step " + fmt(jump, "%.3f") + " dB (expect " +
                  fmt(expect_jump, "%.3f") + " +- " + fmt(std::hypot(ci2, ci3), "%.3f") + " dB)");

    // (c) combined sweep tracks the analytic staircase
    std::size_t within = 0;
    for (const auto& r : comb)
        if (std::abs(r.nsr_mean_db + r.snr_analytic_db) <= r.ci3_db) ++within;
    c.require(within >= (9 * comb.size() + 9) / 10,
              "combined sweep: " + std::to_string(within) + " of " +
                  std::to_string(comb.size()) +
                  " points within 3 sigma of the analytic curve (expect >= 90%)");

    // (d) slicing never loses to the all-electric converter
    const double dt_e_eff = record_effective_jitter(
        s_comb.noise.elec_lw_hz, s_comb.grid.duration(), s_comb.noise.elec_osc_freq_hz);
    double worst_margin = 1e9;
    for (const auto& r : comb) {
        const double margin =
            -r.nsr_mean_db - (snr_electrical(r.freq_hz, dt_e_eff) - r.ci3_db);
        worst_margin = std::min(worst_margin, margin);
    }
    c.require(worst_margin >= 0.0,
              "sliced SNR vs electric-only floor: worst margin " + fmt(worst_margin, "%.2f") +
                  " dB (expect >= 0)");
    c.finish();
}

void criterion_8_properties() {
    Criterion c("8: structural properties", 300.0);

    { // spectral partition and idempotence
        const TimeGrid g(1e-12, 1000);
        std::mt19937_64 rng(4242);
        std::normal_distribution<double> gauss;
        Waveform raw(g, Kind::complex_envelope);
        for (auto& v : raw.s) v = cdouble(gauss(rng), gauss(rng));
        // keep the record strictly inside (-nyquist, +nyquist): the Nyquist
        // bin is its own alias and belongs to no half-open sub-band
        const Waveform w = brickwall_filter(raw, BandMask(-500e9, 500e9));
        Waveform a = brickwall_filter(w, BandMask(-500e9, -100e9));
        Waveform b = brickwall_filter(w, BandMask(-100e9, 200e9));
        Waveform d = brickwall_filter(w, BandMask(200e9, 500e9));
        double err = 0.0, ref = 0.0, idem = 0.0;
        Waveform bb = brickwall_filter(b, BandMask(-100e9, 200e9));
        for (std::size_t k = 0; k < g.n; ++k) {
            err += std::norm(a.s[k] + b.s[k] + d.s[k] - w.s[k]);
            ref += std::norm(w.s[k]);
            idem += std::norm(bb.s[k] - b.s[k]);
        }
        c.require(std::sqrt(err / ref) < 1e-12 && std::sqrt(idem / ref) < 1e-12,
                  "brick-wall bands partition the spectrum and are idempotent");
    }
    { // analytic conversion
        const TimeGrid g(1e-12, 1000);
        Waveform w(g, Kind::real_signal);
        for (std::size_t k = 0; k < g.n; ++k) w.s[k] = std::cos(two_pi * 40e9 * g.time_at(k));
        Waveform h = hilbert_analytic(w);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.n; ++k)
            worst = std::max(worst,
                             std::abs(h.s[k].imag() - std::sin(two_pi * 40e9 * g.time_at(k))));
        auto X = fft(h);
        double neg = 0.0;
        for (std::size_t k = g.n / 2 + 1; k < g.n; ++k) neg = std::max(neg, std::abs(X[k]));
        c.require(worst < 1e-10 && neg < 1e-9,
                  "analytic signal is one-sided and maps cos to sin");
    }
    { // resampling shift theorem
        const TimeGrid g(1e-12, 1000);
        const double f = 150e9, tau = 0.137e-12;
        Waveform w(g, Kind::complex_envelope);
        for (std::size_t k = 0; k < g.n; ++k)
            w.s[k] = std::polar(1.0, two_pi * f * g.time_at(k));
        std::vector<double> times(g.n);
        for (std::size_t k = 0; k < g.n; ++k) times[k] = g.time_at(k) + tau;
        auto out = resample_at(w, times);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.n; ++k)
            worst = std::max(worst,
                             std::abs(out[k] - std::polar(1.0, two_pi * f * (g.time_at(k) + tau))));
        c.require(worst < 1e-8, "off-grid resampling obeys the shift theorem");
    }
    { // random-walk increment statistics
        const TimeGrid g(0.3e-12, 200000);
        PhasePath p = wiener_path(10e6, g, 991);
        const double sigma = std::sqrt(two_pi * 10e6 * g.dt);
        double sq = 0.0, lag = 0.0;
        std::vector<double> inc(g.n - 1);
        for (std::size_t k = 0; k + 1 < g.n; ++k) inc[k] = p.phase[k + 1] - p.phase[k];
        for (double v : inc) sq += v * v;
        const double sd = std::sqrt(sq / static_cast<double>(inc.size()));
        for (std::size_t k = 0; k + 1 < inc.size(); ++k) lag += inc[k] * inc[k + 1];
        lag /= sq;
        c.require(std::abs(sd / sigma - 1.0) < 0.01 && std::abs(lag) < 0.02,
                  "phase increments have the Wiener scale and no memory");
    }
    { // balanced detector quadrature null
        const TimeGrid g(1e-12, 1000);
        Waveform sig(g, Kind::complex_envelope);
        for (std::size_t k = 0; k < g.n; ++k)
            sig.s[k] = std::polar(1.0, two_pi * 37e9 * g.time_at(k));
        Waveform quad(g, Kind::complex_envelope);
        for (std::size_t k = 0; k < g.n; ++k) quad.s[k] = cdouble(0.0, 1.0) * sig.s[k];
        Waveform i = balanced_detect(sig, quad);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.n; ++k) worst = std::max(worst, std::abs(i.s[k].real()));
        c.require(worst == 0.0, "balanced detector nulls a quadrature local oscillator");
    }
    { // joint jitter scaling
        const FrequencyPlan plan(4, 30e9, 2e9);
        bool ok = true;
        for (double f = 5e9; f < 118e9; f += 11e9) {
            const double base = snr_sliced(f, plan, 1e-15, 4e-15);
            const double scaled = snr_sliced(f, plan, 3e-15, 12e-15);
            ok &= std::abs(scaled - (base - 20.0 * std::log10(3.0))) < 1e-9;
        }
        c.require(ok, "tripling both jitters costs exactly 20 log10(3) dB");
    }
    { // budget monotonicity in the slice count
        double last = -1.0;
        bool ok = true;
        for (std::size_t m = 1; m <= 16; ++m) {
            const BudgetReport r = budget(m, 30e9, 1e-15, 4e-15);
            const double gain = r.worst_enob - r.electric_enob;
            ok &= gain >= last - 1e-12;
            last = gain;
        }
        c.require(ok, "slicing gain is monotone in the slice count");
    }
    { // seeded sweeps are deterministic
        Scenario s;
        s.grid = TimeGrid(0.3e-12, 50000);
        s.plan = FrequencyPlan(4, 30e9, 2e9);
        s.digitizer_rate_hz = 74.8e9;
        s.static_phases = std::vector<double>{0.0, 0.0, 0.0, 0.0};
        s.noise.mll_rf_lw_hz = 3e3;
        s.noise.elec_lw_hz = 180e3;
        s.noise.elec_osc_freq_hz = 60e9;
        s.enable.mll_rf = true;
        s.enable.elec = true;
        const std::vector<double> freqs{37e9, 67e9};
        const auto a = sweep(s, freqs, 2, 7);
        const auto b = sweep(s, freqs, 2, 7);
        const auto threaded = sweep(s, freqs, 2, 7, 2);
        bool ok = true;
        for (std::size_t i = 0; i < a.size(); ++i) {
            ok &= a[i].nsr_mean_db == b[i].nsr_mean_db;
            ok &= a[i].nsr_mean_db == threaded[i].nsr_mean_db;
        }
        c.require(ok, "seeded sweeps reproduce bit-identically, independent of threads");
    }
    c.finish();
}

} // namespace

int main() {
    std::printf("sliceadc acceptance suite\n\n");
    criterion_1_budget();
    criterion_2_rescale();
    criterion_3_jitter_growth();
    criterion_4_noiseless_floor();
    criterion_5_carrier_noise();
    criterion_6_rin_cancellation();
    criterion_7_frequency_sweeps();
    criterion_8_properties();

    std::printf("\n%d of 8 criteria passed\n", 8 - criteria_failed);
    return criteria_failed == 0 ? 0 : 1;
}
