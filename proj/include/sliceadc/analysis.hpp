#pragma once
// Closed-form SNR/ENOB models, the slice-count jitter budget, NSR
// measurement against the SSB reference, and Monte Carlo orchestration:
// seeded single runs and frequency sweeps with per-point statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "digitizer.hpp"
#include "dsp.hpp"
#include "noise.hpp"
#include "optics.hpp"
#include "sigkit.hpp"

namespace sliceadc {

/// Aperture-jitter SNR of a plain electrical ADC: 20 log10(1/(2 pi f dt)).
inline double snr_electrical(double f_rf_hz, double jitter_s) {
    if (!(f_rf_hz > 0))
        throw std::invalid_argument("snr_electrical: frequency must be positive");
    if (!(jitter_s > 0))
        throw std::invalid_argument("snr_electrical: jitter must be positive");
    return -20.0 * std::log10(two_pi * f_rf_hz * jitter_s);
}

namespace detail {

/// Staircase SNR for a tone in slice m. The comb contributes m*w_r*dt_r of
/// beat phase error, the sampling clock (w - m*w_r)*dt_e; the two variances
/// add. Infinite when both terms vanish (noiseless limit).
inline double snr_staircase(double f_rf_hz, double f_r_hz, std::size_t m, double dt_r_s,
                            double dt_e_s) {
    const double w_r = two_pi * f_r_hz;
    const double md = static_cast<double>(m);
    const double err = std::hypot(md * w_r * dt_r_s, (two_pi * f_rf_hz - md * w_r) * dt_e_s);
    if (!(err > 0)) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(err);
}

} // namespace detail

/// Sliced-converter SNR at a tone frequency: the slice index comes from the
/// frequency plan, so the result is a staircase over the sliced band.
inline double snr_sliced(double f_rf_hz, const FrequencyPlan& plan, double dt_r_s,
                         double dt_e_s) {
    if (dt_r_s < 0 || dt_e_s < 0)
        throw std::invalid_argument("snr_sliced: jitters must be non-negative");
    const std::size_t m = plan.slice_index(f_rf_hz);
    return detail::snr_staircase(f_rf_hz, plan.f_r_hz, m, dt_r_s, dt_e_s);
}

inline double enob(double snr_db) { return (snr_db - 1.76) / 6.02; }

struct BudgetPoint {
    double f_hz = 0.0;
    double snr_db = 0.0;
};

/// Jitter budget for an M-slice converter of total bandwidth M*f_r. At the
/// band edge the clock only sees the top slice's beat (one slice width), so
/// it acts like an effective jitter dt_e/M at the full input frequency;
/// the comb term mw_r*dt_r likewise reads as dt_r*(M-1)/M.
struct BudgetReport {
    std::size_t n_slices = 0;
    double f_r_hz = 0.0;
    double mll_jitter_s = 0.0;
    double elec_jitter_s = 0.0;
    bool rescaled = false;
    double t_from_s = 0.0;
    double t_to_s = 0.0;
    double mll_jitter_used_s = 0.0;  // after the optional observation-time rescale
    double elec_jitter_used_s = 0.0;
    double eff_mll_jitter_s = 0.0;   // dt_r * (M-1)/M
    double eff_elec_jitter_s = 0.0;  // dt_e / M
    double worst_freq_hz = 0.0;      // M * f_r
    double worst_snr_db = 0.0;
    double worst_enob = 0.0;
    double electric_snr_db = 0.0;    // all-electric comparator at M*f_r with dt_e
    double electric_enob = 0.0;
    std::vector<BudgetPoint> curve;  // staircase across the band, 8 points per slice
};

struct Rescale {
    double t_from_s = 0.0;
    double t_to_s = 0.0;
};

inline BudgetReport budget(std::size_t n_slices, double f_r_hz, double mll_jitter_s,
                           double elec_jitter_s, std::optional<Rescale> rescale = {}) {
    if (n_slices < 1) throw std::invalid_argument("budget: need at least one slice");
    if (!(f_r_hz > 0)) throw std::invalid_argument("budget: slice width must be positive");
    if (mll_jitter_s < 0 || elec_jitter_s < 0)
        throw std::invalid_argument("budget: jitters must be non-negative");

    BudgetReport r;
    r.n_slices = n_slices;
    r.f_r_hz = f_r_hz;
    r.mll_jitter_s = mll_jitter_s;
    r.elec_jitter_s = elec_jitter_s;
    r.mll_jitter_used_s = mll_jitter_s;
    r.elec_jitter_used_s = elec_jitter_s;
    if (rescale) {
        r.rescaled = true;
        r.t_from_s = rescale->t_from_s;
        r.t_to_s = rescale->t_to_s;
        r.mll_jitter_used_s = rescale_jitter(mll_jitter_s, rescale->t_from_s, rescale->t_to_s);
        r.elec_jitter_used_s = rescale_jitter(elec_jitter_s, rescale->t_from_s, rescale->t_to_s);
    }

    const double md = static_cast<double>(n_slices);
    r.eff_mll_jitter_s = r.mll_jitter_used_s * (md - 1.0) / md;
    r.eff_elec_jitter_s = r.elec_jitter_used_s / md;
    r.worst_freq_hz = md * f_r_hz;
    r.worst_snr_db = detail::snr_staircase(r.worst_freq_hz, f_r_hz, n_slices - 1,
                                           r.mll_jitter_used_s, r.elec_jitter_used_s);
    r.worst_enob = enob(r.worst_snr_db);
    r.electric_snr_db =
        r.elec_jitter_used_s > 0
            ? snr_electrical(r.worst_freq_hz, r.elec_jitter_used_s)
            : std::numeric_limits<double>::infinity();
    r.electric_enob = enob(r.electric_snr_db);

    const std::size_t per_slice = 8;
    r.curve.reserve(per_slice * n_slices);
    for (std::size_t k = 1; k <= per_slice * n_slices; ++k) {
        const double f = static_cast<double>(k) * f_r_hz / static_cast<double>(per_slice);
        const auto m = std::min<std::size_t>(
            static_cast<std::size_t>(std::floor(f / f_r_hz + 1e-9)), n_slices - 1);
        r.curve.push_back({f, detail::snr_staircase(f, f_r_hz, m, r.mll_jitter_used_s,
                                                    r.elec_jitter_used_s)});
    }
    return r;
}

/// Noise-to-signal ratio of a reconstruction against its reference, both
/// mean-removed: 10 log10( sum (recon_ac - ref_ac)^2 / sum ref_ac^2 ),
/// floored at -150 dB.
inline double measure_nsr(const Waveform& recon_s, const Waveform& reference_s) {
    if (!(recon_s.grid == reference_s.grid))
        throw std::invalid_argument("measure_nsr: records on different grids");
    if (!recon_s.is_real() || !reference_s.is_real())
        throw std::invalid_argument("measure_nsr: records must be real");
    const double mu_a = mean_real(recon_s);
    const double mu_b = mean_real(reference_s);
    double num = 0.0, num_c = 0.0, den = 0.0, den_c = 0.0;
    for (std::size_t k = 0; k < recon_s.size(); ++k) {
        const double a = recon_s.s[k].real() - mu_a;
        const double b = reference_s.s[k].real() - mu_b;
        const double d = (a - b) * (a - b);
        double y = d - num_c;
        double t = num + y;
        num_c = (t - num) - y;
        num = t;
        const double e = b * b;
        y = e - den_c;
        t = den + y;
        den_c = (t - den) - y;
        den = t;
    }
    if (!(den > 0)) throw std::invalid_argument("measure_nsr: zero-power reference");
    return std::max(10.0 * std::log10(std::max(num / den, 1e-15)), -150.0);
}

/// Fully resolved simulation scenario in SI units. The CLI layer maps its
/// configuration file onto this and validates field by field.
struct Scenario {
    TimeGrid grid;
    FrequencyPlan plan;
    NoiseSpec noise;
    struct Enables {
        bool carrier = false;
        bool mll_optical = false;
        bool mll_rf = false;
        bool elec = false;
    } enable;
    std::vector<double> comb_amplitudes;               // per LO line; empty = unit lines
    std::optional<std::vector<double>> static_phases;  // absent = random each run
    double mod_index = 0.9;
    Transducer transducer = Transducer::mzm;
    double digitizer_rate_hz = 0.0;
    int bits = 0;  // 0 = ideal digitizer (no quantization)
    bool rin_cancel = false;
    PhaseCorrection::Source phase_source = PhaseCorrection::Source::oracle;
    double pilot_mod_index = 0.05;

    bool carrier_noise_on() const { return enable.carrier && noise.carrier_lw_hz > 0; }
    bool mll_optical_on() const { return enable.mll_optical && noise.mll_optical_lw_hz > 0; }
    bool mll_rf_on() const { return enable.mll_rf && noise.mll_rf_lw_hz > 0; }
    bool elec_on() const { return enable.elec && noise.elec_lw_hz > 0; }

    void validate() const {
        if (!(grid.dt > 0) || grid.n < 2)
            throw std::invalid_argument("scenario.grid: dt must be positive and n >= 2");
        FrequencyPlan check_plan(plan.n_slices, plan.f_r_hz, plan.f_delta_hz);
        noise.validate();
        if (elec_on() && !(noise.elec_osc_freq_hz > 0))
            throw std::invalid_argument("scenario.noise: electrical oscillator frequency required");
        if (!comb_amplitudes.empty() && comb_amplitudes.size() != plan.n_slices)
            throw std::invalid_argument("scenario.comb: need one amplitude per slice");
        for (double a : comb_amplitudes)
            if (!(a > 0))
                throw std::invalid_argument("scenario.comb: line amplitudes must be positive");
        if (static_phases && static_phases->size() != plan.n_slices)
            throw std::invalid_argument("scenario.comb: need one static phase per slice");
        if (!(digitizer_rate_hz > 2.0 * (plan.f_r_hz + plan.f_delta_hz)))
            throw std::invalid_argument("scenario.digitizer: rate must exceed twice the beat band");
        if (digitizer_rate_hz > grid.sample_rate())
            throw std::invalid_argument("scenario.digitizer: rate above the simulation grid rate");
        if (bits != 0 && (bits < 1 || bits > 24))
            throw std::invalid_argument("scenario.digitizer: bits must be 1..24 or 0 for ideal");
        if (!(mod_index > 0) || mod_index > 1.0)
            throw std::invalid_argument("scenario.signal: modulation index must be in (0, 1]");
        if (!(pilot_mod_index > 0) || pilot_mod_index > 0.5)
            throw std::invalid_argument("scenario.dsp: pilot modulation index must be in (0, 0.5]");
        if (plan.max_rf_hz() > grid.nyquist())
            throw std::invalid_argument("scenario.plan: sliced band exceeds the grid Nyquist");
        (void)check_plan;
    }
};

/// Digitizer rate for the "auto" setting: modest oversampling of the widest
/// per-slice beat band f_r + 2 f_delta.
inline double auto_digitizer_rate(const FrequencyPlan& plan) {
    return 2.2 * (plan.f_r_hz + 2.0 * plan.f_delta_hz);
}

/// Analytic overlay for a sweep: the staircase SNR evaluated with the
/// record-averaged effective jitters of the enabled Wiener sources.
inline double overlay_snr(const Scenario& cfg, double f_rf_hz) {
    const double t = cfg.grid.duration();
    const double dt_r =
        cfg.mll_rf_on() ? record_effective_jitter(cfg.noise.mll_rf_lw_hz, t, cfg.plan.f_r_hz)
                        : 0.0;
    const double dt_e = cfg.elec_on() ? record_effective_jitter(cfg.noise.elec_lw_hz, t,
                                                                cfg.noise.elec_osc_freq_hz)
                                      : 0.0;
    return snr_sliced(f_rf_hz, cfg.plan, dt_r, dt_e);
}

/// Per-tone immutables reused across Monte Carlo runs: the SSB reference and,
/// when carrier noise is off (modulated signal identical in every run), the
/// sliced signal bands.
struct TonePrep {
    double freq_hz = 0.0;
    Waveform reference_s;
    std::vector<Waveform> slices;  // empty when carrier noise varies per run
};

struct RunResult {
    double nsr_db = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> static_phases;    // comb line phases realized this run
    std::vector<double> phase_correction; // estimates applied in reconstruction
    PhaseCorrection::Source phase_source = PhaseCorrection::Source::oracle;
    // Filled only when waveforms are requested:
    Waveform recon_s;
    Waveform reference_s;
    std::vector<std::vector<double>> monitors;  // per slice, |E_lo|^2 at instants
    std::vector<std::vector<double>> instants;  // per slice sampling instants
};

namespace detail {

inline std::vector<double> draw_static_phases(const Scenario& cfg, std::uint64_t seed) {
    if (cfg.static_phases) return *cfg.static_phases;
    std::mt19937_64 rng(derive_seed(seed, SeedRole::comb_static_phases));
    std::uniform_real_distribution<double> u(-pi, pi);
    std::vector<double> phi(cfg.plan.n_slices);
    for (auto& p : phi) p = u(rng);
    return phi;
}

inline CombSpec make_comb(const Scenario& cfg, std::vector<double> phases) {
    CombSpec comb;
    comb.spacing_hz = cfg.plan.f_r_hz;
    comb.center_offset_hz = -2.0 * cfg.plan.f_delta_hz;
    comb.center_index = 0;
    comb.amplitudes = cfg.comb_amplitudes.empty()
                          ? std::vector<double>(cfg.plan.n_slices, 1.0)
                          : cfg.comb_amplitudes;
    comb.static_phases = std::move(phases);
    return comb;
}

struct NoisePaths {
    PhasePath theta_0;   // carrier
    PhasePath theta_c;   // correlated comb phase
    JitterPath dt_r;     // pulse-train timing jitter
    JitterPath dt_e;     // sampling clock jitter
};

// Laser phase paths get their per-record mean frequency offset absorbed: the
// receiver tracks each laser's record-average frequency, and the offset would
// otherwise dominate spectral-truncation noise with a record-wrap artifact.
// Oscillator timing paths keep their drift: a clock rate error is sampling
// jitter, and the analytic jitter budget counts it.
inline NoisePaths make_noise_paths(const Scenario& cfg, std::uint64_t seed) {
    NoisePaths p;
    if (cfg.carrier_noise_on()) {
        p.theta_0 = wiener_path(cfg.noise.carrier_lw_hz, cfg.grid,
                                derive_seed(seed, SeedRole::carrier_phase));
        absorb_record_frequency(p.theta_0);
    }
    if (cfg.mll_optical_on()) {
        p.theta_c = wiener_path(cfg.noise.mll_optical_lw_hz, cfg.grid,
                                derive_seed(seed, SeedRole::mll_optical_phase));
        absorb_record_frequency(p.theta_c);
    }
    if (cfg.mll_rf_on())
        p.dt_r = path_to_jitter(wiener_path(cfg.noise.mll_rf_lw_hz, cfg.grid,
                                            derive_seed(seed, SeedRole::mll_rf_phase)),
                                cfg.plan.f_r_hz);
    if (cfg.elec_on())
        p.dt_e = path_to_jitter(wiener_path(cfg.noise.elec_lw_hz, cfg.grid,
                                            derive_seed(seed, SeedRole::elec_clock_phase)),
                                cfg.noise.elec_osc_freq_hz);
    return p;
}

/// Front end shared by measurement and calibration acquisitions: slice the
/// modulated signal against the comb's LO lines, detect, digitize, quantize.
inline std::vector<SliceChannel> acquire_slices(const Scenario& cfg, const Waveform& comb,
                                                const std::vector<cdouble>& modulated_fft,
                                                const std::vector<Waveform>* cached_slices,
                                                const ClockModel& clock, bool want_monitor) {
    const auto& plan = cfg.plan;
    const std::vector<cdouble> comb_fft = fft(comb);
    const double comb_power = power(comb);

    std::vector<SliceChannel> channels;
    channels.reserve(plan.n_slices);
    for (std::size_t m = 0; m < plan.n_slices; ++m) {
        Waveform lo = ifft_masked(comb_fft, cfg.grid, plan.lo_band(m), Kind::complex_envelope);
        if (!(power(lo) > 1e-12 * comb_power))
            throw std::invalid_argument("acquire_slices: no comb line within the LO filter band");

        Waveform sig_storage;
        if (!cached_slices)
            sig_storage = ifft_masked(modulated_fft, cfg.grid, plan.slice_band(m),
                                      Kind::complex_envelope);
        const Waveform& sig = cached_slices ? (*cached_slices)[m] : sig_storage;
        Waveform i_m = balanced_detect(sig, lo);

        SliceChannel ch;
        ch.m = m;
        ch.data = sample_with_jitter(i_m, clock, m);
        if (cfg.bits > 0) ch.data = quantize(ch.data, cfg.bits);
        ch.lo_offset_hz = plan.lo_frequency(m);
        ch.lo_amplitude = cfg.comb_amplitudes.empty() ? 1.0 : cfg.comb_amplitudes[m];
        if (want_monitor) {
            const auto lo_at = resample_at(lo, ch.data.instants);
            ch.rin_monitor.resize(lo_at.size());
            for (std::size_t k = 0; k < lo_at.size(); ++k)
                ch.rin_monitor[k] = std::norm(lo_at[k]);
        }
        channels.push_back(std::move(ch));
    }
    return channels;
}

/// Per-tone fundamental coefficients of the modulator drive: coefficient of
/// cos(w_i t) in the envelope. Linear: a_i. Quadrature-biased MZM via the
/// Bessel product expansion: -sqrt(2) J1(x_i) prod_{j!=i} J0(x_j), x = pi a/4.
inline std::vector<double> drive_fundamental_coeffs(const std::vector<double>& indices,
                                                    Transducer transducer) {
    std::vector<double> c(indices.size());
    if (transducer == Transducer::linear) {
        for (std::size_t i = 0; i < indices.size(); ++i) c[i] = indices[i];
        return c;
    }
    std::vector<double> j0(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) j0[i] = std::cyl_bessel_j(0, 0.25 * pi * indices[i]);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        double prod = -std::sqrt(2.0) * std::cyl_bessel_j(1, 0.25 * pi * indices[i]);
        for (std::size_t j = 0; j < indices.size(); ++j)
            if (j != i) prod *= j0[j];
        c[i] = prod;
    }
    return c;
}

/// Pilot-tone calibration acquisition: one record carrying a pilot at every
/// slice center, run through the full front end with fresh noise paths, then
/// the one-tap estimator.
inline PhaseCorrection calibrate_phases(const Scenario& cfg, std::uint64_t seed,
                                        const std::vector<double>& static_phases) {
    const auto& plan = cfg.plan;
    const std::uint64_t cal_seed = derive_seed(seed, SeedRole::calibration);
    const NoisePaths paths = make_noise_paths(cfg, cal_seed);

    std::vector<ToneSpec> pilots(plan.n_slices);
    const double t_total = cfg.grid.duration();
    for (std::size_t m = 0; m < plan.n_slices; ++m) {
        const double center = (static_cast<double>(m) + 0.5) * plan.f_r_hz - plan.f_delta_hz;
        pilots[m].freq_hz = std::round(center * t_total) / t_total; // snap to a grid bin
        pilots[m].mod_index = cfg.pilot_mod_index;
        pilots[m].transducer = cfg.transducer;
        pilots[m].validate(plan);
    }

    Waveform modulated = modulate(paths.theta_0, pilots, cfg.grid, cfg.transducer);
    Waveform comb = synthesize_comb(make_comb(cfg, static_phases), paths.theta_c, paths.dt_r,
                                    cfg.grid);
    ClockModel clock{cfg.digitizer_rate_hz, cfg.noise.elec_osc_freq_hz, paths.dt_e};
    auto channels = acquire_slices(cfg, comb, fft(modulated), nullptr, clock, false);

    std::vector<double> indices(plan.n_slices, cfg.pilot_mod_index);
    const auto coeffs = drive_fundamental_coeffs(indices, cfg.transducer);

    std::vector<PilotChannel> cal(plan.n_slices);
    for (std::size_t m = 0; m < plan.n_slices; ++m) {
        cal[m].channel = std::move(channels[m]);
        cal[m].pilot_freq_hz = pilots[m].freq_hz;
        cal[m].predicted_phase_rad = coeffs[m] < 0 ? pi : 0.0;
        cal[m].expected_amplitude = std::abs(coeffs[m]) * cal[m].channel.lo_amplitude;
    }
    return estimate_static_phases(cal, plan);
}

} // namespace detail

/// Precompute the per-tone immutables for repeated runs at one frequency.
inline TonePrep prepare_tone(const Scenario& cfg, double f_rf_hz) {
    cfg.validate();
    ToneSpec tone{f_rf_hz, cfg.mod_index, cfg.transducer};
    tone.validate(cfg.plan);

    TonePrep prep;
    prep.freq_hz = f_rf_hz;
    Waveform noiseless = modulate_carrier(PhasePath{}, tone, cfg.grid);
    const std::vector<cdouble> mod_fft = fft(noiseless);
    prep.reference_s = detail::ifft_masked(mod_fft, cfg.grid, cfg.plan.total_band(),
                                           Kind::complex_envelope);
    for (auto& v : prep.reference_s.s) v = std::norm(v);
    prep.reference_s.kind = Kind::real_signal;
    if (!cfg.carrier_noise_on()) {
        prep.slices.reserve(cfg.plan.n_slices);
        for (std::size_t m = 0; m < cfg.plan.n_slices; ++m)
            prep.slices.push_back(detail::ifft_masked(mod_fft, cfg.grid, cfg.plan.slice_band(m),
                                                      Kind::complex_envelope));
    }
    return prep;
}

/// One end-to-end Monte Carlo run: noise realization, comb synthesis,
/// modulation, slicing, balanced detection, jittered digitization,
/// reconstruction, and NSR against the noiseless SSB reference.
inline RunResult simulate_once(const Scenario& cfg, double f_rf_hz, std::uint64_t seed,
                               const TonePrep* prep = nullptr, bool keep_waveforms = false) {
    cfg.validate();
    if (prep && prep->freq_hz != f_rf_hz)
        throw std::invalid_argument("simulate_once: prepared tone frequency mismatch");
    ToneSpec tone{f_rf_hz, cfg.mod_index, cfg.transducer};
    tone.validate(cfg.plan);

    const detail::NoisePaths paths = detail::make_noise_paths(cfg, seed);
    std::vector<double> static_phases = detail::draw_static_phases(cfg, seed);

    TonePrep local;
    if (!prep) {
        local = prepare_tone(cfg, f_rf_hz);
        prep = &local;
    }

    Waveform comb = synthesize_comb(detail::make_comb(cfg, static_phases), paths.theta_c,
                                    paths.dt_r, cfg.grid);
    std::vector<cdouble> mod_fft;
    const std::vector<Waveform>* cached = nullptr;
    if (cfg.carrier_noise_on() || prep->slices.empty())
        mod_fft = fft(modulate_carrier(paths.theta_0, tone, cfg.grid));
    else
        cached = &prep->slices;

    ClockModel clock{cfg.digitizer_rate_hz, cfg.noise.elec_osc_freq_hz, paths.dt_e};
    auto channels = detail::acquire_slices(cfg, comb, mod_fft, cached, clock,
                                           cfg.rin_cancel || keep_waveforms);

    PhaseCorrection corr;
    if (cfg.phase_source == PhaseCorrection::Source::pilot) {
        corr = detail::calibrate_phases(cfg, seed, static_phases);
    } else {
        corr.source = PhaseCorrection::Source::oracle;
        corr.phi = static_phases;
    }

    auto recon = reconstruct(channels, cfg.plan, corr, cfg.rin_cancel, cfg.grid);

    RunResult out;
    out.nsr_db = measure_nsr(recon.s, prep->reference_s);
    out.seed = seed;
    out.static_phases = std::move(static_phases);
    out.phase_correction = corr.phi;
    out.phase_source = corr.source;
    if (keep_waveforms) {
        out.recon_s = std::move(recon.s);
        out.reference_s = prep->reference_s;
        out.monitors.reserve(channels.size());
        out.instants.reserve(channels.size());
        for (auto& ch : channels) {
            out.monitors.push_back(std::move(ch.rin_monitor));
            out.instants.push_back(std::move(ch.data.instants));
        }
    }
    return out;
}

/// Sweep statistics for one frequency point.
struct SnrReport {
    double freq_hz = 0.0;
    double nsr_mean_db = 0.0;
    double nsr_std_db = 0.0;
    double ci3_db = 0.0;  // 3 std / sqrt(runs)
    double snr_analytic_db = 0.0;
    std::size_t n_runs = 0;
};

namespace detail {

/// Reduce per-run NSRs in the linear power domain (dB averages of a skewed
/// ratio are biased), then express mean and spread back in dB.
inline SnrReport reduce_point(double freq_hz, double snr_analytic_db,
                              const std::vector<double>& nsr_db) {
    SnrReport rep;
    rep.freq_hz = freq_hz;
    rep.snr_analytic_db = snr_analytic_db;
    rep.n_runs = nsr_db.size();
    std::vector<double> lin(nsr_db.size());
    for (std::size_t i = 0; i < nsr_db.size(); ++i) lin[i] = std::pow(10.0, 0.1 * nsr_db[i]);
    double mean = 0.0;
    for (double v : lin) mean += v;
    mean /= static_cast<double>(lin.size());
    double var = 0.0;
    if (lin.size() > 1) {
        for (double v : lin) var += (v - mean) * (v - mean);
        var /= static_cast<double>(lin.size() - 1);
    }
    const double sd = std::sqrt(var);
    rep.nsr_mean_db = 10.0 * std::log10(std::max(mean, 1e-15));
    rep.nsr_std_db = mean > 0 ? (10.0 / std::log(10.0)) * sd / mean : 0.0;
    rep.ci3_db = 3.0 * rep.nsr_std_db / std::sqrt(static_cast<double>(lin.size()));
    return rep;
}

} // namespace detail

/// Monte Carlo frequency sweep: runs_per_point independent runs at each
/// frequency with seeds derived from (master, run, frequency). Results are
/// reduced in frequency order and do not depend on the thread count.
inline std::vector<SnrReport> sweep(const Scenario& cfg, const std::vector<double>& freqs,
                                    std::size_t runs_per_point, std::uint64_t master_seed,
                                    unsigned threads = 1) {
    cfg.validate();
    if (freqs.empty()) throw std::invalid_argument("sweep: empty frequency list");
    if (runs_per_point < 1) throw std::invalid_argument("sweep: need at least one run per point");
    for (double f : freqs) {
        ToneSpec tone{f, cfg.mod_index, cfg.transducer};
        tone.validate(cfg.plan);
        frequency_bin(cfg.grid, f);  // sweeps require on-bin tones
    }

    std::vector<SnrReport> reports;
    reports.reserve(freqs.size());
    for (std::size_t fi = 0; fi < freqs.size(); ++fi) {
        const TonePrep prep = prepare_tone(cfg, freqs[fi]);
        std::vector<double> nsr(runs_per_point);
        auto run_block = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t ri = lo; ri < hi; ++ri) {
                const std::uint64_t seed = derive_seed(master_seed, SeedRole::sweep_run, ri, fi);
                nsr[ri] = simulate_once(cfg, freqs[fi], seed, &prep).nsr_db;
            }
        };
        const unsigned workers =
            std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(runs_per_point)));
        if (workers == 1) {
            run_block(0, runs_per_point);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (runs_per_point + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                const std::size_t lo = static_cast<std::size_t>(w) * chunk;
                const std::size_t hi = std::min(runs_per_point, lo + chunk);
                if (lo < hi) pool.emplace_back(run_block, lo, hi);
            }
            for (auto& t : pool) t.join();
        }
        const double snr = overlay_snr(cfg, freqs[fi]);
        reports.push_back(detail::reduce_point(freqs[fi], snr, nsr));
    }
    return reports;
}

} // namespace sliceadc
