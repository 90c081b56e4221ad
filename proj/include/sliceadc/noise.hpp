#pragma once
// Phase-noise machinery: Wiener (random-walk) phase paths for Lorentzian
// lines, conversion of oscillator phase to timing jitter, closed-form RMS
// jitter growth and record-length rescaling, and deterministic seed
// derivation for reproducible multi-run ensembles.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sigkit.hpp"

namespace sliceadc {

/// Linewidths of the four phase-noise processes and the electrical
/// oscillator frequency they act on. All linewidths are FWHM in Hz.
struct NoiseSpec {
    double carrier_lw_hz = 0.0;     // CW carrier optical linewidth
    double mll_optical_lw_hz = 0.0; // correlated comb-line linewidth
    double mll_rf_lw_hz = 0.0;      // comb beat-note (repetition-rate) linewidth
    double elec_lw_hz = 0.0;        // electrical sampling oscillator linewidth
    double elec_osc_freq_hz = 0.0;  // frequency of that oscillator

    void validate() const {
        if (carrier_lw_hz < 0 || mll_optical_lw_hz < 0 || mll_rf_lw_hz < 0 || elec_lw_hz < 0)
            throw std::invalid_argument("NoiseSpec: linewidths must be non-negative");
        if (elec_lw_hz > 0 && !(elec_osc_freq_hz > 0))
            throw std::invalid_argument("NoiseSpec: oscillator frequency must be positive");
    }
};

/// One realization of a Wiener phase process on a grid, phase[0] = 0.
struct PhasePath {
    TimeGrid grid;
    std::vector<double> phase;
    double linewidth_hz = 0.0;
    std::uint64_t seed = 0;

    bool empty() const { return phase.empty(); }
};

/// Timing-jitter sequence dt(t) = phase(t) / (2 pi f_osc) on a grid.
struct JitterPath {
    TimeGrid grid;
    std::vector<double> dt;

    bool empty() const { return dt.empty(); }

    /// Linear interpolation at an instant inside the record.
    double at(double t) const {
        if (dt.empty()) return 0.0;
        const double x = t / grid.dt;
        if (!(x >= 0.0))
            throw std::out_of_range("JitterPath: instant before the record");
        auto k = static_cast<std::size_t>(x);
        if (k >= dt.size() - 1) return dt.back();
        const double u = x - static_cast<double>(k);
        return dt[k] + u * (dt[k + 1] - dt[k]);
    }
};

/// Wiener phase path for a Lorentzian line of the given FWHM linewidth:
/// independent Gaussian increments of variance 2 pi * linewidth * dt.
inline PhasePath wiener_path(double linewidth_hz, const TimeGrid& grid, std::uint64_t seed) {
    if (linewidth_hz < 0)
        throw std::invalid_argument("wiener_path: linewidth must be non-negative");
    PhasePath p{grid, std::vector<double>(grid.n, 0.0), linewidth_hz, seed};
    if (linewidth_hz == 0.0) return p;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(two_pi * linewidth_hz * grid.dt));
    double acc = 0.0;
    for (std::size_t k = 1; k < grid.n; ++k) {
        acc += gauss(rng);
        p.phase[k] = acc;
    }
    return p;
}

/// Absorb a path's net frequency offset over the record. The linear phase
/// component theta_end * t / T is a constant laser frequency error across
/// this record; a receiver locked to the record-average optical frequency
/// folds it into the frequency plan rather than seeing it as noise. After
/// removal the path starts and ends at zero, so e^{j theta} is continuous
/// across the record wrap and circular spectral processing measures genuine
/// phase-noise sidebands instead of the record's net drift. Returns the
/// absorbed offset in Hz.
inline double absorb_record_frequency(PhasePath& p) {
    const std::size_t n = p.phase.size();
    if (n < 2) return 0.0;
    const double end = p.phase[n - 1];
    const double step = end / static_cast<double>(n - 1);
    for (std::size_t k = 1; k < n; ++k) p.phase[k] -= step * static_cast<double>(k);
    return step / (two_pi * p.grid.dt);
}

/// Phase-to-time conversion for an oscillator at osc_freq_hz.
inline JitterPath path_to_jitter(const PhasePath& path, double osc_freq_hz) {
    if (!(osc_freq_hz > 0))
        throw std::invalid_argument("path_to_jitter: oscillator frequency must be positive");
    JitterPath j{path.grid, std::vector<double>(path.phase.size())};
    const double scale = 1.0 / (two_pi * osc_freq_hz);
    for (std::size_t k = 0; k < path.phase.size(); ++k) j.dt[k] = path.phase[k] * scale;
    return j;
}

/// Closed-form RMS timing jitter accumulated over elapsed time t:
/// sqrt(2 pi * linewidth * t) / (2 pi * f_osc).
inline double jitter_rms(double linewidth_hz, double elapsed_s, double osc_freq_hz) {
    if (linewidth_hz < 0 || elapsed_s < 0)
        throw std::invalid_argument("jitter_rms: negative linewidth or elapsed time");
    if (!(osc_freq_hz > 0))
        throw std::invalid_argument("jitter_rms: oscillator frequency must be positive");
    return std::sqrt(two_pi * linewidth_hz * elapsed_s) / (two_pi * osc_freq_hz);
}

/// Diffusive rescaling of an RMS jitter from one observation time to another.
inline double rescale_jitter(double jitter_s, double t_from_s, double t_to_s) {
    if (!(t_from_s > 0) || !(t_to_s > 0))
        throw std::invalid_argument("rescale_jitter: observation times must be positive");
    return jitter_s * std::sqrt(t_to_s / t_from_s);
}

/// RMS of the record-averaged phase variance expressed as timing jitter:
/// a Wiener phase observed over a whole record of length T carries mean
/// variance 2 pi * linewidth * T / 2, so the effective jitter against which
/// record-level noise ratios are compared is jitter_rms at T/2.
inline double record_effective_jitter(double linewidth_hz, double record_s, double osc_freq_hz) {
    return jitter_rms(linewidth_hz, 0.5 * record_s, osc_freq_hz);
}

enum class SeedRole : std::uint64_t {
    carrier_phase = 1,
    mll_optical_phase = 2,
    mll_rf_phase = 3,
    elec_clock_phase = 4,
    comb_static_phases = 5,
    calibration = 6,
    sweep_run = 7,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

/// Deterministic per-path seed: successive splitmix64 mixing of the master
/// seed with the path role, run index and frequency index. Independent of
/// scheduling order, so multi-threaded sweeps reproduce byte-identical
/// results for a fixed master seed.
inline std::uint64_t derive_seed(std::uint64_t master, SeedRole role,
                                 std::uint64_t run_index = 0, std::uint64_t freq_index = 0) {
    using detail::splitmix64;
    std::uint64_t h = splitmix64(master ^ 0xD1B54A32D192ED03ull);
    h = splitmix64(h ^ static_cast<std::uint64_t>(role) * 0x9E3779B97F4A7C15ull);
    h = splitmix64(h ^ run_index * 0xBF58476D1CE4E5B9ull);
    h = splitmix64(h ^ freq_index * 0x94D049BB133111EBull);
    return h;
}

} // namespace sliceadc
