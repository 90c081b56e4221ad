#pragma once
// Optical front end: mode-locked comb synthesis with correlated and
// repetition-rate phase noise, carrier modulation (ideal linear and
// quadrature-biased MZM transfer), brick-wall spectral slicing, local
// oscillator line isolation with a power monitor tap, and balanced
// heterodyne photodetection.
//
// Frequency bookkeeping is envelope-relative: the optical carrier sits at
// envelope frequency zero, slice m spans [m*f_r - f_delta, (m+1)*f_r -
// f_delta), and the LO line for slice m sits at m*f_r - 2*f_delta, so every
// in-slice beat note lands in [f_delta, f_r + f_delta), strictly positive.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noise.hpp"
#include "sigkit.hpp"

namespace sliceadc {

/// Slice count, slice width and guard offset of the spectral slicing filter
/// bank. The guard keeps the carrier and every beat note away from DC.
struct FrequencyPlan {
    std::size_t n_slices = 0;
    double f_r_hz = 0.0;     // slice width = comb line spacing
    double f_delta_hz = 0.0; // guard offset

    FrequencyPlan() = default;
    FrequencyPlan(std::size_t m, double f_r, double f_delta)
        : n_slices(m), f_r_hz(f_r), f_delta_hz(f_delta) {
        if (n_slices < 1) throw std::invalid_argument("FrequencyPlan: need at least one slice");
        if (!(f_r_hz > 0)) throw std::invalid_argument("FrequencyPlan: slice width must be positive");
        if (!(f_delta_hz > 0 && f_delta_hz < 0.25 * f_r_hz))
            throw std::invalid_argument("FrequencyPlan: guard must satisfy 0 < f_delta < f_r/4");
    }

    BandMask slice_band(std::size_t m) const {
        check_index(m);
        const double lo = static_cast<double>(m) * f_r_hz - f_delta_hz;
        return BandMask(lo, lo + f_r_hz);
    }

    double lo_frequency(std::size_t m) const {
        check_index(m);
        return static_cast<double>(m) * f_r_hz - 2.0 * f_delta_hz;
    }

    BandMask lo_band(std::size_t m) const {
        const double c = lo_frequency(m);
        return BandMask(c - 0.5 * f_r_hz, c + 0.5 * f_r_hz);
    }

    /// Total reconstructed band [-f_delta, M*f_r - f_delta).
    BandMask total_band() const {
        return BandMask(-f_delta_hz, static_cast<double>(n_slices) * f_r_hz - f_delta_hz);
    }

    /// Index of the slice containing envelope frequency f.
    std::size_t slice_index(double f_hz) const {
        const double x = std::floor((f_hz + f_delta_hz) / f_r_hz);
        if (x < 0 || x >= static_cast<double>(n_slices))
            throw std::invalid_argument("FrequencyPlan: frequency outside the sliced band");
        return static_cast<std::size_t>(x);
    }

    /// Highest RF frequency whose upper sideband still falls in the band.
    double max_rf_hz() const { return static_cast<double>(n_slices) * f_r_hz - f_delta_hz; }

private:
    void check_index(std::size_t m) const {
        if (m >= n_slices) throw std::invalid_argument("FrequencyPlan: slice index out of range");
    }
};

/// Comb description: per-line complex amplitudes and static phases, line
/// spacing, index of the jitter-free center line (0-based) and the envelope
/// frequency of that center line.
struct CombSpec {
    double spacing_hz = 0.0;
    double center_offset_hz = 0.0;
    std::size_t center_index = 0;
    std::vector<double> amplitudes;
    std::vector<double> static_phases;

    void validate() const {
        if (amplitudes.empty())
            throw std::invalid_argument("CombSpec: need at least one line");
        if (amplitudes.size() != static_phases.size())
            throw std::invalid_argument("CombSpec: amplitude and phase counts differ");
        if (!(spacing_hz > 0))
            throw std::invalid_argument("CombSpec: line spacing must be positive");
        if (center_index >= amplitudes.size())
            throw std::invalid_argument("CombSpec: center line index out of range");
        for (double a : amplitudes)
            if (!(a > 0)) throw std::invalid_argument("CombSpec: line amplitudes must be positive");
    }

    std::size_t lines() const { return amplitudes.size(); }

    double line_frequency(std::size_t n) const {
        return center_offset_hz +
               (static_cast<double>(n) - static_cast<double>(center_index)) * spacing_hz;
    }
};

enum class Transducer { linear, mzm };

/// Single-tone RF drive: frequency, modulation index, transfer model.
struct ToneSpec {
    double freq_hz = 0.0;
    double mod_index = 0.0;
    Transducer transducer = Transducer::linear;

    void validate(const FrequencyPlan& plan) const {
        if (!(freq_hz > 0))
            throw std::invalid_argument("ToneSpec: frequency must be positive");
        if (freq_hz >= plan.max_rf_hz())
            throw std::invalid_argument("ToneSpec: upper sideband falls outside the sliced band");
        if (!(mod_index > 0) || mod_index > 1.0 ||
            (transducer == Transducer::mzm && mod_index >= 1.0))
            throw std::invalid_argument("ToneSpec: modulation index out of range");
    }
};

/// Comb field envelope: correlated phase theta_c on every line, pulse-train
/// timing jitter dt_r as line-index-proportional phase, static phases phi_n.
/// Either noise input may be empty (noise source disabled).
inline Waveform synthesize_comb(const CombSpec& spec, const PhasePath& theta_c,
                                const JitterPath& delta_t_r, const TimeGrid& grid) {
    spec.validate();
    if (!theta_c.empty() && !(theta_c.grid == grid))
        throw std::invalid_argument("synthesize_comb: theta_c grid mismatch");
    if (!delta_t_r.empty() && !(delta_t_r.grid == grid))
        throw std::invalid_argument("synthesize_comb: jitter grid mismatch");
    for (std::size_t n = 0; n < spec.lines(); ++n)
        if (std::abs(spec.line_frequency(n)) > grid.nyquist())
            throw std::invalid_argument("synthesize_comb: comb line outside representable band");

    Waveform out(grid, Kind::complex_envelope);
    for (std::size_t n = 0; n < spec.lines(); ++n) {
        const double f_n = spec.line_frequency(n);
        const double rel = static_cast<double>(n) - static_cast<double>(spec.center_index);
        const double jitter_gain = rel * two_pi * spec.spacing_hz;
        const double amp = spec.amplitudes[n];
        const double phi = spec.static_phases[n];
        for (std::size_t k = 0; k < grid.n; ++k) {
            double ph = two_pi * f_n * grid.time_at(k) + phi;
            if (!delta_t_r.empty()) ph += jitter_gain * delta_t_r.dt[k];
            out.s[k] += amp * std::polar(1.0, ph);
        }
    }
    if (!theta_c.empty())
        for (std::size_t k = 0; k < grid.n; ++k)
            out.s[k] *= std::polar(1.0, theta_c.phase[k]);
    return out;
}

namespace detail {

inline Waveform modulate(const PhasePath& theta_0, const std::vector<ToneSpec>& tones,
                         const TimeGrid& grid, Transducer transducer) {
    if (!theta_0.empty() && !(theta_0.grid == grid))
        throw std::invalid_argument("modulate_carrier: theta_0 grid mismatch");
    for (const auto& t : tones)
        if (t.freq_hz >= grid.nyquist())
            throw std::invalid_argument("modulate_carrier: tone above the grid Nyquist");

    Waveform out(grid, Kind::complex_envelope);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double tk = grid.time_at(k);
        double drive = 0.0;
        for (const auto& t : tones) drive += t.mod_index * std::cos(two_pi * t.freq_hz * tk);
        const double env = transducer == Transducer::linear
                               ? 1.0 + drive
                               : std::cos(0.25 * pi + 0.25 * pi * drive);
        out.s[k] = theta_0.empty() ? cdouble(env, 0.0)
                                   : env * std::polar(1.0, theta_0.phase[k]);
    }
    return out;
}

} // namespace detail

/// Modulated carrier envelope. Linear mode: e^{j theta_0} (1 + a cos w t).
/// MZM mode (quadrature bias, drive as a fraction of V_pi):
/// e^{j theta_0} cos(pi/4 + (pi/4) a cos w t).
inline Waveform modulate_carrier(const PhasePath& theta_0, const ToneSpec& tone,
                                 const TimeGrid& grid) {
    return detail::modulate(theta_0, {tone}, grid, tone.transducer);
}

/// Brick-wall extraction of slice m from the modulated signal.
inline Waveform slice_signal(const Waveform& w, const FrequencyPlan& plan, std::size_t m) {
    return brickwall_filter(w, plan.slice_band(m));
}

/// Brick-wall isolation of the LO comb line for slice m (band f_LO +/-
/// f_r/2) plus the instantaneous power monitor used for RIN cancellation.
/// Throws if the band carries no comb line.
inline std::pair<Waveform, std::vector<double>> isolate_lo_line(const Waveform& comb,
                                                                const FrequencyPlan& plan,
                                                                std::size_t m) {
    Waveform lo = brickwall_filter(comb, plan.lo_band(m));
    const double kept = power(lo);
    if (!(kept > 1e-12 * power(comb)))
        throw std::invalid_argument("isolate_lo_line: no comb line within the LO filter band");
    std::vector<double> monitor(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) monitor[k] = std::norm(lo.s[k]);
    return {std::move(lo), std::move(monitor)};
}

/// Balanced photodetector pair: i(t) = 2 Re{ E_sig conj(E_lo) }. Common
/// direct-detection terms |E_sig|^2 and |E_lo|^2 cancel exactly.
inline Waveform balanced_detect(const Waveform& sig, const Waveform& lo) {
    if (!(sig.grid == lo.grid))
        throw std::invalid_argument("balanced_detect: grid mismatch");
    if (sig.is_real() || lo.is_real())
        throw std::invalid_argument("balanced_detect: inputs must be complex envelopes");
    Waveform out(sig.grid, Kind::real_signal);
    for (std::size_t k = 0; k < out.size(); ++k)
        out.s[k] = 2.0 * (sig.s[k] * std::conj(lo.s[k])).real();
    return out;
}

} // namespace sliceadc
