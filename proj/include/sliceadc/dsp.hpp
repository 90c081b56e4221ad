#pragma once
// Digital back end: per-slice analytic-signal conversion, RIN normalization,
// one-tap static phase equalization, band stitching by spectral embedding at
// the LO offset, and the single-sideband digitization reference.
//
// Stitching shifts each slice record's full positive beat spectrum up by the
// slice's LO offset. The optical slicing already partitions the input band,
// so a noiseless chain places beats only inside [f_delta, f_r + f_delta) and
// the shifted spectra tile the sliced band with no overlap. Noise sidebands
// that spill past the nominal window (phase noise wings, sampling error) are
// kept rather than clipped: discarding them would break the |F|^2 common
// phase cancellation for wideband phase noise and silently hide error power.
//
// The composite field is normalized so that a noiseless chain reproduces the
// SSB reference exactly: the balanced detector contributes a factor 2 and
// the analytic conversion another, hence the 1/2 in the stitching scale.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "digitizer.hpp"
#include "optics.hpp"
#include "sigkit.hpp"

namespace sliceadc {

/// One slice's contribution to reconstruction: the ADC record, the LO line
/// it was mixed against, and optionally the LO power monitor resampled to
/// the same instants.
struct SliceChannel {
    std::size_t m = 0;
    DigitizedSlice data;
    double lo_offset_hz = 0.0;
    double lo_amplitude = 0.0;
    std::vector<double> rin_monitor; // |E_lo(t)|^2 at the sampling instants; may be empty
};

/// Static comb-line phase estimates, one per slice, applied as e^{+j phi}.
struct PhaseCorrection {
    enum class Source { oracle, pilot };
    std::vector<double> phi;
    Source source = Source::oracle;
};

struct ReconstructionResult {
    Waveform field;                     // composite phasor F(t) on the reconstruction grid
    Waveform s;                         // reconstructed signal S(t) = |F(t)|^2
    std::vector<Waveform> slice_phasors; // equalized per-slice phasors at the digitizer rate
};

inline double wrap_phase(double x) { return std::remainder(x, two_pi); }

/// Stitch the digitized slice records into the reconstructed signal.
/// Per slice: analytic conversion, division by sqrt(monitor) (RIN
/// cancellation) or by the static LO amplitude, rotation by the static phase
/// estimate, then embedding of the positive beat spectrum at the LO offset.
inline ReconstructionResult reconstruct(const std::vector<SliceChannel>& channels,
                                        const FrequencyPlan& plan,
                                        const PhaseCorrection& corr, bool rin_cancel,
                                        const TimeGrid& recon_grid) {
    const std::size_t m_total = plan.n_slices;
    if (channels.size() != m_total)
        throw std::invalid_argument("reconstruct: need exactly one channel per slice");
    if (corr.phi.size() != m_total)
        throw std::invalid_argument("reconstruct: phase correction size mismatch");
    std::vector<bool> seen(m_total, false);

    const std::size_t n = recon_grid.n;
    const double t_total = recon_grid.duration();
    std::vector<cdouble> F_spec(n, 0.0);

    ReconstructionResult out;
    out.slice_phasors.resize(m_total);

    for (const auto& ch : channels) {
        if (ch.m >= m_total || seen[ch.m])
            throw std::invalid_argument("reconstruct: slice indices must cover each slice once");
        seen[ch.m] = true;

        const std::size_t n_d = ch.data.samples.size();
        if (n_d < 2) throw std::invalid_argument("reconstruct: empty slice record");
        const double dur_d = ch.data.duration();
        if (std::abs(dur_d - t_total) > 1e-9 * t_total)
            throw std::invalid_argument("reconstruct: slice record and reconstruction grid span different durations");
        if (0.5 * ch.data.rate_hz < plan.f_r_hz + plan.f_delta_hz)
            throw std::invalid_argument("reconstruct: digitizer Nyquist below the slice beat band");

        const double lo_bins_f = ch.lo_offset_hz * t_total;
        const double lo_bins_r = std::round(lo_bins_f);
        if (std::abs(lo_bins_f - lo_bins_r) > 1e-6)
            throw std::invalid_argument("reconstruct: LO offset is not on a reconstruction bin");
        const auto lo_bins = static_cast<long long>(lo_bins_r);

        Waveform rec(ch.data.grid(), Kind::real_signal);
        for (std::size_t k = 0; k < n_d; ++k) rec.s[k] = ch.data.samples[k];
        Waveform p = hilbert_analytic(rec);

        if (rin_cancel) {
            if (ch.rin_monitor.size() != n_d)
                throw std::invalid_argument("reconstruct: RIN cancellation needs a monitor per sample");
            for (std::size_t k = 0; k < n_d; ++k) {
                if (!(ch.rin_monitor[k] > 0))
                    throw std::invalid_argument("reconstruct: monitor power must be positive");
                p.s[k] /= std::sqrt(ch.rin_monitor[k]);
            }
        } else {
            if (!(ch.lo_amplitude > 0))
                throw std::invalid_argument("reconstruct: LO amplitude must be positive");
            for (auto& v : p.s) v /= ch.lo_amplitude;
        }

        const cdouble rot = std::polar(1.0, corr.phi[ch.m]);
        for (auto& v : p.s) v *= rot;
        out.slice_phasors[ch.m] = p;

        // Embed every strictly positive record bin; DC and the Nyquist bin
        // carry no doubled analytic content and are dropped.
        const std::size_t k_lo = 1;
        const std::size_t k_hi = n_d / 2;

        std::vector<cdouble> X = fft(p);
        const double scale = 0.5 * static_cast<double>(n) / static_cast<double>(n_d);
        const auto nll = static_cast<long long>(n);
        for (std::size_t k = k_lo; k < k_hi; ++k) {
            long long bin = (lo_bins + static_cast<long long>(k)) % nll;
            if (bin < 0) bin += nll;
            F_spec[static_cast<std::size_t>(bin)] += X[k] * scale;
        }
    }

    detail::FftEngine::instance().inverse(F_spec);
    out.field = Waveform(recon_grid, Kind::complex_envelope, std::move(F_spec));
    out.s = Waveform(recon_grid, Kind::real_signal);
    for (std::size_t k = 0; k < n; ++k) out.s.s[k] = std::norm(out.field.s[k]);
    return out;
}

/// Ideal single-sideband digitization reference: brick-wall over the full
/// sliced band (carrier plus upper sidebands), returned as |F_ref(t)|^2.
inline Waveform ssb_reference(const Waveform& modulated, const FrequencyPlan& plan,
                              const TimeGrid& recon_grid) {
    Waveform f_ref = brickwall_filter(modulated, plan.total_band());
    if (!(modulated.grid == recon_grid)) {
        if (recon_grid.duration() > modulated.grid.duration() * (1.0 + 1e-9))
            throw std::invalid_argument("ssb_reference: reconstruction grid outlives the record");
        std::vector<double> times(recon_grid.n);
        for (std::size_t k = 0; k < recon_grid.n; ++k) times[k] = recon_grid.time_at(k);
        auto v = resample_at(f_ref, times);
        f_ref = Waveform(recon_grid, Kind::complex_envelope, std::move(v));
    }
    Waveform s(recon_grid, Kind::real_signal);
    for (std::size_t k = 0; k < s.size(); ++k) s.s[k] = std::norm(f_ref.s[k]);
    return s;
}

/// Calibration input for the static phase estimator: the digitized record of
/// a known pilot tone in one slice, with the beat amplitude and phase a
/// noiseless zero-phase comb would have produced.
struct PilotChannel {
    SliceChannel channel;
    double pilot_freq_hz = 0.0;
    double predicted_phase_rad = 0.0;
    double expected_amplitude = 0.0;
};

/// One-tap equalizer calibration from pilot beats. The balanced detector
/// conjugates the LO, so a line phase phi shows up as -phi on the measured
/// beat; the estimate that reconstruct must apply is therefore
/// phi_hat = predicted noiseless phase - measured phase, wrapped to
/// (-pi, pi]. Fails if a pilot beat is missing or more than 40 dB below its
/// expected amplitude.
inline PhaseCorrection estimate_static_phases(const std::vector<PilotChannel>& pilots,
                                              const FrequencyPlan& plan) {
    if (pilots.size() != plan.n_slices)
        throw std::invalid_argument("estimate_static_phases: need one pilot per slice");
    PhaseCorrection corr;
    corr.source = PhaseCorrection::Source::pilot;
    corr.phi.assign(plan.n_slices, 0.0);
    std::vector<bool> seen(plan.n_slices, false);

    for (const auto& p : pilots) {
        const auto m = p.channel.m;
        if (m >= plan.n_slices || seen[m])
            throw std::invalid_argument("estimate_static_phases: slice indices must cover each slice once");
        seen[m] = true;

        const auto& d = p.channel.data;
        const std::size_t n_d = d.samples.size();
        if (n_d < 2) throw std::invalid_argument("estimate_static_phases: empty record");
        const double f_b = p.pilot_freq_hz - p.channel.lo_offset_hz;
        if (!(f_b > 0) || f_b >= 0.5 * d.rate_hz)
            throw std::invalid_argument("estimate_static_phases: pilot beat outside the record band");
        const double bins = f_b * d.duration();
        if (std::abs(bins - std::round(bins)) > 1e-6)
            throw std::invalid_argument("estimate_static_phases: pilot beat is not on a record bin");

        cdouble acc = 0.0;
        const double w = two_pi * f_b / d.rate_hz;
        for (std::size_t k = 0; k < n_d; ++k)
            acc += d.samples[k] * std::polar(1.0, -w * static_cast<double>(k));
        acc *= 2.0 / static_cast<double>(n_d);

        if (!(std::abs(acc) >= p.expected_amplitude * 1e-2))
            throw std::runtime_error("estimate_static_phases: pilot beat not detected in slice record");
        corr.phi[m] = wrap_phase(p.predicted_phase_rad - std::arg(acc));
    }
    return corr;
}

} // namespace sliceadc
