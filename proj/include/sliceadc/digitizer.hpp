#pragma once
// Electrical back end: sampling of the per-slice photocurrents by an ADC
// array on a shared jittered clock, and optional uniform quantization. The
// clock jitter is a timing sequence derived from the sampling oscillator
// phase path and evaluated at the nominal sampling instants, so every slice
// sees the same timing error.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "noise.hpp"
#include "sigkit.hpp"

namespace sliceadc {

/// Sampling clock: nominal rate plus the timing-jitter path of the shared
/// electrical oscillator. An empty jitter path models an ideal clock.
struct ClockModel {
    double nominal_rate_hz = 0.0;
    double osc_freq_hz = 0.0;
    JitterPath jitter;

    void validate() const {
        if (!(nominal_rate_hz > 0))
            throw std::invalid_argument("ClockModel: sampling rate must be positive");
        if (!jitter.empty() && !(osc_freq_hz > 0))
            throw std::invalid_argument("ClockModel: oscillator frequency must be positive");
    }
};

/// One slice's ADC record: sample values and the jittered instants that
/// produced them, at a nominal rate typically far below the optical grid.
struct DigitizedSlice {
    std::size_t slice_index = 0;
    double rate_hz = 0.0;
    std::vector<double> samples;
    std::vector<double> instants;

    TimeGrid grid() const { return TimeGrid(1.0 / rate_hz, samples.size()); }
    double duration() const { return static_cast<double>(samples.size()) / rate_hz; }
};

/// Nominal sample count for a record: floor(duration * rate) with an ulp
/// guard so exact-ratio configurations do not lose their last sample.
inline std::size_t sample_count(double duration_s, double rate_hz) {
    return static_cast<std::size_t>(std::floor(duration_s * rate_hz + 1e-9));
}

/// Sample a real photocurrent record at instants t_k = k/rate + dt_e(k/rate).
/// The jitter path is linearly interpolated at the nominal instants; the
/// waveform itself is evaluated by windowed-sinc reconstruction.
inline DigitizedSlice sample_with_jitter(const Waveform& w, const ClockModel& clock,
                                         std::size_t slice_index = 0) {
    clock.validate();
    if (!w.is_real())
        throw std::invalid_argument("sample_with_jitter: input must be a real record");
    const std::size_t count = sample_count(w.grid.duration(), clock.nominal_rate_hz);
    if (count < 2)
        throw std::invalid_argument("sample_with_jitter: record too short for the clock rate");

    DigitizedSlice out;
    out.slice_index = slice_index;
    out.rate_hz = clock.nominal_rate_hz;
    out.instants.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double nominal = static_cast<double>(k) / clock.nominal_rate_hz;
        out.instants[k] = clock.jitter.empty() ? nominal : nominal + clock.jitter.at(nominal);
    }
    out.samples = resample_real_at(w, out.instants);
    return out;
}

/// Mid-rise uniform quantizer over the record's own [min, max] span.
inline DigitizedSlice quantize(const DigitizedSlice& d, int bits) {
    if (bits < 1 || bits > 24)
        throw std::invalid_argument("quantize: bits out of range");
    auto [lo_it, hi_it] = std::minmax_element(d.samples.begin(), d.samples.end());
    const double lo = *lo_it, hi = *hi_it;
    DigitizedSlice out = d;
    if (!(hi > lo)) return out; // constant record quantizes to itself
    const double levels = std::ldexp(1.0, bits);
    const double step = (hi - lo) / levels;
    for (auto& v : out.samples) {
        double code = std::floor((v - lo) / step);
        code = std::clamp(code, 0.0, levels - 1.0);
        v = lo + (code + 0.5) * step;
    }
    return out;
}

} // namespace sliceadc
