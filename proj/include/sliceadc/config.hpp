#pragma once
// Scenario configuration: the JSON key tree accepted by the command line
// tool, its field-precise loader, presets, and resolution into the SI-unit
// Scenario consumed by the simulation core. Defaults reproduce the full-scale
// reference configuration; the "desk" preset shortens the record and the run
// count for interactive turnaround.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"

namespace sliceadc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    struct Grid {
        double dt_ps = 0.3;
        std::uint64_t n_samples = 11000000;
    } grid;
    struct Plan {
        std::size_t n_slices = 4;
        double slice_bw_ghz = 30.0;
        double guard_ghz = 2.0;
    } plan;
    struct Noise {
        double carrier_lw_hz = 100e3;
        double mll_optical_lw_hz = 10e6;
        double mll_rf_lw_hz = 3e3;
        double elec_lw_hz = 180e3;
        double elec_osc_freq_ghz = 60.0;
        struct Enable {
            bool carrier = true;
            bool mll_optical = true;
            bool mll_rf = true;
            bool elec = true;
        } enable;
    } noise;
    struct Comb {
        std::vector<double> amplitudes;               // empty = unit lines
        std::optional<std::vector<double>> static_phases;  // absent = "random"
    } comb;
    struct Signal {
        double freq_ghz = 100.0;
        double mod_index = 0.9;
        std::string transducer = "mzm";
    } signal;
    struct Digitizer {
        bool auto_rate = true;
        double rate_gsps = 0.0;
        int bits = 0;  // 0 = "ideal"
    } digitizer;
    struct Dsp {
        bool rin_cancel = true;
        std::string phase_correction = "oracle";
    } dsp;
    struct Run {
        std::uint64_t master_seed = 1;
        std::size_t runs = 65;
    } run;
};

/// Full-scale reference configuration (3.3 us record, 65 runs per point).
inline ScenarioConfig paper_preset() { return ScenarioConfig{}; }

/// Shortened configuration for quick runs: ~0.1 us record (105 ns, keeping
/// the digitizer record an integer sample count), 33 runs per point.
inline ScenarioConfig desk_preset() {
    ScenarioConfig c;
    c.grid.n_samples = 350000;
    c.run.runs = 33;
    return c;
}

namespace detail {

using json_t = nlohmann::json;

inline std::string join_path(const std::string& base, const char* key) {
    return base.empty() ? key : base + "." + key;
}

inline void check_keys(const json_t& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config field " + join_path(path, it.key().c_str()) +
                              ": unknown field");
    }
}

inline const json_t* find(const json_t& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline void read_double(const json_t& j, const std::string& path, const char* key, double& out) {
    if (const json_t* v = find(j, key)) {
        if (!v->is_number())
            throw ConfigError("config field " + join_path(path, key) + ": expected a number");
        out = v->get<double>();
    }
}

inline void read_bool(const json_t& j, const std::string& path, const char* key, bool& out) {
    if (const json_t* v = find(j, key)) {
        if (!v->is_boolean())
            throw ConfigError("config field " + join_path(path, key) + ": expected a boolean");
        out = v->get<bool>();
    }
}

inline void read_u64(const json_t& j, const std::string& path, const char* key,
                     std::uint64_t& out) {
    if (const json_t* v = find(j, key)) {
        if (!v->is_number_unsigned())
            throw ConfigError("config field " + join_path(path, key) +
                              ": expected a non-negative integer");
        out = v->get<std::uint64_t>();
    }
}

inline void read_size(const json_t& j, const std::string& path, const char* key,
                      std::size_t& out) {
    std::uint64_t v = out;
    read_u64(j, path, key, v);
    out = static_cast<std::size_t>(v);
}

inline void read_string(const json_t& j, const std::string& path, const char* key,
                        std::string& out) {
    if (const json_t* v = find(j, key)) {
        if (!v->is_string())
            throw ConfigError("config field " + join_path(path, key) + ": expected a string");
        out = v->get<std::string>();
    }
}

inline std::vector<double> as_double_array(const json_t& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError("config field " + where + ": expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError("config field " + where + ": expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace detail

/// Parse a configuration tree, starting from the given preset for any field
/// the tree leaves unset. Unknown fields and type mismatches are reported by
/// their full path.
inline ScenarioConfig load_config(const nlohmann::json& j,
                                  ScenarioConfig base = paper_preset()) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j, "", {"grid", "plan", "noise", "comb", "signal", "digitizer", "dsp", "run",
                       "derived"});
    ScenarioConfig c = base;

    if (const json_t* g = find(j, "grid")) {
        check_keys(*g, "grid", {"dt_ps", "n_samples"});
        read_double(*g, "grid", "dt_ps", c.grid.dt_ps);
        read_u64(*g, "grid", "n_samples", c.grid.n_samples);
    }
    if (const json_t* p = find(j, "plan")) {
        check_keys(*p, "plan", {"n_slices", "slice_bw_ghz", "guard_ghz"});
        read_size(*p, "plan", "n_slices", c.plan.n_slices);
        read_double(*p, "plan", "slice_bw_ghz", c.plan.slice_bw_ghz);
        read_double(*p, "plan", "guard_ghz", c.plan.guard_ghz);
    }
    if (const json_t* n = find(j, "noise")) {
        check_keys(*n, "noise",
                   {"carrier_lw_hz", "mll_optical_lw_hz", "mll_rf_lw_hz", "elec_lw_hz",
                    "elec_osc_freq_ghz", "enable"});
        read_double(*n, "noise", "carrier_lw_hz", c.noise.carrier_lw_hz);
        read_double(*n, "noise", "mll_optical_lw_hz", c.noise.mll_optical_lw_hz);
        read_double(*n, "noise", "mll_rf_lw_hz", c.noise.mll_rf_lw_hz);
        read_double(*n, "noise", "elec_lw_hz", c.noise.elec_lw_hz);
        read_double(*n, "noise", "elec_osc_freq_ghz", c.noise.elec_osc_freq_ghz);
        if (const json_t* e = find(*n, "enable")) {
            check_keys(*e, "noise.enable", {"carrier", "mll_optical", "mll_rf", "elec"});
            read_bool(*e, "noise.enable", "carrier", c.noise.enable.carrier);
            read_bool(*e, "noise.enable", "mll_optical", c.noise.enable.mll_optical);
            read_bool(*e, "noise.enable", "mll_rf", c.noise.enable.mll_rf);
            read_bool(*e, "noise.enable", "elec", c.noise.enable.elec);
        }
    }
    if (const json_t* cb = find(j, "comb")) {
        check_keys(*cb, "comb", {"amplitudes", "static_phases"});
        if (const json_t* a = find(*cb, "amplitudes"))
            c.comb.amplitudes = as_double_array(*a, "comb.amplitudes");
        if (const json_t* s = find(*cb, "static_phases")) {
            if (s->is_string()) {
                if (s->get<std::string>() != "random")
                    throw ConfigError(
                        "config field comb.static_phases: expected an array or \"random\"");
                c.comb.static_phases.reset();
            } else {
                c.comb.static_phases = as_double_array(*s, "comb.static_phases");
            }
        }
    }
    if (const json_t* s = find(j, "signal")) {
        check_keys(*s, "signal", {"freq_ghz", "mod_index", "transducer"});
        read_double(*s, "signal", "freq_ghz", c.signal.freq_ghz);
        read_double(*s, "signal", "mod_index", c.signal.mod_index);
        read_string(*s, "signal", "transducer", c.signal.transducer);
        if (c.signal.transducer != "linear" && c.signal.transducer != "mzm")
            throw ConfigError(
                "config field signal.transducer: expected \"linear\" or \"mzm\"");
    }
    if (const json_t* d = find(j, "digitizer")) {
        check_keys(*d, "digitizer", {"rate_gsps", "bits"});
        if (const json_t* r = find(*d, "rate_gsps")) {
            if (r->is_string()) {
                if (r->get<std::string>() != "auto")
                    throw ConfigError(
                        "config field digitizer.rate_gsps: expected a number or \"auto\"");
                c.digitizer.auto_rate = true;
                c.digitizer.rate_gsps = 0.0;
            } else if (r->is_number()) {
                c.digitizer.auto_rate = false;
                c.digitizer.rate_gsps = r->get<double>();
            } else {
                throw ConfigError(
                    "config field digitizer.rate_gsps: expected a number or \"auto\"");
            }
        }
        if (const json_t* b = find(*d, "bits")) {
            if (b->is_string()) {
                if (b->get<std::string>() != "ideal")
                    throw ConfigError(
                        "config field digitizer.bits: expected an integer or \"ideal\"");
                c.digitizer.bits = 0;
            } else if (b->is_number_integer()) {
                c.digitizer.bits = b->get<int>();
            } else {
                throw ConfigError(
                    "config field digitizer.bits: expected an integer or \"ideal\"");
            }
        }
    }
    if (const json_t* d = find(j, "dsp")) {
        check_keys(*d, "dsp", {"rin_cancel", "phase_correction"});
        read_bool(*d, "dsp", "rin_cancel", c.dsp.rin_cancel);
        read_string(*d, "dsp", "phase_correction", c.dsp.phase_correction);
        if (c.dsp.phase_correction != "oracle" && c.dsp.phase_correction != "pilot")
            throw ConfigError(
                "config field dsp.phase_correction: expected \"oracle\" or \"pilot\"");
    }
    if (const json_t* r = find(j, "run")) {
        check_keys(*r, "run", {"master_seed", "runs"});
        read_u64(*r, "run", "master_seed", c.run.master_seed);
        read_size(*r, "run", "runs", c.run.runs);
        if (c.run.runs < 1) throw ConfigError("config field run.runs: need at least one run");
    }
    return c;
}

/// Map the configuration onto the SI-unit scenario, naming the offending
/// field on every validation failure.
inline Scenario resolve(const ScenarioConfig& c) {
    if (!(c.grid.dt_ps > 0)) throw ConfigError("config field grid.dt_ps: must be positive");
    if (c.grid.n_samples < 2)
        throw ConfigError("config field grid.n_samples: need at least 2 samples");
    if (c.plan.n_slices < 1)
        throw ConfigError("config field plan.n_slices: need at least one slice");
    if (!(c.plan.slice_bw_ghz > 0))
        throw ConfigError("config field plan.slice_bw_ghz: must be positive");
    if (!(c.plan.guard_ghz > 0 && c.plan.guard_ghz < 0.25 * c.plan.slice_bw_ghz))
        throw ConfigError(
            "config field plan.guard_ghz: guard must satisfy 0 < guard < slice_bw/4");
    if (c.noise.carrier_lw_hz < 0)
        throw ConfigError("config field noise.carrier_lw_hz: must be non-negative");
    if (c.noise.mll_optical_lw_hz < 0)
        throw ConfigError("config field noise.mll_optical_lw_hz: must be non-negative");
    if (c.noise.mll_rf_lw_hz < 0)
        throw ConfigError("config field noise.mll_rf_lw_hz: must be non-negative");
    if (c.noise.elec_lw_hz < 0)
        throw ConfigError("config field noise.elec_lw_hz: must be non-negative");
    if (c.noise.enable.elec && c.noise.elec_lw_hz > 0 && !(c.noise.elec_osc_freq_ghz > 0))
        throw ConfigError("config field noise.elec_osc_freq_ghz: must be positive");
    if (!(c.signal.mod_index > 0) || c.signal.mod_index > 1.0)
        throw ConfigError("config field signal.mod_index: must be in (0, 1]");
    if (!c.digitizer.auto_rate && !(c.digitizer.rate_gsps > 0))
        throw ConfigError("config field digitizer.rate_gsps: must be positive or \"auto\"");
    if (c.digitizer.bits != 0 && (c.digitizer.bits < 1 || c.digitizer.bits > 24))
        throw ConfigError("config field digitizer.bits: must be 1..24 or \"ideal\"");

    Scenario s;
    s.grid = TimeGrid(c.grid.dt_ps * 1e-12, static_cast<std::size_t>(c.grid.n_samples));
    s.plan = FrequencyPlan(c.plan.n_slices, c.plan.slice_bw_ghz * 1e9, c.plan.guard_ghz * 1e9);
    s.noise.carrier_lw_hz = c.noise.carrier_lw_hz;
    s.noise.mll_optical_lw_hz = c.noise.mll_optical_lw_hz;
    s.noise.mll_rf_lw_hz = c.noise.mll_rf_lw_hz;
    s.noise.elec_lw_hz = c.noise.elec_lw_hz;
    s.noise.elec_osc_freq_hz = c.noise.elec_osc_freq_ghz * 1e9;
    s.enable.carrier = c.noise.enable.carrier;
    s.enable.mll_optical = c.noise.enable.mll_optical;
    s.enable.mll_rf = c.noise.enable.mll_rf;
    s.enable.elec = c.noise.enable.elec;
    s.comb_amplitudes = c.comb.amplitudes;
    s.static_phases = c.comb.static_phases;
    s.mod_index = c.signal.mod_index;
    s.transducer = c.signal.transducer == "linear" ? Transducer::linear : Transducer::mzm;
    s.digitizer_rate_hz =
        c.digitizer.auto_rate ? auto_digitizer_rate(s.plan) : c.digitizer.rate_gsps * 1e9;
    s.bits = c.digitizer.bits;
    s.rin_cancel = c.dsp.rin_cancel;
    s.phase_source = c.dsp.phase_correction == "pilot" ? PhaseCorrection::Source::pilot
                                                       : PhaseCorrection::Source::oracle;
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return s;
}

/// Serialize a configuration back to its JSON tree, plus a "derived" block
/// with the resolved quantities (ignored on load).
inline nlohmann::json save_config(const ScenarioConfig& c) {
    nlohmann::json j;
    j["grid"] = {{"dt_ps", c.grid.dt_ps}, {"n_samples", c.grid.n_samples}};
    j["plan"] = {{"n_slices", c.plan.n_slices},
                 {"slice_bw_ghz", c.plan.slice_bw_ghz},
                 {"guard_ghz", c.plan.guard_ghz}};
    j["noise"] = {{"carrier_lw_hz", c.noise.carrier_lw_hz},
                  {"mll_optical_lw_hz", c.noise.mll_optical_lw_hz},
                  {"mll_rf_lw_hz", c.noise.mll_rf_lw_hz},
                  {"elec_lw_hz", c.noise.elec_lw_hz},
                  {"elec_osc_freq_ghz", c.noise.elec_osc_freq_ghz},
                  {"enable",
                   {{"carrier", c.noise.enable.carrier},
                    {"mll_optical", c.noise.enable.mll_optical},
                    {"mll_rf", c.noise.enable.mll_rf},
                    {"elec", c.noise.enable.elec}}}};
    j["comb"] = nlohmann::json::object();
    if (!c.comb.amplitudes.empty()) j["comb"]["amplitudes"] = c.comb.amplitudes;
    if (c.comb.static_phases)
        j["comb"]["static_phases"] = *c.comb.static_phases;
    else
        j["comb"]["static_phases"] = "random";
    j["signal"] = {{"freq_ghz", c.signal.freq_ghz},
                   {"mod_index", c.signal.mod_index},
                   {"transducer", c.signal.transducer}};
    if (c.digitizer.auto_rate)
        j["digitizer"]["rate_gsps"] = "auto";
    else
        j["digitizer"]["rate_gsps"] = c.digitizer.rate_gsps;
    if (c.digitizer.bits == 0)
        j["digitizer"]["bits"] = "ideal";
    else
        j["digitizer"]["bits"] = c.digitizer.bits;
    j["dsp"] = {{"rin_cancel", c.dsp.rin_cancel},
                {"phase_correction", c.dsp.phase_correction}};
    j["run"] = {{"master_seed", c.run.master_seed}, {"runs", c.run.runs}};

    const Scenario s = resolve(c);
    nlohmann::json d;
    d["duration_s"] = s.grid.duration();
    d["grid_rate_hz"] = s.grid.sample_rate();
    d["digitizer_rate_gsps"] = s.digitizer_rate_hz / 1e9;
    d["digitizer_samples"] = sample_count(s.grid.duration(), s.digitizer_rate_hz);
    d["max_rf_ghz"] = s.plan.max_rf_hz() / 1e9;
    nlohmann::json lo = nlohmann::json::array();
    for (std::size_t m = 0; m < s.plan.n_slices; ++m)
        lo.push_back(s.plan.lo_frequency(m) / 1e9);
    d["lo_offsets_ghz"] = lo;
    d["effective_mll_jitter_s"] =
        s.mll_rf_on() ? record_effective_jitter(s.noise.mll_rf_lw_hz, s.grid.duration(),
                                                s.plan.f_r_hz)
                      : 0.0;
    d["effective_elec_jitter_s"] =
        s.elec_on() ? record_effective_jitter(s.noise.elec_lw_hz, s.grid.duration(),
                                              s.noise.elec_osc_freq_hz)
                    : 0.0;
    j["derived"] = d;
    return j;
}

/// Default sweep list: 6 points per slice starting at the guard offset,
/// spaced f_r/6, snapped to record bins; frequencies at or beyond the band
/// edge are dropped.
inline std::vector<double> default_sweep_frequencies(const Scenario& s) {
    std::vector<double> freqs;
    const double t = s.grid.duration();
    const double step = s.plan.f_r_hz / 6.0;
    for (std::size_t k = 0; k < 6 * s.plan.n_slices; ++k) {
        double f = s.plan.f_delta_hz + static_cast<double>(k) * step;
        f = std::round(f * t) / t;
        if (f > 0 && f < s.plan.max_rf_hz()) freqs.push_back(f);
    }
    return freqs;
}

} // namespace sliceadc
