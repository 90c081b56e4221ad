#pragma once
// Result emission: CSV files (comma separated, header row, fixed-notation
// numbers with 6 significant digits), the machine-readable budget report,
// and the human-readable budget printout.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"

namespace sliceadc {

/// Fixed (non-scientific) notation with 6 significant digits.
inline std::string fmt_fixed(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    const double a = std::abs(v);
    int decimals = 5;
    if (a >= 1.0)
        decimals = std::max(0, 5 - static_cast<int>(std::floor(std::log10(a))));
    else if (a > 0.0)
        decimals = std::min(15, 5 - static_cast<int>(std::floor(std::log10(a))));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

/// Per-run NSR table of a single-scenario batch.
inline void write_nsr_csv(const std::string& path, const std::vector<RunResult>& runs) {
    auto f = open_out(path);
    f << "seed,nsr_db\n";
    for (const auto& r : runs) f << r.seed << "," << fmt_fixed(r.nsr_db) << "\n";
}

/// Sweep table; the analytic column carries the overlay as a noise-to-signal
/// ratio (the sign convention of the measured column), floored at -150 dB.
inline void write_sweep_csv(const std::string& path, const std::vector<SnrReport>& reports) {
    auto f = open_out(path);
    f << "freq_ghz,nsr_mean_db,nsr_std_db,ci3_db,nsr_analytic_db,n_runs\n";
    for (const auto& r : reports) {
        const double nsr_analytic = std::max(-r.snr_analytic_db, -150.0);
        f << fmt_fixed(r.freq_hz / 1e9) << "," << fmt_fixed(r.nsr_mean_db) << ","
          << fmt_fixed(r.nsr_std_db) << "," << fmt_fixed(r.ci3_db) << ","
          << fmt_fixed(nsr_analytic) << "," << r.n_runs << "\n";
    }
}

inline nlohmann::json budget_to_json(const BudgetReport& r) {
    nlohmann::json j;
    j["n_slices"] = r.n_slices;
    j["slice_bw_ghz"] = r.f_r_hz / 1e9;
    j["mll_jitter_s"] = r.mll_jitter_s;
    j["elec_jitter_s"] = r.elec_jitter_s;
    if (r.rescaled) {
        j["rescale"] = {{"t_from_s", r.t_from_s}, {"t_to_s", r.t_to_s}};
        j["mll_jitter_used_s"] = r.mll_jitter_used_s;
        j["elec_jitter_used_s"] = r.elec_jitter_used_s;
    }
    j["eff_mll_jitter_s"] = r.eff_mll_jitter_s;
    j["eff_elec_jitter_s"] = r.eff_elec_jitter_s;
    j["worst_freq_ghz"] = r.worst_freq_hz / 1e9;
    j["worst_snr_db"] = r.worst_snr_db;
    j["worst_enob"] = r.worst_enob;
    j["electric_snr_db"] = r.electric_snr_db;
    j["electric_enob"] = r.electric_enob;
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& p : r.curve)
        curve.push_back({{"f_ghz", p.f_hz / 1e9}, {"snr_db", p.snr_db}});
    j["curve"] = curve;
    return j;
}

inline std::string fmt_femto(double seconds) { return fmt_fixed(seconds * 1e15) + " fs"; }

inline void print_budget(std::ostream& os, const BudgetReport& r) {
    os << "slices:                 " << r.n_slices << "\n";
    os << "slice bandwidth:        " << fmt_fixed(r.f_r_hz / 1e9) << " GHz\n";
    os << "input jitter (MLL):     " << fmt_femto(r.mll_jitter_s) << "\n";
    os << "input jitter (electric):" << " " << fmt_femto(r.elec_jitter_s) << "\n";
    if (r.rescaled) {
        os << "observation rescale:    " << fmt_fixed(r.t_from_s * 1e6) << " us -> "
           << fmt_fixed(r.t_to_s * 1e6) << " us\n";
        os << "used jitter (MLL):      " << fmt_femto(r.mll_jitter_used_s) << "\n";
        os << "used jitter (electric): " << fmt_femto(r.elec_jitter_used_s) << "\n";
    }
    os << "effective MLL jitter:   " << fmt_femto(r.eff_mll_jitter_s) << "\n";
    os << "effective elec jitter:  " << fmt_femto(r.eff_elec_jitter_s) << "\n";
    os << "worst-case input:       " << fmt_fixed(r.worst_freq_hz / 1e9) << " GHz\n";
    os << "worst-case SNR:         " << fmt_fixed(r.worst_snr_db) << " dB\n";
    os << "worst-case ENOB:        " << fmt_fixed(r.worst_enob) << " bits\n";
    os << "all-electric SNR:       " << fmt_fixed(r.electric_snr_db) << " dB\n";
    os << "all-electric ENOB:      " << fmt_fixed(r.electric_enob) << " bits\n";
    os << "improvement:            " << fmt_fixed(r.worst_enob - r.electric_enob)
       << " bits\n";
}

} // namespace sliceadc
