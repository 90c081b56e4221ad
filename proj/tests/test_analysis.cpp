#include <catch2/catch_amalgamated.hpp>

#include <sliceadc/analysis.hpp>

#include <cmath>

using namespace sliceadc;

namespace {

// Same 15 ns grid as the DSP tests: fast enough for Monte Carlo in a unit test.
Scenario test_scenario() {
    Scenario s;
    s.grid = TimeGrid(0.3e-12, 50000);
    s.plan = FrequencyPlan(4, 30e9, 2e9);
    s.digitizer_rate_hz = 74.8e9;
    s.static_phases = std::vector<double>{0.0, 0.0, 0.0, 0.0};
    s.noise.carrier_lw_hz = 100e3;
    s.noise.mll_optical_lw_hz = 10e6;
    s.noise.mll_rf_lw_hz = 10e3;
    s.noise.elec_lw_hz = 150e3;
    s.noise.elec_osc_freq_hz = 30e9;
    return s;
}

} // namespace

TEST_CASE("electrical aperture jitter law", "[analysis]") {
    CHECK(snr_electrical(100e9, 6.4e-15) == Catch::Approx(47.912803153159956).epsilon(1e-12));
    // Doubling either argument costs 6.02 dB.
    CHECK(snr_electrical(50e9, 6.4e-15) - snr_electrical(100e9, 6.4e-15) ==
          Catch::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(snr_electrical(0.0, 1e-15), std::invalid_argument);
    CHECK_THROWS_AS(snr_electrical(1e9, 0.0), std::invalid_argument);
}

TEST_CASE("staircase frequency response", "[analysis]") {
    const FrequencyPlan plan(4, 30e9, 2e9);
    const double dt_r = 1.6688952945311364e-13; // 3 kHz beat note, 105 ns record, 30 GHz
    const double dt_e = 6.463603682283014e-13;  // 180 kHz clock, 105 ns record, 60 GHz

    CHECK(snr_sliced(37e9, plan, dt_r, dt_e) == Catch::Approx(27.452643259592854).epsilon(1e-12));
    CHECK(snr_sliced(67e9, plan, dt_r, dt_e) == Catch::Approx(23.217929811433613).epsilon(1e-12));
    CHECK(snr_sliced(97e9, plan, dt_r, dt_e) == Catch::Approx(20.125755291128073).epsilon(1e-12));
    CHECK(snr_sliced(100e9, plan, dt_r, dt_e) == Catch::Approx(19.76510849916022).epsilon(1e-12));

    // Within a slice only the clock term varies; at the slice start it vanishes.
    const double at_start = snr_sliced(60e9, plan, dt_r, 0.0);
    const double mid = snr_sliced(70e9, plan, dt_r, 0.0);
    CHECK(at_start == Catch::Approx(mid).epsilon(1e-12)); // comb term alone is flat

    // Beyond the first slice the staircase never loses to the all-electric
    // converter as long as the comb jitter stays below the clock jitter. On
    // slice 0 the clock beat is the signal frequency itself, so the staircase
    // merges with the electric line there.
    for (double f = 28e9; f < 118e9; f += 1e9)
        CHECK(snr_sliced(f, plan, 0.9 * dt_e, dt_e) >= snr_electrical(f, dt_e) - 1e-9);
    CHECK(snr_sliced(1e9, plan, dt_e, dt_e) ==
          Catch::Approx(snr_electrical(1e9, dt_e)).epsilon(1e-12));

    CHECK(std::isinf(snr_sliced(37e9, plan, 0.0, 0.0)));
    CHECK_THROWS_AS(snr_sliced(37e9, plan, -1e-15, 0.0), std::invalid_argument);
}

TEST_CASE("effective number of bits", "[analysis]") {
    CHECK(enob(57.702234211152856) == Catch::Approx(9.292729935407452).epsilon(1e-12));
    CHECK(enob(1.76) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("jitter budget report", "[analysis]") {
    BudgetReport r = budget(4, 30e9, 870e-18, 6.4e-15);

    CHECK(r.eff_mll_jitter_s == Catch::Approx(652.5e-18).epsilon(1e-12));
    CHECK(r.eff_elec_jitter_s == Catch::Approx(1.6e-15).epsilon(1e-12));
    CHECK(r.worst_freq_hz == Catch::Approx(120e9));
    CHECK(r.worst_snr_db == Catch::Approx(57.702234211152856).epsilon(1e-12));
    CHECK(r.worst_enob == Catch::Approx(9.292729935407452).epsilon(1e-12));
    CHECK(r.electric_snr_db == Catch::Approx(46.329178232207454).epsilon(1e-12));
    CHECK(r.electric_enob == Catch::Approx(7.403517978772003).epsilon(1e-12));
    CHECK(r.worst_enob - r.electric_enob == Catch::Approx(1.8892119566354495).epsilon(1e-9));
    CHECK_FALSE(r.rescaled);

    REQUIRE(r.curve.size() == 32);
    CHECK(r.curve.front().f_hz == Catch::Approx(3.75e9));
    CHECK(r.curve.back().f_hz == Catch::Approx(120e9));
    for (const auto& p : r.curve) CHECK(std::isfinite(p.snr_db));

    CHECK_THROWS_AS(budget(0, 30e9, 1e-15, 1e-15), std::invalid_argument);
    CHECK_THROWS_AS(budget(4, 0.0, 1e-15, 1e-15), std::invalid_argument);
    CHECK_THROWS_AS(budget(4, 30e9, -1e-15, 1e-15), std::invalid_argument);
}

TEST_CASE("budget with observation-time rescale", "[analysis]") {
    BudgetReport r = budget(4, 30e9, 870e-18, 6.4e-15, Rescale{5e-4, 7.8e-3});

    CHECK(r.rescaled);
    CHECK(r.mll_jitter_used_s == Catch::Approx(3.436224672514881e-15).epsilon(1e-12));
    CHECK(r.elec_jitter_used_s == Catch::Approx(2.527797460240832e-14).epsilon(1e-12));
    CHECK(r.worst_enob == Catch::Approx(7.310795386645888).epsilon(1e-9));
    CHECK(r.electric_enob == Catch::Approx(5.421583430010441).epsilon(1e-9));
    // The rescale shifts both converters equally: improvement is unchanged.
    BudgetReport base = budget(4, 30e9, 870e-18, 6.4e-15);
    CHECK(r.worst_enob - r.electric_enob ==
          Catch::Approx(base.worst_enob - base.electric_enob).epsilon(1e-9));
}

TEST_CASE("slicing gain grows with the slice count", "[analysis]") {
    const double dt_r = 1e-15, dt_e = 4e-15;
    double last = -1.0;
    for (std::size_t m = 1; m <= 16; ++m) {
        BudgetReport r = budget(m, 30e9, dt_r, dt_e);
        const double gain = r.worst_enob - r.electric_enob;
        CHECK(gain >= last - 1e-12);
        last = gain;
    }

    // One slice is just the electrical converter.
    BudgetReport one = budget(1, 30e9, dt_r, dt_e);
    CHECK(one.eff_mll_jitter_s == 0.0);
    CHECK(one.worst_snr_db == Catch::Approx(one.electric_snr_db).epsilon(1e-12));
}

TEST_CASE("nsr measurement", "[analysis]") {
    const TimeGrid g(1e-12, 1000);
    Waveform ref(g, Kind::real_signal);
    for (std::size_t k = 0; k < g.n; ++k)
        ref.s[k] = 1.0 + 0.5 * std::cos(two_pi * 5e9 * g.time_at(k));

    CHECK(measure_nsr(ref, ref) == -150.0);

    Waveform noisy = ref;
    for (std::size_t k = 0; k < g.n; ++k)
        noisy.s[k] += 1e-3 * std::sin(two_pi * 11e9 * g.time_at(k));
    // error power (1e-3)^2/2 against reference AC power 0.5^2/2
    CHECK(measure_nsr(noisy, ref) == Catch::Approx(-53.979400086720375).margin(1e-6));

    // A DC offset is calibration, not noise.
    Waveform shifted = ref;
    for (auto& v : shifted.s) v += 0.25;
    CHECK(measure_nsr(shifted, ref) == -150.0);

    Waveform flat(g, Kind::real_signal);
    for (auto& v : flat.s) v = 2.0;
    CHECK_THROWS_AS(measure_nsr(ref, flat), std::invalid_argument);
    Waveform other(TimeGrid(1e-12, 500), Kind::real_signal);
    CHECK_THROWS_AS(measure_nsr(other, ref), std::invalid_argument);
    Waveform env(g, Kind::complex_envelope);
    CHECK_THROWS_AS(measure_nsr(env, ref), std::invalid_argument);
}

TEST_CASE("scenario validation", "[analysis]") {
    Scenario ok = test_scenario();
    CHECK_NOTHROW(ok.validate());

    Scenario slow = ok;
    slow.digitizer_rate_hz = 60e9; // below twice the 32 GHz beat band
    CHECK_THROWS_WITH(slow.validate(),
                      Catch::Matchers::ContainsSubstring("scenario.digitizer"));

    Scenario fast = ok;
    fast.digitizer_rate_hz = 4e12; // above the simulation grid rate
    CHECK_THROWS_AS(fast.validate(), std::invalid_argument);

    Scenario bits = ok;
    bits.bits = 30;
    CHECK_THROWS_AS(bits.validate(), std::invalid_argument);

    Scenario amps = ok;
    amps.comb_amplitudes = {1.0, 1.0};
    CHECK_THROWS_AS(amps.validate(), std::invalid_argument);

    Scenario phases = ok;
    phases.static_phases = std::vector<double>{0.0};
    CHECK_THROWS_AS(phases.validate(), std::invalid_argument);

    Scenario osc = ok;
    osc.enable.elec = true;
    osc.noise.elec_osc_freq_hz = 0.0;
    CHECK_THROWS_AS(osc.validate(), std::invalid_argument);

    Scenario band = ok;
    band.grid = TimeGrid(5e-12, 3000); // 100 GHz Nyquist < 118 GHz sliced band
    CHECK_THROWS_AS(band.validate(), std::invalid_argument);
}

TEST_CASE("auto digitizer rate oversamples the beat band", "[analysis]") {
    CHECK(auto_digitizer_rate(FrequencyPlan(4, 30e9, 2e9)) == Catch::Approx(74.8e9));
    CHECK(auto_digitizer_rate(FrequencyPlan(2, 10e9, 1e9)) == Catch::Approx(26.4e9));
}

TEST_CASE("analytic overlay follows the enabled sources", "[analysis]") {
    Scenario s = test_scenario();
    s.grid = TimeGrid(0.3e-12, 350000); // 105 ns record
    s.noise.mll_rf_lw_hz = 3e3;
    s.noise.elec_lw_hz = 180e3;
    s.noise.elec_osc_freq_hz = 60e9;
    s.enable.mll_rf = true;
    s.enable.elec = true;

    CHECK(overlay_snr(s, 37e9) == Catch::Approx(27.452643259592854).epsilon(1e-12));
    CHECK(overlay_snr(s, 100e9) == Catch::Approx(19.76510849916022).epsilon(1e-12));

    s.enable.mll_rf = false;
    s.enable.elec = false;
    CHECK(std::isinf(overlay_snr(s, 37e9)));
}

TEST_CASE("single runs are deterministic in the seed", "[analysis]") {
    Scenario s = test_scenario();
    s.enable.mll_rf = true;
    s.enable.elec = true;

    RunResult a = simulate_once(s, 100e9, 12345);
    RunResult b = simulate_once(s, 100e9, 12345);
    CHECK(a.nsr_db == b.nsr_db);
    CHECK(a.seed == b.seed);

    RunResult c = simulate_once(s, 100e9, 12346);
    CHECK(a.nsr_db != c.nsr_db);
}

TEST_CASE("cached tone preparation changes nothing", "[analysis]") {
    Scenario s = test_scenario();
    s.enable.mll_rf = true; // carrier off, so slices can be cached

    TonePrep prep = prepare_tone(s, 100e9);
    CHECK(prep.freq_hz == Catch::Approx(100e9));
    CHECK_FALSE(prep.slices.empty());

    RunResult with = simulate_once(s, 100e9, 99, &prep);
    RunResult without = simulate_once(s, 100e9, 99);
    CHECK(with.nsr_db == without.nsr_db);

    // Carrier noise varies the modulated signal per run: nothing to cache.
    Scenario c = test_scenario();
    c.enable.carrier = true;
    CHECK(prepare_tone(c, 100e9).slices.empty());
}

TEST_CASE("linear-domain reduction of run ratios", "[analysis]") {
    SnrReport rep = detail::reduce_point(37e9, 25.0, {-20.0, -30.0});
    CHECK(rep.n_runs == 2);
    CHECK(rep.snr_analytic_db == Catch::Approx(25.0));
    const double mean = 0.5 * (1e-2 + 1e-3);
    CHECK(rep.nsr_mean_db == Catch::Approx(10.0 * std::log10(mean)).epsilon(1e-12));
    const double sd = std::sqrt(2.0) * 0.5 * (1e-2 - 1e-3); // two-sample stdev
    const double expect_std = (10.0 / std::log(10.0)) * sd / mean;
    CHECK(rep.nsr_std_db == Catch::Approx(expect_std).epsilon(1e-12));
    CHECK(rep.ci3_db == Catch::Approx(3.0 * expect_std / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("sweeps are reproducible and thread-invariant", "[analysis]") {
    Scenario s = test_scenario();
    s.enable.mll_rf = true;
    s.enable.elec = true;
    const std::vector<double> freqs{37e9, 67e9};

    auto a = sweep(s, freqs, 2, 1);
    auto b = sweep(s, freqs, 2, 1);
    auto c = sweep(s, freqs, 2, 1, 2);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].nsr_mean_db == b[i].nsr_mean_db);
        CHECK(a[i].nsr_mean_db == c[i].nsr_mean_db);
        CHECK(a[i].n_runs == 2);
        CHECK(a[i].snr_analytic_db == Catch::Approx(overlay_snr(s, freqs[i])).epsilon(1e-12));
    }

    // Every run is recomputable from the published seed schedule.
    const TonePrep prep = prepare_tone(s, freqs[1]);
    std::vector<double> nsr;
    for (std::uint64_t ri = 0; ri < 2; ++ri)
        nsr.push_back(simulate_once(s, freqs[1], derive_seed(1, SeedRole::sweep_run, ri, 1), &prep).nsr_db);
    SnrReport manual = detail::reduce_point(freqs[1], overlay_snr(s, freqs[1]), nsr);
    CHECK(manual.nsr_mean_db == a[1].nsr_mean_db);

    CHECK_THROWS_AS(sweep(s, {}, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep(s, freqs, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep(s, {100.01e9}, 1, 1), std::invalid_argument); // off-bin tone
}
