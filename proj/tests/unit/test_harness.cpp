#include <cmath>
#include <sstream>

#include "doctest.h"
#include "risthz/harness.hpp"

using namespace risthz;

namespace {

RunConfig small_config()
{
    RunConfig c;
    c.scenario.ris_elements = 16;
    c.scenario.rx_antennas = 4;
    c.experiment.trials = 6;
    c.experiment.symbols = 2000;
    c.experiment.runtime_trials = 2;
    return c;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

} // namespace

TEST_CASE("4-QAM mapping round trip")
{
    for (int b0 : {0, 1})
        for (int b1 : {0, 1}) {
            const cdouble s = modulate_4qam(b0, b1);
            CHECK(std::norm(s) == doctest::Approx(1.0).epsilon(1e-15));
            const cdouble g = std::polar(0.3, 1.1);
            CHECK(demodulate_4qam(g * s, g) == std::pair<int, int>{b0, b1});
        }
    const auto v = modulate_4qam(std::vector<std::uint8_t>{0, 0, 1, 1, 0, 1});
    REQUIRE(v.size() == 3);
    CHECK(v[1] == modulate_4qam(1, 1));
    CHECK_THROWS(modulate_4qam(std::vector<std::uint8_t>{0, 1, 1}));
}

TEST_CASE("QPSK symbol error probability")
{
    for (double snr : {0.0, 0.5, 2.0, 10.0, 40.0}) {
        const double q = q_function(std::sqrt(snr));
        CHECK(qpsk_ser_awgn(snr) == doctest::Approx(2 * q - q * q).epsilon(1e-9));
    }
    CHECK(qpsk_ser_awgn(0.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(qpsk_ser_awgn(-1.0), InvalidInput);
}

TEST_CASE("Monte Carlo symbol errors follow the AWGN formula")
{
    Rng rng(4);
    const long n = 200000;
    for (double snr : {1.0, 4.0}) {
        const cdouble g = std::polar(std::sqrt(snr), 0.7);
        const long e = count_symbol_errors({g}, g, 1.0, n, rng);
        const double p = qpsk_ser_awgn(snr);
        const double sd = std::sqrt(p * (1 - p) / n);
        CAPTURE(snr);
        CHECK(std::abs(static_cast<double>(e) / n - p) < 5 * sd);
    }
    // Noiseless, interference-free: no errors.
    CHECK(count_symbol_errors({cdouble(1.0)}, cdouble(1.0), 0.0, 1000, rng) == 0);
    // Interferer twice as strong as the signal: errors certain in some quadrant.
    CHECK(count_symbol_errors({cdouble(1.0), cdouble(2.0)}, cdouble(1.0), 0.0, 1000, rng) > 0);
}

TEST_CASE("sweep parsing")
{
    const SweepSpec s = parse_sweep("N=16,36,64");
    CHECK(s.var == "N");
    CHECK(s.values == std::vector<std::string>{"16", "36", "64"});
    CHECK(parse_sweep("scenario.eta2_sq=1e-12").values.size() == 1);
    CHECK_THROWS_AS(parse_sweep("N"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("=1,2"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("N=1,,2"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("N="), ConfigError);
}

TEST_CASE("CSI error mapping")
{
    ScenarioConfig s;
    s.interferers = 2;
    s.eta1_sq = 4e-14;
    s.eta2_sq = 9e-12;
    const CsiErrorParams e = csi_errors(s);
    REQUIRE(e.rho.size() == 3);
    CHECK(e.rho[0] == doctest::Approx(2e-7));
    CHECK(e.rho_prime[0] == doctest::Approx(2e-7));
    CHECK(e.rho[2] == doctest::Approx(3e-6));
    CHECK(e.rho_prime[1] == doctest::Approx(3e-6));
}

TEST_CASE("trial draws")
{
    RunConfig c = small_config();
    c.scenario.eta1_sq = 1e-16;
    const TrialChannels a = draw_trial(c.scenario, 5, 3);
    const TrialChannels b = draw_trial(c.scenario, 5, 3);
    const TrialChannels other = draw_trial(c.scenario, 5, 4);
    REQUIRE(a.truth.transmitters() == 2);
    CHECK(a.truth.rx_antennas() == 4);
    CHECK(a.truth.ris_elements() == 16);
    CHECK((a.truth.H[0] - b.truth.H[0]).norm() == 0.0);
    CHECK((a.estimate.H[0] - b.estimate.H[0]).norm() == 0.0);
    CHECK((a.truth.H[0] - other.truth.H[0]).norm() > 0.0);
    CHECK((a.truth.H[0] - a.estimate.H[0]).norm() > 0.0);
    // nd: signal and interferer direct links blocked by default.
    CHECK(a.visible == std::vector<int>{0, 0});
    CHECK(a.truth.H[1].col(16).norm() == 0.0);

    // The CSI error level never moves the channel draw.
    RunConfig noisier = c;
    noisier.scenario.eta1_sq = 1e-12;
    CHECK((draw_trial(noisier.scenario, 5, 3).truth.H[0] - a.truth.H[0]).norm() == 0.0);

    c.scenario.visibility = VisibilityMode::d;
    CHECK(draw_trial(c.scenario, 5, 3).visible == std::vector<int>{0, 1});

    const SinrContext opt = optimization_context(c.scenario, a);
    CHECK(opt.rho_total > 0.0);
    c.scenario.robust = false;
    CHECK(optimization_context(c.scenario, a).rho_total == 0.0);
    CHECK(evaluation_context(c.scenario, a).rho_total == 0.0);
}

TEST_CASE("trial outcome is reproducible")
{
    const RunConfig c = small_config();
    const TrialOutcome a = run_trial(c, 2, true);
    const TrialOutcome b = run_trial(c, 2, true);
    REQUIRE(a.ok);
    CHECK(a.sinr == b.sinr);
    CHECK(a.symbol_errors == b.symbol_errors);
    CHECK(a.symbols == c.experiment.symbols);
    CHECK(a.throughput_bps == doctest::Approx(c.scenario.bandwidth_hz * std::log2(1 + a.sinr)));
    // Perfect CSI: what the optimizer saw is what the link delivers.
    CHECK(a.optimized_sinr == doctest::Approx(a.sinr).epsilon(1e-9));
}

TEST_CASE("throughput experiment rows and CSV")
{
    const RunConfig c = small_config();
    const ExperimentResult r = run_throughput(c, parse_sweep("N=4,16"));
    CHECK(r.failed_points == 0);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].sweep_var == "N");
    CHECK(r.rows[0].sweep_value == "4");
    CHECK(r.rows[0].trials == 6);
    CHECK(r.trial_records.size() == 12);
    std::ostringstream os;
    write_csv(os, r.rows);
    CHECK(os.str().rfind("sweep_var,sweep_value,solver,metric,mean,ci95,trials,failed,seed\n", 0) == 0);

    // Thread count does not change results.
    setenv("RIS_THZ_THREADS", "1", 1);
    const ExperimentResult serial = run_throughput(c, parse_sweep("N=4,16"));
    unsetenv("RIS_THZ_THREADS");
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        CHECK(serial.rows[i].mean == r.rows[i].mean);
}

TEST_CASE("SER and runtime experiments")
{
    const RunConfig c = small_config();
    const ExperimentResult s = run_ser(c, std::nullopt);
    REQUIRE(!s.rows.empty());
    CHECK(s.rows[0].metric == "ser");
    CHECK(s.rows[0].mean >= 0.0);
    CHECK(s.rows[0].mean <= 1.0);

    const ExperimentResult t = run_runtime(c, std::nullopt, {RisSolver::gd, RisSolver::sa});
    int runtime_rows = 0;
    for (const auto &row : t.rows)
        if (row.metric == "runtime_s") {
            ++runtime_rows;
            CHECK(row.mean > 0.0);
        }
    CHECK(runtime_rows == 2);
}

TEST_CASE("parallel_for")
{
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
    CHECK(std::count(hits.begin(), hits.end(), 1) == 100);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw SolverError("boom"); }, 3),
                    SolverError);
    // The variable caps the hardware concurrency.
    setenv("RIS_THZ_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    setenv("RIS_THZ_THREADS", "3", 1);
    CHECK(worker_count() <= 3);
    unsetenv("RIS_THZ_THREADS");
}
