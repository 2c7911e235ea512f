#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risthz/channel.hpp"
#include "risthz/config.hpp"
#include "risthz/geometry.hpp"
#include "risthz/linkmetrics.hpp"
#include "risthz/optimizers.hpp"

namespace risthz {

// Everything drawn for one Monte Carlo trial before optimization.
struct TrialChannels {
    ScenarioGeometry geometry;
    std::vector<int> visible;
    std::vector<double> powers;
    StackedChannels truth;
    StackedChannels estimate;
    NoiseBudget noise; // with the true re-radiation model
    CsiErrorParams errors;
};

// eta1^2 -> rho_0^2, rho'_0^2; eta2^2 -> rho_i^2, rho'_i^2 for i >= 1.
CsiErrorParams csi_errors(const ScenarioConfig &cfg);

TrialChannels draw_trial(const ScenarioConfig &cfg, std::uint64_t seed, std::uint64_t trial);

// Estimated channels, assumed zeta, and the error statistics only in robust mode.
SinrContext optimization_context(const ScenarioConfig &cfg, const TrialChannels &tc);
// True channels, true zeta, no estimation error.
SinrContext evaluation_context(const ScenarioConfig &cfg, const TrialChannels &tc);

struct TrialOutcome {
    bool ok = false;
    std::string error;
    double sinr = 0.0;           // true-channel SINR at the optimized (u, theta)
    double optimized_sinr = 0.0; // SINR the optimizer saw
    double throughput_bps = 0.0;
    int outer_iters = 0;
    double wall_time_s = 0.0;
    long symbols = 0;
    long symbol_errors = 0;
};

TrialOutcome run_trial(const RunConfig &cfg, std::uint64_t trial, bool with_ser);

// Gray-mapped unit-energy QPSK: bit pair (b0, b1) -> ((1-2 b0) + j (1-2 b1)) / sqrt 2.
cdouble modulate_4qam(int b0, int b1);
std::vector<cdouble> modulate_4qam(const std::vector<std::uint8_t> &bits);
// Equalizes by gain, then minimum-distance decision.
std::pair<int, int> demodulate_4qam(cdouble received, cdouble gain);

// Symbol error probability of coherent QPSK at per-symbol SNR gamma, by
// numerical integration of the Gaussian density.
double qpsk_ser_awgn(double snr);

// Symbols sent through a scalar link r = sum_i g_i s_i + n. Index 0 is the
// desired stream; detection divides by detect_gain.
long count_symbol_errors(const std::vector<cdouble> &gains, cdouble detect_gain, double noise_var, long symbols,
                         Rng &rng);

struct SweepSpec {
    std::string var;
    std::vector<std::string> values;
};

// "var=v1,v2,..."
SweepSpec parse_sweep(const std::string &text);

struct ExperimentRow {
    std::string sweep_var;
    std::string sweep_value;
    std::string solver;
    std::string metric;
    double mean = 0.0;
    double ci95 = 0.0;
    int trials = 0;
    int failed = 0;
    std::uint64_t seed = 0;
};

struct TrialRecord {
    std::string sweep_value;
    int trial = 0;
    double sinr = 0.0;
    double throughput_bps = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::vector<TrialRecord> trial_records;
    int failed_points = 0; // sweep points with no successful trial
};

ExperimentResult run_throughput(const RunConfig &cfg, const std::optional<SweepSpec> &sweep);
ExperimentResult run_ser(const RunConfig &cfg, const std::optional<SweepSpec> &sweep);
// Median wall time per BCD run (runtime_s) and per outer iteration
// (runtime_outer_s) for each solver, single-threaded.
ExperimentResult run_runtime(const RunConfig &cfg, const std::optional<SweepSpec> &sweep,
                             const std::vector<RisSolver> &solvers = {RisSolver::gd, RisSolver::sa,
                                                                      RisSolver::sdr});

void write_csv(std::ostream &os, const std::vector<ExperimentRow> &rows);
void write_trials_csv(std::ostream &os, const std::vector<TrialRecord> &records);

// Workers from RIS_THZ_THREADS, else the hardware concurrency.
unsigned worker_count();
// Runs fn(0..n-1) over a worker pool; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned workers);

} // namespace risthz
