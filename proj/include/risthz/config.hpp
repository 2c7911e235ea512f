#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risthz/atmosphere.hpp"
#include "risthz/geometry.hpp"
#include "risthz/optimizers.hpp"

namespace risthz {

// Interferer direct links: all blocked ("nd"), all present ("d"), or drawn
// per trial with the configured LOS probability.
enum class VisibilityMode { nd, d, bernoulli };

VisibilityMode parse_visibility(const std::string &s);
std::string visibility_name(VisibilityMode v);

// fixed: use the configured interferer positions; ring: uniform random
// azimuths on a circle around the Rx; auto: fixed when the configured
// positions match the interferer count, ring otherwise.
enum class InterfererLayout { automatic, fixed, ring };

struct ScenarioConfig {
    double frequency_hz = 220e9;
    double bandwidth_hz = 10e9;
    AtmosphereConfig atmosphere;
    int ris_elements = 100;
    int rx_antennas = 100;
    int interferers = 1;

    SphericalPoint rx{0.0, 0.0, 0.0};
    SphericalPoint ris{1.0, 0.0, 0.0};
    SphericalPoint signal_tx{1.0, 60.0, 0.0};
    std::vector<SphericalPoint> interferer_tx{{1.5, 110.0, 0.0}};
    InterfererLayout layout = InterfererLayout::automatic;
    double ring_radius_m = 2.0;

    double power_w = 2.0; // every transmitter
    double noise_dbm_per_hz = -174.0;
    int zeta = 1;
    int zeta_assumed = -1; // re-radiation model assumed by the optimizer; -1 follows zeta

    VisibilityMode visibility = VisibilityMode::nd;
    double los_probability = 0.5;        // interferer direct links under bernoulli
    double signal_los_probability = 0.0; // signal direct link

    double eta1_sq = 0.0; // signal-link CSI error variance
    double eta2_sq = 0.0; // interferer-link CSI error variance
    bool robust = true;

    int assumed_zeta() const { return zeta_assumed < 0 ? zeta : zeta_assumed; }
    void validate() const;
};

struct ExperimentConfig {
    int trials = 200;
    std::uint64_t seed = 1;
    long symbols = 100000; // per trial, for the SER experiment
    int runtime_trials = 5;
};

struct RunConfig {
    ScenarioConfig scenario;
    BcdParams solver;
    ExperimentConfig experiment;

    void validate() const;
};

// TOML subset with [scenario], [solver] and [experiment] sections. Unknown
// keys and malformed values raise ConfigError.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

// Sets one field by name. Accepts "section.key", bare keys, and the short
// sweep aliases N, N_R, N_I, f.
void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value);
void apply_setting(RunConfig &cfg, const std::string &key, const std::vector<std::string> &values);

std::vector<std::string> setting_names();

} // namespace risthz
