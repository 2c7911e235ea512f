#include <cmath>

#include "doctest.h"
#include "risthz/config.hpp"

using namespace risthz;

TEST_CASE("shipped default config equals the built-in defaults")
{
    const RunConfig file = load_config(std::string(RISTHZ_SOURCE_DIR) + "/configs/default.toml");
    const RunConfig def;
    CHECK(file.scenario.frequency_hz == def.scenario.frequency_hz);
    CHECK(file.scenario.bandwidth_hz == def.scenario.bandwidth_hz);
    CHECK(file.scenario.ris_elements == 100);
    CHECK(file.scenario.rx_antennas == 100);
    CHECK(file.scenario.interferers == 1);
    CHECK(file.scenario.power_w == 2.0);
    CHECK(file.scenario.interferer_tx.size() == 1);
    CHECK(file.scenario.interferer_tx[0].r == 1.5);
    CHECK(file.scenario.signal_tx.azimuth_deg == 60.0);
    CHECK(file.scenario.visibility == VisibilityMode::nd);
    CHECK(file.scenario.layout == InterfererLayout::automatic);
    CHECK(file.scenario.robust);
    CHECK(file.solver.sub_solver == RisSolver::gd);
    CHECK(file.solver.gd.epsilon_armijo == 5e-5);
    CHECK(file.solver.sdr.bisection_hi == 20.0);
    CHECK(file.solver.sdr.bisection_tol == 1e-6);
    CHECK(file.solver.sdr.randomization_count == 1000);
    CHECK(file.experiment.trials == 200);
    CHECK(file.experiment.seed == 1);
}

TEST_CASE("parse values of every kind")
{
    const RunConfig c = parse_config(R"(
[scenario]
frequency_hz = 3.0e11
ris_elements = 36
interferers = 2
interferer_tx = [1.5, 110.0, 0.0, 2.0, -45.0, 10.0]
visibility = "d"
interferer_layout = 'fixed'
robust = false
eta2_sq = 1e-12

[solver]
name = "sdr"
sdr_randomizations = 50

[experiment]
seed = 18446744073709551615
)");
    CHECK(c.scenario.frequency_hz == 3e11);
    CHECK(c.scenario.ris_elements == 36);
    REQUIRE(c.scenario.interferer_tx.size() == 2);
    CHECK(c.scenario.interferer_tx[1].azimuth_deg == -45.0);
    CHECK(c.scenario.interferer_tx[1].elevation_deg == 10.0);
    CHECK(c.scenario.visibility == VisibilityMode::d);
    CHECK(c.scenario.layout == InterfererLayout::fixed);
    CHECK_FALSE(c.scenario.robust);
    CHECK(c.scenario.eta2_sq == 1e-12);
    CHECK(c.solver.sub_solver == RisSolver::sdr);
    CHECK(c.solver.sdr.randomization_count == 50);
    CHECK(c.experiment.seed == 18446744073709551615ULL);
}

TEST_CASE("malformed configs are rejected")
{
    CHECK_THROWS_AS(parse_config("[scenario]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nowhere]\nris_elements = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nris_elements = 4.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nris_elements = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nrobust = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nris = [1.0, 2.0]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[solver]\nname = \"newton\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\nseed = -3\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/risthz.toml"), ConfigError);
}

TEST_CASE("semantic validation")
{
    CHECK_THROWS(parse_config("[scenario]\nris_elements = 10\n"));  // not a square
    CHECK_THROWS(parse_config("[scenario]\nzeta = 2\n"));
    CHECK_THROWS(parse_config("[scenario]\neta1_sq = -1\n"));
    CHECK_THROWS(parse_config("[scenario]\nfrequency_hz = 0\n"));
    CHECK_THROWS(parse_config("[scenario]\ninterferers = 2\ninterferer_layout = \"fixed\"\n"));
    CHECK_THROWS(parse_config("[experiment]\ntrials = 0\n"));
    CHECK_NOTHROW(parse_config("[scenario]\ninterferers = 0\n"));
}

TEST_CASE("apply_setting accepts full keys, bare keys and aliases")
{
    RunConfig c;
    apply_setting(c, "N", "64");
    CHECK(c.scenario.ris_elements == 64);
    apply_setting(c, "N_R", "16");
    CHECK(c.scenario.rx_antennas == 16);
    apply_setting(c, "N_I", "3");
    CHECK(c.scenario.interferers == 3);
    apply_setting(c, "f", "300e9");
    CHECK(c.scenario.frequency_hz == 300e9);
    apply_setting(c, "eta2_sq", "1e-11");
    CHECK(c.scenario.eta2_sq == 1e-11);
    apply_setting(c, "scenario.zeta", "0");
    CHECK(c.scenario.zeta == 0);
    apply_setting(c, "solver", "sa");
    CHECK(c.solver.sub_solver == RisSolver::sa);
    apply_setting(c, "visibility", "d");
    CHECK(c.scenario.visibility == VisibilityMode::d);
    CHECK_THROWS_AS(apply_setting(c, "warp", "9"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "N", "x"), ConfigError);

    const auto names = setting_names();
    CHECK(std::find(names.begin(), names.end(), "scenario.eta1_sq") != names.end());
    CHECK(std::find(names.begin(), names.end(), "solver.sdp_tol") != names.end());
}

TEST_CASE("assumed re-radiation model")
{
    ScenarioConfig s;
    s.zeta = 0;
    CHECK(s.assumed_zeta() == 0);
    s.zeta_assumed = 1;
    CHECK(s.assumed_zeta() == 1);
    CHECK(parse_visibility(visibility_name(VisibilityMode::bernoulli)) == VisibilityMode::bernoulli);
    CHECK_THROWS(parse_visibility("sometimes"));
}
