// Batch driver for the RIS-aided THz link simulator.
//
//   risthz throughput --config configs/default.toml --sweep N=16,36,64,100 --solver gd --out tput.csv
//   risthz ser --config configs/default.toml --sweep scenario.eta2_sq=1e-13,1e-12,1e-11
//   risthz runtime --config configs/default.toml
//   risthz oracle
//
// Exit status: 0 success, 1 usage error, 2 configuration error, 3 solver or
// oracle failure.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "risthz/analysis.hpp"
#include "risthz/config.hpp"
#include "risthz/harness.hpp"

namespace {

struct Options {
    std::string config;
    std::string sweep;
    std::string solver;
    std::optional<bool> robust;
    std::optional<int> zeta;
    std::string visibility;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string trials_out;
    std::vector<std::string> runtime_solvers;
};

void add_common(CLI::App *cmd, Options &o)
{
    cmd->add_option("--config", o.config, "Scenario config file (TOML)");
    cmd->add_option("--sweep", o.sweep, "Sweep one setting: var=v1,v2,...");
    cmd->add_option("--solver", o.solver, "RIS sub-solver")->check(CLI::IsMember({"sdr", "sa", "gd", "rand"}));
    cmd->add_flag_callback("--robust", [&o] { o.robust = true; }, "Use CSI error statistics in the optimizer");
    cmd->add_flag_callback("--non-robust", [&o] { o.robust = false; }, "Ignore CSI error statistics");
    cmd->add_option_function<int>("--zeta", [&o](int z) { o.zeta = z; }, "Re-radiation model: 1 noise, 0 scattering")
        ->check(CLI::IsMember({0, 1}));
    cmd->add_option("--visibility", o.visibility, "Interferer direct links")->check(CLI::IsMember({"nd", "d"}));
    cmd->add_option_function<int>("--trials", [&o](int t) { o.trials = t; }, "Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    cmd->add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t s) { o.seed = s; }, "Master seed");
    cmd->add_option("--out", o.out, "CSV output path (stdout when omitted)");
}

risthz::RunConfig resolve(const Options &o)
{
    risthz::RunConfig cfg = o.config.empty() ? risthz::RunConfig{} : risthz::load_config(o.config);
    if (!o.solver.empty())
        cfg.solver.sub_solver = risthz::parse_solver(o.solver);
    if (o.robust)
        cfg.scenario.robust = *o.robust;
    if (o.zeta)
        cfg.scenario.zeta = *o.zeta;
    if (!o.visibility.empty())
        cfg.scenario.visibility = risthz::parse_visibility(o.visibility);
    if (o.trials)
        cfg.experiment.trials = *o.trials;
    if (o.seed)
        cfg.experiment.seed = *o.seed;
    cfg.validate();
    return cfg;
}

void emit(const Options &o, const risthz::ExperimentResult &res)
{
    if (o.out.empty()) {
        risthz::write_csv(std::cout, res.rows);
    } else {
        std::ofstream f(o.out);
        if (!f)
            throw risthz::ConfigError("cannot write '" + o.out + "'");
        risthz::write_csv(f, res.rows);
    }
    if (!o.trials_out.empty()) {
        std::ofstream f(o.trials_out);
        if (!f)
            throw risthz::ConfigError("cannot write '" + o.trials_out + "'");
        risthz::write_trials_csv(f, res.trial_records);
    }
}

int run_oracle(const Options &o)
{
    risthz::OracleOptions opts;
    if (o.seed)
        opts.seed = *o.seed;
    const auto checks = risthz::run_oracle_checks(opts);
    bool all = true;
    std::ofstream file;
    std::ostream *csv = nullptr;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file)
            throw risthz::ConfigError("cannot write '" + o.out + "'");
        csv = &file;
        *csv << "check,passed,detail\n";
    }
    for (const auto &c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        if (csv)
            *csv << '"' << c.name << "\"," << (c.passed ? 1 : 0) << ",\"" << c.detail << "\"\n";
        all = all && c.passed;
    }
    std::cout << (all ? "all oracle checks passed\n" : "oracle checks FAILED\n");
    return all ? 0 : 3;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"RIS-aided THz link simulator"};
    app.require_subcommand(1);
    Options o;

    auto *tput = app.add_subcommand("throughput", "Mean throughput B log2(1 + SINR) over trials");
    add_common(tput, o);
    tput->add_option("--trials-out", o.trials_out, "Per-trial SINR and throughput CSV");
    auto *ser = app.add_subcommand("ser", "4-QAM symbol error rate over trials");
    add_common(ser, o);
    auto *rt = app.add_subcommand("runtime", "Median BCD wall time per sub-solver");
    add_common(rt, o);
    rt->add_option("--solvers", o.runtime_solvers, "Solvers to time (default gd sa sdr)")
        ->check(CLI::IsMember({"sdr", "sa", "gd", "rand"}));
    auto *oracle = app.add_subcommand("oracle", "Closed-form one-element stationary-point checks");
    oracle->add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t s) { o.seed = s; }, "Seed");
    oracle->add_option("--out", o.out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (oracle->parsed())
            return run_oracle(o);

        const risthz::RunConfig cfg = resolve(o);
        std::optional<risthz::SweepSpec> sweep;
        if (!o.sweep.empty())
            sweep = risthz::parse_sweep(o.sweep);

        risthz::ExperimentResult res;
        if (tput->parsed()) {
            res = risthz::run_throughput(cfg, sweep);
        } else if (ser->parsed()) {
            res = risthz::run_ser(cfg, sweep);
        } else {
            std::vector<risthz::RisSolver> solvers;
            for (const auto &s : o.runtime_solvers)
                solvers.push_back(risthz::parse_solver(s));
            res = solvers.empty() ? risthz::run_runtime(cfg, sweep) : risthz::run_runtime(cfg, sweep, solvers);
        }
        emit(o, res);
        if (res.failed_points > 0) {
            std::cerr << "risthz: " << res.failed_points << " sweep point(s) had no successful trial\n";
            return 3;
        }
        return 0;
    } catch (const risthz::ConfigError &e) {
        std::cerr << "risthz: config error: " << e.what() << '\n';
        return 2;
    } catch (const risthz::InvalidInput &e) {
        std::cerr << "risthz: config error: " << e.what() << '\n';
        return 2;
    } catch (const risthz::Error &e) {
        std::cerr << "risthz: solver failure: " << e.what() << '\n';
        return 3;
    }
}
