#include "risthz/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace risthz {

CsiErrorParams csi_errors(const ScenarioConfig &cfg)
{
    const std::size_t n = static_cast<std::size_t>(cfg.interferers) + 1;
    CsiErrorParams e = CsiErrorParams::perfect(n);
    e.rho[0] = e.rho_prime[0] = std::sqrt(cfg.eta1_sq);
    for (std::size_t i = 1; i < n; ++i)
        e.rho[i] = e.rho_prime[i] = std::sqrt(cfg.eta2_sq);
    return e;
}

namespace {

std::vector<SphericalPoint> interferer_positions(const ScenarioConfig &cfg, Rng &rng)
{
    const auto n = static_cast<std::size_t>(cfg.interferers);
    const bool ring = cfg.layout == InterfererLayout::ring ||
                      (cfg.layout == InterfererLayout::automatic && cfg.interferer_tx.size() != n);
    if (!ring)
        return {cfg.interferer_tx.begin(), cfg.interferer_tx.begin() + static_cast<std::ptrdiff_t>(n)};
    std::vector<SphericalPoint> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({cfg.ring_radius_m, rng.phase() * 180.0 / kPi, 0.0});
    return out;
}

CVec as_vector(const CMat &m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

} // namespace

TrialChannels draw_trial(const ScenarioConfig &cfg, std::uint64_t seed, std::uint64_t trial)
{
    cfg.validate();
    TrialChannels tc;
    const double lambda = kSpeedOfLight / cfg.frequency_hz;
    const std::size_t n_tx = static_cast<std::size_t>(cfg.interferers) + 1;

    Rng geo_rng = Rng::for_trial(seed, trial, Stream::geometry);
    PlacementConfig placement;
    placement.rx = cfg.rx;
    placement.ris = cfg.ris;
    placement.transmitters = {cfg.signal_tx};
    for (const auto &p : interferer_positions(cfg, geo_rng))
        placement.transmitters.push_back(p);
    tc.geometry = place_scenario(placement);
    const auto &geo = tc.geometry;

    Rng vis_rng = Rng::for_trial(seed, trial, Stream::visibility);
    for (std::size_t i = 0; i < n_tx; ++i) {
        const double p = i == 0 ? cfg.signal_los_probability : cfg.los_probability;
        const bool drawn = vis_rng.bernoulli(p);
        int v = drawn ? 1 : 0;
        if (i > 0 && cfg.visibility == VisibilityMode::nd)
            v = 0;
        if (i > 0 && cfg.visibility == VisibilityMode::d)
            v = 1;
        tc.visible.push_back(v);
    }
    tc.powers.assign(n_tx, cfg.power_w);

    const ArrayLayout rx_layout = build_square_ura(cfg.rx_antennas, lambda);
    const ArrayLayout ris_layout = build_square_ura(cfg.ris_elements, lambda);
    Rng ch_rng = Rng::for_trial(seed, trial, Stream::channel);
    const auto link = [&](double d) {
        return UnifiedChannelParams::for_link(cfg.zeta, cfg.frequency_hz, d, cfg.atmosphere);
    };
    CMat H_SR = draw_channel(link(geo.ris_rx_distance), ris_to_rx_los(geo, rx_layout, ris_layout, lambda), ch_rng);
    std::vector<CVec> h_st, h_rt;
    for (const auto &t : geo.tx) {
        h_st.push_back(as_vector(
            draw_channel(link(t.distance_to_ris), steering_column(t.ris_to_tx, ris_layout, lambda), ch_rng)));
        h_rt.push_back(as_vector(
            draw_channel(link(t.distance_to_rx), steering_column(t.rx_to_tx, rx_layout, lambda), ch_rng)));
    }
    tc.truth = make_channel_set(std::move(H_SR), std::move(h_st), std::move(h_rt), tc.visible).stacked;

    LinkDistances links;
    links.ris_rx = geo.ris_rx_distance;
    for (const auto &t : geo.tx) {
        links.tx_rx.push_back(t.distance_to_rx);
        links.tx_ris.push_back(t.distance_to_ris);
    }
    const double sigma_w_sq = thermal_noise_power(cfg.noise_dbm_per_hz, cfg.bandwidth_hz);
    tc.noise = molecular_noise(links, cfg.frequency_hz, tc.powers, tc.visible, cfg.atmosphere, cfg.ris_elements,
                               sigma_w_sq, cfg.zeta);

    tc.errors = csi_errors(cfg);
    Rng csi_rng = Rng::for_trial(seed, trial, Stream::csi);
    tc.estimate = corrupt_csi(tc.truth, tc.errors, csi_rng);
    return tc;
}

SinrContext optimization_context(const ScenarioConfig &cfg, const TrialChannels &tc)
{
    NoiseBudget noise = tc.noise;
    noise.zeta = cfg.assumed_zeta();
    const CsiErrorParams err = cfg.robust ? tc.errors : CsiErrorParams::perfect(tc.powers.size());
    return build_context(tc.estimate, tc.powers, noise, err);
}

SinrContext evaluation_context(const ScenarioConfig &, const TrialChannels &tc)
{
    return build_context(tc.truth, tc.powers, tc.noise, CsiErrorParams::perfect(tc.powers.size()));
}

cdouble modulate_4qam(int b0, int b1)
{
    const double a = 1.0 / std::sqrt(2.0);
    return {a * (1 - 2 * (b0 & 1)), a * (1 - 2 * (b1 & 1))};
}

std::vector<cdouble> modulate_4qam(const std::vector<std::uint8_t> &bits)
{
    if (bits.size() % 2 != 0)
        throw InvalidInput("4-QAM needs an even number of bits");
    std::vector<cdouble> out;
    out.reserve(bits.size() / 2);
    for (std::size_t k = 0; k < bits.size(); k += 2)
        out.push_back(modulate_4qam(bits[k], bits[k + 1]));
    return out;
}

std::pair<int, int> demodulate_4qam(cdouble received, cdouble gain)
{
    if (gain == cdouble{0.0})
        throw DegenerateInput("cannot equalize a zero gain");
    const cdouble y = received / gain;
    return {y.real() < 0.0 ? 1 : 0, y.imag() < 0.0 ? 1 : 0};
}

double qpsk_ser_awgn(double snr)
{
    if (!(snr >= 0.0))
        throw InvalidInput("SNR must be non-negative");
    // Per-dimension correct-decision probability Phi(sqrt(snr)) by composite Simpson.
    const double a = std::sqrt(snr);
    const int n = 20000;
    const double h = a / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double x = k * h;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * std::exp(-0.5 * x * x);
    }
    const double pc = 0.5 + acc * h / 3.0 / std::sqrt(2.0 * kPi);
    return 1.0 - pc * pc;
}

long count_symbol_errors(const std::vector<cdouble> &gains, cdouble detect_gain, double noise_var, long symbols,
                         Rng &rng)
{
    if (gains.empty())
        throw InvalidInput("at least the desired stream gain is required");
    long errors = 0;
    for (long k = 0; k < symbols; ++k) {
        const std::uint64_t w = rng.engine()();
        int b0 = static_cast<int>(w & 1u), b1 = static_cast<int>((w >> 1) & 1u);
        cdouble r = gains[0] * modulate_4qam(b0, b1);
        for (std::size_t i = 1; i < gains.size(); ++i) {
            const unsigned shift = static_cast<unsigned>(2 * i);
            r += gains[i] * modulate_4qam(static_cast<int>((w >> shift) & 1u), static_cast<int>((w >> (shift + 1)) & 1u));
        }
        if (noise_var > 0.0)
            r += rng.complex_normal(noise_var);
        const auto [d0, d1] = demodulate_4qam(r, detect_gain);
        if (d0 != b0 || d1 != b1)
            ++errors;
    }
    return errors;
}

TrialOutcome run_trial(const RunConfig &cfg, std::uint64_t trial, bool with_ser)
{
    TrialOutcome out;
    try {
        const TrialChannels tc = draw_trial(cfg.scenario, cfg.experiment.seed, trial);
        const SinrContext opt_ctx = optimization_context(cfg.scenario, tc);
        Rng opt_rng = Rng::for_trial(cfg.experiment.seed, trial, Stream::optimizer);
        const OptimizationResult res = bcd(opt_ctx, cfg.solver, opt_rng);
        const SinrContext eval_ctx = evaluation_context(cfg.scenario, tc);
        out.sinr = sinr(res.u, res.phases, eval_ctx);
        out.optimized_sinr = res.gamma_trace.empty() ? 0.0 : res.gamma_trace.back();
        out.throughput_bps = cfg.scenario.bandwidth_hz * std::log2(1.0 + out.sinr);
        out.outer_iters = res.outer_iters;
        out.wall_time_s = res.wall_time_s;

        if (with_ser) {
            if (tc.powers.size() > 32)
                throw InvalidInput("SER simulation supports at most 31 interferers");
            const CVec theta0 = res.phases.theta0();
            std::vector<cdouble> gains;
            for (std::size_t i = 0; i < tc.powers.size(); ++i)
                gains.push_back(std::sqrt(tc.powers[i]) * res.u.dot(tc.truth.H[i] * theta0));
            const cdouble detect = std::sqrt(tc.powers[0]) * res.u.dot(tc.estimate.H[0] * theta0);
            const double noise_var = (tc.noise.sigma_w_sq + tc.noise.molecular_term()) * res.u.squaredNorm();
            Rng sym_rng = Rng::for_trial(cfg.experiment.seed, trial, Stream::symbols);
            out.symbols = cfg.experiment.symbols;
            out.symbol_errors = count_symbol_errors(gains, detect, noise_var, out.symbols, sym_rng);
        }
        out.ok = true;
    } catch (const Error &e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

SweepSpec parse_sweep(const std::string &text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size())
        throw ConfigError("sweep must look like var=v1,v2,...; got '" + text + "'");
    SweepSpec s;
    s.var = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string v = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (v.empty())
            throw ConfigError("empty value in sweep '" + text + "'");
        s.values.push_back(v);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return s;
}

unsigned worker_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("RIS_THZ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, unsigned workers)
{
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

namespace {

struct Stats {
    double mean = 0.0;
    double ci95 = 0.0;
};

// Summation in index order keeps results independent of the worker count.
Stats mean_ci(const std::vector<double> &x)
{
    Stats s;
    if (x.empty())
        return s;
    double sum = 0.0;
    for (double v : x)
        sum += v;
    s.mean = sum / static_cast<double>(x.size());
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x)
            ss += (v - s.mean) * (v - s.mean);
        s.ci95 = 1.96 * std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    }
    return s;
}

double median(std::vector<double> x)
{
    if (x.empty())
        return 0.0;
    std::sort(x.begin(), x.end());
    const std::size_t m = x.size() / 2;
    return x.size() % 2 ? x[m] : 0.5 * (x[m - 1] + x[m]);
}

struct SweepPoint {
    std::string value;
    RunConfig cfg;
};

std::vector<SweepPoint> expand(const RunConfig &cfg, const std::optional<SweepSpec> &sweep)
{
    std::vector<SweepPoint> pts;
    if (!sweep) {
        pts.push_back({"", cfg});
        pts.back().cfg.validate();
        return pts;
    }
    for (const auto &v : sweep->values) {
        RunConfig c = cfg;
        apply_setting(c, sweep->var, v);
        c.validate();
        pts.push_back({v, std::move(c)});
    }
    return pts;
}

std::vector<TrialOutcome> run_trials(const RunConfig &cfg, bool with_ser)
{
    std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.experiment.trials));
    parallel_for(out.size(), [&](std::size_t t) { out[t] = run_trial(cfg, t, with_ser); }, worker_count());
    return out;
}

void report_failures(const std::vector<TrialOutcome> &outs, const std::string &label)
{
    for (std::size_t t = 0; t < outs.size(); ++t)
        if (!outs[t].ok)
            std::fprintf(stderr, "risthz: trial %zu%s failed: %s\n", t, label.c_str(), outs[t].error.c_str());
}

} // namespace

ExperimentResult run_throughput(const RunConfig &cfg, const std::optional<SweepSpec> &sweep)
{
    ExperimentResult res;
    const std::string var = sweep ? sweep->var : "";
    for (const auto &pt : expand(cfg, sweep)) {
        const auto outs = run_trials(pt.cfg, false);
        report_failures(outs, pt.value.empty() ? "" : " at " + var + "=" + pt.value);
        std::vector<double> tput, sinr_db;
        int failed = 0;
        for (std::size_t t = 0; t < outs.size(); ++t) {
            if (!outs[t].ok) {
                ++failed;
                continue;
            }
            tput.push_back(outs[t].throughput_bps);
            sinr_db.push_back(10.0 * std::log10(outs[t].sinr));
            res.trial_records.push_back({pt.value, static_cast<int>(t), outs[t].sinr, outs[t].throughput_bps});
        }
        if (tput.empty())
            ++res.failed_points;
        const std::string solver = solver_name(pt.cfg.solver.sub_solver);
        const int n = static_cast<int>(tput.size());
        const Stats st = mean_ci(tput), sd = mean_ci(sinr_db);
        res.rows.push_back({var, pt.value, solver, "throughput_bps", st.mean, st.ci95, n, failed, pt.cfg.experiment.seed});
        res.rows.push_back({var, pt.value, solver, "sinr_db", sd.mean, sd.ci95, n, failed, pt.cfg.experiment.seed});
    }
    return res;
}

ExperimentResult run_ser(const RunConfig &cfg, const std::optional<SweepSpec> &sweep)
{
    ExperimentResult res;
    const std::string var = sweep ? sweep->var : "";
    for (const auto &pt : expand(cfg, sweep)) {
        const auto outs = run_trials(pt.cfg, true);
        report_failures(outs, pt.value.empty() ? "" : " at " + var + "=" + pt.value);
        long errors = 0, symbols = 0;
        int ok = 0, failed = 0;
        for (const auto &o : outs) {
            if (!o.ok) {
                ++failed;
                continue;
            }
            ++ok;
            errors += o.symbol_errors;
            symbols += o.symbols;
        }
        if (ok == 0)
            ++res.failed_points;
        const double p = symbols ? static_cast<double>(errors) / static_cast<double>(symbols) : 0.0;
        const double ci = symbols ? 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(symbols)) : 0.0;
        res.rows.push_back({var, pt.value, solver_name(pt.cfg.solver.sub_solver), "ser", p, ci, ok, failed,
                            pt.cfg.experiment.seed});
    }
    return res;
}

ExperimentResult run_runtime(const RunConfig &cfg, const std::optional<SweepSpec> &sweep,
                             const std::vector<RisSolver> &solvers)
{
    ExperimentResult res;
    const std::string var = sweep ? sweep->var : "";
    for (const auto &pt : expand(cfg, sweep)) {
        // Warm-up: one untimed run touches every code path but the SDP.
        {
            RunConfig warm = pt.cfg;
            warm.solver.sub_solver = RisSolver::gd;
            (void)run_trial(warm, 0, false);
        }
        for (RisSolver s : solvers) {
            RunConfig c = pt.cfg;
            c.solver.sub_solver = s;
            std::vector<double> per_run, per_outer, iters;
            int failed = 0;
            for (int t = 0; t < c.experiment.runtime_trials; ++t) {
                const TrialOutcome o = run_trial(c, static_cast<std::uint64_t>(t), false);
                if (!o.ok) {
                    ++failed;
                    std::fprintf(stderr, "risthz: runtime trial %d (%s) failed: %s\n", t, solver_name(s).c_str(),
                                 o.error.c_str());
                    continue;
                }
                per_run.push_back(o.wall_time_s);
                per_outer.push_back(o.wall_time_s / std::max(1, o.outer_iters));
                iters.push_back(o.outer_iters);
            }
            if (per_run.empty())
                ++res.failed_points;
            const int n = static_cast<int>(per_run.size());
            const std::string name = solver_name(s);
            res.rows.push_back({var, pt.value, name, "runtime_s", median(per_run), 0.0, n, failed, c.experiment.seed});
            res.rows.push_back(
                {var, pt.value, name, "runtime_outer_s", median(per_outer), 0.0, n, failed, c.experiment.seed});
            res.rows.push_back(
                {var, pt.value, name, "outer_iters", mean_ci(iters).mean, mean_ci(iters).ci95, n, failed, c.experiment.seed});
        }
    }
    return res;
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_csv(std::ostream &os, const std::vector<ExperimentRow> &rows)
{
    os << "sweep_var,sweep_value,solver,metric,mean,ci95,trials,failed,seed\n";
    for (const auto &r : rows)
        os << r.sweep_var << ',' << r.sweep_value << ',' << r.solver << ',' << r.metric << ',' << num(r.mean) << ','
           << num(r.ci95) << ',' << r.trials << ',' << r.failed << ',' << r.seed << '\n';
}

void write_trials_csv(std::ostream &os, const std::vector<TrialRecord> &records)
{
    os << "sweep_value,trial,sinr,throughput_bps\n";
    for (const auto &r : records)
        os << r.sweep_value << ',' << r.trial << ',' << num(r.sinr) << ',' << num(r.throughput_bps) << '\n';
}

} // namespace risthz
