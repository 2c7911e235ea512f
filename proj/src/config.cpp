#include "risthz/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"

namespace risthz {

VisibilityMode parse_visibility(const std::string &s)
{
    if (s == "nd" || s == "ND")
        return VisibilityMode::nd;
    if (s == "d" || s == "D")
        return VisibilityMode::d;
    if (s == "bernoulli")
        return VisibilityMode::bernoulli;
    throw ConfigError("visibility must be nd, d or bernoulli, got '" + s + "'");
}

std::string visibility_name(VisibilityMode v)
{
    switch (v) {
    case VisibilityMode::nd:
        return "nd";
    case VisibilityMode::d:
        return "d";
    case VisibilityMode::bernoulli:
        return "bernoulli";
    }
    return "unknown";
}

void ScenarioConfig::validate() const
{
    atmosphere.validate();
    if (!(frequency_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw ConfigError("frequency and bandwidth must be positive");
    if (ris_elements < 1 || rx_antennas < 1)
        throw ConfigError("array sizes must be positive");
    for (int n : {ris_elements, rx_antennas}) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (side * side != n)
            throw ConfigError("array sizes must be perfect squares (square URA), got " + std::to_string(n));
    }
    if (interferers < 0)
        throw ConfigError("interferer count must be non-negative");
    if (!(power_w > 0.0))
        throw ConfigError("transmit power must be positive");
    if (zeta != 0 && zeta != 1)
        throw ConfigError("zeta must be 0 or 1");
    if (zeta_assumed != -1 && zeta_assumed != 0 && zeta_assumed != 1)
        throw ConfigError("zeta_assumed must be -1, 0 or 1");
    if (!(los_probability >= 0.0 && los_probability <= 1.0) ||
        !(signal_los_probability >= 0.0 && signal_los_probability <= 1.0))
        throw ConfigError("LOS probabilities must lie in [0,1]");
    if (!(eta1_sq >= 0.0) || !(eta2_sq >= 0.0))
        throw ConfigError("CSI error variances must be non-negative");
    if (layout == InterfererLayout::fixed && static_cast<int>(interferer_tx.size()) != interferers)
        throw ConfigError("fixed interferer layout needs one position per interferer");
    if (!(ring_radius_m > 0.0))
        throw ConfigError("ring radius must be positive");
}

void RunConfig::validate() const
{
    scenario.validate();
    try {
        solver.validate();
    } catch (const InvalidInput &e) {
        throw ConfigError(e.what());
    }
    if (experiment.trials < 1 || experiment.symbols < 1 || experiment.runtime_trials < 1)
        throw ConfigError("trial and symbol counts must be positive");
}

namespace {

std::string unquote(std::string s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

const std::string &single(const std::string &key, const std::vector<std::string> &v)
{
    if (v.size() != 1)
        throw ConfigError("'" + key + "' expects a single value");
    return v.front();
}

double to_double(const std::string &key, const std::string &raw)
{
    const std::string s = unquote(raw);
    double out = 0.0;
    const auto *end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("'" + key + "' expects a number, got '" + raw + "'");
    return out;
}

long to_long(const std::string &key, const std::string &raw)
{
    const double d = to_double(key, raw);
    if (d != std::floor(d) || std::abs(d) > 9e15)
        throw ConfigError("'" + key + "' expects an integer, got '" + raw + "'");
    return static_cast<long>(d);
}

bool to_bool(const std::string &key, const std::string &raw)
{
    const std::string s = unquote(raw);
    if (s == "true" || s == "1")
        return true;
    if (s == "false" || s == "0")
        return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + raw + "'");
}

std::vector<SphericalPoint> to_points(const std::string &key, const std::vector<std::string> &v)
{
    if (v.size() % 3 != 0)
        throw ConfigError("'" + key + "' expects (r, azimuth_deg, elevation_deg) triples");
    std::vector<SphericalPoint> out;
    for (std::size_t i = 0; i < v.size(); i += 3)
        out.push_back({to_double(key, v[i]), to_double(key, v[i + 1]), to_double(key, v[i + 2])});
    return out;
}

SphericalPoint to_point(const std::string &key, const std::vector<std::string> &v)
{
    const auto pts = to_points(key, v);
    if (pts.size() != 1)
        throw ConfigError("'" + key + "' expects one (r, azimuth_deg, elevation_deg) triple");
    return pts.front();
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::vector<std::string> &)>;

// Numeric setter for a field reached through a member-access lambda.
template <class Get> Setter num(Get get)
{
    return [get](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
        get(c) = to_double(k, single(k, v));
    };
}

template <class Get> Setter integer(Get get)
{
    return [get](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
        get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(to_long(k, single(k, v)));
    };
}

template <class Get> Setter boolean(Get get)
{
    return [get](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
        get(c) = to_bool(k, single(k, v));
    };
}

const std::map<std::string, Setter> &setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["scenario.frequency_hz"] = num([](RunConfig &c) -> double & { return c.scenario.frequency_hz; });
        t["scenario.bandwidth_hz"] = num([](RunConfig &c) -> double & { return c.scenario.bandwidth_hz; });
        t["scenario.humidity_percent"] =
            num([](RunConfig &c) -> double & { return c.scenario.atmosphere.relative_humidity_percent; });
        t["scenario.pressure_hpa"] = num([](RunConfig &c) -> double & { return c.scenario.atmosphere.pressure_hpa; });
        t["scenario.temperature_c"] =
            num([](RunConfig &c) -> double & { return c.scenario.atmosphere.temperature_c; });
        t["scenario.ris_elements"] = integer([](RunConfig &c) -> int & { return c.scenario.ris_elements; });
        t["scenario.rx_antennas"] = integer([](RunConfig &c) -> int & { return c.scenario.rx_antennas; });
        t["scenario.interferers"] = integer([](RunConfig &c) -> int & { return c.scenario.interferers; });
        t["scenario.power_w"] = num([](RunConfig &c) -> double & { return c.scenario.power_w; });
        t["scenario.noise_dbm_per_hz"] = num([](RunConfig &c) -> double & { return c.scenario.noise_dbm_per_hz; });
        t["scenario.zeta"] = integer([](RunConfig &c) -> int & { return c.scenario.zeta; });
        t["scenario.zeta_assumed"] = integer([](RunConfig &c) -> int & { return c.scenario.zeta_assumed; });
        t["scenario.los_probability"] = num([](RunConfig &c) -> double & { return c.scenario.los_probability; });
        t["scenario.signal_los_probability"] =
            num([](RunConfig &c) -> double & { return c.scenario.signal_los_probability; });
        t["scenario.eta1_sq"] = num([](RunConfig &c) -> double & { return c.scenario.eta1_sq; });
        t["scenario.eta2_sq"] = num([](RunConfig &c) -> double & { return c.scenario.eta2_sq; });
        t["scenario.robust"] = boolean([](RunConfig &c) -> bool & { return c.scenario.robust; });
        t["scenario.ring_radius_m"] = num([](RunConfig &c) -> double & { return c.scenario.ring_radius_m; });
        t["scenario.visibility"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            c.scenario.visibility = parse_visibility(unquote(single(k, v)));
        };
        t["scenario.interferer_layout"] = [](RunConfig &c, const std::string &k,
                                             const std::vector<std::string> &v) {
            const std::string s = unquote(single(k, v));
            if (s == "auto")
                c.scenario.layout = InterfererLayout::automatic;
            else if (s == "fixed")
                c.scenario.layout = InterfererLayout::fixed;
            else if (s == "ring")
                c.scenario.layout = InterfererLayout::ring;
            else
                throw ConfigError("interferer_layout must be auto, fixed or ring, got '" + s + "'");
        };
        t["scenario.rx"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            c.scenario.rx = to_point(k, v);
        };
        t["scenario.ris"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            c.scenario.ris = to_point(k, v);
        };
        t["scenario.signal_tx"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            c.scenario.signal_tx = to_point(k, v);
        };
        t["scenario.interferer_tx"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            c.scenario.interferer_tx = to_points(k, v);
        };

        t["solver.name"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            try {
                c.solver.sub_solver = parse_solver(unquote(single(k, v)));
            } catch (const InvalidInput &e) {
                throw ConfigError(e.what());
            }
        };
        t["solver.rel_tol"] = num([](RunConfig &c) -> double & { return c.solver.rel_tol; });
        t["solver.max_outer_iters"] = integer([](RunConfig &c) -> int & { return c.solver.max_outer_iters; });
        t["solver.gd_epsilon"] = num([](RunConfig &c) -> double & { return c.solver.gd.epsilon_armijo; });
        t["solver.gd_shrink"] = num([](RunConfig &c) -> double & { return c.solver.gd.shrink; });
        t["solver.gd_beta0"] = num([](RunConfig &c) -> double & { return c.solver.gd.beta0; });
        t["solver.gd_tol"] = num([](RunConfig &c) -> double & { return c.solver.gd.tol; });
        t["solver.gd_max_iters"] = integer([](RunConfig &c) -> int & { return c.solver.gd.max_iters; });
        t["solver.sdr_eps0"] = num([](RunConfig &c) -> double & { return c.solver.sdr.bisection_hi; });
        t["solver.sdr_eps1"] = num([](RunConfig &c) -> double & { return c.solver.sdr.bisection_tol; });
        t["solver.sdr_randomizations"] =
            integer([](RunConfig &c) -> int & { return c.solver.sdr.randomization_count; });
        t["solver.sdp_tol"] = num([](RunConfig &c) -> double & { return c.solver.sdr.sdp_tol; });
        t["solver.sdp_max_iters"] = integer([](RunConfig &c) -> int & { return c.solver.sdr.sdp_max_iters; });

        t["experiment.trials"] = integer([](RunConfig &c) -> int & { return c.experiment.trials; });
        t["experiment.seed"] = [](RunConfig &c, const std::string &k, const std::vector<std::string> &v) {
            const std::string s = unquote(single(k, v));
            std::uint64_t out = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec != std::errc{} || ptr != s.data() + s.size())
                throw ConfigError("'" + k + "' expects a non-negative integer, got '" + s + "'");
            c.experiment.seed = out;
        };
        t["experiment.symbols"] = integer([](RunConfig &c) -> long & { return c.experiment.symbols; });
        t["experiment.runtime_trials"] = integer([](RunConfig &c) -> int & { return c.experiment.runtime_trials; });
        return t;
    }();
    return table;
}

std::string canonical_key(const std::string &key)
{
    static const std::map<std::string, std::string> aliases{
        {"N", "scenario.ris_elements"},  {"N_R", "scenario.rx_antennas"}, {"N_I", "scenario.interferers"},
        {"f", "scenario.frequency_hz"},  {"solver", "solver.name"},       {"trials", "experiment.trials"},
        {"seed", "experiment.seed"},
    };
    if (auto it = aliases.find(key); it != aliases.end())
        return it->second;
    if (setters().count(key))
        return key;
    for (const char *section : {"scenario.", "solver.", "experiment."})
        if (setters().count(section + key))
            return section + key;
    throw ConfigError("unknown setting '" + key + "'");
}

} // namespace

void apply_setting(RunConfig &cfg, const std::string &key, const std::vector<std::string> &values)
{
    const std::string k = canonical_key(key);
    setters().at(k)(cfg, k, values);
}

void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value)
{
    apply_setting(cfg, key, std::vector<std::string>{value});
}

std::vector<std::string> setting_names()
{
    std::vector<std::string> out;
    for (const auto &kv : setters())
        out.push_back(kv.first);
    return out;
}

RunConfig parse_config(const std::string &text)
{
    std::istringstream in(text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const CLI::Error &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    RunConfig cfg;
    for (const auto &item : items) {
        // Section open/close markers.
        if (item.name == "++" || item.name == "--")
            continue;
        const std::string key = item.fullname();
        if (!setters().count(key))
            throw ConfigError("unknown config key '" + key + "'");
        setters().at(key)(cfg, key, item.inputs);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace risthz
