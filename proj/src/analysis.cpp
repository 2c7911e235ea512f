#include "risthz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace risthz {

OneElementParams OneElementParams::from_channels(double P0, cdouble a1, cdouble h, double P1, cdouble b1, cdouble g,
                                                 double c)
{
    OneElementParams p;
    p.Lp = P0 * (std::norm(a1) + std::norm(h));
    p.Mp = 2.0 * P0 * std::abs(a1) * std::abs(h);
    p.Np = P1 * (std::norm(b1) + std::norm(g)) + c;
    p.Pp = 2.0 * P1 * std::abs(b1) * std::abs(g);
    p.s = std::arg(a1) - std::arg(h);
    p.t = std::arg(b1) - std::arg(g);
    p.c = c;
    p.validate();
    return p;
}

void OneElementParams::validate() const
{
    if (!(Np > 0.0))
        throw InvalidInput("N' must be positive");
    if (!(Mp >= 0.0) || !(Pp >= 0.0))
        throw InvalidInput("M' and P' must be non-negative");
    if (!(c >= 0.0))
        throw InvalidInput("noise term must be non-negative");
    if (!(Np > Pp))
        throw InvalidInput("N' must exceed P' for a positive denominator");
}

double one_element_sinr(const OneElementParams &p, double x)
{
    return (p.Lp + p.Mp * std::cos(p.s + x)) / (p.Np + p.Pp * std::cos(p.t + x));
}

double one_element_sinr_direct(double P0, cdouble a1, cdouble h, double P1, cdouble b1, cdouble g, double c,
                               double x)
{
    const cdouble theta = std::polar(1.0, x);
    return P0 * std::norm(a1 * theta + h) / (P1 * std::norm(b1 * theta + g) + c);
}

GridExtrema grid_extrema(const OneElementParams &p, int points)
{
    if (points < 2)
        throw InvalidInput("grid needs at least two points");
    GridExtrema e;
    e.min_value = std::numeric_limits<double>::infinity();
    e.max_value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
        const double x = -kPi + 2.0 * kPi * k / points;
        const double v = one_element_sinr(p, x);
        if (v < e.min_value) {
            e.min_value = v;
            e.argmin = x;
        }
        if (v > e.max_value) {
            e.max_value = v;
            e.argmax = x;
        }
    }
    return e;
}

StationaryValues stationary_values(const OneElementParams &p)
{
    p.validate();
    StationaryValues out;
    if (p.Pp == 0.0 && p.Mp == 0.0) {
        out.lower = out.upper = p.Lp / p.Np;
        return out;
    }
    const double d = p.s - p.t;
    const double Cp = (p.Lp * p.Pp) * (p.Lp * p.Pp) + (p.Mp * p.Np) * (p.Mp * p.Np) -
                      2.0 * p.Lp * p.Mp * p.Np * p.Pp * std::cos(d);
    const double disc = Cp - std::pow(p.Mp * p.Pp * std::sin(d), 2);
    const double base = p.Pp * (p.Lp * p.Pp - p.Mp * p.Np * std::cos(d));
    const double root = disc >= 0.0 ? std::sqrt(disc) : 0.0;
    const double den_plus = base + p.Np * root;
    const double den_minus = base - p.Np * root;
    if (disc < 0.0 || den_plus == 0.0 || den_minus == 0.0) {
        const GridExtrema e = grid_extrema(p, 100000);
        out.lower = e.min_value;
        out.upper = e.max_value;
        out.analytic = false;
        return out;
    }
    const double g_plus = p.Lp / p.Np - Cp / (p.Np * den_plus);
    const double g_minus = p.Lp / p.Np - Cp / (p.Np * den_minus);
    out.lower = std::min(g_plus, g_minus);
    out.upper = std::max(g_plus, g_minus);
    return out;
}

namespace {

// Numerator of d gamma_1 / dx up to the positive factor 1/(N' + P' cos(t+x))^2.
double derivative_numerator(const OneElementParams &p, double x)
{
    return -p.Mp * p.Np * std::sin(p.s + x) + p.Lp * p.Pp * std::sin(p.t + x) + p.Mp * p.Pp * std::sin(p.t - p.s);
}

} // namespace

double refine_stationary_x(const OneElementParams &p, double x0, double radius)
{
    double lo = x0 - radius;
    double hi = x0 + radius;
    double flo = derivative_numerator(p, lo);
    const double fhi = derivative_numerator(p, hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        return x0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = derivative_numerator(p, mid);
        if (fm == 0.0)
            return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

SaGap sa_gap(double k, double delta, double c)
{
    if (!(c > 0.0) || !(k >= 0.0))
        throw InvalidInput("SA gap needs k >= 0 and c > 0");
    const double cd = std::cos(delta);
    const double sd = std::sin(delta);
    const double a = k * k + 2.0 * k * cd + 1.0 + c;
    SaGap gap;
    gap.g1 = 16.0 * k * k * sd * sd / (a * ((k + 1.0) * (k + 1.0) + c) * ((k - 1.0) * (k - 1.0) + c));
    gap.g2 = 4.0 / a;
    return gap;
}

OneElementParams random_one_element(Rng &rng)
{
    const double P0 = rng.uniform(0.5, 2.0);
    const double P1 = rng.uniform(0.5, 2.0);
    const double c = rng.uniform(0.1, 1.0);
    return OneElementParams::from_channels(P0, rng.complex_normal(1.0), rng.complex_normal(1.0), P1,
                                           rng.complex_normal(1.0), rng.complex_normal(1.0), c);
}

namespace {

std::string fmt(const char *f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

std::vector<OracleCheck> run_oracle_checks(const OracleOptions &opts)
{
    Rng rng(opts.seed);
    std::vector<OracleCheck> checks;

    double worst_max = 0.0;
    double worst_min = 0.0;
    int fallbacks = 0;
    for (int i = 0; i < opts.instances; ++i) {
        const OneElementParams p = random_one_element(rng);
        const StationaryValues sv = stationary_values(p);
        const GridExtrema e = grid_extrema(p, opts.grid_points);
        fallbacks += sv.analytic ? 0 : 1;
        worst_max = std::max(worst_max, rel(sv.upper, e.max_value));
        worst_min = std::max(worst_min, std::abs(sv.lower - e.min_value) / std::max(e.max_value, 1e-300));
    }
    checks.push_back({"stationary maximum matches grid", worst_max <= opts.rel_tol && fallbacks == 0,
                      fmt("worst relative error %.3e, grid fallbacks %.0f", worst_max, fallbacks)});
    checks.push_back({"stationary minimum matches grid", worst_min <= opts.rel_tol,
                      fmt("worst error relative to the maximum %.3e", worst_min)});

    double worst_limit = 0.0;
    for (int i = 0; i < opts.instances; ++i) {
        const cdouble a1 = rng.complex_normal(1.0), h = rng.complex_normal(1.0);
        const cdouble b1 = rng.complex_normal(1.0), g = rng.complex_normal(1.0);
        const double c = rng.uniform(0.1, 1.0);
        const OneElementParams p = OneElementParams::from_channels(1.0, a1, h, 1e-12, b1, g, c);
        worst_limit = std::max(worst_limit, rel(stationary_values(p).upper, (p.Lp + p.Mp) / p.Np));
    }
    checks.push_back({"vanishing interference recovers aligned SINR", worst_limit <= opts.limit_tol,
                      fmt("worst relative error %.3e", worst_limit)});

    double worst_sym = 0.0;
    for (int i = 0; i < opts.instances / 4 + 1; ++i) {
        OneElementParams p = random_one_element(rng);
        p.t = p.s;
        const StationaryValues sv = stationary_values(p);
        const GridExtrema e = grid_extrema(p, opts.grid_points);
        worst_sym = std::max(worst_sym, rel(sv.upper, e.max_value));
    }
    checks.push_back({"aligned phase offsets match grid", worst_sym <= opts.rel_tol,
                      fmt("worst relative error %.3e", worst_sym)});

    double worst_gap = 0.0;
    for (int i = 0; i < opts.instances / 4 + 1; ++i) {
        const double k = rng.uniform(0.1, 5.0);
        const double c = rng.uniform(0.1, 1.0);
        const double s = rng.phase();
        const double t = rng.phase();
        const OneElementParams p = OneElementParams::from_channels(1.0, std::polar(1.0, s), 1.0, 1.0,
                                                                   std::polar(1.0, t), k, c);
        const StationaryValues sv = stationary_values(p);
        const double gamma_sa = one_element_sinr(p, -p.s);
        const SaGap gap = sa_gap(k, p.s - p.t, c);
        const double scale = std::max(sv.upper, 1e-300);
        worst_gap = std::max(worst_gap, std::abs((sv.upper - gamma_sa) - gap.g1) / scale);
        worst_gap = std::max(worst_gap, std::abs((gamma_sa - sv.lower) - gap.g2) / scale);
    }
    checks.push_back({"SA gap closed forms match stationary values", worst_gap <= 1e-9,
                      fmt("worst error relative to the maximum %.3e", worst_gap)});

    const SaGap far = sa_gap(1e6, 1.0, 0.5);
    checks.push_back({"SA gap vanishes for a dominant interferer direct link", far.g1 < 1e-9 && far.g2 < 1e-9,
                      fmt("g1 %.3e, g2 %.3e", far.g1, far.g2)});

    const double delta = 0.7, c = 0.3;
    const double limit = 16.0 * std::sin(delta) * std::sin(delta) / ((4.0 * c + c * c) * (2.0 * std::cos(delta) + 2.0 + c));
    const double at_one = sa_gap(1.0, delta, c).g1;
    checks.push_back({"SA gap at unit interferer gain matches its limit", rel(at_one, limit) <= 1e-12,
                      fmt("g1 %.6e, limit %.6e", at_one, limit)});
    return checks;
}

} // namespace risthz
