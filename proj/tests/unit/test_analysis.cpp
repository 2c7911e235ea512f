#include <cmath>

#include "doctest.h"
#include "random_instance.hpp"
#include "risthz/analysis.hpp"

using namespace risthz;
using testing::rel_err;

TEST_CASE("one-element forms agree")
{
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
        const double P0 = rng.uniform(0.5, 2.0), P1 = rng.uniform(0.5, 2.0), c = rng.uniform(0.1, 1.0);
        const cdouble a1 = rng.complex_normal(), h = rng.complex_normal();
        const cdouble b1 = rng.complex_normal(), g = rng.complex_normal();
        const OneElementParams p = OneElementParams::from_channels(P0, a1, h, P1, b1, g, c);
        const double x = rng.phase();
        CHECK(rel_err(one_element_sinr(p, x), one_element_sinr_direct(P0, a1, h, P1, b1, g, c, x)) < 1e-12);
    }
}

TEST_CASE("stationary values match a fine grid")
{
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
        const OneElementParams p = random_one_element(rng);
        const StationaryValues sv = stationary_values(p);
        const GridExtrema e = grid_extrema(p, 100000);
        CHECK(sv.analytic);
        CHECK(sv.upper >= e.max_value * (1 - 1e-12));
        CHECK(rel_err(sv.upper, e.max_value) < 1e-4);
        CHECK(sv.lower <= e.min_value + 1e-12 * e.max_value);
        CHECK(std::abs(sv.lower - e.min_value) < 1e-4 * e.max_value);
    }
}

TEST_CASE("stationary points have zero derivative")
{
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        const OneElementParams p = random_one_element(rng);
        const GridExtrema e = grid_extrema(p, 2000);
        const StationaryValues sv = stationary_values(p);
        const double step = 2.0 * kPi / 2000;
        const double xmax = refine_stationary_x(p, e.argmax, 2 * step);
        const double xmin = refine_stationary_x(p, e.argmin, 2 * step);
        CHECK(rel_err(one_element_sinr(p, xmax), sv.upper) < 1e-10);
        CHECK(std::abs(one_element_sinr(p, xmin) - sv.lower) < 1e-10 * sv.upper);
        const double h = 1e-5;
        const double dmax = (one_element_sinr(p, xmax + h) - one_element_sinr(p, xmax - h)) / (2 * h);
        CHECK(std::abs(dmax) < 1e-6 * sv.upper);
    }
}

TEST_CASE("degenerate parameter sets")
{
    OneElementParams flat{2.0, 0.0, 4.0, 0.0, 0.3, 0.1, 1.0};
    const StationaryValues sv = stationary_values(flat);
    CHECK(sv.lower == 0.5);
    CHECK(sv.upper == 0.5);

    // No interference modulation: extrema (L' +- M') / N'.
    OneElementParams noint{3.0, 1.0, 2.0, 0.0, 0.4, 0.0, 1.0};
    const StationaryValues s2 = stationary_values(noint);
    CHECK(s2.upper == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s2.lower == doctest::Approx(1.0).epsilon(1e-12));

    OneElementParams bad = noint;
    bad.Pp = 3.0;
    CHECK_THROWS_AS(stationary_values(bad), InvalidInput);
    bad = noint;
    bad.Np = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    CHECK_THROWS_AS(grid_extrema(noint, 1), InvalidInput);
}

TEST_CASE("SA gap closed forms")
{
    // g2 is the SA value in the unit-magnitude setting with zero lower value.
    Rng rng(4);
    for (int i = 0; i < 30; ++i) {
        const double k = rng.uniform(0.1, 5.0), c = rng.uniform(0.1, 1.0);
        const double s = rng.phase(), t = rng.phase();
        const OneElementParams p =
            OneElementParams::from_channels(1.0, std::polar(1.0, s), 1.0, 1.0, std::polar(1.0, t), k, c);
        const StationaryValues sv = stationary_values(p);
        const double g_sa = one_element_sinr(p, -p.s);
        const SaGap gap = sa_gap(k, p.s - p.t, c);
        CHECK(std::abs(sv.lower) < 1e-12 * sv.upper);
        CHECK(gap.g1 >= 0.0);
        CHECK(std::abs(gap.g1 - (sv.upper - g_sa)) < 1e-9 * sv.upper);
        CHECK(std::abs(gap.g2 - g_sa) < 1e-9 * sv.upper);
    }
    CHECK(sa_gap(2.0, 0.0, 0.5).g1 == 0.0);
    CHECK(sa_gap(1e6, 0.3, 0.5).g1 < 1e-9);
    CHECK_THROWS_AS(sa_gap(1.0, 0.1, 0.0), InvalidInput);
}

TEST_CASE("oracle suite passes")
{
    OracleOptions opts;
    opts.instances = 60;
    opts.grid_points = 20000;
    opts.rel_tol = 1e-3;
    for (const OracleCheck &c : run_oracle_checks(opts)) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
    }
}
