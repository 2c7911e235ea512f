#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risthz/rng.hpp"
#include "risthz/types.hpp"

namespace risthz {

// gamma_1(x) = (L' + M' cos(s + x)) / (N' + P' cos(t + x)).
struct OneElementParams {
    double Lp = 0.0;
    double Mp = 0.0;
    double Np = 1.0;
    double Pp = 0.0;
    double s = 0.0;
    double t = 0.0;
    double c = 0.0;

    // From the first form P0 |a1 theta + h|^2 / (P1 |b1 theta + g|^2 + c).
    static OneElementParams from_channels(double P0, cdouble a1, cdouble h, double P1, cdouble b1, cdouble g,
                                          double c);
    void validate() const;
};

double one_element_sinr(const OneElementParams &p, double x);

// The first form evaluated directly from channel coefficients.
double one_element_sinr_direct(double P0, cdouble a1, cdouble h, double P1, cdouble b1, cdouble g, double c,
                               double x);

struct StationaryValues {
    double lower = 0.0;
    double upper = 0.0;
    bool analytic = true; // false when the square-root argument was negative and the grid was used
};

StationaryValues stationary_values(const OneElementParams &p);

struct GridExtrema {
    double min_value = 0.0;
    double max_value = 0.0;
    double argmin = 0.0;
    double argmax = 0.0;
};

// Uniform grid over [-pi, pi).
GridExtrema grid_extrema(const OneElementParams &p, int points);

// Local refinement of a stationary point of gamma_1 near x0 (bracketing the
// derivative's sign change on each side).
double refine_stationary_x(const OneElementParams &p, double x0, double radius);

struct SaGap {
    double g1 = 0.0; // SA below the higher stationary point
    double g2 = 0.0; // SA above the lower stationary point
};

// Unit-magnitude setting with interferer direct-link gain k.
SaGap sa_gap(double k, double delta, double c);

// Random admissible parameters drawn through from_channels.
OneElementParams random_one_element(Rng &rng);

struct OracleCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct OracleOptions {
    int instances = 200;
    int grid_points = 100000;
    double rel_tol = 1e-4;
    double limit_tol = 1e-6;
    std::uint64_t seed = 7;
};

std::vector<OracleCheck> run_oracle_checks(const OracleOptions &opts);

} // namespace risthz
