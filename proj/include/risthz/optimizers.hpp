#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risthz/linkmetrics.hpp"
#include "risthz/rng.hpp"
#include "risthz/sdr.hpp"
#include "risthz/types.hpp"

namespace risthz {

struct GdParams {
    double epsilon_armijo = 5e-5; // sufficient-decrease constant
    double shrink = 0.5;          // step reduction factor
    double beta0 = 1.0;           // initial step per iteration
    double tol = 1e-6;            // stop when beta ||g||^2 <= tol
    int max_iters = 1000;
    int max_shrinks = 60;

    void validate() const;
};

enum class RisSolver { sdr, sa, gd, rand };

RisSolver parse_solver(const std::string &name);
std::string solver_name(RisSolver s);

struct BcdParams {
    double rel_tol = 1e-6;
    int max_outer_iters = 200;
    RisSolver sub_solver = RisSolver::gd;
    GdParams gd;
    SdrParams sdr;

    void validate() const;
};

struct GdResult {
    RisPhases phases;
    int iterations = 0;
    bool converged = false;    // stopped by the step-length test
    int line_search_caps = 0;  // iterations where the shrink cap was reached
    std::vector<double> objective_trace; // gamma after each accepted step, starting at the initial point
};

struct OptimizationResult {
    CVec u;
    RisPhases phases;
    std::vector<double> gamma_trace;
    int outer_iters = 0;
    bool converged = false;
    int rejected_steps = 0;
    int gd_line_search_caps = 0;
    double wall_time_s = 0.0;
    std::optional<BisectionResult> last_bisection;
};

// MVDR receive beamformer A^{-1} e_0 / ||A^{-1} e_0||.
CVec optimal_beamformer(const SinrContext &ctx, const CVec &theta0);
CVec optimal_beamformer(const SinrContext &ctx, const RisPhases &phases);

// Co-phases every reflected contribution with the estimated direct path of
// the signal, or with phase 0 when that path is blocked.
RisPhases sa_phases(const CVec &u, const SinrContext &ctx);

// Gradient of -gamma with respect to phi, from the fractional forms
// (O(N^2)), and the same quantity through the projected rows u^H H_i
// (O(N (N_I + 1))), which the descent loop uses.
RVec gd_gradient(const RVec &phi, const FractionalForms &forms);
RVec gd_gradient(const RVec &phi, const CVec &u, const SinrContext &ctx);

// Armijo-backtracked gradient descent on -gamma, started at the SA point.
GdResult gd_phases(const CVec &u, const SinrContext &ctx, const GdParams &params);
GdResult gd_phases_from(const RVec &phi0, const CVec &u, const SinrContext &ctx, const GdParams &params);

RisPhases random_phases(Eigen::Index n, Rng &rng);

// Alternates the beamformer and the selected RIS sub-solver. A phase update
// that does not raise gamma is rejected.
OptimizationResult bcd(const SinrContext &ctx, const BcdParams &params, Rng &rng);

} // namespace risthz
