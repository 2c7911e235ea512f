#pragma once

#include <optional>

#include "risthz/linkmetrics.hpp"
#include "risthz/rng.hpp"
#include "risthz/types.hpp"

namespace risthz {

struct SdrParams {
    double bisection_hi = 20.0;    // epsilon_0
    double bisection_tol = 1e-6;   // epsilon_1
    int randomization_count = 1000;
    double sdp_tol = 1e-7;         // duality gap, relative to ||C||_F
    int sdp_max_iters = 5000;

    void validate() const;
    // ceil(log2(epsilon_0 / epsilon_1))
    int bisection_iterations() const;
};

struct SdpSolution {
    CMat psi;                  // Hermitian PSD with unit diagonal
    double value = 0.0;        // Tr(C psi); certified lower bound on the optimum
    double upper_bound = 0.0;  // certified dual upper bound on the optimum
    int iterations = 0;
    bool converged = false;    // upper_bound - value <= sdp_tol ||C||_F
};

// max Tr(C X) s.t. diag(X) = 1, X PSD.
//
// ADMM splitting between the unit-diagonal affine set and the PSD cone
// (eigenvalue clipping), on C scaled to unit Frobenius norm, with adaptive
// penalty. Every few iterations a feasible primal point (the PSD iterate with
// its diagonal rescaled to one) and a feasible dual point (diagonal shifted by
// the top eigenvalue of C - Diag(y)) bracket the optimum, so every reported
// bound is certified regardless of convergence. Iterates persist between
// calls, which warm-starts a sequence of nearby problems.
class DiagSdpSolver {
public:
    DiagSdpSolver(double tol, int max_iters);

    SdpSolution solve(const CMat &C);
    // Stops as soon as value >= threshold or upper_bound < threshold is
    // certified (or at convergence / the iteration cap).
    SdpSolution solve(const CMat &C, double threshold);

private:
    SdpSolution run(const CMat &C, std::optional<double> threshold);

    double tol_;
    int max_iters_;
    CMat Y_;
    CMat U_;
    double penalty_ = 1.0;
};

SdpSolution solve_diag_sdp(const CMat &C, const SdrParams &params);

struct FeasibilityResult {
    bool feasible = false;
    bool certified = false; // decided by a certificate rather than by the tolerance fallback
    CMat psi;
    double value = 0.0;
    double upper_bound = 0.0;
};

// Is there a PSD unit-diagonal Psi with Tr(Psi (G0 - b M)) >= b alpha?
FeasibilityResult sdr_feasibility(const CMat &G0, const CMat &M, double alpha, double b, const SdrParams &params,
                                  DiagSdpSolver *solver = nullptr);

struct BisectionResult {
    CMat psi;
    double lower = 0.0; // highest feasible level
    double upper = 0.0; // lowest infeasible level: an upper bound on the relaxation
    int iterations = 0;
};

// Throws UpperBoundTooLow when the relaxation is feasible at epsilon_0.
BisectionResult bisection_sdr(const CMat &G0, const CMat &M, double alpha, const SdrParams &params);

struct RandomizationResult {
    RisPhases phases;
    double sinr = 0.0;
};

// Draws candidates z ~ CN(0, Psi), projects each entry onto the unit circle
// relative to the phase of the last entry, keeps the best SINR.
RandomizationResult gaussian_randomization(const CMat &psi, int count, const CVec &u, const SinrContext &ctx,
                                           Rng &rng);

struct SdrStep {
    RisPhases phases;
    double sinr = 0.0;
    BisectionResult bisection;
};

SdrStep sdr_phases(const CVec &u, const SinrContext &ctx, const SdrParams &params, Rng &rng);

} // namespace risthz
