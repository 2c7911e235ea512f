#include "risthz/sdr.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace risthz {

void SdrParams::validate() const
{
    if (!(bisection_hi > bisection_tol && bisection_tol > 0.0))
        throw InvalidInput("SDR bisection needs epsilon_0 > epsilon_1 > 0");
    if (randomization_count < 1)
        throw InvalidInput("SDR randomization needs at least one candidate");
    if (!(sdp_tol > 0.0) || sdp_max_iters < 1)
        throw InvalidInput("SDP tolerance and iteration cap must be positive");
}

int SdrParams::bisection_iterations() const
{
    return static_cast<int>(std::ceil(std::log2(bisection_hi / bisection_tol) - 1e-12));
}

namespace {

CMat hermitian_part(const CMat &A) { return 0.5 * (A + A.adjoint()); }

CMat project_psd(const CMat &A)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A));
    const RVec lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

// Rescale a PSD matrix to unit diagonal; stays PSD.
CMat unit_diagonal(const CMat &Y)
{
    const auto n = Y.rows();
    CMat P = hermitian_part(Y);
    double floor = 0.0;
    for (Eigen::Index l = 0; l < n; ++l)
        floor = std::max(floor, P(l, l).real());
    floor = std::max(floor, 1.0) * 1e-12;
    for (Eigen::Index l = 0; l < n; ++l)
        P(l, l) += floor;
    RVec s(n);
    for (Eigen::Index l = 0; l < n; ++l)
        s(l) = 1.0 / std::sqrt(P(l, l).real());
    CMat out = s.asDiagonal() * P * s.asDiagonal();
    for (Eigen::Index l = 0; l < n; ++l)
        out(l, l) = 1.0;
    return out;
}

} // namespace

DiagSdpSolver::DiagSdpSolver(double tol, int max_iters) : tol_(tol), max_iters_(max_iters) {}

SdpSolution DiagSdpSolver::solve(const CMat &C) { return run(C, std::nullopt); }

SdpSolution DiagSdpSolver::solve(const CMat &C, double threshold) { return run(C, threshold); }

SdpSolution DiagSdpSolver::run(const CMat &C_in, std::optional<double> threshold)
{
    if (C_in.rows() != C_in.cols() || C_in.rows() == 0)
        throw DimensionMismatch("SDP cost must be a non-empty square matrix");
    const auto n = C_in.rows();
    const CMat C = hermitian_part(C_in);
    const double scale = C.norm();

    SdpSolution sol;
    if (scale == 0.0) {
        sol.psi = CMat::Identity(n, n);
        sol.converged = true;
        return sol;
    }
    const CMat Cn = C / scale;
    const std::optional<double> level =
        threshold ? std::optional<double>(*threshold / scale) : std::nullopt;

    if (Y_.rows() != n) {
        Y_ = CMat::Identity(n, n);
        U_ = CMat::Zero(n, n);
        penalty_ = 1.0;
    }

    constexpr int check_every = 5;
    double best_lb = -std::numeric_limits<double>::infinity();
    double best_ub = std::numeric_limits<double>::infinity();
    CMat best_psi = unit_diagonal(Y_);

    RVec y(n);
    auto dual_bound = [&](const RVec &dual) {
        CMat S = Cn;
        S.diagonal() -= dual.cast<cdouble>();
        Eigen::SelfAdjointEigenSolver<CMat> es(S, Eigen::EigenvaluesOnly);
        // Round-off allowance keeps the bound conservative (Cn has unit norm).
        const double slack = 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
        return dual.sum() + static_cast<double>(n) * std::max(0.0, es.eigenvalues().maxCoeff()) + slack;
    };
    auto offer = [&](const CMat &psi, double lb) {
        if (lb > best_lb) {
            best_lb = lb;
            best_psi = psi;
        }
    };

    // Certificates from two sources. The PSD iterate rescaled to unit
    // diagonal with the ADMM dual; and the phase-projected top eigenvector,
    // polished by the ascent map v <- phase((Cn + I) v), with the dual that
    // makes it a KKT point. The second closes the gap at once when the
    // relaxation is tight.
    auto certify = [&] {
        const CMat psi = unit_diagonal(Y_);
        offer(psi, (Cn * psi).trace().real());
        for (Eigen::Index l = 0; l < n; ++l)
            y(l) = Cn(l, l).real() - penalty_ * U_(l, l).real();
        best_ub = std::min(best_ub, dual_bound(y));

        Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(Y_));
        CVec v = es.eigenvectors().col(n - 1);
        auto to_phases = [](CVec &w) {
            for (Eigen::Index l = 0; l < w.size(); ++l)
                w(l) = std::abs(w(l)) > 0.0 ? w(l) / std::abs(w(l)) : cdouble{1.0};
        };
        to_phases(v);
        for (int k = 0; k < 20; ++k) {
            CVec w = Cn * v + v;
            to_phases(w);
            v = std::move(w);
        }
        const CVec Cv = Cn * v;
        for (Eigen::Index l = 0; l < n; ++l)
            y(l) = (std::conj(v(l)) * Cv(l)).real();
        offer(v * v.adjoint(), y.sum());
        best_ub = std::min(best_ub, dual_bound(y));
    };

    certify();
    int it = 0;
    for (; it < max_iters_; ++it) {
        if (best_ub - best_lb <= tol_)
            break;
        if (level && (best_lb >= *level || best_ub < *level))
            break;

        CMat X = Y_ - U_ + Cn / penalty_;
        X.diagonal().setOnes();
        const CMat Y_old = Y_;
        Y_ = project_psd(X + U_);
        U_ += X - Y_;

        if ((it + 1) % check_every == 0) {
            certify();
            const double r = (X - Y_).norm();
            const double s = penalty_ * (Y_ - Y_old).norm();
            if (r > 10.0 * s) {
                penalty_ *= 2.0;
                U_ /= 2.0;
            } else if (s > 10.0 * r) {
                penalty_ /= 2.0;
                U_ *= 2.0;
            }
        }
    }
    certify();

    sol.psi = best_psi;
    sol.value = best_lb * scale;
    sol.upper_bound = best_ub * scale;
    sol.iterations = it;
    sol.converged = best_ub - best_lb <= tol_;
    return sol;
}

SdpSolution solve_diag_sdp(const CMat &C, const SdrParams &params)
{
    params.validate();
    DiagSdpSolver solver(params.sdp_tol, params.sdp_max_iters);
    return solver.solve(C);
}

FeasibilityResult sdr_feasibility(const CMat &G0, const CMat &M, double alpha, double b, const SdrParams &params,
                                  DiagSdpSolver *solver)
{
    if (!(b >= 0.0))
        throw InvalidInput("bisection level must be non-negative");
    if (G0.rows() != M.rows() || G0.cols() != M.cols())
        throw DimensionMismatch("G0 and M must have the same shape");
    DiagSdpSolver local(params.sdp_tol, params.sdp_max_iters);
    DiagSdpSolver &s = solver ? *solver : local;

    const double threshold = b * alpha;
    const SdpSolution sol = s.solve(G0 - b * M, threshold);
    FeasibilityResult out;
    out.psi = sol.psi;
    out.value = sol.value;
    out.upper_bound = sol.upper_bound;
    if (sol.value >= threshold) {
        out.feasible = true;
        out.certified = true;
    } else if (sol.upper_bound < threshold) {
        out.feasible = false;
        out.certified = true;
    } else {
        // Undecided within tolerance or iteration cap: conservative.
        out.feasible = false;
        out.certified = false;
    }
    return out;
}

BisectionResult bisection_sdr(const CMat &G0, const CMat &M, double alpha, const SdrParams &params)
{
    params.validate();
    DiagSdpSolver solver(params.sdp_tol, params.sdp_max_iters);

    if (sdr_feasibility(G0, M, alpha, params.bisection_hi, params, &solver).feasible)
        throw UpperBoundTooLow("SDR relaxation feasible at the bisection upper bound " +
                               std::to_string(params.bisection_hi) + "; raise epsilon_0");

    BisectionResult res;
    res.lower = 0.0;
    res.upper = params.bisection_hi;
    std::optional<CMat> psi;
    const int iters = params.bisection_iterations();
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (res.lower + res.upper);
        auto fr = sdr_feasibility(G0, M, alpha, mid, params, &solver);
        if (fr.feasible) {
            res.lower = mid;
            psi = std::move(fr.psi);
        } else {
            res.upper = mid;
        }
        ++res.iterations;
    }
    if (!psi)
        psi = sdr_feasibility(G0, M, alpha, 0.0, params, &solver).psi;
    res.psi = std::move(*psi);
    return res;
}

RandomizationResult gaussian_randomization(const CMat &psi, int count, const CVec &u, const SinrContext &ctx,
                                           Rng &rng)
{
    const auto n = psi.rows();
    if (n != ctx.ris_elements() + 1 || psi.cols() != n)
        throw DimensionMismatch("Psi must be (N+1) x (N+1)");
    if (count < 1)
        throw InvalidInput("randomization needs at least one candidate");

    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(psi));
    // Eigenvalues at round-off level are zeroed; their square roots would
    // otherwise perturb every candidate.
    const double floor = 1e-10 * std::max(es.eigenvalues().maxCoeff(), 0.0);
    const RVec lambda = (es.eigenvalues().array() > floor).select(es.eigenvalues(), 0.0);
    const CMat factor = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
    const FixedBeamformerSinr gamma(ctx, u);

    RandomizationResult best;
    best.sinr = -1.0;
    CVec theta0(n);
    for (int g = 0; g < count; ++g) {
        const CVec z = factor * rng.complex_normal_vector(n);
        const cdouble ref = z(n - 1);
        const cdouble ref_phase = std::abs(ref) > 0.0 ? std::conj(ref) / std::abs(ref) : cdouble{1.0};
        for (Eigen::Index l = 0; l + 1 < n; ++l) {
            const cdouble v = z(l) * ref_phase;
            theta0(l) = std::abs(v) > 0.0 ? v / std::abs(v) : cdouble{1.0};
        }
        theta0(n - 1) = 1.0;
        const double val = gamma(theta0);
        if (val > best.sinr) {
            best.sinr = val;
            best.phases = RisPhases::from_theta(theta0.head(n - 1));
        }
    }
    return best;
}

SdrStep sdr_phases(const CVec &u, const SinrContext &ctx, const SdrParams &params, Rng &rng)
{
    const RisForms forms = ris_forms(ctx, u);
    SdrStep step;
    step.bisection = bisection_sdr(forms.G[0], forms.M, forms.alpha, params);
    auto r = gaussian_randomization(step.bisection.psi, params.randomization_count, u, ctx, rng);
    step.phases = std::move(r.phases);
    step.sinr = r.sinr;
    return step;
}

} // namespace risthz
