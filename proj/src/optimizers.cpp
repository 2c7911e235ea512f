#include "risthz/optimizers.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>

namespace risthz {

void GdParams::validate() const
{
    if (!(epsilon_armijo > 0.0 && epsilon_armijo < 1.0))
        throw InvalidInput("Armijo constant must lie in (0,1)");
    if (!(shrink > 0.0 && shrink < 1.0))
        throw InvalidInput("step shrink factor must lie in (0,1)");
    if (!(beta0 > 0.0) || !(tol > 0.0))
        throw InvalidInput("initial step and GD tolerance must be positive");
    if (max_iters < 1 || max_shrinks < 1)
        throw InvalidInput("GD iteration caps must be positive");
}

RisSolver parse_solver(const std::string &name)
{
    if (name == "sdr")
        return RisSolver::sdr;
    if (name == "sa")
        return RisSolver::sa;
    if (name == "gd")
        return RisSolver::gd;
    if (name == "rand")
        return RisSolver::rand;
    throw InvalidInput("unknown solver '" + name + "' (expected sdr, sa, gd or rand)");
}

std::string solver_name(RisSolver s)
{
    switch (s) {
    case RisSolver::sdr:
        return "sdr";
    case RisSolver::sa:
        return "sa";
    case RisSolver::gd:
        return "gd";
    case RisSolver::rand:
        return "rand";
    }
    return "unknown";
}

void BcdParams::validate() const
{
    if (!(rel_tol > 0.0))
        throw InvalidInput("BCD tolerance must be positive");
    if (max_outer_iters < 1)
        throw InvalidInput("BCD needs at least one outer iteration");
    gd.validate();
    sdr.validate();
}

CVec optimal_beamformer(const SinrContext &ctx, const CVec &theta0)
{
    const BeamformerForms f = beamformer_forms(ctx, theta0);
    Eigen::LLT<CMat> llt(f.interference);
    if (llt.info() != Eigen::Success)
        throw SolverError("interference-plus-noise matrix is not positive definite");
    CVec v = llt.solve(f.e0);
    const double n = v.norm();
    if (!(n > 0.0)) {
        // No signal energy reaches the array; any unit vector is optimal.
        v = CVec::Zero(ctx.rx_antennas());
        v(0) = 1.0;
        return v;
    }
    return v / n;
}

CVec optimal_beamformer(const SinrContext &ctx, const RisPhases &phases)
{
    return optimal_beamformer(ctx, phases.theta0());
}

RisPhases sa_phases(const CVec &u, const SinrContext &ctx)
{
    if (u.size() != ctx.rx_antennas())
        throw DimensionMismatch("beamformer has the wrong length");
    const auto n = ctx.ris_elements();
    const CRowVec row = u.adjoint() * ctx.channels.H[0];
    const cdouble direct = row(n);
    const double ref = std::abs(direct) > 0.0 ? std::arg(direct) : 0.0;
    RisPhases p;
    p.phi.resize(n);
    for (Eigen::Index m = 0; m < n; ++m)
        p.phi(m) = std::abs(row(m)) > 0.0 ? -(std::arg(row(m)) - ref) : 0.0;
    return p;
}

RVec gd_gradient(const RVec &phi, const FractionalForms &forms)
{
    const auto n = phi.size();
    if (forms.R0.rows() != n)
        throw DimensionMismatch("phase vector does not match the fractional forms");
    CVec theta(n);
    for (Eigen::Index m = 0; m < n; ++m)
        theta(m) = std::polar(1.0, phi(m));
    const cdouble j(0.0, 1.0);
    const CVec R0t = forms.R0 * theta;
    const CVec Kt = forms.K * theta;
    const double num = theta.dot(R0t).real() + 2.0 * (forms.c0 * theta)(0).real();
    const double den = theta.dot(Kt).real() + 2.0 * (forms.z * theta)(0).real();
    const CVec a = (R0t.conjugate() + forms.c0.transpose()).cwiseProduct(-j * theta) / den;
    const CVec b = (num / (den * den)) * (Kt.conjugate() + forms.z.transpose()).cwiseProduct(j * theta);
    return 2.0 * a.real() + 2.0 * b.real();
}

RVec gd_gradient(const RVec &phi, const CVec &u, const SinrContext &ctx)
{
    if (phi.size() != ctx.ris_elements())
        throw DimensionMismatch("phase vector has the wrong length");
    return FixedBeamformerSinr(ctx, u).neg_gradient(RisPhases{phi}.theta0());
}

GdResult gd_phases_from(const RVec &phi0, const CVec &u, const SinrContext &ctx, const GdParams &params)
{
    params.validate();
    if (phi0.size() != ctx.ris_elements())
        throw DimensionMismatch("initial phase vector has the wrong length");
    const FixedBeamformerSinr gamma(ctx, u);
    auto objective = [&](const RVec &phi) {
        RisPhases p{phi};
        return -gamma(p.theta0());
    };

    GdResult res;
    RVec phi = phi0;
    double f = objective(phi);
    res.objective_trace.push_back(-f);
    for (int t = 0; t < params.max_iters; ++t) {
        const RVec g = gamma.neg_gradient(RisPhases{phi}.theta0());
        const double g2 = g.squaredNorm();
        if (g2 == 0.0) {
            res.converged = true;
            break;
        }
        double beta = params.beta0;
        RVec trial = phi - beta * g;
        double f_trial = objective(trial);
        int shrinks = 0;
        while (f_trial >= f - params.epsilon_armijo * beta * g2 && shrinks < params.max_shrinks) {
            beta *= params.shrink;
            trial = phi - beta * g;
            f_trial = objective(trial);
            ++shrinks;
        }
        const bool capped = f_trial >= f - params.epsilon_armijo * beta * g2;
        if (capped)
            ++res.line_search_caps;
        const double delta = beta * g2;
        // A capped step is only taken when it does not raise the objective.
        if (!capped || f_trial <= f) {
            phi = trial;
            f = f_trial;
            res.objective_trace.push_back(-f);
        }
        res.iterations = t + 1;
        if (delta <= params.tol || capped) {
            res.converged = delta <= params.tol;
            break;
        }
    }
    for (Eigen::Index m = 0; m < phi.size(); ++m)
        phi(m) = std::remainder(phi(m), 2.0 * kPi);
    res.phases.phi = phi;
    return res;
}

GdResult gd_phases(const CVec &u, const SinrContext &ctx, const GdParams &params)
{
    return gd_phases_from(sa_phases(u, ctx).phi, u, ctx, params);
}

RisPhases random_phases(Eigen::Index n, Rng &rng)
{
    RisPhases p;
    p.phi.resize(n);
    for (Eigen::Index m = 0; m < n; ++m)
        p.phi(m) = rng.phase();
    return p;
}

OptimizationResult bcd(const SinrContext &ctx, const BcdParams &params, Rng &rng)
{
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    OptimizationResult res;

    RisPhases theta = random_phases(ctx.ris_elements(), rng);
    if (params.sub_solver == RisSolver::rand) {
        res.u = optimal_beamformer(ctx, theta);
        res.phases = theta;
        res.gamma_trace.push_back(sinr(res.u, theta, ctx));
        res.outer_iters = 1;
        res.converged = true;
        res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return res;
    }

    double gamma_prev = 0.0;
    CVec u_prev;
    for (int i = 0; i < params.max_outer_iters; ++i) {
        const CVec u = optimal_beamformer(ctx, theta);
        RisPhases candidate;
        switch (params.sub_solver) {
        case RisSolver::sa:
            candidate = sa_phases(u, ctx);
            break;
        case RisSolver::gd: {
            GdResult g = gd_phases(u, ctx, params.gd);
            res.gd_line_search_caps += g.line_search_caps;
            candidate = std::move(g.phases);
            break;
        }
        case RisSolver::sdr: {
            SdrStep s = sdr_phases(u, ctx, params.sdr, rng);
            res.last_bisection = std::move(s.bisection);
            candidate = std::move(s.phases);
            break;
        }
        case RisSolver::rand:
            break;
        }

        double gamma = sinr(u, candidate, ctx);
        CVec u_keep = u;
        if (gamma <= gamma_prev) {
            ++res.rejected_steps;
            candidate = theta;
            gamma = sinr(u, theta, ctx);
            if (gamma < gamma_prev) {
                // Beamformer refresh lost to rounding; keep the previous pair.
                gamma = gamma_prev;
                u_keep = u_prev;
            }
        }
        const double delta = i == 0 ? std::abs(gamma - gamma_prev) : std::abs(gamma - gamma_prev) / gamma_prev;
        res.gamma_trace.push_back(gamma);
        theta = std::move(candidate);
        u_prev = std::move(u_keep);
        gamma_prev = gamma;
        res.outer_iters = i + 1;
        if (delta <= params.rel_tol) {
            res.converged = true;
            break;
        }
    }
    res.u = u_prev;
    res.phases = theta;
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

} // namespace risthz
