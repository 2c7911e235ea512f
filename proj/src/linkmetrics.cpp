#include "risthz/linkmetrics.hpp"

#include <cmath>

namespace risthz {

double thermal_noise_power(double dbm_per_hz, double bandwidth_hz)
{
    if (!(bandwidth_hz > 0.0))
        throw InvalidInput("bandwidth must be positive");
    return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0) * bandwidth_hz;
}

NoiseBudget NoiseBudget::thermal(double sigma_w_sq, std::size_t transmitters, Eigen::Index ris_elements, int zeta)
{
    NoiseBudget nb;
    nb.sigma_w_sq = sigma_w_sq;
    nb.sigma_m1_i_sq.assign(transmitters, 0.0);
    nb.sigma_m2_i_sq.assign(transmitters, 0.0);
    nb.ris_elements = ris_elements;
    nb.zeta = zeta;
    return nb;
}

NoiseBudget molecular_noise(const LinkDistances &links, double frequency_hz, const std::vector<double> &powers,
                            const std::vector<int> &visible, const AtmosphereConfig &atm, Eigen::Index ris_elements,
                            double sigma_w_sq, int zeta)
{
    const auto n = powers.size();
    if (links.tx_rx.size() != n || links.tx_ris.size() != n || visible.size() != n)
        throw DimensionMismatch("noise budget inputs need one entry per transmitter");
    if (!(links.ris_rx > 0.0))
        throw InvalidInput("RIS-Rx distance must be positive");
    if (zeta != 0 && zeta != 1)
        throw InvalidInput("zeta must be 0 or 1");

    NoiseBudget nb = NoiseBudget::thermal(sigma_w_sq, n, ris_elements, zeta);
    const double tau_alpha = transmittance(frequency_hz, links.ris_rx, atm);
    const double pl_alpha = pathloss_amplitude(frequency_hz, links.ris_rx);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(links.tx_rx[i] > 0.0) || !(links.tx_ris[i] > 0.0))
            throw InvalidInput("link distances must be positive");
        const double pl_direct = pathloss_amplitude(frequency_hz, links.tx_rx[i]);
        const double tau_direct = transmittance(frequency_hz, links.tx_rx[i], atm);
        nb.sigma_m1_i_sq[i] = visible[i] ? pl_direct * pl_direct * powers[i] * (1.0 - tau_direct) : 0.0;

        // c^2 / (16 (pi f)^2 d_alpha d_gamma) is the product of the two path-loss amplitudes.
        const double cascade = pl_alpha * pathloss_amplitude(frequency_hz, links.tx_ris[i]);
        const double tau_gamma = transmittance(frequency_hz, links.tx_ris[i], atm);
        nb.sigma_m2_i_sq[i] = cascade * cascade * powers[i] * (1.0 - tau_alpha * tau_gamma);

        nb.sigma_m1_sq += nb.sigma_m1_i_sq[i];
        nb.sigma_m2_sq += nb.sigma_m2_i_sq[i];
    }
    return nb;
}

double error_covariance_scale(double rho, double rho_prime, Eigen::Index ris_elements, bool visible)
{
    return static_cast<double>(ris_elements) * rho * rho + (visible ? rho_prime * rho_prime : 0.0);
}

RisPhases RisPhases::from_theta(const CVec &theta)
{
    RisPhases p;
    p.phi.resize(theta.size());
    for (Eigen::Index n = 0; n < theta.size(); ++n)
        p.phi(n) = std::arg(theta(n));
    return p;
}

CVec RisPhases::theta() const
{
    CVec t(phi.size());
    for (Eigen::Index n = 0; n < phi.size(); ++n)
        t(n) = std::polar(1.0, phi(n));
    return t;
}

CVec RisPhases::theta0() const
{
    CVec t(phi.size() + 1);
    for (Eigen::Index n = 0; n < phi.size(); ++n)
        t(n) = std::polar(1.0, phi(n));
    t(phi.size()) = 1.0;
    return t;
}

SinrContext build_context(StackedChannels channels, std::vector<double> powers, NoiseBudget noise,
                          CsiErrorParams errors)
{
    channels.validate();
    const auto n = channels.transmitters();
    if (n == 0)
        throw InvalidInput("context needs at least the signal transmitter");
    if (powers.size() != n)
        throw DimensionMismatch("one transmit power per transmitter required");
    errors.validate(n);
    if (noise.sigma_m1_i_sq.size() != n || noise.sigma_m2_i_sq.size() != n)
        throw DimensionMismatch("noise budget does not match the transmitter count");
    if (!(noise.sigma_w_sq > 0.0))
        throw InvalidInput("thermal noise variance must be positive");

    SinrContext ctx;
    ctx.rho_total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        ctx.rho_total += powers[j] * error_covariance_scale(errors.rho[j], errors.rho_prime[j],
                                                             channels.ris_elements(), channels.visible[j] != 0);
    noise.ris_elements = channels.ris_elements();
    ctx.channels = std::move(channels);
    ctx.powers = std::move(powers);
    ctx.noise = std::move(noise);
    ctx.errors = std::move(errors);
    return ctx;
}

double sinr(const CVec &u, const CVec &theta0, const SinrContext &ctx)
{
    if (theta0.size() != ctx.ris_elements() + 1 || u.size() != ctx.rx_antennas())
        throw DimensionMismatch("beamformer or phase vector has the wrong length");
    const auto &H = ctx.channels.H;
    const double signal = ctx.powers[0] * std::norm(u.dot(H[0] * theta0));
    double denom = 0.0;
    for (std::size_t i = 1; i < H.size(); ++i)
        denom += ctx.powers[i] * std::norm(u.dot(H[i] * theta0));
    // u^H C_e u = scale * ||u||^2
    double err = 0.0;
    const double u2 = u.squaredNorm();
    for (std::size_t i = 0; i < H.size(); ++i)
        err += ctx.powers[i] * error_covariance_scale(ctx.errors.rho[i], ctx.errors.rho_prime[i],
                                                      ctx.ris_elements(), ctx.channels.visible[i] != 0) * u2;
    denom += err + ctx.noise.sigma_w_sq + ctx.noise.molecular_term();
    return signal / denom;
}

double sinr(const CVec &u, const RisPhases &phases, const SinrContext &ctx)
{
    return sinr(u, phases.theta0(), ctx);
}

BeamformerForms beamformer_forms(const SinrContext &ctx, const CVec &theta0)
{
    if (theta0.size() != ctx.ris_elements() + 1)
        throw DimensionMismatch("phase vector has the wrong length");
    BeamformerForms f;
    const auto nr = ctx.rx_antennas();
    f.interference = ctx.white_denominator() * CMat::Identity(nr, nr);
    for (std::size_t i = 0; i < ctx.transmitters(); ++i) {
        const CVec e = ctx.channels.H[i] * theta0;
        f.B.push_back(e * e.adjoint());
        if (i == 0)
            f.e0 = e;
        else
            f.interference.noalias() += ctx.powers[i] * f.B.back();
    }
    return f;
}

double RisForms::quadratic_sinr(const CVec &theta0) const
{
    return theta0.dot(G[0] * theta0).real() / (theta0.dot(M * theta0).real() + alpha);
}

double RisForms::trace_sinr(const CMat &psi) const
{
    return (psi * G[0]).trace().real() / ((psi * M).trace().real() + alpha);
}

RisForms ris_forms(const SinrContext &ctx, const CVec &u)
{
    if (u.size() != ctx.rx_antennas())
        throw DimensionMismatch("beamformer has the wrong length");
    const auto n = ctx.ris_elements();
    const double per_element = ctx.rho_total / static_cast<double>(n);
    RisForms f;
    f.M = (per_element + ctx.noise.zeta * ctx.noise.sigma_m2_sq) * CMat::Identity(n + 1, n + 1);
    for (std::size_t i = 0; i < ctx.transmitters(); ++i) {
        const CVec v = ctx.channels.H[i].adjoint() * u;
        f.G.push_back(ctx.powers[i] * v * v.adjoint());
        if (i > 0)
            f.M.noalias() += f.G.back();
    }
    f.alpha = ctx.noise.sigma_w_sq + ctx.noise.zeta * (ctx.noise.sigma_m1_sq - ctx.noise.sigma_m2_sq) - per_element;
    return f;
}

double FractionalForms::numerator(const CVec &theta) const
{
    return theta.dot(R0 * theta).real() + 2.0 * (c0 * theta)(0).real();
}

double FractionalForms::denominator(const CVec &theta) const
{
    return theta.dot(K * theta).real() + 2.0 * (z * theta)(0).real();
}

FractionalForms fractional_forms(const SinrContext &ctx, const CVec &u)
{
    if (u.size() != ctx.rx_antennas())
        throw DimensionMismatch("beamformer has the wrong length");
    const auto n = ctx.ris_elements();
    const double nd = static_cast<double>(n);
    const auto &ch = ctx.channels;

    FractionalForms f;
    const double white =
        (ctx.rho_total + ctx.noise.sigma_w_sq + ctx.noise.zeta * ctx.noise.sigma_m1_sq) / nd +
        ctx.noise.zeta * ctx.noise.sigma_m2_sq;
    f.K = white * CMat::Identity(n, n);
    f.z = CRowVec::Zero(n);
    for (std::size_t i = 0; i < ctx.transmitters(); ++i) {
        // (u^H Z_i)^H and the visible direct-path gain u^H h_RT_i.
        const CVec w = ch.Z[i].adjoint() * u;
        const cdouble direct = ch.visible[i] ? u.dot(ch.h_rt[i]) : cdouble{0.0};
        CMat R = ctx.powers[i] * (w * w.adjoint() + (std::norm(direct) / nd) * CMat::Identity(n, n));
        // c_i = P_i I_i h^H u u^H Z_i
        CRowVec c = ctx.powers[i] * std::conj(direct) * w.adjoint();
        if (i == 0) {
            f.R0 = std::move(R);
            f.c0 = std::move(c);
        } else {
            f.K.noalias() += R;
            f.z += c;
        }
    }
    return f;
}

FixedBeamformerSinr::FixedBeamformerSinr(const SinrContext &ctx, const CVec &u)
    : powers_(ctx.powers)
{
    if (u.size() != ctx.rx_antennas())
        throw DimensionMismatch("beamformer has the wrong length");
    for (const auto &H : ctx.channels.H)
        rows_.push_back(u.adjoint() * H);
    double err = 0.0;
    const double u2 = u.squaredNorm();
    for (std::size_t i = 0; i < ctx.transmitters(); ++i)
        err += ctx.powers[i] * error_covariance_scale(ctx.errors.rho[i], ctx.errors.rho_prime[i],
                                                      ctx.ris_elements(), ctx.channels.visible[i] != 0) * u2;
    white_ = err + ctx.noise.sigma_w_sq + ctx.noise.molecular_term();
}

double FixedBeamformerSinr::operator()(const CVec &theta0) const
{
    const double signal = powers_[0] * std::norm((rows_[0] * theta0)(0));
    double denom = white_;
    for (std::size_t i = 1; i < rows_.size(); ++i)
        denom += powers_[i] * std::norm((rows_[i] * theta0)(0));
    return signal / denom;
}

RVec FixedBeamformerSinr::neg_gradient(const CVec &theta0) const
{
    // d|r theta0|^2 / d phi_m = -2 Im(conj(r theta0) r_m theta_m).
    const auto n = theta0.size() - 1;
    const cdouble s0 = (rows_[0] * theta0)(0);
    const double num = powers_[0] * std::norm(s0);
    double den = white_;
    RVec dnum = -2.0 * powers_[0] * (std::conj(s0) * rows_[0].head(n).transpose().cwiseProduct(theta0.head(n))).imag();
    RVec dden = RVec::Zero(n);
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        const cdouble si = (rows_[i] * theta0)(0);
        den += powers_[i] * std::norm(si);
        dden -= 2.0 * powers_[i] * (std::conj(si) * rows_[i].head(n).transpose().cwiseProduct(theta0.head(n))).imag();
    }
    return -(dnum * den - num * dden) / (den * den);
}

} // namespace risthz
