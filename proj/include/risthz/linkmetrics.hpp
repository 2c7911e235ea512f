#pragma once

#include <vector>

#include "risthz/atmosphere.hpp"
#include "risthz/channel.hpp"
#include "risthz/types.hpp"

namespace risthz {

// Thermal noise power in W from a density in dBm/Hz over a bandwidth.
double thermal_noise_power(double dbm_per_hz, double bandwidth_hz);

// Molecular re-radiation noise and thermal noise. Per-transmitter variances
// are stored without the zeta switch; zeta is applied by molecular_term().
struct NoiseBudget {
    double sigma_w_sq = 0.0;
    std::vector<double> sigma_m1_i_sq; // direct path, zero when the link is hidden
    std::vector<double> sigma_m2_i_sq; // per-element reflected path
    double sigma_m1_sq = 0.0;          // sum over i of I_i sigma_m1_i^2
    double sigma_m2_sq = 0.0;          // sum over i of sigma_m2_i^2
    Eigen::Index ris_elements = 0;
    int zeta = 1;

    // sum_i sigma_m_i^2 with sigma_m_i^2 = I_i sigma_m1_i^2 + N sigma_m2_i^2.
    double sigma_m_sq() const { return sigma_m1_sq + static_cast<double>(ris_elements) * sigma_m2_sq; }
    double molecular_term() const { return zeta * sigma_m_sq(); }

    // Thermal-only budget (no molecular contribution), used by synthetic tests.
    static NoiseBudget thermal(double sigma_w_sq, std::size_t transmitters, Eigen::Index ris_elements, int zeta);
};

struct LinkDistances {
    std::vector<double> tx_rx;  // d_i
    std::vector<double> tx_ris; // d_gamma_i
    double ris_rx = 0.0;        // d_alpha
};

NoiseBudget molecular_noise(const LinkDistances &links, double frequency_hz, const std::vector<double> &powers,
                            const std::vector<int> &visible, const AtmosphereConfig &atm, Eigen::Index ris_elements,
                            double sigma_w_sq, int zeta);

// Scalar s with C_e = s I: N rho^2 + I rho'^2.
double error_covariance_scale(double rho, double rho_prime, Eigen::Index ris_elements, bool visible);

struct RisPhases {
    RVec phi;

    static RisPhases from_theta(const CVec &theta);
    CVec theta() const;
    // [theta; 1]
    CVec theta0() const;
    Eigen::Index size() const { return phi.size(); }
};

// Everything both optimization blocks need about one estimated link set.
struct SinrContext {
    StackedChannels channels;
    std::vector<double> powers;
    NoiseBudget noise;
    CsiErrorParams errors;
    double rho_total = 0.0;

    Eigen::Index ris_elements() const { return channels.ris_elements(); }
    Eigen::Index rx_antennas() const { return channels.rx_antennas(); }
    std::size_t transmitters() const { return channels.transmitters(); }
    // rho_total + sigma_w^2 + zeta sigma_m^2
    double white_denominator() const { return rho_total + noise.sigma_w_sq + noise.molecular_term(); }
};

SinrContext build_context(StackedChannels channels, std::vector<double> powers, NoiseBudget noise,
                          CsiErrorParams errors);

// Direct evaluation of the SINR for beamformer u and stacked phases theta0.
double sinr(const CVec &u, const CVec &theta0, const SinrContext &ctx);
double sinr(const CVec &u, const RisPhases &phases, const SinrContext &ctx);

// Beamformer side (theta fixed): B_i = H_i theta0 theta0^H H_i^H.
struct BeamformerForms {
    std::vector<CMat> B;
    CVec e0;               // H_0 theta0
    CMat interference;     // sum_{i>=1} P_i B_i + white_denominator I
};
BeamformerForms beamformer_forms(const SinrContext &ctx, const CVec &theta0);

// RIS side, lifted form: gamma = theta0^H G_0 theta0 / (theta0^H M theta0 + alpha).
struct RisForms {
    std::vector<CMat> G;
    CMat M;
    double alpha = 0.0;

    double quadratic_sinr(const CVec &theta0) const;
    double trace_sinr(const CMat &psi) const;
};
RisForms ris_forms(const SinrContext &ctx, const CVec &u);

// RIS side, fractional form over theta alone:
// gamma = (theta^H R_0 theta + 2Re(c_0 theta)) / (theta^H K theta + 2Re(z theta)).
struct FractionalForms {
    CMat R0;
    CMat K;
    CRowVec c0;
    CRowVec z;

    double numerator(const CVec &theta) const;
    double denominator(const CVec &theta) const;
    double sinr(const CVec &theta) const { return numerator(theta) / denominator(theta); }
};
FractionalForms fractional_forms(const SinrContext &ctx, const CVec &u);

// gamma(u, .) for a fixed u through the projected rows u^H H_i, O(N) per call.
class FixedBeamformerSinr {
public:
    FixedBeamformerSinr(const SinrContext &ctx, const CVec &u);
    double operator()(const CVec &theta0) const;
    // Gradient of -gamma with respect to the phases of theta, O(N (N_I + 1)).
    RVec neg_gradient(const CVec &theta0) const;

private:
    std::vector<CRowVec> rows_;
    std::vector<double> powers_;
    double white_ = 0.0;
};

} // namespace risthz
