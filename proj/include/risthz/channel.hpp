#pragma once

#include <limits>
#include <vector>

#include "risthz/atmosphere.hpp"
#include "risthz/rng.hpp"
#include "risthz/types.hpp"

namespace risthz {

// Free-space amplitude c / (4 pi f d).
double pathloss_amplitude(double frequency_hz, double distance_m);

// One link of the unified Rician model. zeta = 1 treats re-radiation as noise
// (LOS only), zeta = 0 as an NLOS scattering component.
struct UnifiedChannelParams {
    int zeta = 1;
    double frequency_hz = 220e9;
    double distance_m = 1.0;
    // May be +infinity for a lossless link; the NLOS weight is then zero.
    double rician_k = std::numeric_limits<double>::infinity();

    static UnifiedChannelParams for_link(int zeta, double frequency_hz, double distance_m,
                                         const AtmosphereConfig &atm);

    double los_power_weight() const;  // K/(K+1)
    double nlos_power_weight() const; // (1-zeta)/(K+1)
    double pathloss_amp() const { return pathloss_amplitude(frequency_hz, distance_m); }
    void validate() const;
};

// Draws (sqrt(K/(K+1)) F_los e^{j w} + sqrt((1-zeta)/(K+1)) H_nlos) c/(4 pi f d).
// One shared phase per draw. The NLOS matrix is always drawn so that the RNG
// stream does not depend on zeta.
CMat draw_channel(const UnifiedChannelParams &params, const CMat &los_response, Rng &rng);

// Stacked per-transmitter channels Z_i = H_SR diag(h_ST_i),
// H_i = [Z_i  I_i h_RT_i]. Used for both the true and estimated channels.
struct StackedChannels {
    std::vector<CMat> Z;
    std::vector<CVec> h_rt;
    std::vector<int> visible;
    std::vector<CMat> H;

    Eigen::Index rx_antennas() const { return Z.empty() ? 0 : Z.front().rows(); }
    Eigen::Index ris_elements() const { return Z.empty() ? 0 : Z.front().cols(); }
    std::size_t transmitters() const { return Z.size(); }
    void validate() const;
};

struct ChannelSet {
    CMat H_SR;
    std::vector<CVec> h_st;
    StackedChannels stacked;
};

CMat assemble_stacked(const CMat &H_SR, const CVec &h_st, const CVec &h_rt, bool visible);
CMat assemble_stacked(const CMat &Z, const CVec &h_rt, bool visible);

ChannelSet make_channel_set(CMat H_SR, std::vector<CVec> h_st, std::vector<CVec> h_rt, std::vector<int> visible);

// Per-transmitter error standard deviations for the reflected (rho) and direct
// (rho_prime) channels.
struct CsiErrorParams {
    std::vector<double> rho;
    std::vector<double> rho_prime;

    static CsiErrorParams perfect(std::size_t transmitters);
    void validate(std::size_t transmitters) const;
};

// Estimate = truth - fresh error draw, so truth = estimate + error holds with
// the drawn error.
StackedChannels corrupt_csi(const StackedChannels &truth, const CsiErrorParams &err, Rng &rng);

} // namespace risthz
