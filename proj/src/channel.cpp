#include "risthz/channel.hpp"

#include <cmath>

namespace risthz {

double pathloss_amplitude(double frequency_hz, double distance_m)
{
    if (!(frequency_hz > 0.0) || !(distance_m > 0.0))
        throw InvalidInput("path loss needs positive frequency and distance");
    return kSpeedOfLight / (4.0 * kPi * frequency_hz * distance_m);
}

UnifiedChannelParams UnifiedChannelParams::for_link(int zeta, double frequency_hz, double distance_m,
                                                    const AtmosphereConfig &atm)
{
    if (!(distance_m > 0.0))
        throw InvalidInput("link distance must be positive");
    UnifiedChannelParams p;
    p.zeta = zeta;
    p.frequency_hz = frequency_hz;
    p.distance_m = distance_m;
    const double tau = transmittance(frequency_hz, distance_m, atm);
    try {
        p.rician_k = rician_factor_from_transmittance(tau);
    } catch (const DegenerateInput &) {
        p.rician_k = std::numeric_limits<double>::infinity();
    }
    p.validate();
    return p;
}

void UnifiedChannelParams::validate() const
{
    if (zeta != 0 && zeta != 1)
        throw InvalidInput("zeta must be 0 or 1");
    if (!(rician_k >= 0.0))
        throw InvalidInput("Rician factor must be non-negative");
    if (!(frequency_hz > 0.0) || !(distance_m > 0.0))
        throw InvalidInput("channel needs positive frequency and distance");
}

double UnifiedChannelParams::los_power_weight() const
{
    if (std::isinf(rician_k))
        return 1.0;
    return rician_k / (rician_k + 1.0);
}

double UnifiedChannelParams::nlos_power_weight() const
{
    if (std::isinf(rician_k))
        return 0.0;
    return (1.0 - zeta) / (rician_k + 1.0);
}

CMat draw_channel(const UnifiedChannelParams &params, const CMat &los_response, Rng &rng)
{
    params.validate();
    const cdouble los_phase = std::polar(1.0, rng.phase());
    const CMat nlos = rng.complex_normal_matrix(los_response.rows(), los_response.cols());
    const double a = std::sqrt(params.los_power_weight());
    const double b = std::sqrt(params.nlos_power_weight());
    return (a * los_phase * los_response + b * nlos) * params.pathloss_amp();
}

void StackedChannels::validate() const
{
    const auto n = Z.size();
    if (h_rt.size() != n || visible.size() != n || H.size() != n)
        throw DimensionMismatch("stacked channel lists differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (Z[i].rows() != rx_antennas() || Z[i].cols() != ris_elements())
            throw DimensionMismatch("reflected channels differ in shape");
        if (h_rt[i].size() != rx_antennas())
            throw DimensionMismatch("direct channel length differs from Rx antenna count");
        if (H[i].rows() != rx_antennas() || H[i].cols() != ris_elements() + 1)
            throw DimensionMismatch("stacked channel has wrong shape");
    }
}

CMat assemble_stacked(const CMat &Z, const CVec &h_rt, bool visible)
{
    if (h_rt.size() != Z.rows())
        throw DimensionMismatch("direct channel length must equal the Rx antenna count");
    CMat H(Z.rows(), Z.cols() + 1);
    H.leftCols(Z.cols()) = Z;
    if (visible)
        H.col(Z.cols()) = h_rt;
    else
        H.col(Z.cols()).setZero();
    return H;
}

CMat assemble_stacked(const CMat &H_SR, const CVec &h_st, const CVec &h_rt, bool visible)
{
    if (h_st.size() != H_SR.cols())
        throw DimensionMismatch("Tx-RIS channel length must equal the RIS element count");
    return assemble_stacked(CMat(H_SR * h_st.asDiagonal()), h_rt, visible);
}

ChannelSet make_channel_set(CMat H_SR, std::vector<CVec> h_st, std::vector<CVec> h_rt, std::vector<int> visible)
{
    if (h_st.size() != h_rt.size() || h_st.size() != visible.size())
        throw DimensionMismatch("per-transmitter channel lists differ in length");
    ChannelSet set;
    set.H_SR = std::move(H_SR);
    set.h_st = std::move(h_st);
    auto &s = set.stacked;
    s.h_rt = std::move(h_rt);
    s.visible = std::move(visible);
    for (std::size_t i = 0; i < set.h_st.size(); ++i) {
        if (set.h_st[i].size() != set.H_SR.cols())
            throw DimensionMismatch("Tx-RIS channel length must equal the RIS element count");
        s.Z.push_back(set.H_SR * set.h_st[i].asDiagonal());
        s.H.push_back(assemble_stacked(s.Z.back(), s.h_rt[i], s.visible[i] != 0));
    }
    s.validate();
    return set;
}

CsiErrorParams CsiErrorParams::perfect(std::size_t transmitters)
{
    return {std::vector<double>(transmitters, 0.0), std::vector<double>(transmitters, 0.0)};
}

void CsiErrorParams::validate(std::size_t transmitters) const
{
    if (rho.size() != transmitters || rho_prime.size() != transmitters)
        throw DimensionMismatch("CSI error parameters must have one entry per transmitter");
    for (std::size_t i = 0; i < transmitters; ++i)
        if (!(rho[i] >= 0.0) || !(rho_prime[i] >= 0.0))
            throw InvalidInput("CSI error standard deviations must be non-negative");
}

StackedChannels corrupt_csi(const StackedChannels &truth, const CsiErrorParams &err, Rng &rng)
{
    truth.validate();
    err.validate(truth.transmitters());
    StackedChannels est;
    est.visible = truth.visible;
    for (std::size_t i = 0; i < truth.transmitters(); ++i) {
        const CMat delta = rng.complex_normal_matrix(truth.Z[i].rows(), truth.Z[i].cols());
        const CVec small_delta = rng.complex_normal_vector(truth.h_rt[i].size());
        est.Z.push_back(truth.Z[i] - err.rho[i] * delta);
        est.h_rt.push_back(truth.h_rt[i] - err.rho_prime[i] * small_delta);
        est.H.push_back(assemble_stacked(est.Z.back(), est.h_rt.back(), est.visible[i] != 0));
    }
    return est;
}

} // namespace risthz
