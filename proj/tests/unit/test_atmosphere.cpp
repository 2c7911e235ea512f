#include <cmath>

#include "doctest.h"
#include "risthz/atmosphere.hpp"

using namespace risthz;

namespace {

// Independent evaluation of the absorption model for one frequency, written
// out term by term.
double k_oracle(double f, double mu)
{
    const double c = 299792458.0;
    const double w = f / (100.0 * c);
    const double y1 = 0.2251 * mu * (0.1314 * mu + 0.0297) /
                      (std::pow(0.4127 * mu + 0.0932, 2) + std::pow(w - 10.84, 2));
    const double y2 = 2.053 * mu * (0.1717 * mu + 0.0306) /
                      (std::pow(0.5394 * mu + 0.0961, 2) + std::pow(w - 12.68, 2));
    const double y3 = 0.177 * mu * (0.0832 * mu + 0.0213) /
                      (std::pow(0.2615 * mu + 0.0668, 2) + std::pow(w - 14.65, 2));
    const double y4 = 2.146 * mu * (0.1206 * mu + 0.0277) /
                      (std::pow(0.3789 * mu + 0.0871, 2) + std::pow(w - 14.94, 2));
    const double g = mu / 0.0157 *
                     (8.495e-48 * std::pow(f, 4) - 9.932e-36 * std::pow(f, 3) + 4.336e-24 * f * f - 8.33e-13 * f +
                      5.953e-2);
    return y1 + y2 + y3 + y4 + g;
}

} // namespace

TEST_CASE("Buck equation")
{
    const double pw27 = 6.1121 * (1.0007 + 3.46e-6 * 1013.25) * std::exp(17.502 * 27.0 / (240.97 + 27.0));
    CHECK(water_vapor_pressure(27.0, 1013.25) == doctest::Approx(pw27).epsilon(1e-15));
    CHECK(water_vapor_pressure(0.0, 1013.25) == doctest::Approx(6.1121 * (1.0007 + 3.46e-6 * 1013.25)).epsilon(1e-15));
    CHECK(water_vapor_pressure(27.0, 0.0) ==
          doctest::Approx(6.1121 * 1.0007 * std::exp(17.502 * 27.0 / 267.97)).epsilon(1e-15));
    CHECK_THROWS_AS(water_vapor_pressure(-240.97, 1013.25), InvalidInput);
    CHECK_THROWS_AS(water_vapor_pressure(-300.0, 1013.25), InvalidInput);
}

TEST_CASE("volume mixing ratio")
{
    AtmosphereConfig dry{0.0, 1013.25, 27.0};
    CHECK(volume_mixing_ratio(dry) == 0.0);

    AtmosphereConfig def;
    const double pw = water_vapor_pressure(27.0, 1013.25);
    CHECK(volume_mixing_ratio(def) == doctest::Approx(0.5 * pw / 1013.25).epsilon(1e-15));
    CHECK(volume_mixing_ratio(def) == doctest::Approx(0.0176655).epsilon(1e-5));

    // Saturation identity: phi = 100 with p chosen so that p_w(T, p) = p.
    AtmosphereConfig sat{100.0, 1.0, 0.0};
    double p = 6.0;
    for (int i = 0; i < 50; ++i)
        p = water_vapor_pressure(0.0, p);
    sat.pressure_hpa = p;
    CHECK(volume_mixing_ratio(sat) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(volume_mixing_ratio(AtmosphereConfig{120.0, 1013.25, 27.0}), InvalidInput);
    CHECK_THROWS_AS(volume_mixing_ratio(AtmosphereConfig{50.0, 0.0, 27.0}), InvalidInput);
}

TEST_CASE("absorption coefficient")
{
    for (double f : {200e9, 220e9, 300e9, 450e9})
        CHECK(absorption_coefficient_mu(f, 0.0) == 0.0);

    const AtmosphereConfig def;
    const double mu = volume_mixing_ratio(def);
    for (double f : {210e9, 220e9, 325e9, 380e9, 440e9})
        CHECK(absorption_coefficient(f, def) == doctest::Approx(k_oracle(f, mu)).epsilon(1e-13));
    CHECK(absorption_coefficient(220e9, def) == doctest::Approx(3.8514e-4).epsilon(1e-4));

    CHECK_THROWS_AS(absorption_coefficient(0.0, def), InvalidInput);
    CHECK_THROWS_AS(absorption_coefficient(-1.0, def), InvalidInput);
    // Outside the band: warning only.
    CHECK(std::isfinite(absorption_coefficient(100e9, def)));

    // Bit-identical repeated evaluation.
    CHECK(absorption_coefficient(333e9, def) == absorption_coefficient(333e9, def));
}

TEST_CASE("absorption is non-negative across the band")
{
    for (double mu : {0.0, 0.005, 0.0176655, 0.05, 0.2, 1.0}) {
        double worst = 1.0;
        for (int k = 0; k <= 10000; ++k) {
            const double f = 200e9 + 250e9 * k / 10000.0;
            worst = std::min(worst, absorption_coefficient_mu(f, mu));
        }
        CAPTURE(mu);
        CHECK(worst >= 0.0);
    }
}

TEST_CASE("absorption peaks near the line centres")
{
    const AtmosphereConfig def;
    std::vector<double> k;
    for (int f = 300; f <= 400; ++f)
        k.push_back(absorption_coefficient(f * 1e9, def));
    std::vector<int> peaks;
    for (std::size_t i = 1; i + 1 < k.size(); ++i)
        if (k[i] > k[i - 1] && k[i] > k[i + 1])
            peaks.push_back(300 + static_cast<int>(i));
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0] - 325) <= 3);
    CHECK(std::abs(peaks[1] - 380) <= 3);
}

TEST_CASE("transmittance and Rician factor")
{
    const AtmosphereConfig def;
    CHECK(transmittance(220e9, 0.0, def) == 1.0);
    const AtmosphereConfig dry{0.0, 1013.25, 27.0};
    CHECK(transmittance(220e9, 5.0, dry) == 1.0);
    CHECK(transmittance(220e9, 1.0, def) == doctest::Approx(std::exp(-absorption_coefficient(220e9, def))).epsilon(1e-15));
    CHECK_THROWS_AS(transmittance(220e9, -1.0, def), InvalidInput);

    double prev = 1.0;
    for (double d = 0.5; d < 20.0; d += 0.5) {
        const double t = transmittance(300e9, d, def);
        CHECK(t <= prev);
        prev = t;
    }

    CHECK(rician_factor_from_transmittance(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(rician_factor_from_transmittance(1.0), DegenerateInput);
    CHECK_THROWS_AS(rician_factor(220e9, 0.0, def), DegenerateInput);

    const double tau = transmittance(220e9, 1.5, def);
    const double K = rician_factor(220e9, 1.5, def);
    CHECK(K == doctest::Approx(tau / (1.0 - tau)).epsilon(1e-12));
    CHECK(K / (K + 1.0) == doctest::Approx(tau).epsilon(1e-12));

    double prevK = 0.0;
    for (double t = 0.05; t < 0.99; t += 0.05) {
        const double k = rician_factor_from_transmittance(t);
        CHECK(k > prevK);
        prevK = k;
    }
}
