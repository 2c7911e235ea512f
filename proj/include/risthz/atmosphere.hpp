#pragma once

#include <array>

#include "risthz/types.hpp"

namespace risthz {

struct AtmosphereConfig {
    double relative_humidity_percent = 50.0;
    double pressure_hpa = 1013.25;
    double temperature_c = 27.0;

    void validate() const;
};

// Water-vapour absorption model for 200-450 GHz: four Lorentzian-type lines
// plus a polynomial equalization term, all parameterized by the volume mixing
// ratio of water vapour.
struct AbsorptionModel {
    // Line centres in cm^-1 (325, 380, 439 and 448 GHz).
    static constexpr std::array<double, 4> line_centers_cm_inv{10.84, 12.68, 14.65, 14.94};
    // Polynomial equalization coefficients for f in Hz, highest power first.
    static constexpr std::array<double, 5> poly_coeffs{8.495e-48, -9.932e-36, 4.336e-24, -8.33e-13, 5.953e-2};
    static constexpr double band_lo_hz = 200e9;
    static constexpr double band_hi_hz = 450e9;

    static bool in_band(double frequency_hz)
    {
        return frequency_hz >= band_lo_hz && frequency_hz <= band_hi_hz;
    }
};

// Buck equation; temperature in Celsius, pressure in hPa, result in hPa.
double water_vapor_pressure(double temperature_c, double pressure_hpa);

double volume_mixing_ratio(const AtmosphereConfig &atm);

// Absorption coefficient as a function of the mixing ratio directly.
double absorption_coefficient_mu(double frequency_hz, double mixing_ratio);

// k(f) in 1/m. Frequencies outside the model band produce a one-time warning
// on stderr and are evaluated anyway.
double absorption_coefficient(double frequency_hz, const AtmosphereConfig &atm);

// tau = exp(-k d), in (0, 1].
double transmittance(double frequency_hz, double distance_m, const AtmosphereConfig &atm);

// K_d = tau / (1 - tau). Throws DegenerateInput when tau is 1 to machine
// precision (zero distance or a lossless medium).
double rician_factor(double frequency_hz, double distance_m, const AtmosphereConfig &atm);
double rician_factor_from_transmittance(double tau);

} // namespace risthz
