#include "risthz/atmosphere.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>

namespace risthz {

void AtmosphereConfig::validate() const
{
    if (!(relative_humidity_percent >= 0.0 && relative_humidity_percent <= 100.0))
        throw InvalidInput("relative humidity must lie in [0, 100] percent");
    if (!(pressure_hpa > 0.0))
        throw InvalidInput("pressure must be positive");
    if (!(temperature_c > -240.97))
        throw InvalidInput("temperature must exceed -240.97 C");
}

double water_vapor_pressure(double temperature_c, double pressure_hpa)
{
    if (!(temperature_c > -240.97))
        throw InvalidInput("Buck equation undefined for T <= -240.97 C");
    if (!(pressure_hpa >= 0.0))
        throw InvalidInput("pressure must be non-negative");
    return 6.1121 * (1.0007 + 3.46e-6 * pressure_hpa) * std::exp(17.502 * temperature_c / (240.97 + temperature_c));
}

double volume_mixing_ratio(const AtmosphereConfig &atm)
{
    atm.validate();
    return atm.relative_humidity_percent / 100.0 *
           water_vapor_pressure(atm.temperature_c, atm.pressure_hpa) / atm.pressure_hpa;
}

double absorption_coefficient_mu(double frequency_hz, double mu)
{
    if (!(frequency_hz > 0.0))
        throw InvalidInput("frequency must be positive");

    // Line strengths (numerators) and widths (denominators) per line.
    const double strength[4] = {
        0.2251 * mu * (0.1314 * mu + 0.0297),
        2.053 * mu * (0.1717 * mu + 0.0306),
        0.177 * mu * (0.0832 * mu + 0.0213),
        2.146 * mu * (0.1206 * mu + 0.0277),
    };
    const double width[4] = {
        std::pow(0.4127 * mu + 0.0932, 2),
        std::pow(0.5394 * mu + 0.0961, 2),
        std::pow(0.2615 * mu + 0.0668, 2),
        std::pow(0.3789 * mu + 0.0871, 2),
    };

    // Wavenumber in cm^-1.
    const double wavenumber = frequency_hz / (100.0 * kSpeedOfLight);
    double k = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double dev = wavenumber - AbsorptionModel::line_centers_cm_inv[i];
        k += strength[i] / (width[i] + dev * dev);
    }

    double poly = 0.0;
    for (double q : AbsorptionModel::poly_coeffs)
        poly = poly * frequency_hz + q;
    k += mu / 0.0157 * poly;
    return k;
}

double absorption_coefficient(double frequency_hz, const AtmosphereConfig &atm)
{
    if (!(frequency_hz > 0.0))
        throw InvalidInput("frequency must be positive");
    if (!AbsorptionModel::in_band(frequency_hz)) {
        static std::once_flag warned;
        std::call_once(warned, [frequency_hz] {
            std::cerr << "warning: absorption model evaluated at " << frequency_hz / 1e9
                      << " GHz, outside its 200-450 GHz validity band\n";
        });
    }
    return absorption_coefficient_mu(frequency_hz, volume_mixing_ratio(atm));
}

double transmittance(double frequency_hz, double distance_m, const AtmosphereConfig &atm)
{
    if (!(distance_m >= 0.0))
        throw InvalidInput("distance must be non-negative");
    if (distance_m == 0.0)
        return 1.0;
    return std::exp(-absorption_coefficient(frequency_hz, atm) * distance_m);
}

double rician_factor_from_transmittance(double tau)
{
    if (!(tau > 0.0 && tau <= 1.0))
        throw InvalidInput("transmittance must lie in (0, 1]");
    const double absorbed = 1.0 - tau;
    if (absorbed <= 4.0 * std::numeric_limits<double>::epsilon())
        throw DegenerateInput("transmittance is 1; Rician factor is unbounded");
    return tau / absorbed;
}

double rician_factor(double frequency_hz, double distance_m, const AtmosphereConfig &atm)
{
    return rician_factor_from_transmittance(transmittance(frequency_hz, distance_m, atm));
}

} // namespace risthz
