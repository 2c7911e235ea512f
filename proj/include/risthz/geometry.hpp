#pragma once

#include <vector>

#include "risthz/types.hpp"

namespace risthz {

// Azimuth measured from +x in the x-y plane, elevation from the x-y plane.
struct Direction {
    double azimuth = 0.0;   // [-pi, pi)
    double elevation = 0.0; // [-pi/2, pi/2)

    static Direction toward(const Vec3 &v);
};

struct ArrayLayout {
    std::vector<Vec3> element_positions;

    Eigen::Index size() const { return static_cast<Eigen::Index>(element_positions.size()); }
};

// Plane spanned by the two in-plane axes of a URA; the first axis is the fast
// (column) index.
enum class ArrayPlane { yz, xz, xy };

// sqrt(count) x sqrt(count) grid with half-wavelength pitch, corner element at
// origin, extending along the positive in-plane axes.
ArrayLayout build_square_ura(int count, double wavelength, const Vec3 &origin = Vec3::Zero(),
                             ArrayPlane plane = ArrayPlane::yz);

Vec3 wave_vector(const Direction &dir, double wavelength);

// Row vector with entries exp(j k^T u_m).
CRowVec array_factor(const Direction &dir, const ArrayLayout &layout, double wavelength);

// LOS response of an array toward a far-field point in direction dir, as a
// column: the conjugate transpose of the array factor.
CVec steering_column(const Direction &dir, const ArrayLayout &layout, double wavelength);

// (r, azimuth, elevation) with angles in degrees.
struct SphericalPoint {
    double r = 0.0;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;

    Vec3 to_cartesian() const;
};

struct PlacementConfig {
    SphericalPoint rx{0.0, 0.0, 0.0};
    SphericalPoint ris{1.0, 0.0, 0.0};
    // Index 0 is the signal transmitter, 1.. are interferers.
    std::vector<SphericalPoint> transmitters{{1.0, 60.0, 0.0}, {1.5, 110.0, 0.0}};
};

struct TxLink {
    Vec3 position;
    double distance_to_rx = 0.0;   // d_i
    double distance_to_ris = 0.0;  // d_gamma_i
    Direction rx_to_tx;            // arrival direction at the Rx array
    Direction ris_to_tx;           // arrival direction at the RIS
};

struct ScenarioGeometry {
    Vec3 rx_reference;
    Vec3 ris_reference;
    double ris_rx_distance = 0.0; // d_alpha
    Direction rx_to_ris;
    Direction ris_to_rx;
    std::vector<TxLink> tx;

    // Node order: Rx, RIS, Tx_0, Tx_1, ...
    std::vector<Vec3> nodes() const;
    Eigen::MatrixXd distance_table() const;
};

// Resolves spherical node coordinates into reference points, pairwise
// distances and directions. Throws InvalidInput when two nodes coincide.
ScenarioGeometry place_scenario(const PlacementConfig &cfg);

// LOS matrix between the RIS and the Rx array: rx steering column times the
// transpose of the RIS steering column toward the Rx.
CMat ris_to_rx_los(const ScenarioGeometry &geo, const ArrayLayout &rx_local, const ArrayLayout &ris_local,
                   double wavelength);

} // namespace risthz
