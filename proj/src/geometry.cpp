#include "risthz/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace risthz {

Direction Direction::toward(const Vec3 &v)
{
    const double n = v.norm();
    if (!(n > 0.0))
        throw InvalidInput("direction of a zero vector is undefined");
    Direction d;
    d.azimuth = std::atan2(v.y(), v.x());
    if (d.azimuth >= kPi)
        d.azimuth -= 2.0 * kPi;
    d.elevation = std::asin(std::clamp(v.z() / n, -1.0, 1.0));
    return d;
}

ArrayLayout build_square_ura(int count, double wavelength, const Vec3 &origin, ArrayPlane plane)
{
    if (count <= 0)
        throw InvalidInput("array element count must be positive");
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
    if (side * side != count)
        throw InvalidInput("square URA needs a perfect-square element count, got " + std::to_string(count));
    if (!(wavelength > 0.0))
        throw InvalidInput("wavelength must be positive");

    Vec3 a, b;
    switch (plane) {
    case ArrayPlane::yz: a = Vec3::UnitY(); b = Vec3::UnitZ(); break;
    case ArrayPlane::xz: a = Vec3::UnitX(); b = Vec3::UnitZ(); break;
    case ArrayPlane::xy: a = Vec3::UnitX(); b = Vec3::UnitY(); break;
    }
    const double pitch = 0.5 * wavelength;

    ArrayLayout layout;
    layout.element_positions.reserve(static_cast<std::size_t>(count));
    for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col)
            layout.element_positions.push_back(origin + pitch * (col * a + row * b));
    return layout;
}

Vec3 wave_vector(const Direction &dir, double wavelength)
{
    const double k = 2.0 * kPi / wavelength;
    const double ce = std::cos(dir.elevation);
    return k * Vec3(ce * std::cos(dir.azimuth), ce * std::sin(dir.azimuth), std::sin(dir.elevation));
}

CRowVec array_factor(const Direction &dir, const ArrayLayout &layout, double wavelength)
{
    if (layout.size() == 0)
        throw InvalidInput("array layout is empty");
    const Vec3 k = wave_vector(dir, wavelength);
    CRowVec a(layout.size());
    for (Eigen::Index m = 0; m < layout.size(); ++m)
        a(m) = std::polar(1.0, k.dot(layout.element_positions[static_cast<std::size_t>(m)]));
    return a;
}

CVec steering_column(const Direction &dir, const ArrayLayout &layout, double wavelength)
{
    return array_factor(dir, layout, wavelength).adjoint();
}

Vec3 SphericalPoint::to_cartesian() const
{
    const double az = azimuth_deg * kPi / 180.0;
    const double el = elevation_deg * kPi / 180.0;
    return r * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
}

std::vector<Vec3> ScenarioGeometry::nodes() const
{
    std::vector<Vec3> out{rx_reference, ris_reference};
    for (const auto &t : tx)
        out.push_back(t.position);
    return out;
}

Eigen::MatrixXd ScenarioGeometry::distance_table() const
{
    const auto pts = nodes();
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            d(i, j) = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).norm();
    return d;
}

ScenarioGeometry place_scenario(const PlacementConfig &cfg)
{
    if (cfg.transmitters.empty())
        throw InvalidInput("scenario needs at least the signal transmitter");

    ScenarioGeometry geo;
    geo.rx_reference = cfg.rx.to_cartesian();
    geo.ris_reference = cfg.ris.to_cartesian();
    for (const auto &p : cfg.transmitters) {
        TxLink link;
        link.position = p.to_cartesian();
        geo.tx.push_back(link);
    }

    const auto pts = geo.nodes();
    constexpr double min_separation = 1e-9;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if ((pts[i] - pts[j]).norm() < min_separation)
                throw InvalidInput("scenario nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

    const Vec3 rx_ris = geo.ris_reference - geo.rx_reference;
    geo.ris_rx_distance = rx_ris.norm();
    geo.rx_to_ris = Direction::toward(rx_ris);
    geo.ris_to_rx = Direction::toward(-rx_ris);
    for (auto &t : geo.tx) {
        const Vec3 to_rx = t.position - geo.rx_reference;
        const Vec3 to_ris = t.position - geo.ris_reference;
        t.distance_to_rx = to_rx.norm();
        t.distance_to_ris = to_ris.norm();
        t.rx_to_tx = Direction::toward(to_rx);
        t.ris_to_tx = Direction::toward(to_ris);
    }
    return geo;
}

CMat ris_to_rx_los(const ScenarioGeometry &geo, const ArrayLayout &rx_local, const ArrayLayout &ris_local,
                   double wavelength)
{
    const CVec rx = steering_column(geo.rx_to_ris, rx_local, wavelength);
    const CVec ris = steering_column(geo.ris_to_rx, ris_local, wavelength);
    return rx * ris.transpose();
}

} // namespace risthz
