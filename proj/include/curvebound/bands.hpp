#pragma once

#include <vector>

#include "curvebound/curve.hpp"

namespace curvebound {

enum class BandKind { regular, caustic, extended };

// Sampled band B(t, theta) = cos(theta) gamma(t) + sin(theta) n(t) on the
// product grid t_grid x theta_grid.  The theta = 0 row (when present)
// reproduces the curve itself.
struct BandGrid {
    BandKind kind = BandKind::regular;
    std::vector<double> t_grid;               // size n+1
    std::vector<double> theta_grid;           // size m+1
    std::vector<std::vector<Vec3>> points;    // (n+1) rows of m+1 points

    int t_cells() const { return static_cast<int>(t_grid.size()) - 1; }
    int theta_cells() const { return static_cast<int>(theta_grid.size()) - 1; }
};

// Band over theta in [rho1 - pi, rho2] for a member curve of the space; the
// grid always contains theta = 0 as a node.
BandGrid regular_band(const FramedCurve& fc, const SpaceSpec& s, int m = 64);

// Band over theta in [0, rho0] together with the caustic curve
// chi(t) = cos(rho(t)) gamma(t) + sin(rho(t)) n(t), sampled once per cell at
// the cell's left node.  Requires kappa > kappa0 everywhere, kappa0 finite.
std::pair<BandGrid, std::vector<Vec3>> caustic_band_and_caustic(
    const FramedCurve& fc, const CurvatureBound& kappa0, int m = 64);

// The check curve: the translation of the curve all the way to the caustic
// radius rho0, with reversed tangent.  Speed v sin(rho0 - rho)/sin(rho),
// curvature cot(rho0 - rho); requires rho(t) < rho0 everywhere.
CurveSamples check_curve(const FramedCurve& fc, const CurvatureBound& kappa0);

// One near-coincidence of band points with distinct curve parameters.
struct BandHit {
    int i1, j1;       // grid indices of the first point
    int i2, j2;       // grid indices of the second point
    double distance;
};

struct BandIntersections {
    enum class Class { simple, quasi_simple, neither };
    Class cls = Class::simple;
    std::vector<BandHit> hits;
};

// Spatial-hash scan for self-intersections of the band image.  tol <= 0
// selects one grid cell of slack (3 x the largest t-step of any row).
// quasi_simple: every hit lies within one grid row of a theta boundary.
BandIntersections band_self_intersections(const BandGrid& b, double tol = 0.0);

// Parameter interval over which the band crosses from one closed disk of a
// great circle to the other.  tau2 - tau1 <= 1/2; tau2 may exceed 1 when the
// interval wraps around the seam.
struct CrossingInterval {
    double tau1 = 0.0;
    double tau2 = 0.0;
    bool degenerate = false;
};

std::vector<CrossingInterval> crossing_intervals(
    const BandGrid& b, const Vec3& great_circle_normal, double tol = 1e-8);

// Polygonal spherical length of a sampled path from one theta boundary of
// the band to the other.  Endpoints must lie within tol of opposite boundary
// rows.
double min_crossing_length(const BandGrid& b, const std::vector<Vec3>& path,
                           double tol = 1e-6);

}  // namespace curvebound
