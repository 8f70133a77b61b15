#pragma once

#include <vector>

#include "curvebound/geom3.hpp"

namespace curvebound {

using PointCloud3 = std::vector<Vec3>;

// Convex hull in R^3 with an explicit dimension tag for degenerate input.
// Facets are only populated when dimension == 3; each facet satisfies
// <x, normal> <= offset for every hull point, with unit outward normal.
struct ConvexHull3 {
    int dimension = 0;                 // 0, 1, 2 or 3
    std::vector<int> vertices;         // indices into the input cloud
    struct Facet {
        int a, b, c;                   // vertex indices, counter-clockwise
        Vec3 normal;                   // unit outward normal
        double offset;                 // plane offset, <x,n> = offset
    };
    std::vector<Facet> facets;
};

ConvexHull3 convex_hull3(const PointCloud3& cloud);

// A simplex of at most 4 cloud points expressing a target point as a convex
// combination (barycentric coordinates sum to 1, all >= 0).
struct Simplex {
    std::vector<int> indices;
    std::vector<double> barycentric;
};

// Result of locating the origin relative to the hull of a cloud.
struct OriginLocation {
    enum class Tag { interior, boundary, exterior };
    Tag tag = Tag::exterior;
    // Hemisphere witness for boundary/exterior: <p, witness> >= -tol for all
    // cloud points (strictly positive margin in the exterior case).
    Vec3 witness_direction = Vec3::UnitZ();
    // Interior witness: a simplex containing the origin.
    Simplex simplex;
    // interior: depth inside the hull; exterior: distance to the hull;
    // boundary: |signed facet distance| below the boundary band.
    double margin = 0.0;
};

OriginLocation locate_origin(const PointCloud3& cloud, double tol = 1e-8);

// Distance from `target` to the convex hull of the cloud together with the
// witness simplex/barycentric of the closest point (GJK-style iteration).
struct HullDistance {
    double distance = 0.0;
    Vec3 closest = Vec3::Zero();
    Simplex simplex;
};
HullDistance distance_to_hull(const PointCloud3& cloud, const Vec3& target);

// A simplex of <= 4 affinely independent cloud points whose convex hull
// contains p; throws if p is not in the hull of the cloud.
Simplex steinitz_simplex(const PointCloud3& cloud, const Vec3& p,
                         double tol = 1e-9);

// Geodesic convexification of a spherical point set: either the whole sphere
// (origin in the hull) or the central projection of the hull, exposed through
// a membership test.
struct GeodesicConvexification {
    bool whole_sphere = false;
    PointCloud3 cloud;
    double cone_weight_cap = 0.0;  // internal: weight bound for membership
    bool contains(const Vec3& q, double tol = 1e-9) const;
};
GeodesicConvexification geodesic_convexification(const PointCloud3& cloud);

// Barycenter (on the sphere) of the set of closed (or open) hemispheres
// containing the cloud, approximated on a deterministic Fibonacci lattice of
// n_dirs directions.  Throws if no lattice direction qualifies.
Vec3 hemisphere_set_barycenter(const PointCloud3& cloud, bool closed,
                               int n_dirs = 20000, double open_margin = 1e-9);

// Default lattice size, overridable with the CURVEBOUND_GRID_DIRS env var.
int default_grid_dirs();

}  // namespace curvebound
