#include "curvebound/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <unordered_set>

namespace curvebound {

namespace {

constexpr double kDegenerateEps = 1e-9;
constexpr double kVisibleEps = 1e-10;

struct DirectedEdgeHash {
    size_t operator()(const std::pair<int, int>& e) const {
        return std::hash<long long>()((static_cast<long long>(e.first) << 32) ^
                                      static_cast<unsigned>(e.second));
    }
};

// Closest point of the simplex spanned by `pts` to `target`, by exhaustive
// search over faces.  Returns the barycentric coordinates (over the subset of
// retained vertices) and the retained subset.
struct SimplexClosest {
    double distance = std::numeric_limits<double>::infinity();
    Vec3 point = Vec3::Zero();
    std::vector<int> subset;           // positions into `pts`
    std::vector<double> barycentric;   // matching subset
};

SimplexClosest closest_on_simplex(const std::vector<Vec3>& pts,
                                  const Vec3& target) {
    const int k = static_cast<int>(pts.size());
    SimplexClosest best;
    for (int mask = 1; mask < (1 << k); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < k; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        const int m = static_cast<int>(idx.size());
        Eigen::VectorXd lambda(m);
        if (m == 1) {
            lambda(0) = 1.0;
        } else {
            Eigen::MatrixXd A(3, m - 1);
            for (int i = 1; i < m; ++i)
                A.col(i - 1) = pts[idx[i]] - pts[idx[0]];
            const Eigen::MatrixXd G = A.transpose() * A;
            const Eigen::VectorXd b = A.transpose() * (target - pts[idx[0]]);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
            if (lu.rank() < m - 1) continue;  // degenerate face
            const Eigen::VectorXd mu = lu.solve(b);
            lambda.tail(m - 1) = mu;
            lambda(0) = 1.0 - mu.sum();
        }
        if ((lambda.array() < -1e-12).any()) continue;
        Vec3 pt = Vec3::Zero();
        for (int i = 0; i < m; ++i) pt += lambda(i) * pts[idx[i]];
        const double d = (pt - target).norm();
        if (d < best.distance - 1e-15 ||
            (d < best.distance + 1e-15 &&
             static_cast<int>(best.subset.size()) > m)) {
            best.distance = d;
            best.point = pt;
            best.subset = idx;
            best.barycentric.assign(lambda.data(), lambda.data() + m);
        }
    }
    return best;
}

ConvexHull3 degenerate_hull(int dimension, const std::vector<int>& verts) {
    ConvexHull3 hull;
    hull.dimension = dimension;
    hull.vertices = verts;
    return hull;
}

}  // namespace

ConvexHull3 convex_hull3(const PointCloud3& cloud) {
    if (cloud.empty()) {
        throw ValidationError("invalid-input", "empty point cloud");
    }
    const int n = static_cast<int>(cloud.size());

    // Pick an initial affinely independent seed, detecting the rank.
    int i0 = 0;
    int i1 = -1;
    double best = kDegenerateEps;
    for (int i = 0; i < n; ++i) {
        const double d = (cloud[i] - cloud[i0]).norm();
        if (d > best) { best = d; i1 = i; }
    }
    if (i1 < 0) return degenerate_hull(0, {i0});

    const Vec3 axis = (cloud[i1] - cloud[i0]).normalized();
    int i2 = -1;
    best = kDegenerateEps;
    for (int i = 0; i < n; ++i) {
        const Vec3 r = cloud[i] - cloud[i0];
        const double d = (r - r.dot(axis) * axis).norm();
        if (d > best) { best = d; i2 = i; }
    }
    if (i2 < 0) {
        // Collinear: the extremes along the axis.
        int lo = 0, hi = 0;
        for (int i = 0; i < n; ++i) {
            const double t = (cloud[i] - cloud[i0]).dot(axis);
            if (t < (cloud[lo] - cloud[i0]).dot(axis)) lo = i;
            if (t > (cloud[hi] - cloud[i0]).dot(axis)) hi = i;
        }
        return degenerate_hull(1, {lo, hi});
    }

    Vec3 nrm = (cloud[i1] - cloud[i0]).cross(cloud[i2] - cloud[i0]).normalized();
    int i3 = -1;
    best = kDegenerateEps;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs((cloud[i] - cloud[i0]).dot(nrm));
        if (d > best) { best = d; i3 = i; }
    }
    if (i3 < 0) {
        // Coplanar: 2D hull by Andrew's monotone chain in the plane.
        Vec3 eu = (cloud[i1] - cloud[i0]).normalized();
        Vec3 ev = nrm.cross(eu);
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        auto key = [&](int i) {
            const Vec3 r = cloud[i] - cloud[i0];
            return std::make_pair(r.dot(eu), r.dot(ev));
        };
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return key(a) < key(b); });
        order.erase(std::unique(order.begin(), order.end(),
                                [&](int a, int b) {
                                    return (cloud[a] - cloud[b]).norm() < 1e-12;
                                }),
                    order.end());
        auto cross2 = [&](int o, int a, int b) {
            auto [ox, oy] = key(o);
            auto [ax, ay] = key(a);
            auto [bx, by] = key(b);
            return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
        };
        std::vector<int> chain;
        for (int pass = 0; pass < 2; ++pass) {
            const size_t base = chain.size();
            for (int id : order) {
                while (chain.size() >= base + 2 &&
                       cross2(chain[chain.size() - 2], chain.back(), id) <=
                           1e-14) {
                    chain.pop_back();
                }
                chain.push_back(id);
            }
            chain.pop_back();
            std::reverse(order.begin(), order.end());
        }
        return degenerate_hull(2, chain);
    }

    // Full-dimensional incremental hull.
    struct Facet {
        int a, b, c;
        Vec3 normal;
        double offset;
        bool alive = true;
    };
    std::vector<Facet> facets;
    const Vec3 interior =
        (cloud[i0] + cloud[i1] + cloud[i2] + cloud[i3]) / 4.0;
    auto add_facet = [&](int a, int b, int c) {
        Vec3 fn = (cloud[b] - cloud[a]).cross(cloud[c] - cloud[a]);
        if (fn.dot(cloud[a] - interior) < 0) {
            std::swap(b, c);
            fn = -fn;
        }
        fn.normalize();
        facets.push_back({a, b, c, fn, fn.dot(cloud[a]), true});
    };
    add_facet(i0, i1, i2);
    add_facet(i0, i1, i3);
    add_facet(i0, i2, i3);
    add_facet(i1, i2, i3);

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
            if (!facets[f].alive) continue;
            if (facets[f].normal.dot(cloud[p]) - facets[f].offset >
                kVisibleEps) {
                visible.push_back(f);
            }
        }
        if (visible.empty()) continue;
        std::unordered_set<std::pair<int, int>, DirectedEdgeHash> edges;
        for (int f : visible) {
            const Facet& ft = facets[f];
            edges.insert({ft.a, ft.b});
            edges.insert({ft.b, ft.c});
            edges.insert({ft.c, ft.a});
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& e : edges) {
            if (!edges.count({e.second, e.first})) horizon.push_back(e);
        }
        for (int f : visible) facets[f].alive = false;
        for (const auto& e : horizon) add_facet(e.first, e.second, p);
    }

    ConvexHull3 hull;
    hull.dimension = 3;
    std::unordered_set<int> vset;
    for (const auto& f : facets) {
        if (!f.alive) continue;
        hull.facets.push_back({f.a, f.b, f.c, f.normal, f.offset});
        vset.insert(f.a);
        vset.insert(f.b);
        vset.insert(f.c);
    }
    hull.vertices.assign(vset.begin(), vset.end());
    std::sort(hull.vertices.begin(), hull.vertices.end());
    return hull;
}

HullDistance distance_to_hull(const PointCloud3& cloud, const Vec3& target) {
    if (cloud.empty()) {
        throw ValidationError("invalid-input", "empty point cloud");
    }
    std::vector<int> witness = {0};
    std::vector<Vec3> pts = {cloud[0]};
    HullDistance result;
    for (int iter = 0; iter < 500; ++iter) {
        SimplexClosest sc = closest_on_simplex(pts, target);
        // Retain only the active face of the simplex.
        std::vector<int> new_witness;
        std::vector<Vec3> new_pts;
        for (size_t i = 0; i < sc.subset.size(); ++i) {
            new_witness.push_back(witness[sc.subset[i]]);
            new_pts.push_back(pts[sc.subset[i]]);
        }
        witness.swap(new_witness);
        pts.swap(new_pts);
        result.distance = sc.distance;
        result.closest = sc.point;
        result.simplex.indices = witness;
        result.simplex.barycentric = sc.barycentric;
        const Vec3 v = sc.point - target;
        if (sc.distance < 1e-13) return result;
        // Support point in the direction -v.
        int s = 0;
        double smin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(cloud.size()); ++i) {
            const double d = cloud[i].dot(v);
            if (d < smin) { smin = d; s = i; }
        }
        // No further progress possible: sc.point is the closest hull point.
        if (sc.point.dot(v) - smin <= 1e-14 * std::max(1.0, sc.distance)) {
            return result;
        }
        if (std::find(witness.begin(), witness.end(), s) != witness.end()) {
            return result;
        }
        witness.push_back(s);
        pts.push_back(cloud[s]);
    }
    return result;
}

Simplex steinitz_simplex(const PointCloud3& cloud, const Vec3& p, double tol) {
    HullDistance hd = distance_to_hull(cloud, p);
    if (hd.distance > tol) {
        throw ValidationError("not-in-hull",
                              "point is not in the convex hull of the cloud");
    }
    // Drop negligible weights and renormalize.
    Simplex s;
    double total = 0.0;
    for (size_t i = 0; i < hd.simplex.indices.size(); ++i) {
        if (hd.simplex.barycentric[i] > 1e-12) {
            s.indices.push_back(hd.simplex.indices[i]);
            s.barycentric.push_back(hd.simplex.barycentric[i]);
            total += hd.simplex.barycentric[i];
        }
    }
    for (double& w : s.barycentric) w /= total;
    return s;
}

OriginLocation locate_origin(const PointCloud3& cloud, double tol) {
    if (cloud.empty()) {
        throw ValidationError("invalid-input", "empty point cloud");
    }
    OriginLocation loc;
    const ConvexHull3 hull = convex_hull3(cloud);
    if (hull.dimension == 3) {
        double min_offset = std::numeric_limits<double>::infinity();
        Vec3 min_normal = Vec3::UnitZ();
        for (const auto& f : hull.facets) {
            if (f.offset < min_offset) {
                min_offset = f.offset;
                min_normal = f.normal;
            }
        }
        if (min_offset > tol) {
            loc.tag = OriginLocation::Tag::interior;
            loc.margin = min_offset;
            loc.simplex = steinitz_simplex(cloud, Vec3::Zero());
            // A supporting direction is still reported for diagnostics.
            loc.witness_direction = -min_normal;
            return loc;
        }
        if (min_offset >= -tol) {
            loc.tag = OriginLocation::Tag::boundary;
            loc.margin = std::abs(min_offset);
            loc.witness_direction = -min_normal;
            return loc;
        }
    }
    // Degenerate hull, or origin outside a full hull.
    HullDistance hd = distance_to_hull(cloud, Vec3::Zero());
    if (hd.distance > tol) {
        loc.tag = OriginLocation::Tag::exterior;
        loc.margin = hd.distance;
        loc.witness_direction = hd.closest.normalized();
        return loc;
    }
    loc.tag = OriginLocation::Tag::boundary;
    loc.margin = hd.distance;
    // Direction orthogonal to the cloud's affine span through the origin.
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : cloud) mean += p;
    mean /= static_cast<double>(cloud.size());
    for (const Vec3& p : cloud) scatter += (p - mean) * (p - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(scatter);
    Vec3 h = es.eigenvectors().col(0);
    double worst = 0.0;
    for (const Vec3& p : cloud) worst = std::min(worst, p.dot(h));
    if (worst < -tol) h = -h;
    loc.witness_direction = h;
    return loc;
}

bool GeodesicConvexification::contains(const Vec3& q, double tol) const {
    if (whole_sphere) return true;
    PointCloud3 capped;
    capped.reserve(cloud.size() + 1);
    capped.push_back(Vec3::Zero());
    for (const Vec3& p : cloud) capped.push_back(cone_weight_cap * p);
    return distance_to_hull(capped, q.normalized()).distance <= tol;
}

GeodesicConvexification geodesic_convexification(const PointCloud3& cloud) {
    GeodesicConvexification gc;
    const OriginLocation loc = locate_origin(cloud);
    if (loc.tag != OriginLocation::Tag::exterior) {
        gc.whole_sphere = true;
        return gc;
    }
    gc.cloud = cloud;
    // Any unit direction in the projected hull has a conical representation
    // with total weight at most 1/margin; double it for safety.
    gc.cone_weight_cap = 2.0 / loc.margin;
    return gc;
}

Vec3 hemisphere_set_barycenter(const PointCloud3& cloud, bool closed,
                               int n_dirs, double open_margin) {
    if (cloud.empty()) {
        throw ValidationError("invalid-input", "empty point cloud");
    }
    Eigen::MatrixXd P(static_cast<int>(cloud.size()), 3);
    for (int i = 0; i < static_cast<int>(cloud.size()); ++i) {
        P.row(i) = cloud[i];
    }
    const std::vector<Vec3> dirs = fibonacci_sphere(n_dirs);
    const double threshold = closed ? 0.0 : open_margin;
    Vec3 sum = Vec3::Zero();
    long accepted = 0;
    const int block = 512;
    Eigen::MatrixXd D(3, block);
    for (int start = 0; start < n_dirs; start += block) {
        const int count = std::min(block, n_dirs - start);
        for (int j = 0; j < count; ++j) D.col(j) = dirs[start + j];
        const Eigen::VectorXd mins =
            (P * D.leftCols(count)).colwise().minCoeff();
        for (int j = 0; j < count; ++j) {
            if (mins(j) >= threshold) {
                sum += dirs[start + j];
                ++accepted;
            }
        }
    }
    if (accepted == 0) {
        throw ComputationError("no-hemisphere",
                               "no lattice hemisphere contains the cloud");
    }
    return gnomic_project(sum);
}

int default_grid_dirs() {
    if (const char* env = std::getenv("CURVEBOUND_GRID_DIRS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 20000;
}

}  // namespace curvebound
