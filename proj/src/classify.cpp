#include "curvebound/classify.hpp"

#include <algorithm>
#include <cmath>

namespace curvebound {

namespace {

constexpr double kPi = 3.14159265358979323846;

int parity_sign(int k) { return (k % 2 == 0) ? +1 : -1; }

// Caustic-band sample cloud with at most max_cols t-columns, plus the
// largest grid-cell diameter (used as the geometric resolution of the cloud).
struct BandCloud {
    PointCloud3 points;
    double cell_diam = 0.0;
};

BandCloud caustic_cloud(const FramedCurve& fc, double kappa0, int m,
                        int max_cols = 200) {
    const double rho0 = std::atan2(1.0, kappa0);
    const int n = fc.cells();
    const int stride = (n + max_cols - 1) / max_cols;
    BandCloud cloud;
    std::vector<int> cols;
    for (int i = 0; i < n; i += stride) cols.push_back(i);
    for (int i : cols) {
        if (!(fc.base.kappa[i] > kappa0)) {
            throw ValidationError("not-a-member",
                                  "curvature does not stay above kappa0");
        }
        const Vec3 g = fc.gamma(i);
        const Vec3 nn = fc.normal(i);
        for (int j = 0; j <= m; ++j) {
            const double th = rho0 * j / m;
            cloud.points.push_back(std::cos(th) * g + std::sin(th) * nn);
        }
    }
    double max_speed = 0.0;
    for (double v : fc.base.v) max_speed = std::max(max_speed, v);
    cloud.cell_diam = max_speed * stride / n + rho0 / m;
    return cloud;
}

void require_finite(const CurvatureBound& kappa0) {
    if (std::isinf(kappa0.value)) {
        throw ValidationError("undefined-for-space",
                              "operation needs a finite lower bound kappa0");
    }
}

int sheet_mode_nu(const FramedCurve& fc, const BandCloud& cloud) {
    const auto dist_to = [&](const Vec3& x, double sign) {
        double best = 2.0;
        for (const Vec3& p : cloud.points) {
            best = std::min(best, (x - sign * p).norm());
        }
        return best;
    };
    const double delta = 1.5 * cloud.cell_diam + 1e-9;
    // Scan the great circle through gamma(0), n(0) from the band edge toward
    // the antipodal band, taking the midpoint of the uncovered gap.
    const Vec3 g0 = fc.gamma(0), n0 = fc.normal(0);
    Vec3 b = Vec3::Zero();
    double theta_C = -1.0, theta_D = -1.0;
    const int scan = 1024;
    for (int k = 0; k <= scan; ++k) {
        const double th = kPi * k / scan;
        const Vec3 x = std::cos(th) * g0 + std::sin(th) * n0;
        if (dist_to(x, +1.0) <= delta) theta_C = th;
        if (theta_D < 0.0 && dist_to(x, -1.0) <= delta) theta_D = th;
    }
    bool have_b = false;
    if (theta_C >= 0.0 && theta_D > theta_C) {
        const double th = 0.5 * (theta_C + theta_D);
        b = std::cos(th) * g0 + std::sin(th) * n0;
        have_b = dist_to(b, +1.0) > 0.5 * delta &&
                 dist_to(b, -1.0) > 0.5 * delta;
    }
    if (!have_b) {
        double best = 0.0;
        for (const Vec3& cand : fibonacci_sphere(4000)) {
            const double q =
                std::min(dist_to(cand, +1.0), dist_to(cand, -1.0));
            if (q > best) {
                best = q;
                b = cand;
            }
        }
        if (best <= delta) {
            throw ComputationError(
                "unclassifiable-by-nu",
                "no direction separates the band from its antipode");
        }
    }
    // Sheets: half the number of strict circular sign changes of <t(t), b>.
    std::vector<int> signs;
    for (int i = 0; i < fc.cells(); ++i) {
        const double s = fc.tangent(i).dot(b);
        if (std::abs(s) > 1e-12) signs.push_back(s > 0 ? +1 : -1);
    }
    if (signs.empty()) {
        throw ComputationError("unclassifiable-by-nu",
                               "tangent height function vanishes identically");
    }
    int changes = 0;
    for (size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] != signs[(i + 1) % signs.size()]) ++changes;
    }
    return changes / 2;
}

int condensed_mode_nu(const FramedCurve& fc, const BandCloud& cloud) {
    const Vec3 h = hemisphere_set_barycenter(cloud.points, /*closed=*/true,
                                             default_grid_dirs());
    // Project the curve from -h; the plane is viewed from -h, which reverses
    // its orientation, hence the flip of the second coordinate.
    std::vector<Vec2> eta;
    eta.reserve(fc.cells());
    for (int i = 0; i < fc.cells(); ++i) {
        const Vec2 uv = stereographic(fc.gamma(i), h);
        eta.emplace_back(uv.x(), -uv.y());
    }
    return -plane_rotation_number(eta).value;
}

}  // namespace

int component_count(const SpaceSpec& s) {
    validate_space(s);
    const double x = kPi / s.width();
    const double r = std::round(x);
    const int fl = (std::abs(x - r) < 1e-12) ? static_cast<int>(r)
                                             : static_cast<int>(std::floor(x));
    return fl + 1;
}

ReducedSpace reduce_space(const CurveSamples& c, const SpaceSpec& s) {
    const MembershipReport report = check_membership(c, s);
    if (!report.member) {
        throw ValidationError("not-a-member",
                              "curve is not a member of the space");
    }
    ReducedSpace out;
    const double w = s.width();
    if (std::abs(w - kPi) < 1e-12) {
        out.curve = c;
        out.space = {CurvatureBound::minus_infinity(),
                     CurvatureBound::plus_infinity(), s.boundary_frame};
        out.full_space = true;
        return out;
    }
    if (std::isinf(s.kappa2.value)) {
        out.curve = c;
        out.space = s;
        return out;
    }
    const double rho2 = s.rho2();
    out.curve = translate_curve(c, rho2);
    out.space.kappa1 = {std::cos(w) / std::sin(w)};
    out.space.kappa2 = CurvatureBound::plus_infinity();
    out.space.boundary_frame =
        s.boundary_frame * rotation_about_second_axis(rho2);
    return out;
}

CondensedResult is_condensed(const CurveSamples& c,
                             const CurvatureBound& kappa0, int band_m) {
    require_finite(kappa0);
    const FramedCurve fc = integrate_frames(c);
    const BandCloud cloud = caustic_cloud(fc, kappa0.value, band_m);
    const OriginLocation loc = locate_origin(cloud.points);
    CondensedResult out;
    out.condensed = loc.tag != OriginLocation::Tag::interior;
    out.witness = loc.witness_direction;
    out.margin = loc.margin;
    out.boundary_condensed =
        out.condensed && (loc.tag == OriginLocation::Tag::boundary ||
                          loc.margin < 1e-6);
    return out;
}

DiffuseResult is_diffuse(const CurveSamples& c, const CurvatureBound& kappa0,
                         int band_m, double tol) {
    require_finite(kappa0);
    const FramedCurve fc = integrate_frames(c);
    const BandCloud cloud = caustic_cloud(fc, kappa0.value, band_m);
    if (tol <= 0.0) tol = cloud.cell_diam;
    DiffuseResult out;
    double best = 4.0;
    const int N = static_cast<int>(cloud.points.size());
    for (int a = 0; a < N; ++a) {
        for (int b = a; b < N; ++b) {
            const double d = (cloud.points[a] + cloud.points[b]).norm();
            if (d < best) {
                best = d;
                out.witness_a = cloud.points[a];
                out.witness_b = cloud.points[b];
            }
        }
    }
    out.min_antipodal_gap = best;
    out.diffuse = best <= tol;
    return out;
}

PlaneRotation plane_rotation_number(const std::vector<Vec2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) {
        throw ValidationError("invalid-input",
                              "need at least 3 plane points");
    }
    std::vector<Vec2> edges(n);
    for (int i = 0; i < n; ++i) {
        edges[i] = points[(i + 1) % n] - points[i];
        if (edges[i].norm() < 1e-15) {
            throw ComputationError("resolution",
                                   "repeated plane points in the polygon");
        }
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& e0 = edges[i];
        const Vec2& e1 = edges[(i + 1) % n];
        const double turn =
            std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
        if (std::abs(turn) >= kPi / 2) {
            throw ComputationError(
                "resolution", "tangent turns by more than pi/2 per step");
        }
        total += turn;
    }
    PlaneRotation out;
    const double winding = total / (2 * kPi);
    out.value = static_cast<int>(std::lround(winding));
    out.defect = std::abs(winding - out.value);
    return out;
}

int rotation_number(const CurveSamples& c, const CurvatureBound& kappa0,
                    NuMode mode) {
    require_finite(kappa0);
    const FramedCurve fc = integrate_frames(c);
    const BandCloud cloud = caustic_cloud(fc, kappa0.value, 16);
    const OriginLocation loc = locate_origin(cloud.points);
    const bool condensed =
        loc.tag == OriginLocation::Tag::exterior && loc.margin >= 1e-6;
    if (mode == NuMode::condensed ||
        (mode == NuMode::automatic && condensed)) {
        if (loc.tag == OriginLocation::Tag::interior) {
            throw ValidationError("not-condensed",
                                  "curve band is not in a closed hemisphere");
        }
        const int nu = condensed_mode_nu(fc, cloud);
        if (mode == NuMode::automatic) {
            // Cross-check against the sheet count when it also applies.
            try {
                const int nu_sheets = sheet_mode_nu(fc, cloud);
                if (nu_sheets != nu) {
                    throw ComputationError(
                        "anomaly", "rotation-number modes disagree");
                }
            } catch (const ComputationError& e) {
                if (e.code() == "anomaly") throw;
                // Sheet mode inapplicable (diffuse-like band): keep nu.
            }
        }
        return nu;
    }
    return sheet_mode_nu(fc, cloud);
}

int lifted_sign(const FramedCurve& fc, double tol) {
    if ((fc.frames.back() - fc.frames.front()).norm() > tol) {
        throw ValidationError("not-closed",
                              "frame does not return to its start");
    }
    const Quat& a = fc.lifts.front();
    const Quat& b = fc.lifts.back();
    const double d_plus = (b.coeffs() - a.coeffs()).norm();
    const double d_minus = (b.coeffs() + a.coeffs()).norm();
    if (d_plus > 0.5 && d_minus > 0.5) {
        throw ComputationError("resolution",
                               "lift endpoint matches neither preimage");
    }
    return d_plus < d_minus ? +1 : -1;
}

ClassificationResult classify_curve(const CurveSamples& c,
                                    const SpaceSpec& s) {
    validate_space(s);
    ClassificationResult res;
    res.space = s;
    res.n = component_count(s);
    const ReducedSpace red = reduce_space(c, s);
    const FramedCurve fc = integrate_frames(red.curve);
    res.lifted_sign = lifted_sign(fc, 1e-3);
    res.diagnostics["closure_error"] =
        (fc.frames.back() - fc.frames.front()).norm();

    const auto sign_branch = [&]() {
        res.component_index =
            (res.lifted_sign == parity_sign(res.n - 1)) ? res.n - 1 : res.n;
    };

    if (red.full_space) {
        res.diagnostics["full_space"] = 1.0;
        res.component_index = (res.lifted_sign == -1) ? 1 : 2;
        return res;
    }

    const CurvatureBound kappa0 = red.space.kappa1;
    const CondensedResult cond = is_condensed(red.curve, kappa0);
    const DiffuseResult diff = is_diffuse(red.curve, kappa0);
    res.condensed = cond.condensed;
    res.diffuse = diff.diffuse;
    res.diagnostics["condensed_margin"] = cond.margin;
    res.diagnostics["antipodal_gap"] = diff.min_antipodal_gap;
    res.diagnostics["witness_x"] = cond.witness.x();
    res.diagnostics["witness_y"] = cond.witness.y();
    res.diagnostics["witness_z"] = cond.witness.z();

    if (cond.condensed && !cond.boundary_condensed) {
        const int nu = rotation_number(red.curve, kappa0, NuMode::condensed);
        res.rotation_number = nu;
        if (nu >= 1 && nu <= res.n - 2) {
            if (res.lifted_sign != parity_sign(nu)) {
                throw ComputationError(
                    "anomaly",
                    "lift sign contradicts the rotation number parity");
            }
            res.component_index = nu;
            return res;
        }
        sign_branch();
        return res;
    }
    sign_branch();
    return res;
}

bool same_component(const CurveSamples& c1, const CurveSamples& c2,
                    const SpaceSpec& s) {
    return classify_curve(c1, s).component_index ==
           classify_curve(c2, s).component_index;
}

TotBoundReport total_curvature_bound_check(const CurveSamples& c,
                                           const CurvatureBound& kappa0) {
    require_finite(kappa0);
    const DiffuseResult diff = is_diffuse(c, kappa0);
    if (diff.diffuse) {
        throw ValidationError("not-applicable",
                              "the bound only applies to non-diffuse curves");
    }
    TotBoundReport report;
    report.nu = rotation_number(c, kappa0, NuMode::automatic);
    report.tot = total_curvature(c);
    const double rho0 = kappa0.rho();
    const double cos_half = std::cos(rho0 / 2);
    report.bound = 4 * kPi * report.nu / (cos_half * cos_half);
    report.slack = report.bound - report.tot;
    report.satisfied = report.tot <= report.bound + 1e-9;
    return report;
}

}  // namespace curvebound
