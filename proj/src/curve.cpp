#include "curvebound/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace curvebound {

void validate_space(const SpaceSpec& s) {
    if (!(s.kappa1.value < s.kappa2.value)) {
        throw ValidationError("invalid-space",
                              "curvature bounds must satisfy kappa1 < kappa2");
    }
    if (!is_rotation(s.boundary_frame, 1e-8)) {
        throw ValidationError("invalid-space",
                              "boundary frame is not a rotation");
    }
}

void validate_curve(const CurveSamples& c) {
    const int n = c.size();
    if (n < 8) {
        throw ValidationError("invalid-curve",
                              "a curve needs at least 8 cells");
    }
    if (static_cast<int>(c.kappa.size()) != n) {
        throw ValidationError("invalid-curve",
                              "speed and curvature sequences differ in size");
    }
    for (int i = 0; i < n; ++i) {
        if (!(c.v[i] > 0) || !std::isfinite(c.v[i])) {
            throw ValidationError("invalid-curve",
                                  "speeds must be positive and finite");
        }
        if (!std::isfinite(c.kappa[i])) {
            throw ValidationError("invalid-curve",
                                  "curvatures must be finite");
        }
    }
    if (!is_rotation(c.q0, 1e-8)) {
        throw ValidationError("invalid-curve",
                              "initial frame is not a rotation");
    }
}

FramedCurve integrate_frames(const CurveSamples& c) {
    validate_curve(c);
    const int n = c.size();
    const double dt = 1.0 / n;
    FramedCurve fc;
    fc.base = c;
    fc.frames.reserve(n + 1);
    fc.lifts.reserve(n + 1);
    fc.frames.push_back(c.q0);
    fc.lifts.push_back(quaternion_lifts(c.q0).first);
    for (int i = 0; i < n; ++i) {
        const auto [R, q] = frame_step(c.v[i], c.v[i] * c.kappa[i], dt);
        fc.frames.push_back(fc.frames.back() * R);
        fc.lifts.push_back(fc.lifts.back() * q);
    }
    return fc;
}

MembershipReport check_membership(const CurveSamples& c, const SpaceSpec& s,
                                  double tol) {
    validate_space(s);
    const FramedCurve fc = integrate_frames(c);
    MembershipReport report;
    report.closure_error = (fc.frames.back() - s.boundary_frame).norm();
    double margin = std::numeric_limits<double>::infinity();
    for (double k : c.kappa) {
        margin = std::min(margin, k - s.kappa1.value);
        margin = std::min(margin, s.kappa2.value - k);
    }
    report.curvature_margin = margin;
    report.member = report.closure_error <= tol && margin > 0;
    return report;
}

CurveSamples curvature_from_points(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 16) {
        throw ValidationError("invalid-input",
                              "need at least 16 points for ingestion");
    }
    for (int i = 0; i < n; ++i) {
        const double gap =
            spherical_distance(points[i], points[(i + 1) % n]);
        if (!(gap > 1e-6) || !(gap < 0.5)) {
            throw ValidationError(
                "invalid-input",
                "consecutive point gaps must lie in (1e-6, 0.5)");
        }
    }
    // Unit tangents by central differences projected to the tangent plane.
    std::vector<Vec3> tangents(n);
    for (int i = 0; i < n; ++i) {
        const Vec3& p = points[i];
        const Vec3 diff = points[(i + 1) % n] - points[(i + n - 1) % n];
        tangents[i] = (diff - diff.dot(p) * p).normalized();
    }
    CurveSamples c;
    c.v.resize(n);
    c.kappa.resize(n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        c.v[i] = n * spherical_distance(points[i], points[j]);
        const Vec3 gamma_mid = (points[i] + points[j]).normalized();
        const Vec3 t_mid = (tangents[i] + tangents[j]).normalized();
        const Vec3 n_mid = gamma_mid.cross(t_mid);
        const Vec3 t_prime = (tangents[j] - tangents[i]) * n;
        c.kappa[i] = t_prime.dot(n_mid) / c.v[i];
    }
    Mat3 q0;
    q0.col(0) = points[0];
    q0.col(1) = tangents[0];
    q0.col(2) = points[0].cross(tangents[0]);
    Eigen::JacobiSVD<Mat3> svd(q0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    c.q0 = svd.matrixU() * svd.matrixV().transpose();
    return c;
}

CurveSamples translate_curve(const CurveSamples& c, double theta) {
    validate_curve(c);
    CurveSamples out;
    const int n = c.size();
    out.v.resize(n);
    out.kappa.resize(n);
    for (int i = 0; i < n; ++i) {
        const double rho = std::atan2(1.0, c.kappa[i]);
        const double s = std::sin(rho - theta);
        if (!(s > 1e-12)) {
            throw ValidationError(
                "degenerate-translation",
                "translation leaves the admissible radius range");
        }
        out.v[i] = c.v[i] * s / std::sin(rho);
        out.kappa[i] = std::cos(rho - theta) / s;
    }
    out.q0 = c.q0 * rotation_about_second_axis(theta);
    return out;
}

double total_curvature(const CurveSamples& c) {
    validate_curve(c);
    double tot = 0.0;
    const int n = c.size();
    for (int i = 0; i < n; ++i) {
        tot += std::sqrt(1.0 + c.kappa[i] * c.kappa[i]) * c.v[i] / n;
    }
    return tot;
}

CurveSamples reparametrize(const CurveSamples& c, ReparamMode mode,
                           int n_out) {
    validate_curve(c);
    const int n = c.size();
    if (n_out <= 0) n_out = n;
    if (n_out < 8) {
        throw ValidationError("invalid-input", "need at least 8 output cells");
    }
    // Per-cell reparametrization measure.
    std::vector<double> density(n);
    for (int i = 0; i < n; ++i) {
        const double K = std::sqrt(1.0 + c.kappa[i] * c.kappa[i]);
        density[i] = (mode == ReparamMode::arclength ? c.v[i] : K * c.v[i]);
    }
    std::vector<double> cum(n + 1, 0.0);
    for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + density[i] / n;
    const double total = cum[n];

    CurveSamples out;
    out.q0 = c.q0;
    out.v.resize(n_out);
    out.kappa.resize(n_out);
    int cell = 0;
    for (int j = 0; j < n_out; ++j) {
        const double lo = total * j / n_out;
        const double hi = total * (j + 1) / n_out;
        // Accumulate exact arc length, total curvature and signed curvature
        // content of the measure interval [lo, hi).
        double length = 0.0, tot = 0.0, signed_k = 0.0;
        while (cell < n && cum[cell + 1] <= lo + 1e-300) ++cell;
        for (int i = cell; i < n && cum[i] < hi; ++i) {
            const double m =
                std::min(hi, cum[i + 1]) - std::max(lo, cum[i]);
            if (m <= 0) continue;
            const double du = m / density[i];  // input-parameter extent
            const double K = std::sqrt(1.0 + c.kappa[i] * c.kappa[i]);
            length += c.v[i] * du;
            tot += K * c.v[i] * du;
            signed_k += c.kappa[i] * c.v[i] * du;
        }
        out.v[j] = length * n_out;
        const double K_mean = tot / length;
        const double mag =
            std::sqrt(std::max(0.0, K_mean * K_mean - 1.0));
        out.kappa[j] = (signed_k >= 0 ? mag : -mag);
    }
    return out;
}

}  // namespace curvebound
