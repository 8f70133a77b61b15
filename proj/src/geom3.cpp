#include "curvebound/geom3.hpp"

#include <cmath>
#include <numbers>

namespace curvebound {

namespace {

constexpr double kPi = std::numbers::pi;

// Lexicographically positive representative of {q, -q}.
Quat canonical_sign(Quat q) {
    const double c[4] = {q.w(), q.x(), q.y(), q.z()};
    for (double v : c) {
        if (v > 0) return q;
        if (v < 0) return Quat(-q.w(), -q.x(), -q.y(), -q.z());
    }
    return q;
}

}  // namespace

Mat3 skew(const Vec3& w) {
    Mat3 m;
    m << 0, -w.z(), w.y(),
         w.z(), 0, -w.x(),
        -w.y(), w.x(), 0;
    return m;
}

bool is_rotation(const Mat3& R, double tol) {
    return (R.transpose() * R - Mat3::Identity()).norm() <= tol &&
           std::abs(R.determinant() - 1.0) <= tol;
}

Mat3 rotation_from_quaternion(const Quat& z) {
    if (std::abs(z.norm() - 1.0) > 1e-9) {
        throw ValidationError("invalid-input", "quaternion is not unit");
    }
    return z.normalized().toRotationMatrix();
}

std::pair<Quat, Quat> quaternion_lifts(const Mat3& R) {
    if (!is_rotation(R, 1e-8)) {
        throw ValidationError("invalid-input", "matrix is not a rotation");
    }
    Quat q(R);
    q.normalize();
    q = canonical_sign(q);
    return {q, Quat(-q.w(), -q.x(), -q.y(), -q.z())};
}

std::pair<Mat3, Quat> frame_step(double v, double w, double dt) {
    if (!(dt > 0)) {
        throw ValidationError("invalid-input", "frame_step requires dt > 0");
    }
    const Vec3 omega(w, 0.0, v);
    const double speed = omega.norm();
    const double angle = speed * dt;
    if (angle < 1e-300) {
        return {Mat3::Identity(), Quat::Identity()};
    }
    const Vec3 axis = omega / speed;
    const Eigen::AngleAxisd aa(angle, axis);
    const Mat3 R = aa.toRotationMatrix();
    const double half = 0.5 * angle;
    const Vec3 qv = std::sin(half) * axis;
    const Quat q(std::cos(half), qv.x(), qv.y(), qv.z());
    return {R, q};
}

std::pair<Vec3, Vec3> plane_basis(const Vec3& pole) {
    int least = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(pole[i]) < std::abs(pole[least])) least = i;
    }
    Vec3 a = Vec3::Unit(least);
    Vec3 eu = (a - a.dot(pole) * pole).normalized();
    Vec3 ev = pole.cross(eu);
    return {eu, ev};
}

Vec2 stereographic(const Vec3& p, const Vec3& pole) {
    const double c = p.dot(pole);
    if (1.0 + c < 1e-9) {
        throw ValidationError("singular-projection",
                              "point is antipodal to the projection pole");
    }
    const Vec3 q = (p - c * pole) / (1.0 + c);
    auto [eu, ev] = plane_basis(pole);
    return Vec2(q.dot(eu), q.dot(ev));
}

Vec3 stereographic_inverse(const Vec2& uv, const Vec3& pole) {
    auto [eu, ev] = plane_basis(pole);
    const Vec3 w = uv.x() * eu + uv.y() * ev;
    const double r2 = uv.squaredNorm();
    return ((1.0 - r2) * pole + 2.0 * w) / (1.0 + r2);
}

Vec3 gnomic_project(const Vec3& x) {
    const double n = x.norm();
    if (n <= 1e-12) {
        throw ValidationError("invalid-input",
                              "cannot project a (near) zero vector");
    }
    return x / n;
}

SphericalCircle circle_through(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    const Vec3 cross = (p2 - p1).cross(p3 - p2);
    const double cn = cross.norm();
    if (cn < 1e-12) {
        throw ValidationError("degenerate-circle",
                              "points do not determine a circle");
    }
    const Vec3 center = cross / cn;
    const double d = std::clamp(p1.dot(center), -1.0, 1.0);
    if (std::abs(d) >= 1.0 - 1e-12) {
        throw ValidationError("degenerate-circle",
                              "points coincide with the circle center");
    }
    SphericalCircle circle;
    circle.center = center;
    circle.spherical_radius = std::acos(d);
    circle.orientation = +1;
    return circle;
}

Mat3 rotation_about_second_axis(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat3 R;
    R << c, 0, -s,
         0, 1, 0,
         s, 0, c;
    return R;
}

double spherical_distance(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

std::vector<Vec3> fibonacci_sphere(int n) {
    if (n <= 0) {
        throw ValidationError("invalid-input", "lattice size must be positive");
    }
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

}  // namespace curvebound
