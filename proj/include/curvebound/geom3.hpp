#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <utility>
#include <vector>

#include "curvebound/errors.hpp"

namespace curvebound {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// An oriented circle on the unit sphere.  `center` is the spherical center
// lying to the left of the traversal (orientation = +1 in that convention),
// `spherical_radius` is the intrinsic distance from the center, in (0, pi).
struct SphericalCircle {
    Vec3 center;
    double spherical_radius = 0.0;
    int orientation = +1;
};

Mat3 skew(const Vec3& w);

bool is_rotation(const Mat3& R, double tol = 1e-10);

// Restriction of v -> z v z~ to the imaginary quaternions (the double cover
// SO(3) <- S^3).  Throws ValidationError if z is not unit within 1e-9.
Mat3 rotation_from_quaternion(const Quat& z);

// The two unit-quaternion preimages of R under the covering map, ordered so
// the first is lexicographically positive in (w, x, y, z).
std::pair<Quat, Quat> quaternion_lifts(const Mat3& R);

// Exact exponential step of the frame ODE over an interval of length dt with
// constant speed v and curvature density w = v*kappa.  The generator has
// angular-velocity vector (w, 0, v); the quaternion is exp(dt*(w i + v k)/2)
// and projects onto the rotation.
std::pair<Mat3, Quat> frame_step(double v, double w, double dt);

// Deterministic right-handed orthonormal basis (e_u, e_v) of the plane
// orthogonal to `pole`, with e_u x e_v = pole.
std::pair<Vec3, Vec3> plane_basis(const Vec3& pole);

// Conformal stereographic projection onto the equatorial plane of `pole`,
// projecting from -pole.  pole -> (0,0); the equator -> the unit circle.
Vec2 stereographic(const Vec3& p, const Vec3& pole);
Vec3 stereographic_inverse(const Vec2& uv, const Vec3& pole);

// Central (gnomic) projection x -> x/|x|.
Vec3 gnomic_project(const Vec3& x);

// The circle through three points on the sphere, oriented p1 -> p2 -> p3 with
// the returned center on the left.
SphericalCircle circle_through(const Vec3& p1, const Vec3& p2, const Vec3& p3);

// The rotation R_theta mixing the first and third frame axes:
// [[cos t, 0, -sin t], [0, 1, 0], [sin t, 0, cos t]].
Mat3 rotation_about_second_axis(double theta);

// Spherical (great-circle) distance between unit vectors.
double spherical_distance(const Vec3& a, const Vec3& b);

// Deterministic low-discrepancy point set on the sphere (Fibonacci lattice).
std::vector<Vec3> fibonacci_sphere(int n);

}  // namespace curvebound
