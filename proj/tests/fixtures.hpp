#pragma once

// Shared randomized fixtures for the test suite: exactly-closed perturbed
// circles, a curve with an exact antipodal caustic pair, and random plane
// loops of prescribed rotation number.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "curvebound/classify.hpp"
#include "curvebound/curve.hpp"
#include "curvebound/homotopy.hpp"

namespace cbtest {

using namespace curvebound;

constexpr double kPi = 3.14159265358979323846;

// Rotation vector (axis * angle) of frames.front()^T * frames.back().
inline Vec3 closure_log(const CurveSamples& c) {
    const FramedCurve fc = integrate_frames(c);
    const Mat3 R = fc.frames.front().transpose() * fc.frames.back();
    Quat q(R);
    if (q.w() < 0) q = Quat(-q.w(), -q.x(), -q.y(), -q.z());
    const double vn = q.vec().norm();
    if (vn < 1e-12) return 2.0 * q.vec();
    return (2.0 * std::atan2(vn, q.w()) / vn) * q.vec();
}

// Newton-closes the given open curve data using three curvature correction
// modes: a constant offset (radius) and one cosine/sine harmonic (center
// shift; harmonic k for a curve winding k times).  Returns false if the
// solve does not reach ~1e-12 closure.
inline bool close_curve(CurveSamples& c, int harmonic = 1) {
    const int n = c.size();
    const std::vector<double> v0 = c.v;
    const std::vector<double> k0 = c.kappa;
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    const auto apply = [&](const Eigen::Vector3d& q) {
        for (int i = 0; i < n; ++i) {
            const double t = (i + 0.5) / n;
            c.v[i] = v0[i];
            c.kappa[i] = k0[i] + q(0) +
                         q(1) * std::cos(2 * kPi * harmonic * t) +
                         q(2) * std::sin(2 * kPi * harmonic * t);
        }
    };
    for (int it = 0; it < 60; ++it) {
        apply(p);
        const Vec3 r = closure_log(c);
        if (r.norm() < 1e-12) return true;
        Eigen::Matrix3d J;
        const double h = 1e-7;
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d q = p;
            q(k) += h;
            apply(q);
            J.col(k) = (closure_log(c) - r) / h;
        }
        const Eigen::Vector3d step = J.fullPivLu().solve(r);
        if (!step.allFinite() || step.norm() > 10.0) return false;
        p -= step;
    }
    apply(p);
    return closure_log(c).norm() < 1e-12;
}

// A circle of radius rho traversed k times with smooth low-order noise,
// re-closed exactly (closure ~1e-12).  Retries with fresh noise if the
// Newton solve wanders off.
inline CurveSamples perturbed_circle(std::mt19937& rng, double rho, int k,
                                     double noise, int n = 256) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < 20; ++attempt) {
        CurveSamples c = make_circle(rho, k, 0.0, n);
        const double a = unit(rng), b = unit(rng);
        const double d = unit(rng), e = unit(rng), f = unit(rng);
        for (int i = 0; i < n; ++i) {
            const double t = (i + 0.5) / n;
            c.kappa[i] += noise * (a * std::cos(2 * kPi * t) +
                                   b * std::sin(2 * kPi * t) +
                                   d * std::cos(4 * kPi * t) +
                                   e * std::sin(4 * kPi * t));
            c.v[i] *= 1.0 + 0.5 * noise * (f * std::sin(2 * kPi * t));
        }
        const std::vector<double> before = c.kappa;
        if (close_curve(c, k)) {
            // Accept only the nearby closure branch: the Newton correction
            // must stay commensurate with the injected noise.
            double dev = 0.0;
            for (int i = 0; i < n; ++i) {
                dev = std::max(dev, std::abs(c.kappa[i] - before[i]));
            }
            if (dev < 2.0 * noise + 0.05) return c;
        }
    }
    throw std::runtime_error("perturbed_circle: closing Newton failed");
}

// A closed curve with an exact antipodal pair on its caustic band.
//
// The point data has the half-turn symmetry p(t + 1/2) = S p(t) for the
// rotation S by pi about the y-axis, so the discrete holonomy of one half,
// Pi = Phi(0)^T Phi(1/2), is close to a pi-rotation.  One scalar Newton
// solve (on a global speed scale) makes Pi an exact pi-rotation;
// its axis then determines a radius rho with Pi u = -u for
// u = (cos rho, 0, sin rho), which gives
//   C(0, rho) = Phi(0) u  and  C(1/2, rho) = Phi(1/2) u = -Phi(0) u
// exactly, and the doubled curve closes exactly (Pi^2 = I).
struct GraftFixture {
    CurveSamples curve;
    double rho = 0.0;   // radius of the antipodal pair (t = 0 and t = 1/2)
    Vec3 chi1, chi2;    // the pair itself, chi2 = -chi1
};

inline GraftFixture antipodal_graft_fixture(int n = 256) {
    const int N = n;
    std::vector<Vec3> pts(N);
    for (int i = 0; i < N; ++i) {
        const double t = static_cast<double>(i) / N;
        const Vec3 raw(std::cos(2 * kPi * t), 0.4 * std::cos(4 * kPi * t),
                       std::sin(2 * kPi * t) + 0.1 * std::sin(6 * kPi * t));
        pts[i] = raw.normalized();
    }
    CurveSamples c = curvature_from_points(pts);
    const int half = N / 2;
    // Enforce the discrete symmetry bit-for-bit.
    for (int i = 0; i < half; ++i) {
        c.v[i + half] = c.v[i];
        c.kappa[i + half] = c.kappa[i];
    }
    const std::vector<double> v0 = c.v;
    const Vec3 seed_axis = c.q0.transpose() * Vec3::UnitY();
    const auto half_lift = [&](double scale) {
        for (int i = 0; i < N; ++i) c.v[i] = v0[i] * (1.0 + scale);
        Quat q = Quat::Identity();
        for (int i = 0; i < half; ++i) {
            q = q * frame_step(c.v[i], c.v[i] * c.kappa[i], 1.0 / N).second;
        }
        if (q.vec().dot(seed_axis) < 0) {
            q = Quat(-q.w(), -q.x(), -q.y(), -q.z());
        }
        return q;
    };
    // Scalar Newton on the scalar part of the half-holonomy lift, over a
    // global speed scale (the constant-curvature direction is tangent to the
    // pi-rotation locus here, but the speed direction crosses it cleanly).
    double scale = 0.0;
    Quat q = half_lift(scale);
    for (int it = 0; it < 60 && std::abs(q.w()) > 1e-14; ++it) {
        const double h = 1e-8;
        const double dw = (half_lift(scale + h).w() - q.w()) / h;
        scale -= q.w() / dw;
        q = half_lift(scale);
    }
    if (std::abs(q.w()) > 1e-13) {
        throw std::runtime_error("graft fixture: pi-rotation solve failed");
    }
    const Vec3 axis = q.vec().normalized();
    // u = (cos rho, 0, sin rho) orthogonal to the rotation axis.
    double rho = std::atan2(-axis.x(), axis.z());
    if (rho <= 0) rho += kPi;
    GraftFixture fx;
    fx.curve = c;
    fx.rho = rho;
    const FramedCurve fc = integrate_frames(c);
    fx.chi1 = std::cos(rho) * fc.gamma(0) + std::sin(rho) * fc.normal(0);
    fx.chi2 = std::cos(rho) * fc.gamma(half) + std::sin(rho) * fc.normal(half);
    return fx;
}

// A smooth random plane loop with rotation number N: a circle traversed N
// times with small Fourier perturbations of the radius and center.
inline PlaneCurve random_plane_loop(std::mt19937& rng, int N, int m = 256) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double a = 0.15 * unit(rng), b = 0.15 * unit(rng);
    const double cx = 0.3 * unit(rng), cy = 0.3 * unit(rng);
    const double scale = 1.0 + 0.5 * unit(rng);
    PlaneCurve pc;
    pc.points.reserve(m);
    for (int i = 0; i < m; ++i) {
        const double t = 2 * kPi * static_cast<double>(i) / m;
        const double r =
            scale * (1.0 + a * std::cos(t) + b * std::sin(2 * t));
        pc.points.emplace_back(cx + r * std::cos(N * t),
                               cy + r * std::sin(N * t));
    }
    return pc;
}

}  // namespace cbtest
