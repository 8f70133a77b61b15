#pragma once

#include <limits>
#include <vector>

#include "curvebound/geom3.hpp"

namespace curvebound {

// One side of an open curvature interval; the value may be +/-infinity.
struct CurvatureBound {
    double value = 0.0;

    // arccot in [0, pi]: arccot(+inf) = 0, arccot(-inf) = pi.
    double rho() const {
        if (std::isinf(value)) return value > 0 ? 0.0 : std::acos(-1.0);
        return std::atan2(1.0, value);
    }
    static CurvatureBound plus_infinity() {
        return {std::numeric_limits<double>::infinity()};
    }
    static CurvatureBound minus_infinity() {
        return {-std::numeric_limits<double>::infinity()};
    }
};

// The space of closed curves framed by `boundary_frame` whose geodesic
// curvature stays strictly between kappa1 and kappa2.
struct SpaceSpec {
    CurvatureBound kappa1;
    CurvatureBound kappa2;
    Mat3 boundary_frame = Mat3::Identity();

    double rho1() const { return kappa1.rho(); }
    double rho2() const { return kappa2.rho(); }
    double width() const { return rho1() - rho2(); }
};

// Throws ValidationError unless kappa1 < kappa2 (width in (0, pi]) and the
// boundary frame is a rotation.
void validate_space(const SpaceSpec& s);

// A curve stored as piecewise-constant speed/curvature data on the uniform
// partition of [0,1] into n cells, together with the initial frame.
struct CurveSamples {
    std::vector<double> v;      // n positive speeds
    std::vector<double> kappa;  // n geodesic curvatures
    Mat3 q0 = Mat3::Identity();

    int size() const { return static_cast<int>(v.size()); }
};

// Throws ValidationError unless n >= 8, sizes match, all speeds positive and
// q0 is a rotation.
void validate_curve(const CurveSamples& c);

// Frames Phi(i/n) in SO(3) and their continuous lifts in S^3, i = 0..n.
struct FramedCurve {
    CurveSamples base;
    std::vector<Mat3> frames;
    std::vector<Quat> lifts;

    Vec3 gamma(int i) const { return frames[i].col(0); }
    Vec3 tangent(int i) const { return frames[i].col(1); }
    Vec3 normal(int i) const { return frames[i].col(2); }
    int cells() const { return base.size(); }
};

// Integrates the frame ODE with the exact per-cell exponential.  lifts[0] is
// the lift of q0 that is lexicographically non-negative in (w, x, y, z).
FramedCurve integrate_frames(const CurveSamples& c);

struct MembershipReport {
    bool member = false;
    double closure_error = 0.0;    // ||Phi(1) - Q||_F
    double curvature_margin = 0.0; // min over cells of distance to the bounds
};

// Closure within tol and strict curvature bounds (margin > 0).
MembershipReport check_membership(const CurveSamples& c, const SpaceSpec& s,
                                  double tol = 1e-6);

// Ingestion of a closed sequence of unit points: tangents by central
// differences, speed from consecutive gaps, curvature from the tangent
// derivative against the left normal.
CurveSamples curvature_from_points(const std::vector<Vec3>& points);

// The translation of the curve by theta: gamma_theta = cos(theta) gamma +
// sin(theta) n, with frame Phi R_theta, speed v sin(rho - theta)/sin(rho) and
// radius of curvature rho - theta.  Requires sin(rho[i] - theta) > 0 for
// every cell.
CurveSamples translate_curve(const CurveSamples& c, double theta);

// Integral of sqrt(1 + kappa^2) |gamma'| over [0,1].
double total_curvature(const CurveSamples& c);

enum class ReparamMode { arclength, curvature };

// Resamples onto n_out cells (default: the input size) of equal arc length
// (arclength mode) or equal curvature measure sqrt(1+kappa^2) v (curvature
// mode).  Total length and total curvature are preserved exactly; frames at
// shared cell boundaries are preserved exactly when cell boundaries align.
CurveSamples reparametrize(const CurveSamples& c, ReparamMode mode,
                           int n_out = 0);

}  // namespace curvebound
