#pragma once

#include <array>
#include <string>
#include <vector>

#include "curvebound/classify.hpp"
#include "curvebound/curve.hpp"

namespace curvebound {

// Circle of spherical radius rho traversed k times, with identity initial
// frame: v = 2 pi k sin(rho), kappa = cot(rho).  The phase argument is
// accepted for call-site symmetry but does not change the intrinsic data.
CurveSamples make_circle(double rho, int k, double phase = 0.0, int n = 256);

// Bending of the k-equator at stage s in [0,1]: 2k+2 circular arcs through
// the equatorial nodes, with midpoints raised alternately out of the
// equatorial plane by the angle pi*s.  s = 0 is the equator traversed k
// times, s = 1 the equator traversed k+2 times; max |kappa| over the family
// is tan(pi/(2k+2)).  n is rounded up to a multiple of 2k+2.
CurveSamples bend_k_equator(int k, double s, int n);

std::vector<CurveSamples> bend_k_equator_family(int k, int steps, int n);

// Replaces the window (t0 - 2 eps, t0 + 2 eps) by: the original content at
// double speed on both half-windows, with `loops` full circles of radius
// rho1 attached at the frame of t0 in between.  t0 and eps snap to the curve
// grid; the output has twice as many cells.
CurveSamples insert_loops_at(const CurveSamples& c, double t0, int loops,
                             double eps, double rho1);

// The frame-times-circle construction: t -> Phi(t) sigma(t) where sigma is
// the circle of radius rho1 traversed `loops` times.  The input is first
// resampled to constant curvature measure; the output is re-ingested from
// sampled points, so its curvature is the measured curvature of the
// construction (which approaches cot(rho1) for many loops).
CurveSamples add_loops_Fn(const CurveSamples& c, int loops, double rho1,
                          int n_out = 1024);

// An antipodal pair of points on the caustic band: C(t1, rho1) = -C(t2, rho2).
struct CausticPair {
    double t1 = 0.0, t2 = 0.0;
    double rho1 = 0.0, rho2 = 0.0;
    double defect = 0.0;  // | C(t1,rho1) + C(t2,rho2) |
};
CausticPair find_antipodal_caustic_pair(const FramedCurve& fc,
                                        const CurvatureBound& kappa0,
                                        double tol = 1e-6);

// Grafts circular arcs of curvature-parameter length s at the two parameters
// of an antipodal caustic pair.  The two inserted rotations cancel, so the
// final frame and lift are unchanged; tot grows by exactly 2s.
CurveSamples graft_antipodal(const CurveSamples& c, double t1, double t2,
                             double rho_a, double rho_b, double s,
                             double tol = 1e-6);

// Grafts four arcs with lengths sigma_i >= 0, sum s, chosen by a Newton
// solve so the four inserted rotations multiply to the identity; needs the
// origin interior to the hull of the four caustic points.
struct QuadrupleGraft {
    CurveSamples curve;
    std::array<double, 4> sigma{};
    double residual = 0.0;  // | product quaternion - 1 |
    int iterations = 0;
};
QuadrupleGraft graft_quadruple(const CurveSamples& c,
                               const std::array<double, 4>& t,
                               const std::array<double, 4>& rho, double s);

// --- Plane-curve normalization -------------------------------------------

struct PlaneCurve {
    std::vector<Vec2> points;  // closed polygon, first point not repeated
};

struct PlaneHomotopyPath {
    std::vector<double> s_grid;
    std::vector<PlaneCurve> curves;
};

// Deforms each member of a family of closed plane curves with curvature
// > kappa0 >= 0 and common rotation number N > 0 onto one fixed circle
// traversed N times: shrink-and-center, then tangent-angle interpolation
// with a closing correction and a mid-path shrink keeping curvature above
// kappa0.  All curves must share the rotation number.
std::vector<PlaneHomotopyPath> whitney_graustein_normalize(
    const std::vector<PlaneCurve>& family, double kappa0 = 0.0,
    int steps = 32);

// --- S^2-family and path validation --------------------------------------

// The sphere-parametrized family g: for p at colatitude alpha and longitude
// theta, the bending curve of the 1-equator at stage alpha/pi, phase-shifted
// by theta/(4 pi).  The poles give the circle traversed once / three times.
// Every output lies in the symmetric space with bounds (-kappa1, +kappa1)
// for kappa1 in (1, sqrt(3)].
CurveSamples exotic_sphere_family(double kappa1, const Vec3& p, int n = 1024);

struct HomotopyPath {
    SpaceSpec space;
    std::vector<double> s_grid;
    std::vector<CurveSamples> curves;
    std::vector<double> step_metric;  // filled by validate_homotopy
};

HomotopyPath make_path(const SpaceSpec& space,
                       std::vector<CurveSamples> curves);

struct HomotopyReport {
    bool pass = false;
    std::vector<MembershipReport> membership;
    std::vector<double> step_metric;  // sup frame distance per step
    std::vector<int> signs;           // lifted sign per curve
    std::string failure;              // empty when pass
};

// Membership of every curve, per-step sup frame distance below threshold,
// and constant lifted sign along the path.
HomotopyReport validate_homotopy(const HomotopyPath& path, const SpaceSpec& s,
                                 double threshold = 0.5);

}  // namespace curvebound
