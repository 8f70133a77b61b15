#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvebound/bands.hpp"
#include "curvebound/convexity.hpp"
#include "curvebound/curve.hpp"

namespace curvebound {

// n = floor(pi / (rho1 - rho2)) + 1, with exact-integer snapping at 1e-12.
int component_count(const SpaceSpec& s);

// The curve translated by rho2 into the space with kappa2 = +infinity and
// lower bound kappa0 = cot(rho1 - rho2).  When the width is already pi the
// curve is untouched and full_space is set (kappa0 = -infinity).
struct ReducedSpace {
    CurveSamples curve;
    SpaceSpec space;
    bool full_space = false;
};
ReducedSpace reduce_space(const CurveSamples& c, const SpaceSpec& s);

// Condensed: the caustic band fits in a closed hemisphere (the origin is not
// interior to the hull of the band samples).
struct CondensedResult {
    bool condensed = false;
    bool boundary_condensed = false;  // witness margin below 1e-6
    Vec3 witness = Vec3::UnitZ();     // hemisphere direction
    double margin = 0.0;
};
CondensedResult is_condensed(const CurveSamples& c,
                             const CurvatureBound& kappa0, int band_m = 16);

// Diffuse: the caustic band samples contain a near-antipodal pair.
struct DiffuseResult {
    bool diffuse = false;
    double min_antipodal_gap = 0.0;  // min over pairs of |p + q|
    Vec3 witness_a = Vec3::UnitZ();
    Vec3 witness_b = Vec3::UnitZ();
};
DiffuseResult is_diffuse(const CurveSamples& c, const CurvatureBound& kappa0,
                         int band_m = 16, double tol = 0.0);

// Degree of the unit tangent of a closed plane polygon; defect is the
// distance of the accumulated angle / 2 pi from the returned integer.
struct PlaneRotation {
    int value = 0;
    double defect = 0.0;
};
PlaneRotation plane_rotation_number(const std::vector<Vec2>& points);

enum class NuMode { automatic, condensed, nondiffuse };

// Rotation number of a curve in the space below kappa0: by stereographic
// projection from the anti-barycenter of the containing hemispheres
// (condensed mode) or by counting sheets against a direction separated from
// the band and its antipode (nondiffuse mode).
int rotation_number(const CurveSamples& c, const CurvatureBound& kappa0,
                    NuMode mode = NuMode::automatic);

// +1 if the lift returns to itself, -1 if to its antipode.
int lifted_sign(const FramedCurve& fc, double tol = 1e-6);

struct ClassificationResult {
    SpaceSpec space;
    bool condensed = false;
    bool diffuse = false;
    std::optional<int> rotation_number;
    int lifted_sign = +1;
    int component_index = 1;
    int n = 2;
    std::map<std::string, double> diagnostics;
};

ClassificationResult classify_curve(const CurveSamples& c, const SpaceSpec& s);

bool same_component(const CurveSamples& c1, const CurveSamples& c2,
                    const SpaceSpec& s);

// tot(gamma) <= 4 pi nu / cos^2(rho0 / 2) for non-diffuse curves.
struct TotBoundReport {
    double tot = 0.0;
    int nu = 0;
    double bound = 0.0;
    double slack = 0.0;
    bool satisfied = false;
};
TotBoundReport total_curvature_bound_check(const CurveSamples& c,
                                           const CurvatureBound& kappa0);

}  // namespace curvebound
