#include "curvebound/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace curvebound {

namespace {

constexpr double kPi = 3.14159265358979323846;

Quat arc_quaternion(const Vec3& chi, double sigma) {
    const Vec3 axis = chi.normalized();
    const Vec3 v = std::sin(sigma / 2) * axis;
    return Quat(std::cos(sigma / 2), v.x(), v.y(), v.z());
}

struct ArcBlock {
    int node;      // insertion before the cell with this index (0..n)
    double rho;    // spherical radius of the inserted arc
    double sigma;  // curvature-parameter length (rotation angle)
};

// Splices constant-curvature arc blocks into the uniform grid, rescaling all
// speeds so every cell again has width 1/n_out.
CurveSamples insert_arc_blocks(const CurveSamples& c,
                               std::vector<ArcBlock> blocks) {
    const int n = c.size();
    std::sort(blocks.begin(), blocks.end(),
              [](const ArcBlock& a, const ArcBlock& b) {
                  return a.node < b.node;
              });
    std::vector<int> cells_of(blocks.size());
    int n_out = n;
    for (size_t b = 0; b < blocks.size(); ++b) {
        cells_of[b] =
            std::max(4, static_cast<int>(
                            std::ceil(blocks[b].sigma * n / (2 * kPi))));
        n_out += cells_of[b];
    }
    CurveSamples out;
    out.q0 = c.q0;
    out.v.reserve(n_out);
    out.kappa.reserve(n_out);
    size_t b = 0;
    const double rescale = static_cast<double>(n_out) / n;
    for (int i = 0; i <= n; ++i) {
        while (b < blocks.size() && blocks[b].node == i) {
            const int m = cells_of[b];
            const double sin_rho = std::sin(blocks[b].rho);
            const double v = blocks[b].sigma * sin_rho / m * n_out;
            const double kappa = std::cos(blocks[b].rho) / sin_rho;
            for (int j = 0; j < m; ++j) {
                out.v.push_back(v);
                out.kappa.push_back(kappa);
            }
            ++b;
        }
        if (i < n) {
            out.v.push_back(c.v[i] * rescale);
            out.kappa.push_back(c.kappa[i]);
        }
    }
    return out;
}

Vec3 caustic_point(const FramedCurve& fc, int node, double rho) {
    return std::cos(rho) * fc.gamma(node) + std::sin(rho) * fc.normal(node);
}

}  // namespace

CurveSamples make_circle(double rho, int k, double phase, int n) {
    (void)phase;  // the intrinsic data of a circle is phase-independent
    if (!(rho > 0.0) || !(rho < kPi)) {
        throw ValidationError("invalid-input",
                              "circle radius must lie in (0, pi)");
    }
    if (k < 1 || n < 8) {
        throw ValidationError("invalid-input",
                              "need k >= 1 and n >= 8 for a circle");
    }
    CurveSamples c;
    c.v.assign(n, 2 * kPi * k * std::sin(rho));
    c.kappa.assign(n, std::cos(rho) / std::sin(rho));
    return c;
}

CurveSamples bend_k_equator(int k, double s, int n) {
    if (k < 1) {
        throw ValidationError("invalid-input", "need k >= 1");
    }
    if (!(s >= 0.0) || !(s <= 1.0)) {
        throw ValidationError("invalid-input", "stage s must lie in [0,1]");
    }
    const int arcs = 2 * k + 2;
    const int per_arc = std::max(4, (n + arcs - 1) / arcs);
    const double alpha = s * kPi;
    const double delta = kPi * k / arcs;  // half the node separation
    const double beta = alpha - std::asin(std::cos(delta) * std::sin(alpha));
    const Vec3 pole = Vec3::UnitZ();
    auto equator = [&](double phi) {
        return Vec3(std::cos(phi), std::sin(phi), 0.0);
    };
    CurveSamples c;
    c.v.reserve(arcs * per_arc);
    c.kappa.reserve(arcs * per_arc);
    for (int i = 0; i < arcs; ++i) {
        const Vec3 P0 = equator(2 * kPi * k * i / arcs);
        const Vec3 P1 = equator(2 * kPi * k * (i + 1) / arcs);
        const Vec3 Q = equator(2 * kPi * k * (i + 0.5) / arcs);
        const double beta_i = (i % 2 == 0) ? beta : -beta;
        const Vec3 Qr = std::cos(beta_i) * Q + std::sin(beta_i) * pole;
        const SphericalCircle circle = circle_through(P0, Qr, P1);
        const double r = circle.spherical_radius;
        const double kappa = std::cos(r) / std::sin(r);
        // Arc angle at the center, split at the raised midpoint.
        auto in_plane = [&](const Vec3& p) {
            return (p - std::cos(r) * circle.center).normalized();
        };
        const Vec3 u0 = in_plane(P0), um = in_plane(Qr), u1 = in_plane(P1);
        const double psi =
            std::acos(std::clamp(u0.dot(um), -1.0, 1.0)) +
            std::acos(std::clamp(um.dot(u1), -1.0, 1.0));
        const double length = psi * std::sin(r);
        for (int j = 0; j < per_arc; ++j) {
            c.v.push_back(length * arcs);
            c.kappa.push_back(kappa);
        }
    }
    return c;
}

std::vector<CurveSamples> bend_k_equator_family(int k, int steps, int n) {
    if (steps < 2) {
        throw ValidationError("invalid-input", "need at least 2 steps");
    }
    std::vector<CurveSamples> family;
    family.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        family.push_back(bend_k_equator(k, static_cast<double>(i) / steps, n));
    }
    return family;
}

CurveSamples insert_loops_at(const CurveSamples& c, double t0, int loops,
                             double eps, double rho1) {
    validate_curve(c);
    if (!(rho1 > 0.0) || !(rho1 < kPi)) {
        throw ValidationError("invalid-input",
                              "loop radius must lie in (0, pi)");
    }
    const int n = c.size();
    const int i0 = static_cast<int>(std::lround(t0 * n));
    const int me = std::max(1, static_cast<int>(std::lround(eps * n)));
    if (i0 - 2 * me < 0 || i0 + 2 * me > n) {
        throw ValidationError("window-overflow",
                              "the insertion window leaves [0,1]");
    }
    CurveSamples out;
    out.q0 = c.q0;
    out.v.reserve(2 * n);
    out.kappa.reserve(2 * n);
    if (loops == 0) {
        // Degenerate window: the original curve on the doubled grid.
        for (int i = 0; i < n; ++i) {
            out.v.insert(out.v.end(), 2, c.v[i]);
            out.kappa.insert(out.kappa.end(), 2, c.kappa[i]);
        }
        return out;
    }
    // Outside the window, one input cell becomes two output cells at the
    // original speed.
    for (int i = 0; i < i0 - 2 * me; ++i) {
        out.v.insert(out.v.end(), 2, c.v[i]);
        out.kappa.insert(out.kappa.end(), 2, c.kappa[i]);
    }
    // Catch-up half-window: one output cell per input cell, double speed.
    for (int i = i0 - 2 * me; i < i0; ++i) {
        out.v.push_back(2 * c.v[i]);
        out.kappa.push_back(c.kappa[i]);
    }
    // The loops: `loops` full circles of radius rho1 spread over 4*me output
    // cells of total parameter width 2*eps.
    const double loop_speed = loops * 2 * kPi * std::sin(rho1) * n / (2 * me);
    const double loop_kappa = std::cos(rho1) / std::sin(rho1);
    out.v.insert(out.v.end(), 4 * me, loop_speed);
    out.kappa.insert(out.kappa.end(), 4 * me, loop_kappa);
    for (int i = i0; i < i0 + 2 * me; ++i) {
        out.v.push_back(2 * c.v[i]);
        out.kappa.push_back(c.kappa[i]);
    }
    for (int i = i0 + 2 * me; i < n; ++i) {
        out.v.insert(out.v.end(), 2, c.v[i]);
        out.kappa.insert(out.kappa.end(), 2, c.kappa[i]);
    }
    return out;
}

CurveSamples add_loops_Fn(const CurveSamples& c, int loops, double rho1,
                          int n_out) {
    if (!(rho1 > 0.0) || !(rho1 < kPi)) {
        throw ValidationError("invalid-input",
                              "loop radius must lie in (0, pi)");
    }
    const CurveSamples base =
        reparametrize(c, ReparamMode::curvature, n_out);
    const FramedCurve fc = integrate_frames(base);
    // The circle traversed `loops` times with identity initial frame: the
    // rotation of e1 about (cos rho1, 0, sin rho1).
    const Vec3 axis(std::cos(rho1), 0.0, std::sin(rho1));
    std::vector<Vec3> points;
    points.reserve(n_out);
    for (int j = 0; j < n_out; ++j) {
        const double phi = 2 * kPi * loops * j / n_out;
        const Vec3 sigma =
            Eigen::AngleAxisd(phi, axis) * Vec3::UnitX();
        points.push_back(fc.frames[j] * sigma);
    }
    return curvature_from_points(points);
}

CausticPair find_antipodal_caustic_pair(const FramedCurve& fc,
                                        const CurvatureBound& kappa0,
                                        double tol) {
    const double rho0 = kappa0.rho();
    if (!(rho0 > 0.0) || !(rho0 < kPi) || std::isinf(kappa0.value)) {
        throw ValidationError("invalid-space",
                              "caustic radius must lie in (0, pi)");
    }
    const int n = fc.cells();
    const int stride = std::max(1, n / 128);
    const int n_rho = 32;
    struct Node {
        int i;
        double rho;
        Vec3 p;
    };
    std::vector<Node> grid;
    for (int i = 0; i < n; i += stride) {
        for (int j = 1; j <= n_rho; ++j) {
            const double rho = rho0 * j / (n_rho + 1);
            grid.push_back({i, rho, caustic_point(fc, i, rho)});
        }
    }
    CausticPair best;
    best.defect = 4.0;
    int bi1 = 0, bi2 = 0;
    for (size_t a = 0; a < grid.size(); ++a) {
        for (size_t b = a + 1; b < grid.size(); ++b) {
            if (grid[a].i == grid[b].i) continue;
            const double d = (grid[a].p + grid[b].p).norm();
            if (d < best.defect) {
                best = {0, 0, grid[a].rho, grid[b].rho, d};
                bi1 = grid[a].i;
                bi2 = grid[b].i;
            }
        }
    }
    // Refinement: nearby node pairs with a 2D Newton solve over the radii.
    const auto refine_rho = [&](int i1, int i2, double ra, double rb,
                                double& out_ra, double& out_rb) {
        for (int it = 0; it < 25; ++it) {
            const Vec3 A = caustic_point(fc, i1, ra);
            const Vec3 B = caustic_point(fc, i2, rb);
            const Vec3 dA =
                -std::sin(ra) * fc.gamma(i1) + std::cos(ra) * fc.normal(i1);
            const Vec3 dB =
                -std::sin(rb) * fc.gamma(i2) + std::cos(rb) * fc.normal(i2);
            const Vec3 r = A + B;
            Eigen::Vector2d g(r.dot(dA), r.dot(dB));
            Eigen::Matrix2d H;
            H(0, 0) = dA.dot(dA) - r.dot(A);
            H(1, 1) = dB.dot(dB) - r.dot(B);
            H(0, 1) = H(1, 0) = dA.dot(dB);
            if (std::abs(H.determinant()) < 1e-14) break;
            const Eigen::Vector2d step = H.fullPivLu().solve(g);
            ra = std::clamp(ra - step(0), 1e-6, rho0 - 1e-6);
            rb = std::clamp(rb - step(1), 1e-6, rho0 - 1e-6);
            if (step.norm() < 1e-14) break;
        }
        out_ra = ra;
        out_rb = rb;
    };
    CausticPair refined = best;
    int ri1 = bi1, ri2 = bi2;
    for (int i1 = bi1 - stride; i1 <= bi1 + stride; ++i1) {
        for (int i2 = bi2 - stride; i2 <= bi2 + stride; ++i2) {
            const int a = ((i1 % n) + n) % n;
            const int b = ((i2 % n) + n) % n;
            if (a == b) continue;
            double ra, rb;
            refine_rho(a, b, best.rho1, best.rho2, ra, rb);
            const double d =
                (caustic_point(fc, a, ra) + caustic_point(fc, b, rb)).norm();
            if (d < refined.defect) {
                refined = {0, 0, ra, rb, d};
                ri1 = a;
                ri2 = b;
            }
        }
    }
    refined.t1 = static_cast<double>(ri1) / n;
    refined.t2 = static_cast<double>(ri2) / n;
    if (refined.defect > tol) {
        throw ComputationError("no-antipodal-pair",
                               "no antipodal caustic pair within tolerance");
    }
    return refined;
}

CurveSamples graft_antipodal(const CurveSamples& c, double t1, double t2,
                             double rho_a, double rho_b, double s,
                             double tol) {
    validate_curve(c);
    if (!(s >= 0.0)) {
        throw ValidationError("invalid-input", "graft length must be >= 0");
    }
    const int n = c.size();
    int i1 = static_cast<int>(std::lround(t1 * n)) % n;
    int i2 = static_cast<int>(std::lround(t2 * n)) % n;
    double ra = rho_a, rb = rho_b;
    if (i1 > i2) {
        std::swap(i1, i2);
        std::swap(ra, rb);
    }
    if (i1 == i2) {
        throw ValidationError("invalid-input",
                              "graft parameters must be distinct");
    }
    const FramedCurve fc = integrate_frames(c);
    const Vec3 chi1 = caustic_point(fc, i1, ra);
    const Vec3 chi2 = caustic_point(fc, i2, rb);
    if ((chi1 + chi2).norm() > tol) {
        throw ValidationError("not-antipodal",
                              "caustic points are not antipodal");
    }
    if (s == 0.0) return c;
    return insert_arc_blocks(c, {{i1, ra, s}, {i2, rb, s}});
}

QuadrupleGraft graft_quadruple(const CurveSamples& c,
                               const std::array<double, 4>& t,
                               const std::array<double, 4>& rho, double s) {
    validate_curve(c);
    if (!(s >= 0.0)) {
        throw ValidationError("invalid-input", "graft length must be >= 0");
    }
    const int n = c.size();
    const FramedCurve fc = integrate_frames(c);
    std::array<int, 4> node;
    std::array<Vec3, 4> chi;
    for (int i = 0; i < 4; ++i) {
        node[i] = static_cast<int>(std::lround(t[i] * n)) % n;
        chi[i] = caustic_point(fc, node[i], rho[i]);
    }
    // The origin must be interior to the hull of the four caustic points;
    // its barycentric weights seed the Newton solve.
    Eigen::Matrix4d A;
    for (int i = 0; i < 4; ++i) {
        A.block<3, 1>(0, i) = chi[i];
        A(3, i) = 1.0;
    }
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(A);
    if (lu.rank() < 4) {
        throw ValidationError("degenerate-configuration",
                              "caustic points are not in general position");
    }
    const Eigen::Vector4d lambda =
        lu.solve(Eigen::Vector4d(0, 0, 0, 1));
    if ((lambda.array() < 1e-9).any()) {
        throw ValidationError("degenerate-configuration",
                              "origin is not interior to the caustic hull");
    }

    QuadrupleGraft result;
    if (s == 0.0) {
        result.curve = c;
        return result;
    }
    // The inserted rotations compose in the order the arcs occur along the
    // curve, regardless of the order the caller listed them in.
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return node[a] < node[b]; });
    const auto product = [&](const Eigen::Vector3d& free) {
        const double s4 = s - free.sum();
        Quat q = arc_quaternion(chi[order[0]], free(0));
        q = q * arc_quaternion(chi[order[1]], free(1));
        q = q * arc_quaternion(chi[order[2]], free(2));
        q = q * arc_quaternion(chi[order[3]], s4);
        return q;
    };
    const auto metric = [](const Quat& q) {
        return std::sqrt((q.w() - 1.0) * (q.w() - 1.0) +
                         q.vec().squaredNorm());
    };
    Eigen::Vector3d sigma(s * lambda(order[0]), s * lambda(order[1]),
                          s * lambda(order[2]));
    Quat q = product(sigma);
    double res = metric(q);
    int it = 0;
    for (; it < 50 && res >= 1e-10; ++it) {
        // Finite-difference Jacobian of the vector part.
        Eigen::Matrix3d J;
        const double h = 1e-7;
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d pert = sigma;
            pert(k) += h;
            J.col(k) = (product(pert).vec() - q.vec()) / h;
        }
        Eigen::Vector3d step = J.fullPivLu().solve(Eigen::Vector3d(q.vec()));
        double scale = 1.0;
        for (int back = 0; back < 20; ++back) {
            Eigen::Vector3d trial = sigma - scale * step;
            for (int k = 0; k < 3; ++k) trial(k) = std::max(0.0, trial(k));
            if (trial.sum() > s) trial *= s / trial.sum();
            const Quat qt = product(trial);
            const double rt = metric(qt);
            if (rt < res || back == 19) {
                sigma = trial;
                q = qt;
                res = rt;
                break;
            }
            scale *= 0.5;
        }
    }
    if (res >= 1e-10) {
        throw ComputationError(
            "solve-failure",
            "graft solve did not converge; residual " + std::to_string(res));
    }
    result.sigma[order[0]] = sigma(0);
    result.sigma[order[1]] = sigma(1);
    result.sigma[order[2]] = sigma(2);
    result.sigma[order[3]] = s - sigma.sum();
    result.residual = res;
    result.iterations = it;
    std::vector<ArcBlock> blocks;
    for (int i = 0; i < 4; ++i) {
        if (result.sigma[i] > 1e-14) {
            blocks.push_back({node[i], rho[i], result.sigma[i]});
        }
    }
    result.curve = insert_arc_blocks(c, std::move(blocks));
    return result;
}

// --- Plane-curve normalization -------------------------------------------

namespace {

using Cplx = std::complex<double>;

std::vector<Cplx> resample_closed(const std::vector<Cplx>& pts, int m) {
    const int n = static_cast<int>(pts.size());
    std::vector<double> cum(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        cum[i + 1] = cum[i] + std::abs(pts[(i + 1) % n] - pts[i]);
    }
    const double total = cum[n];
    std::vector<Cplx> out(m);
    int cell = 0;
    for (int j = 0; j < m; ++j) {
        const double target = total * j / m;
        while (cell < n - 1 && cum[cell + 1] < target) ++cell;
        const double w = (target - cum[cell]) /
                         std::max(1e-300, cum[cell + 1] - cum[cell]);
        out[j] = pts[cell] + w * (pts[(cell + 1) % n] - pts[cell]);
    }
    return out;
}

// Continuous tangent-angle lift of the closed polygon; the last entry is the
// angle of edge 0 plus 2 pi N.
std::vector<double> angle_lift(const std::vector<Cplx>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<double> theta(n + 1);
    double prev = std::arg(pts[1 % n] - pts[0]);
    theta[0] = prev;
    for (int i = 1; i <= n; ++i) {
        const Cplx e = pts[(i + 1) % n] - pts[i % n];
        double a = std::arg(e);
        while (a - prev > kPi) a -= 2 * kPi;
        while (a - prev < -kPi) a += 2 * kPi;
        theta[i] = a;
        prev = a;
    }
    return theta;
}

double min_polygon_curvature(const std::vector<Cplx>& pts) {
    const int n = static_cast<int>(pts.size());
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Cplx e0 = pts[(i + 1) % n] - pts[i];
        const Cplx e1 = pts[(i + 2) % n] - pts[(i + 1) % n];
        const double turn = std::arg(e1 / e0);
        const double len = 0.5 * (std::abs(e0) + std::abs(e1));
        worst = std::min(worst, turn / len);
    }
    return worst;
}

}  // namespace

std::vector<PlaneHomotopyPath> whitney_graustein_normalize(
    const std::vector<PlaneCurve>& family, double kappa0, int steps) {
    if (family.empty()) {
        throw ValidationError("invalid-input", "empty curve family");
    }
    if (steps < 4) {
        throw ValidationError("invalid-input", "need at least 4 steps");
    }
    const int M = 512;
    struct Prepared {
        std::vector<Cplx> pts;  // arclength-uniform, original position
        double length;
        int N;
    };
    std::vector<Prepared> prep;
    for (const PlaneCurve& pc : family) {
        if (pc.points.size() < 8) {
            throw ValidationError("invalid-input",
                                  "plane curves need at least 8 points");
        }
        std::vector<Cplx> z;
        z.reserve(pc.points.size());
        for (const Vec2& p : pc.points) z.emplace_back(p.x(), p.y());
        std::vector<Cplx> u = resample_closed(z, M);
        double length = 0.0;
        for (int i = 0; i < M; ++i) length += std::abs(u[(i + 1) % M] - u[i]);
        const std::vector<double> theta = angle_lift(u);
        const int N = static_cast<int>(
            std::lround((theta[M] - theta[0]) / (2 * kPi)));
        prep.push_back({std::move(u), length, N});
    }
    const int N = prep[0].N;
    if (N <= 0) {
        throw ValidationError("invalid-family",
                              "rotation number must be positive");
    }
    for (const Prepared& p : prep) {
        if (p.N != N) {
            throw ValidationError("invalid-family",
                                  "curves have mixed rotation numbers");
        }
    }
    double min_length = std::numeric_limits<double>::infinity();
    for (const Prepared& p : prep) min_length = std::min(min_length, p.length);
    double R1 = min_length / (2 * kPi * N);
    if (kappa0 > 0.0) R1 = std::min(R1, 0.9 / kappa0);
    const double L_star = 2 * kPi * N * R1;

    const int half = steps / 2;
    std::vector<PlaneHomotopyPath> paths;
    for (const Prepared& p : prep) {
        PlaneHomotopyPath path;
        Cplx centroid = 0.0;
        for (const Cplx& z : p.pts) centroid += z;
        centroid /= static_cast<double>(M);
        const double c_scale = L_star / p.length;

        std::vector<std::vector<Cplx>> stage2;  // built first for the shrink
        std::vector<Cplx> base(M);
        for (int i = 0; i < M; ++i) {
            base[i] = c_scale * (p.pts[i] - centroid);
        }
        const std::vector<double> theta = angle_lift(base);
        const double edge = L_star / M;
        double needed_shrink = 1.0;
        for (int step = 0; step <= steps - half; ++step) {
            const double u = static_cast<double>(step) / (steps - half);
            // Interpolated tangent angles with the mean-tangent closing
            // correction, anchored at a moving base point.
            std::vector<Cplx> tau(M);
            Cplx mean = 0.0;
            for (int i = 0; i < M; ++i) {
                const double target = theta[0] + 2 * kPi * N * i / M;
                const double a = (1 - u) * theta[i] + u * target;
                tau[i] = std::polar(1.0, a);
                mean += tau[i];
            }
            mean /= static_cast<double>(M);
            const Cplx circle_start =
                R1 * std::polar(1.0, theta[0] - kPi / 2);
            const Cplx anchor = (1 - u) * base[0] + u * circle_start;
            std::vector<Cplx> w(M);
            Cplx acc = anchor;
            for (int i = 0; i < M; ++i) {
                w[i] = acc;
                acc += edge * (tau[i] - mean);
            }
            // Measure curvature on a decimated copy: upsampling in
            // resample_closed leaves collinear runs on the original chords,
            // which would read as spurious zero curvature.
            std::vector<Cplx> coarse;
            coarse.reserve(M / 8);
            for (int i = 0; i < M; i += 8) coarse.push_back(w[i]);
            const double kmin = min_polygon_curvature(coarse);
            if (kmin <= 0.0) {
                throw ComputationError(
                    "normalization-failure",
                    "curvature lost positivity during interpolation");
            }
            if (kappa0 > 0.0 && kmin < kappa0 * 1.001) {
                needed_shrink =
                    std::min(needed_shrink, kmin / (kappa0 * 1.001));
            }
            stage2.push_back(std::move(w));
        }
        // Mid-path shrink keeping kappa above kappa0, vanishing at the ends.
        for (int step = 0; step <= steps - half; ++step) {
            const double u = static_cast<double>(step) / (steps - half);
            const double lam =
                1.0 - (1.0 - needed_shrink) * std::sin(kPi * u);
            for (Cplx& z : stage2[step]) z *= lam;
        }

        for (int step = 0; step <= steps; ++step) {
            const double s = static_cast<double>(step) / steps;
            path.s_grid.push_back(s);
            PlaneCurve out;
            out.points.reserve(M);
            if (step < half) {
                const double u = static_cast<double>(step) / half;
                const double scale = 1 + u * (c_scale - 1);
                for (int i = 0; i < M; ++i) {
                    const Cplx z = scale * (p.pts[i] - u * centroid);
                    out.points.emplace_back(z.real(), z.imag());
                }
            } else {
                for (const Cplx& z : stage2[step - half]) {
                    out.points.emplace_back(z.real(), z.imag());
                }
            }
            path.curves.push_back(std::move(out));
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

// --- S^2-family and path validation --------------------------------------

CurveSamples exotic_sphere_family(double kappa1, const Vec3& p, int n) {
    if (!(kappa1 > 1.0) || !(kappa1 <= std::sqrt(3.0) + 1e-12)) {
        throw ValidationError(
            "obstruction",
            "the family needs a curvature bound in (1, sqrt(3)]");
    }
    const Vec3 u = p.normalized();
    const double alpha = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double theta = std::atan2(u.y(), u.x());
    CurveSamples base = bend_k_equator(1, alpha / kPi, n);
    const int nb = base.size();
    const double phase = theta / (4 * kPi);
    const int shift =
        ((static_cast<int>(std::lround(phase * nb)) % nb) + nb) % nb;
    CurveSamples out;
    out.v.resize(nb);
    out.kappa.resize(nb);
    for (int i = 0; i < nb; ++i) {
        const int j = (i + shift) % nb;
        out.v[i] = base.v[j];
        out.kappa[i] = base.kappa[j];
    }
    return out;
}

HomotopyPath make_path(const SpaceSpec& space,
                       std::vector<CurveSamples> curves) {
    if (curves.size() < 2) {
        throw ValidationError("invalid-input",
                              "a path needs at least 2 curves");
    }
    HomotopyPath path;
    path.space = space;
    const int k = static_cast<int>(curves.size());
    for (int i = 0; i < k; ++i) {
        path.s_grid.push_back(static_cast<double>(i) / (k - 1));
    }
    path.curves = std::move(curves);
    return path;
}

HomotopyReport validate_homotopy(const HomotopyPath& path, const SpaceSpec& s,
                                 double threshold) {
    HomotopyReport report;
    if (path.curves.size() < 2) {
        report.failure = "path has fewer than 2 curves";
        return report;
    }
    std::vector<FramedCurve> framed;
    framed.reserve(path.curves.size());
    for (const CurveSamples& c : path.curves) {
        report.membership.push_back(check_membership(c, s));
        framed.push_back(integrate_frames(c));
        try {
            report.signs.push_back(lifted_sign(framed.back(), 1e-3));
        } catch (const Error&) {
            report.signs.push_back(0);
        }
    }
    const int probes = 64;
    for (size_t i = 0; i + 1 < framed.size(); ++i) {
        double sup = 0.0;
        for (int k = 0; k <= probes; ++k) {
            const double t = static_cast<double>(k) / probes;
            const auto frame_at = [&](const FramedCurve& fc) {
                const int idx = std::min(
                    fc.cells(),
                    static_cast<int>(std::floor(t * fc.cells())));
                return fc.frames[idx];
            };
            sup = std::max(
                sup, (frame_at(framed[i]) - frame_at(framed[i + 1])).norm());
        }
        report.step_metric.push_back(sup);
    }
    report.pass = true;
    for (size_t i = 0; i < report.membership.size(); ++i) {
        if (!report.membership[i].member) {
            report.pass = false;
            report.failure = "curve " + std::to_string(i) +
                             " is not a member of the space";
            break;
        }
    }
    if (report.pass) {
        for (size_t i = 0; i < report.step_metric.size(); ++i) {
            if (!(report.step_metric[i] < threshold)) {
                report.pass = false;
                report.failure =
                    "step " + std::to_string(i) + " is discontinuous";
                break;
            }
        }
    }
    if (report.pass) {
        for (size_t i = 1; i < report.signs.size(); ++i) {
            if (report.signs[i] != report.signs[0] || report.signs[i] == 0) {
                report.pass = false;
                report.failure = "lifted sign changes along the path";
                break;
            }
        }
    }
    return report;
}

}  // namespace curvebound
