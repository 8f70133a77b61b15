#include "curvebound/bands.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace curvebound {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double a, double b, int cells) {
    std::vector<double> g(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        g[i] = a + (b - a) * i / cells;
    }
    return g;
}

BandGrid evaluate_band(const FramedCurve& fc, BandKind kind,
                       std::vector<double> theta_grid) {
    const int n = fc.cells();
    BandGrid b;
    b.kind = kind;
    b.theta_grid = std::move(theta_grid);
    b.t_grid.resize(n + 1);
    b.points.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        b.t_grid[i] = static_cast<double>(i) / n;
        const Vec3 g = fc.gamma(i);
        const Vec3 nn = fc.normal(i);
        b.points[i].reserve(b.theta_grid.size());
        for (double th : b.theta_grid) {
            b.points[i].push_back(std::cos(th) * g + std::sin(th) * nn);
        }
    }
    return b;
}

}  // namespace

BandGrid regular_band(const FramedCurve& fc, const SpaceSpec& s, int m) {
    validate_space(s);
    if (m < 2) {
        throw ValidationError("invalid-input", "need at least 2 theta cells");
    }
    const MembershipReport report = check_membership(fc.base, s);
    if (!report.member) {
        throw ValidationError("not-a-member",
                              "curve is not a member of the space");
    }
    const double lo = s.rho1() - kPi;
    const double hi = s.rho2();
    // Split the range at theta = 0 so the curve row is always a grid node.
    std::vector<double> theta;
    if (hi <= 1e-15) {
        theta = linspace(lo, 0.0, m);
    } else if (lo >= -1e-15) {
        theta = linspace(0.0, hi, m);
    } else {
        int m_neg = static_cast<int>(std::lround(m * (-lo) / (hi - lo)));
        m_neg = std::clamp(m_neg, 1, m - 1);
        theta = linspace(lo, 0.0, m_neg);
        const std::vector<double> pos = linspace(0.0, hi, m - m_neg);
        theta.insert(theta.end(), pos.begin() + 1, pos.end());
    }
    return evaluate_band(fc, BandKind::regular, std::move(theta));
}

std::pair<BandGrid, std::vector<Vec3>> caustic_band_and_caustic(
    const FramedCurve& fc, const CurvatureBound& kappa0, int m) {
    const double rho0 = kappa0.rho();
    if (!(rho0 > 0.0) || !(rho0 < kPi) || std::isinf(kappa0.value)) {
        throw ValidationError("invalid-space",
                              "caustic radius must lie in (0, pi)");
    }
    const int n = fc.cells();
    std::vector<Vec3> caustic;
    caustic.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (!(fc.base.kappa[i] > kappa0.value)) {
            throw ValidationError("not-a-member",
                                  "curvature does not stay above kappa0");
        }
        const double rho = std::atan2(1.0, fc.base.kappa[i]);
        caustic.push_back(std::cos(rho) * fc.gamma(i) +
                          std::sin(rho) * fc.normal(i));
    }
    BandGrid b = evaluate_band(fc, BandKind::caustic, linspace(0.0, rho0, m));
    return {std::move(b), std::move(caustic)};
}

CurveSamples check_curve(const FramedCurve& fc, const CurvatureBound& kappa0) {
    const double rho0 = kappa0.rho();
    if (!(rho0 > 0.0) || !(rho0 < kPi) || std::isinf(kappa0.value)) {
        throw ValidationError("invalid-space",
                              "caustic radius must lie in (0, pi)");
    }
    const int n = fc.cells();
    CurveSamples out;
    out.v.resize(n);
    out.kappa.resize(n);
    for (int i = 0; i < n; ++i) {
        const double rho = std::atan2(1.0, fc.base.kappa[i]);
        if (!(rho < rho0 - 1e-12)) {
            throw ValidationError(
                "not-strictly-inside",
                "curve radius reaches the caustic radius");
        }
        out.v[i] = fc.base.v[i] * std::sin(rho0 - rho) / std::sin(rho);
        out.kappa[i] = std::cos(rho0 - rho) / std::sin(rho0 - rho);
    }
    // Frame of the check curve: position at theta = rho0, tangent reversed,
    // normal sin(rho0) gamma - cos(rho0) n.
    Mat3 M;
    M << std::cos(rho0), 0, std::sin(rho0),
         0, -1, 0,
         std::sin(rho0), 0, -std::cos(rho0);
    out.q0 = fc.base.q0 * M;
    return out;
}

BandIntersections band_self_intersections(const BandGrid& b, double tol) {
    if (b.kind == BandKind::caustic) {
        throw ValidationError("invalid-input",
                              "self-intersection scan needs a regular band");
    }
    const int n = b.t_cells();
    const int m = b.theta_cells();
    double max_t_step = 0.0, max_cell_diam = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= m; ++j) {
            const double step = (b.points[i + 1][j] - b.points[i][j]).norm();
            max_t_step = std::max(max_t_step, step);
            if (j < m) {
                max_cell_diam =
                    std::max(max_cell_diam,
                             (b.points[i + 1][j + 1] - b.points[i][j]).norm());
            }
        }
    }
    if (tol <= 0.0) tol = 3.0 * max_t_step;
    if (max_cell_diam > 3.0 * tol) {
        throw ComputationError("resolution",
                               "band grid too coarse for this tolerance");
    }

    // Row-wise arc length prefix sums: two points that are close in space
    // but also close along their rows are the same sheet of the band, not a
    // self-intersection.
    std::vector<std::vector<double>> row_pre(m + 1,
                                             std::vector<double>(n + 1, 0.0));
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i < n; ++i) {
            row_pre[j][i + 1] =
                row_pre[j][i] + (b.points[i + 1][j] - b.points[i][j]).norm();
        }
    }
    const auto along_row = [&](int j, int i1, int i2) {
        const double d = std::abs(row_pre[j][i2] - row_pre[j][i1]);
        return std::min(d, row_pre[j][n] - d);
    };

    // Spatial hash with bucket size tol; only pairs with a parameter gap of
    // more than 1.5 grid steps (circularly) count as self-intersections.
    const double inv = 1.0 / tol;
    auto key = [&](const Vec3& p) {
        const long long x = static_cast<long long>(std::floor(p.x() * inv));
        const long long y = static_cast<long long>(std::floor(p.y() * inv));
        const long long z = static_cast<long long>(std::floor(p.z() * inv));
        return (x * 73856093LL) ^ (y * 19349663LL) ^ (z * 83492791LL);
    };
    std::unordered_map<long long, std::vector<std::pair<int, int>>> buckets;
    for (int i = 0; i < n; ++i) {  // skip the duplicate seam row i = n
        for (int j = 0; j <= m; ++j) {
            buckets[key(b.points[i][j])].push_back({i, j});
        }
    }
    BandIntersections out;
    const double min_gap = 1.5 / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= m; ++j) {
            const Vec3& p = b.points[i][j];
            for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
                const Vec3 q = p + tol * Vec3(dx, dy, dz);
                const auto it = buckets.find(key(q));
                if (it == buckets.end()) continue;
                for (const auto& [i2, j2] : it->second) {
                    if (i2 < i || (i2 == i && j2 <= j)) continue;
                    double dt = std::abs(b.t_grid[i2] - b.t_grid[i]);
                    dt = std::min(dt, 1.0 - dt);
                    if (dt <= min_gap) continue;
                    if (std::max(along_row(j, i, i2),
                                 along_row(j2, i, i2)) <= 3.0 * tol) {
                        continue;
                    }
                    const double d = (b.points[i2][j2] - p).norm();
                    if (d < tol) {
                        out.hits.push_back({i, j, i2, j2, d});
                    }
                }
            }
        }
    }
    if (out.hits.empty()) {
        out.cls = BandIntersections::Class::simple;
        return out;
    }
    const auto near_boundary = [m](int j) { return j <= 1 || j >= m - 1; };
    bool all_boundary = true;
    for (const auto& h : out.hits) {
        if (!near_boundary(h.j1) || !near_boundary(h.j2)) {
            all_boundary = false;
            break;
        }
    }
    out.cls = all_boundary ? BandIntersections::Class::quasi_simple
                           : BandIntersections::Class::neither;
    return out;
}

std::vector<CrossingInterval> crossing_intervals(
    const BandGrid& b, const Vec3& great_circle_normal, double tol) {
    const int n = b.t_cells();
    if (n < 64) {
        throw ValidationError("invalid-input",
                              "crossing extraction needs >= 64 t-columns");
    }
    const Vec3 h = great_circle_normal.normalized();
    // Per-column label: -1 inside the closed lower disk, +1 upper, 0 mixed;
    // a column lying inside the circle itself is a degenerate crossing.
    std::vector<int> label(n);
    std::vector<bool> on_circle(n, false);
    for (int i = 0; i < n; ++i) {
        double lo = 1.0, hi = -1.0;
        for (const Vec3& p : b.points[i]) {
            const double s = p.dot(h);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        const bool minus = hi <= tol;
        const bool plus = lo >= -tol;
        if (minus && plus) {
            on_circle[i] = true;
            label[i] = 0;
        } else {
            label[i] = minus ? -1 : (plus ? +1 : 0);
        }
    }
    std::vector<CrossingInterval> out;
    for (int i = 0; i < n; ++i) {
        if (on_circle[i]) {
            out.push_back({b.t_grid[i], b.t_grid[i], true});
        }
    }
    // Minimal intervals: from each signed column, cross the following run of
    // mixed columns to the next signed column; report when the sign flips.
    for (int i = 0; i < n; ++i) {
        if (label[i] == 0) continue;
        int k = (i + 1) % n;
        int steps = 1;
        while (label[k] == 0 && steps < n) {
            if (on_circle[k]) break;  // degenerate already reported
            k = (k + 1) % n;
            ++steps;
        }
        if (label[k] == 0 || label[k] == label[i]) continue;
        const double tau1 = b.t_grid[i];
        double tau2 = b.t_grid[k];
        if (k <= i) tau2 += 1.0;
        out.push_back({tau1, tau2, false});
    }
    std::sort(out.begin(), out.end(),
              [](const CrossingInterval& a, const CrossingInterval& c) {
                  return a.tau1 < c.tau1;
              });
    return out;
}

double min_crossing_length(const BandGrid& b, const std::vector<Vec3>& path,
                           double tol) {
    if (path.size() < 2) {
        throw ValidationError("invalid-path", "path needs at least 2 points");
    }
    const int m = b.theta_cells();
    auto row_distance = [&](const Vec3& p, int j) {
        double best = 2.0;
        for (const auto& column : b.points) {
            best = std::min(best, (column[j] - p).norm());
        }
        return best;
    };
    const bool forward = row_distance(path.front(), 0) <= tol &&
                         row_distance(path.back(), m) <= tol;
    const bool backward = row_distance(path.front(), m) <= tol &&
                          row_distance(path.back(), 0) <= tol;
    if (!forward && !backward) {
        throw ValidationError(
            "invalid-path",
            "path endpoints must lie on opposite band boundaries");
    }
    double length = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        length += spherical_distance(path[i], path[i + 1]);
    }
    return length;
}

}  // namespace curvebound
