#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "curvebound/homotopy.hpp"
#include "fixtures.hpp"

using namespace curvebound;
using cbtest::kPi;

namespace {

double length_of(const CurveSamples& c) {
    double len = 0.0;
    for (double v : c.v) len += v / c.size();
    return len;
}

double closure_of(const FramedCurve& fc) {
    return (fc.frames.back() - fc.frames.front()).norm();
}

}  // namespace

TEST_CASE("make_circle produces the constant circle data") {
    const double rho = 0.8;
    const CurveSamples c = make_circle(rho, 3, 0.0, 200);
    REQUIRE(c.size() == 200);
    for (int i = 0; i < 200; ++i) {
        CHECK(c.v[i] == doctest::Approx(6 * kPi * std::sin(rho)));
        CHECK(c.kappa[i] == doctest::Approx(std::cos(rho) / std::sin(rho)));
    }
    CHECK((c.q0 - Mat3::Identity()).norm() == 0.0);
    CHECK_THROWS_AS(make_circle(0.0, 1), ValidationError);
    CHECK_THROWS_AS(make_circle(kPi, 1), ValidationError);
    CHECK_THROWS_AS(make_circle(1.0, 0), ValidationError);
}

TEST_CASE("bend_k_equator: endpoints, length growth, curvature ceiling") {
    // Stage 0 is the equator traversed k times, stage 1 traversed k+2 times.
    for (int k : {1, 2}) {
        const CurveSamples lo = bend_k_equator(k, 0.0, 512);
        CHECK(length_of(lo) == doctest::Approx(2 * kPi * k).epsilon(1e-10));
        for (double kap : lo.kappa) CHECK(std::abs(kap) < 1e-10);
        const CurveSamples hi = bend_k_equator(k, 1.0, 512);
        CHECK(length_of(hi) ==
              doctest::Approx(2 * kPi * (k + 2)).epsilon(1e-10));
    }
    // Every stage is a closed curve with the same (odd) lift sign, and the
    // curvature never exceeds tan(pi / (2k+2)) over the whole family.
    for (int k : {1, 2}) {
        const auto family = bend_k_equator_family(k, 16, 384);
        REQUIRE(static_cast<int>(family.size()) == 17);
        double max_kappa = 0.0;
        for (const CurveSamples& c : family) {
            const FramedCurve fc = integrate_frames(c);
            CHECK(closure_of(fc) < 1e-10);
            CHECK(lifted_sign(fc, 1e-6) == (k % 2 == 0 ? +1 : -1));
            for (double kap : c.kappa) {
                max_kappa = std::max(max_kappa, std::abs(kap));
            }
        }
        CHECK(max_kappa <= std::tan(kPi / (2 * k + 2)) + 1e-12);
    }
    CHECK_THROWS_AS(bend_k_equator(0, 0.5, 128), ValidationError);
    CHECK_THROWS_AS(bend_k_equator(1, 1.5, 128), ValidationError);
}

TEST_CASE("bend_k_equator attains the curvature ceiling mid-family") {
    const auto family = bend_k_equator_family(1, 64, 512);
    double max_kappa = 0.0;
    for (const CurveSamples& c : family) {
        for (double kap : c.kappa) max_kappa = std::max(max_kappa, kap);
    }
    CHECK(max_kappa == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("insert_loops_at doubles the grid and flips parity per loop") {
    const CurveSamples base = make_circle(1.0, 1, 0.0, 128);
    const double tot0 = total_curvature(base);

    const CurveSamples same = insert_loops_at(base, 0.5, 0, 0.05, 0.4);
    CHECK(same.size() == 256);
    CHECK(total_curvature(same) == doctest::Approx(tot0).epsilon(1e-12));
    CHECK(lifted_sign(integrate_frames(same)) == -1);

    for (int loops : {1, 2, 3}) {
        const CurveSamples out =
            insert_loops_at(base, 0.5, loops, 0.05, 0.4);
        CHECK(out.size() == 256);
        const FramedCurve fc = integrate_frames(out);
        // Whole circles inserted at a point: closure survives exactly, the
        // lift flips per loop, and tot grows by 2 pi per loop.
        CHECK(closure_of(fc) < 1e-12);
        CHECK(lifted_sign(fc) == (loops % 2 == 0 ? -1 : +1));
        CHECK(total_curvature(out) ==
              doctest::Approx(tot0 + 2 * kPi * loops).epsilon(1e-12));
        // The loop cells carry the loop curvature cot(0.4).
        double kmax = 0.0;
        for (double kap : out.kappa) kmax = std::max(kmax, kap);
        CHECK(kmax ==
              doctest::Approx(std::cos(0.4) / std::sin(0.4)).epsilon(1e-12));
    }

    // Windows reaching outside [0,1] and bad radii are rejected.
    CHECK_THROWS_AS(insert_loops_at(base, 0.01, 1, 0.05, 0.4),
                    ValidationError);
    CHECK_THROWS_AS(insert_loops_at(base, 0.99, 1, 0.05, 0.4),
                    ValidationError);
    CHECK_THROWS_AS(insert_loops_at(base, 0.5, 1, 0.05, kPi),
                    ValidationError);
}

TEST_CASE("add_loops_Fn drives the curvature toward the loop curvature") {
    const CurveSamples base = make_circle(1.0, 1, 0.0, 256);
    const double target = std::cos(0.5) / std::sin(0.5);
    for (int loops : {10, 11}) {
        const CurveSamples out = add_loops_Fn(base, loops, 0.5, 2048);
        double mean = 0.0;
        for (double kap : out.kappa) mean += kap;
        mean /= out.size();
        CHECK(std::abs(mean - target) < 0.05);
        // Parity: the lift sign of the composition is the base sign times
        // (-1)^loops.
        const FramedCurve fc = integrate_frames(out);
        CHECK(closure_of(fc) < 0.01);
        CHECK(lifted_sign(fc, 0.02) == (loops % 2 == 0 ? -1 : +1));
    }
    CHECK_THROWS_AS(add_loops_Fn(base, 5, -0.1), ValidationError);
}

TEST_CASE("antipodal graft fixture: exact closure and exact antipodal pair") {
    const cbtest::GraftFixture fx = cbtest::antipodal_graft_fixture(256);
    const FramedCurve fc = integrate_frames(fx.curve);
    CHECK(closure_of(fc) < 1e-12);
    CHECK((fx.chi1 + fx.chi2).norm() < 1e-12);
    CHECK(fx.rho > 0.0);
    CHECK(fx.rho < kPi / 2);

    const CausticPair pair = find_antipodal_caustic_pair(fc, {0.0});
    CHECK(pair.defect <= 1e-6);
    // The half-turn symmetry puts the partners half a turn apart.
    const double dt = std::abs(pair.t2 - pair.t1);
    CHECK(std::min(dt, 1.0 - dt) == doctest::Approx(0.5).epsilon(1e-9));

    // A great circle has no interior antipodal caustic pair at all.
    const FramedCurve gc =
        integrate_frames(make_circle(kPi / 2, 1, 0.0, 256));
    CHECK_THROWS_AS(find_antipodal_caustic_pair(gc, {-1.0}),
                    ComputationError);
}

TEST_CASE("graft_antipodal preserves the end frame and adds 2s to tot") {
    const cbtest::GraftFixture fx = cbtest::antipodal_graft_fixture(256);
    const FramedCurve before = integrate_frames(fx.curve);
    const double s = 4 * kPi;
    const CurveSamples out =
        graft_antipodal(fx.curve, 0.0, 0.5, fx.rho, fx.rho, s);
    const FramedCurve after = integrate_frames(out);
    CHECK(closure_of(after) < 1e-12);
    CHECK((after.frames.back() - before.frames.back()).norm() < 1e-12);
    CHECK((after.lifts.back().coeffs() - before.lifts.back().coeffs())
              .norm() < 1e-12);
    CHECK(total_curvature(out) ==
          doctest::Approx(total_curvature(fx.curve) + 2 * s).epsilon(1e-12));
    CHECK(lifted_sign(after) == lifted_sign(before));

    // s = 0 is the identity operation.
    const CurveSamples zero =
        graft_antipodal(fx.curve, 0.0, 0.5, fx.rho, fx.rho, 0.0);
    CHECK(zero.size() == fx.curve.size());

    // Non-antipodal caustic points are rejected.
    CHECK_THROWS_AS(
        graft_antipodal(fx.curve, 0.1, 0.3, 0.3, 0.3, 1.0, 1e-6),
        ValidationError);
}

TEST_CASE("graft_quadruple balances four arcs to the identity") {
    const cbtest::GraftFixture fx = cbtest::antipodal_graft_fixture(256);
    const FramedCurve fc = integrate_frames(fx.curve);
    const int n = fc.cells();
    // Caustic point cloud over a t x rho grid; the origin must be interior.
    PointCloud3 cloud;
    std::vector<std::pair<double, double>> param;
    for (int i = 0; i < n; i += 16) {
        for (int j = 1; j <= 12; ++j) {
            const double rho = 0.1 + (kPi - 0.2) * j / 13.0;
            cloud.push_back(std::cos(rho) * fc.gamma(i) +
                            std::sin(rho) * fc.normal(i));
            param.emplace_back(static_cast<double>(i) / n, rho);
        }
    }
    const OriginLocation loc = locate_origin(cloud);
    REQUIRE(loc.tag == OriginLocation::Tag::interior);
    CHECK(loc.margin > 0.05);

    // Pick four cloud points whose hull strictly contains the origin.
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0,
                                            static_cast<int>(cloud.size()) -
                                                1);
    std::array<double, 4> t{}, rho{};
    bool found = false;
    for (int attempt = 0; attempt < 100000 && !found; ++attempt) {
        const std::array<int, 4> id{pick(rng), pick(rng), pick(rng),
                                    pick(rng)};
        bool distinct = true;
        for (int x = 0; x < 4; ++x) {
            for (int y = x + 1; y < 4; ++y) {
                if (std::abs(param[id[x]].first - param[id[y]].first) <
                    1e-9) {
                    distinct = false;
                }
            }
        }
        if (!distinct) continue;
        Eigen::Matrix4d A;
        for (int k = 0; k < 4; ++k) {
            A.block<3, 1>(0, k) = cloud[id[k]];
            A(3, k) = 1.0;
        }
        const Eigen::FullPivLU<Eigen::Matrix4d> lu(A);
        if (lu.rank() < 4) continue;
        const Eigen::Vector4d lambda =
            lu.solve(Eigen::Vector4d(0, 0, 0, 1));
        if ((lambda.array() < 0.02).any()) continue;
        for (int k = 0; k < 4; ++k) {
            t[k] = param[id[k]].first;
            rho[k] = param[id[k]].second;
        }
        found = true;
    }
    REQUIRE(found);

    const double s = 0.1;
    const QuadrupleGraft graft = graft_quadruple(fx.curve, t, rho, s);
    CHECK(graft.residual < 1e-10);
    double sum = 0.0;
    for (double sg : graft.sigma) {
        CHECK(sg >= 0.0);
        sum += sg;
    }
    CHECK(sum == doctest::Approx(s).epsilon(1e-12));
    const FramedCurve after = integrate_frames(graft.curve);
    CHECK(closure_of(after) < 1e-10);
    CHECK((after.frames.back() - fc.frames.back()).norm() < 1e-10);
    CHECK(total_curvature(graft.curve) ==
          doctest::Approx(total_curvature(fx.curve) + s).epsilon(1e-10));

    // s = 0 returns the curve unchanged.
    const QuadrupleGraft zero = graft_quadruple(fx.curve, t, rho, 0.0);
    CHECK(zero.curve.size() == fx.curve.size());

    // A co-planar / non-surrounding quadruple is rejected.
    CHECK_THROWS_AS(
        graft_quadruple(fx.curve, {0.0, 0.1, 0.2, 0.3},
                        {0.05, 0.05, 0.05, 0.05}, 0.1),
        ValidationError);
}

TEST_CASE("whitney_graustein_normalize: circles stay put, families merge") {
    // A family consisting of one unit circle barely moves.
    PlaneCurve circle;
    for (int i = 0; i < 256; ++i) {
        const double t = 2 * kPi * i / 256;
        circle.points.emplace_back(std::cos(t), std::sin(t));
    }
    const auto only = whitney_graustein_normalize({circle}, 0.0, 32);
    REQUIRE(only.size() == 1);
    REQUIRE(static_cast<int>(only[0].curves.size()) == 33);
    for (const PlaneCurve& pc : only[0].curves) {
        for (const Vec2& p : pc.points) {
            CHECK(std::abs(p.norm() - 1.0) < 0.1);
        }
        CHECK(plane_rotation_number(pc.points).value == 1);
    }

    // A mixed family of the same rotation number ends on one common circle.
    // The other members are strictly convex: an ellipse and an offset loop
    // with a small third harmonic in its support radius.
    std::mt19937 rng(401);
    PlaneCurve ellipse, wavy;
    for (int i = 0; i < 256; ++i) {
        const double t = 2 * kPi * i / 256;
        ellipse.points.emplace_back(1.3 * std::cos(t), 0.9 * std::sin(t));
        const double r = 1.1 + 0.04 * std::cos(3 * t);
        wavy.points.emplace_back(0.2 + r * std::cos(t), r * std::sin(t));
    }
    const std::vector<PlaneCurve> family = {circle, ellipse, wavy};
    const auto paths = whitney_graustein_normalize(family, 0.0, 32);
    REQUIRE(paths.size() == 3);
    // All final curves are the same circle about the origin.
    double R = -1.0;
    for (const auto& path : paths) {
        const PlaneCurve& last = path.curves.back();
        Vec2 center = Vec2::Zero();
        for (const Vec2& p : last.points) center += p;
        center /= static_cast<double>(last.points.size());
        double rmin = 1e30, rmax = 0.0;
        for (const Vec2& p : last.points) {
            rmin = std::min(rmin, (p - center).norm());
            rmax = std::max(rmax, (p - center).norm());
        }
        CHECK(rmax - rmin < 1e-9);
        CHECK(center.norm() < 0.05);
        if (R < 0.0) R = rmin;
        CHECK(rmin == doctest::Approx(R).epsilon(1e-6));
        // The rotation number never changes along the path.
        for (const PlaneCurve& pc : path.curves) {
            CHECK(plane_rotation_number(pc.points).value == 1);
        }
    }

    // With a positive lower bound the whole path keeps kappa above it.
    // Curvature is measured on a decimated polygon: the resampled output
    // has collinear runs along the original chords.
    const auto bounded = whitney_graustein_normalize({circle}, 0.5, 32);
    for (const PlaneCurve& pc : bounded[0].curves) {
        std::vector<Vec2> pts;
        for (size_t i = 0; i < pc.points.size(); i += 8) {
            pts.push_back(pc.points[i]);
        }
        const int m = static_cast<int>(pts.size());
        for (int i = 0; i < m; ++i) {
            const Vec2 e0 = pts[(i + 1) % m] - pts[i];
            const Vec2 e1 = pts[(i + 2) % m] - pts[(i + 1) % m];
            const double turn =
                std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
            const double len = 0.5 * (e0.norm() + e1.norm());
            CHECK(turn / len > 0.5 * 0.99);
        }
    }

    // Mixed or non-positive rotation numbers are rejected.
    std::vector<Vec2> reversed(circle.points.rbegin(), circle.points.rend());
    CHECK_THROWS_AS(whitney_graustein_normalize({PlaneCurve{reversed}}),
                    ValidationError);
    CHECK_THROWS_AS(whitney_graustein_normalize(
                        {circle, cbtest::random_plane_loop(rng, 2)}),
                    ValidationError);
    CHECK_THROWS_AS(whitney_graustein_normalize({}), ValidationError);
}

TEST_CASE("exotic_sphere_family: poles and membership") {
    const int n = 512;
    // North pole: the 1-equator at stage 0; south pole: stage 1.
    const CurveSamples north = exotic_sphere_family(1.2, Vec3::UnitZ(), n);
    CHECK(length_of(north) == doctest::Approx(2 * kPi).epsilon(1e-10));
    const CurveSamples south = exotic_sphere_family(1.2, -Vec3::UnitZ(), n);
    CHECK(length_of(south) == doctest::Approx(6 * kPi).epsilon(1e-10));

    // Random directions produce members of the symmetric space.
    const SpaceSpec space{{-1.2}, {1.2}};
    std::mt19937 rng(403);
    std::normal_distribution<double> g;
    for (int it = 0; it < 10; ++it) {
        const Vec3 p = Vec3(g(rng), g(rng), g(rng)).normalized();
        const CurveSamples c = exotic_sphere_family(1.2, p, n);
        const MembershipReport rep = check_membership(c, space, 1e-6);
        CHECK(rep.member);
    }

    // The curvature bound must lie in (1, sqrt(3)].
    CHECK_THROWS_AS(exotic_sphere_family(1.0, Vec3::UnitZ()),
                    ValidationError);
    CHECK_THROWS_AS(exotic_sphere_family(2.0, Vec3::UnitZ()),
                    ValidationError);
}

TEST_CASE("validate_homotopy accepts the bending family, rejects leavers") {
    const auto family = bend_k_equator_family(1, 48, 384);
    const SpaceSpec roomy{{-1.05}, {1.05}};
    const HomotopyPath path = make_path(roomy, family);
    REQUIRE(static_cast<int>(path.s_grid.size()) == 49);
    CHECK(path.s_grid.front() == doctest::Approx(0.0));
    CHECK(path.s_grid.back() == doctest::Approx(1.0));

    const HomotopyReport good = validate_homotopy(path, roomy);
    CHECK(good.pass);
    CHECK(good.failure.empty());
    for (int sign : good.signs) CHECK(sign == -1);
    for (double m : good.step_metric) CHECK(m < 0.5);

    // The same family leaves the tighter space: max kappa reaches 1 > 0.95.
    const SpaceSpec tight{{-0.95}, {0.95}};
    const HomotopyReport bad =
        validate_homotopy(make_path(tight, family), tight);
    CHECK(!bad.pass);
    CHECK(!bad.failure.empty());
    bool violated = false;
    for (const MembershipReport& rep : bad.membership) {
        if (!rep.member && rep.curvature_margin < 0.0) violated = true;
    }
    CHECK(violated);

    // A two-curve "path" between distant curves is flagged discontinuous.
    const HomotopyPath jump = make_path(
        roomy, {make_circle(1.0, 1, 0.0, 128), make_circle(1.0, 3, 0.0, 128)});
    const SpaceSpec wide{{-10.0}, {10.0}};
    const HomotopyReport disc = validate_homotopy(jump, wide);
    CHECK(!disc.pass);
    CHECK(disc.failure.find("discontinuous") != std::string::npos);
}
