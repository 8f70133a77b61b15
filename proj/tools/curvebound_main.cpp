#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvebound/homotopy.hpp"
#include "curvebound/io.hpp"

namespace cb = curvebound;
using nlohmann::json;

namespace {

double parse_bound_arg(const std::string& s) {
    if (s == "+inf" || s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw cb::ValidationError("invalid-bound",
                                  "cannot parse curvature bound: " + s);
    }
}

// Every command that writes a file also records a manifest next to it.
void write_with_manifest(const std::string& path, const std::string& content,
                         const std::vector<std::string>& argv,
                         const std::vector<std::pair<std::string, std::string>>&
                             input_hashes) {
    cb::write_file(path, content);
    json manifest;
    manifest["command"] = argv;
    manifest["output"] = path;
    manifest["output_hash"] = cb::content_hash(content);
    manifest["inputs"] = json::object();
    for (const auto& [name, hash] : input_hashes) {
        manifest["inputs"][name] = hash;
    }
    cb::write_file(path + ".manifest.json", manifest.dump(2) + "\n");
}

void emit_curve(const cb::CurveFile& file, const std::string& out,
                const std::vector<std::string>& argv,
                const std::vector<std::pair<std::string, std::string>>&
                    input_hashes) {
    const std::string text = cb::emit_curve_file(file);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_with_manifest(out, text, argv, input_hashes);
    }
}

cb::CurveFile load_curve(const std::string& path, std::string* hash) {
    const std::string text = cb::read_file(path);
    if (hash) *hash = cb::content_hash(text);
    return cb::parse_curve_file(text);
}

json invariants_json(const cb::CurveFile& file) {
    json out;
    out["tot"] = cb::total_curvature(file.curve);
    const cb::ReducedSpace red = cb::reduce_space(file.curve, file.space);
    const cb::FramedCurve fc = cb::integrate_frames(red.curve);
    out["lifted_sign"] = cb::lifted_sign(fc, 1e-3);
    if (red.full_space) {
        out["condensed"] = nullptr;
        out["diffuse"] = nullptr;
        out["rotation_number"] = nullptr;
        out["h"] = nullptr;
        return out;
    }
    const cb::CurvatureBound kappa0 = red.space.kappa1;
    const cb::CondensedResult cond = cb::is_condensed(red.curve, kappa0);
    const cb::DiffuseResult diff = cb::is_diffuse(red.curve, kappa0);
    out["condensed"] = cond.condensed;
    out["diffuse"] = diff.diffuse;
    out["h"] = {cond.witness.x(), cond.witness.y(), cond.witness.z()};
    try {
        out["rotation_number"] =
            cb::rotation_number(red.curve, kappa0, cb::NuMode::automatic);
    } catch (const cb::Error&) {
        out["rotation_number"] = nullptr;
    }
    return out;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Invariants and homotopies of curvature-bounded closed "
                 "curves on the sphere"};
    app.require_subcommand(1);

    // count
    auto* count = app.add_subcommand("count", "Number of components");
    std::string count_k1 = "-inf", count_k2 = "+inf";
    count->add_option("--kappa1", count_k1);
    count->add_option("--kappa2", count_k2);

    // classify / invariants
    auto* classify = app.add_subcommand("classify", "Classify a curve file");
    std::string classify_file;
    classify->add_option("file", classify_file)->required();
    auto* invariants = app.add_subcommand("invariants", "Curve invariants");
    std::string invariants_file;
    invariants->add_option("file", invariants_file)->required();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a curve");
    gen->require_subcommand(1);
    auto* gen_circle = gen->add_subcommand("circle");
    double g_rho = 1.5707963267948966, g_phase = 0.0, g_s = 0.5;
    int g_k = 1, g_n = 256;
    std::string g_out, g_k1 = "-inf", g_k2 = "+inf";
    gen_circle->add_option("--rho", g_rho);
    gen_circle->add_option("--k", g_k);
    gen_circle->add_option("--phase", g_phase);
    gen_circle->add_option("--n", g_n);
    gen_circle->add_option("--kappa1", g_k1);
    gen_circle->add_option("--kappa2", g_k2);
    gen_circle->add_option("--out", g_out);
    auto* gen_bending = gen->add_subcommand("bending");
    double gb_bound = 1.1;
    gen_bending->add_option("--k", g_k);
    gen_bending->add_option("--s", g_s);
    gen_bending->add_option("--n", g_n);
    gen_bending->add_option("--bound", gb_bound,
                            "Symmetric curvature bound of the target space");
    gen_bending->add_option("--out", g_out);
    auto* gen_exotic = gen->add_subcommand("exotic");
    double ge_kappa1 = 1.2, ge_px = 0.0, ge_py = 0.0, ge_pz = 1.0;
    gen_exotic->add_option("--kappa1", ge_kappa1);
    gen_exotic->add_option("--px", ge_px);
    gen_exotic->add_option("--py", ge_py);
    gen_exotic->add_option("--pz", ge_pz);
    gen_exotic->add_option("--n", g_n);
    gen_exotic->add_option("--out", g_out);

    // transform
    auto* transform = app.add_subcommand("transform", "Transform a curve");
    transform->require_subcommand(1);
    std::string t_file, t_out;
    double t_theta = 0.0, t_rho1 = 0.5, t_t0 = 0.5, t_eps = 0.05, t_s = 0.0;
    double t_tol = 1e-6;
    int t_loops = 1, t_nout = 1024;
    std::vector<double> t_ts, t_rhos;
    auto* tr_translate = transform->add_subcommand("translate");
    tr_translate->add_option("file", t_file)->required();
    tr_translate->add_option("--theta", t_theta)->required();
    tr_translate->add_option("--out", t_out);
    auto* tr_add = transform->add_subcommand("add-loops");
    tr_add->add_option("file", t_file)->required();
    tr_add->add_option("--loops", t_loops)->required();
    tr_add->add_option("--rho1", t_rho1)->required();
    tr_add->add_option("--n-out", t_nout);
    tr_add->add_option("--out", t_out);
    auto* tr_insert = transform->add_subcommand("insert-loops");
    tr_insert->add_option("file", t_file)->required();
    tr_insert->add_option("--t0", t_t0)->required();
    tr_insert->add_option("--loops", t_loops)->required();
    tr_insert->add_option("--eps", t_eps)->required();
    tr_insert->add_option("--rho1", t_rho1)->required();
    tr_insert->add_option("--out", t_out);
    auto* tr_graft = transform->add_subcommand("graft");
    tr_graft->add_option("file", t_file)->required();
    tr_graft->add_option("--s", t_s)->required();
    tr_graft->add_option("--t", t_ts)->expected(4);
    tr_graft->add_option("--rho", t_rhos)->expected(4);
    tr_graft->add_option("--tol", t_tol);
    tr_graft->add_option("--out", t_out);

    // validate-path
    auto* validate = app.add_subcommand("validate-path", "Validate a family");
    std::string v_manifest;
    validate->add_option("manifest", v_manifest)->required();

    // band
    auto* band = app.add_subcommand("band", "Emit band plot data");
    std::string b_file, b_kind = "regular", b_csv;
    int b_m = 64;
    band->add_option("file", b_file)->required();
    band->add_option("--kind", b_kind)
        ->check(CLI::IsMember({"regular", "caustic"}));
    band->add_option("--m", b_m);
    band->add_option("--csv", b_csv)->required();

    CLI11_PARSE(app, argc, argv);

    if (*count) {
        cb::SpaceSpec s;
        s.kappa1 = {parse_bound_arg(count_k1)};
        s.kappa2 = {parse_bound_arg(count_k2)};
        std::cout << cb::component_count(s) << "\n";
        return 0;
    }
    if (*classify) {
        std::string hash;
        const cb::CurveFile file = load_curve(classify_file, &hash);
        std::cout << cb::classification_json(
            cb::classify_curve(file.curve, file.space));
        return 0;
    }
    if (*invariants) {
        const cb::CurveFile file = load_curve(invariants_file, nullptr);
        std::cout << invariants_json(file).dump(2) << "\n";
        return 0;
    }
    if (*gen_circle) {
        cb::CurveFile file;
        file.curve = cb::make_circle(g_rho, g_k, g_phase, g_n);
        file.space.kappa1 = {parse_bound_arg(g_k1)};
        file.space.kappa2 = {parse_bound_arg(g_k2)};
        emit_curve(file, g_out, args, {});
        return 0;
    }
    if (*gen_bending) {
        cb::CurveFile file;
        file.curve = cb::bend_k_equator(g_k, g_s, g_n);
        file.space.kappa1 = {-gb_bound};
        file.space.kappa2 = {+gb_bound};
        emit_curve(file, g_out, args, {});
        return 0;
    }
    if (*gen_exotic) {
        cb::CurveFile file;
        file.curve = cb::exotic_sphere_family(
            ge_kappa1, cb::Vec3(ge_px, ge_py, ge_pz), g_n);
        file.space.kappa1 = {-ge_kappa1};
        file.space.kappa2 = {+ge_kappa1};
        emit_curve(file, g_out, args, {});
        return 0;
    }
    if (*tr_translate || *tr_add || *tr_insert || *tr_graft) {
        std::string hash;
        cb::CurveFile file = load_curve(t_file, &hash);
        if (*tr_translate) {
            file.curve = cb::translate_curve(file.curve, t_theta);
            file.space.kappa1 = {std::isinf(file.space.kappa1.value)
                                     ? file.space.kappa1.value
                                     : 1.0 / std::tan(file.space.rho1() -
                                                      t_theta)};
            file.space.kappa2 = {std::isinf(file.space.kappa2.value) &&
                                         t_theta <= 0
                                     ? file.space.kappa2.value
                                     : 1.0 / std::tan(file.space.rho2() -
                                                      t_theta)};
        } else if (*tr_add) {
            file.curve =
                cb::add_loops_Fn(file.curve, t_loops, t_rho1, t_nout);
        } else if (*tr_insert) {
            file.curve = cb::insert_loops_at(file.curve, t_t0, t_loops,
                                             t_eps, t_rho1);
        } else {
            if (!t_ts.empty()) {
                const cb::QuadrupleGraft result = cb::graft_quadruple(
                    file.curve, {t_ts[0], t_ts[1], t_ts[2], t_ts[3]},
                    {t_rhos[0], t_rhos[1], t_rhos[2], t_rhos[3]}, t_s);
                file.curve = result.curve;
            } else {
                const cb::FramedCurve fc = cb::integrate_frames(file.curve);
                const cb::CausticPair pair = cb::find_antipodal_caustic_pair(
                    fc, file.space.kappa1, t_tol);
                file.curve = cb::graft_antipodal(file.curve, pair.t1, pair.t2,
                                                 pair.rho1, pair.rho2, t_s,
                                                 t_tol);
            }
        }
        emit_curve(file, t_out, args, {{t_file, hash}});
        return 0;
    }
    if (*validate) {
        const std::string text = cb::read_file(v_manifest);
        json manifest;
        try {
            manifest = json::parse(text);
        } catch (const json::exception& e) {
            throw cb::ValidationError("malformed-json", e.what());
        }
        const auto bound_from_json = [](const json& v) {
            return v.is_number() ? v.get<double>()
                                 : parse_bound_arg(v.get<std::string>());
        };
        cb::SpaceSpec space;
        space.kappa1 = {bound_from_json(manifest.at("kappa1"))};
        space.kappa2 = {bound_from_json(manifest.at("kappa2"))};
        const double threshold = manifest.value("threshold", 0.5);
        const auto dir = std::filesystem::path(v_manifest).parent_path();
        std::vector<cb::CurveSamples> curves;
        for (const json& f : manifest.at("files")) {
            const std::string path =
                (dir / f.get<std::string>()).string();
            curves.push_back(cb::parse_curve_file(cb::read_file(path)).curve);
        }
        const cb::HomotopyPath path = cb::make_path(space, std::move(curves));
        const cb::HomotopyReport report =
            cb::validate_homotopy(path, space, threshold);
        json out;
        out["pass"] = report.pass;
        out["failure"] = report.failure;
        out["step_metric"] = report.step_metric;
        json margins = json::array();
        for (const cb::MembershipReport& m : report.membership) {
            margins.push_back({{"member", m.member},
                               {"closure_error", m.closure_error},
                               {"curvature_margin", m.curvature_margin}});
        }
        out["membership"] = margins;
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (*band) {
        std::string hash;
        const cb::CurveFile file = load_curve(b_file, &hash);
        const cb::FramedCurve fc = cb::integrate_frames(file.curve);
        cb::BandGrid grid;
        if (b_kind == "regular") {
            grid = cb::regular_band(fc, file.space, b_m);
        } else {
            grid = cb::caustic_band_and_caustic(fc, file.space.kappa1, b_m)
                       .first;
        }
        write_with_manifest(b_csv, cb::band_csv(grid), args,
                            {{b_file, hash}});
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cb::ValidationError& e) {
        json err = {{"error", e.code()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const cb::ComputationError& e) {
        json err = {{"error", e.code()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err = {{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
