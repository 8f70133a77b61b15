#include "curvebound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace curvebound {

namespace {

using nlohmann::json;

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ValidationError("unknown-field",
                                  "unknown field '" + item.key() + "' in " +
                                      where);
        }
    }
}

double parse_bound(const json& v, const std::string& name) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ValidationError("invalid-bound",
                              name + " must be a number, \"+inf\" or \"-inf\"");
    }
    if (v.is_number()) return v.get<double>();
    throw ValidationError("invalid-bound",
                          name + " must be a number, \"+inf\" or \"-inf\"");
}

json emit_bound(double x) {
    if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
    return x;
}

}  // namespace

CurveFile parse_curve_file(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("malformed-json", e.what());
    }
    if (!root.is_object()) {
        throw ValidationError("malformed-json",
                              "curve file must be a JSON object");
    }
    reject_unknown(root, {"bounds", "q0", "samples"}, "curve file");
    if (!root.contains("bounds") || !root.contains("samples")) {
        throw ValidationError("missing-field",
                              "curve file needs 'bounds' and 'samples'");
    }
    const json& bounds = root["bounds"];
    if (!bounds.is_object()) {
        throw ValidationError("invalid-bound", "'bounds' must be an object");
    }
    reject_unknown(bounds, {"kappa1", "kappa2"}, "bounds");
    CurveFile file;
    file.space.kappa1 = {parse_bound(bounds.at("kappa1"), "kappa1")};
    file.space.kappa2 = {parse_bound(bounds.at("kappa2"), "kappa2")};
    validate_space(file.space);

    if (root.contains("q0")) {
        const json& q = root["q0"];
        if (!q.is_array() || q.size() != 9) {
            throw ValidationError("invalid-frame",
                                  "'q0' must hold 9 numbers, row-major");
        }
        Mat3 m;
        for (int i = 0; i < 9; ++i) {
            if (!q[i].is_number()) {
                throw ValidationError("invalid-frame",
                                      "'q0' must hold 9 numbers, row-major");
            }
            m(i / 3, i % 3) = q[i].get<double>();
        }
        if (!is_rotation(m, 1e-8)) {
            throw ValidationError("invalid-frame", "'q0' is not a rotation");
        }
        file.curve.q0 = m;
    }

    const json& samples = root["samples"];
    if (!samples.is_array() || samples.size() < 8) {
        throw ValidationError("invalid-samples",
                              "'samples' must hold at least 8 entries");
    }
    for (const json& s : samples) {
        if (!s.is_object()) {
            throw ValidationError("invalid-samples",
                                  "each sample must be an object");
        }
        reject_unknown(s, {"v", "kappa"}, "sample");
        if (!s.contains("v") || !s.contains("kappa") ||
            !s["v"].is_number() || !s["kappa"].is_number()) {
            throw ValidationError("invalid-samples",
                                  "each sample needs numbers 'v' and 'kappa'");
        }
        const double v = s["v"].get<double>();
        const double k = s["kappa"].get<double>();
        if (!(v > 0)) {
            throw ValidationError("invalid-samples",
                                  "sample speeds must be positive");
        }
        if (!(k > file.space.kappa1.value) || !(k < file.space.kappa2.value)) {
            throw ValidationError(
                "curvature-out-of-bounds",
                "sample curvature " + fmt_real(k) +
                    " is not strictly inside the bounds");
        }
        file.curve.v.push_back(v);
        file.curve.kappa.push_back(k);
    }
    validate_curve(file.curve);
    return file;
}

std::string emit_curve_file(const CurveFile& file) {
    json root;
    root["bounds"] = {{"kappa1", emit_bound(file.space.kappa1.value)},
                      {"kappa2", emit_bound(file.space.kappa2.value)}};
    if ((file.curve.q0 - Mat3::Identity()).norm() > 0) {
        json q = json::array();
        for (int i = 0; i < 9; ++i) q.push_back(file.curve.q0(i / 3, i % 3));
        root["q0"] = q;
    }
    json samples = json::array();
    for (int i = 0; i < file.curve.size(); ++i) {
        samples.push_back(
            {{"v", file.curve.v[i]}, {"kappa", file.curve.kappa[i]}});
    }
    root["samples"] = std::move(samples);
    return root.dump(2) + "\n";
}

std::string curve_csv(const FramedCurve& fc) {
    std::string out = "t,x,y,z,v,kappa\n";
    const int n = fc.cells();
    for (int i = 0; i <= n; ++i) {
        const Vec3 g = fc.gamma(i);
        const int cell = std::min(i, n - 1);
        out += fmt_real(static_cast<double>(i) / n) + "," + fmt_real(g.x()) +
               "," + fmt_real(g.y()) + "," + fmt_real(g.z()) + "," +
               fmt_real(fc.base.v[cell]) + "," +
               fmt_real(fc.base.kappa[cell]) + "\n";
    }
    return out;
}

std::string band_csv(const BandGrid& band) {
    std::string out = "t,theta,x,y,z\n";
    for (size_t i = 0; i < band.t_grid.size(); ++i) {
        for (size_t j = 0; j < band.theta_grid.size(); ++j) {
            const Vec3& p = band.points[i][j];
            out += fmt_real(band.t_grid[i]) + "," +
                   fmt_real(band.theta_grid[j]) + "," + fmt_real(p.x()) +
                   "," + fmt_real(p.y()) + "," + fmt_real(p.z()) + "\n";
        }
    }
    return out;
}

std::string classification_json(const ClassificationResult& result) {
    json root;
    root["space"] = {{"kappa1", emit_bound(result.space.kappa1.value)},
                     {"kappa2", emit_bound(result.space.kappa2.value)}};
    root["condensed"] = result.condensed;
    root["diffuse"] = result.diffuse;
    if (result.rotation_number) {
        root["rotation_number"] = *result.rotation_number;
    } else {
        root["rotation_number"] = nullptr;
    }
    root["lifted_sign"] = result.lifted_sign;
    root["component_index"] = result.component_index;
    root["n"] = result.n;
    root["diagnostics"] = json::object();
    for (const auto& [key, value] : result.diagnostics) {
        root["diagnostics"][key] = value;
    }
    return root.dump(2) + "\n";
}

std::string content_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("io-error", "cannot read file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("io-error", "cannot write file: " + path);
    }
    out << content;
}

}  // namespace curvebound
