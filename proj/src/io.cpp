#include "qse/io.hpp"

#include "qse/error.hpp"
#include "qse/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qse::io {

namespace {

using Json = nlohmann::ordered_json;

void dump(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += inner + Json(key).dump() + ": ";
            dump(value, out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump(j[i], out, indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += inner;
            dump(j[i], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case Json::value_t::number_float: out += format_number(j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

std::string to_text(const Json& j) {
    std::string out;
    dump(j, out, 0);
    out += "\n";
    return out;
}

Json vec_json(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

Json mat_json(const Mat3& m) {
    Json rows = Json::array();
    for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
    return rows;
}

Json matrix_json(const Mat4c& m) {
    Json rows = Json::array();
    for (int i = 0; i < 4; ++i) {
        Json row = Json::array();
        for (int j = 0; j < 4; ++j) {
            Json entry = Json::object();
            entry["re"] = m(i, j).real();
            entry["im"] = m(i, j).imag();
            row.push_back(entry);
        }
        rows.push_back(row);
    }
    return rows;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) bad(where + " must be a number");
    return j.get<double>();
}

Vec3 vec3(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) bad(where + " must be an array of 3 numbers");
    return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

Json state_json(const StateFile& file, StateForm form) {
    Json j = Json::object();
    if (form == StateForm::Matrix) {
        j["matrix"] = matrix_json(file.state.matrix());
    } else {
        const PauliDecomposition& d = file.state.pauli();
        j["pauli"] = Json{{"a", vec_json(d.a)}, {"b", vec_json(d.b)}, {"T", mat_json(d.T)}};
    }
    if (file.meta) {
        Json meta = Json::object();
        meta["family"] = file.meta->family;
        Json params = Json::object();
        for (const auto& [k, v] : file.meta->params) params[k] = v;
        meta["params"] = params;
        j["meta"] = meta;
    }
    return j;
}

StateFile parse_state_object(const Json& doc) {
    if (!doc.is_object()) bad("state document must be a JSON object");
    if (!doc.contains("matrix") && !doc.contains("pauli") && doc.contains("state"))
        return parse_state_object(doc.at("state"));
    const bool has_matrix = doc.contains("matrix");
    const bool has_pauli = doc.contains("pauli");
    if (has_matrix == has_pauli) bad("state file needs exactly one of \"matrix\" or \"pauli\"");

    std::optional<TwoQubitState> state;
    if (has_matrix) {
        const Json& m = doc.at("matrix");
        if (!m.is_array() || m.size() != 4) bad("\"matrix\" must have 4 rows");
        Mat4c mat;
        for (int i = 0; i < 4; ++i) {
            const Json& row = m[static_cast<std::size_t>(i)];
            if (!row.is_array() || row.size() != 4) bad("each matrix row must have 4 entries");
            for (int k = 0; k < 4; ++k) {
                const Json& e = row[static_cast<std::size_t>(k)];
                if (!e.is_object() || !e.contains("re") || !e.contains("im"))
                    bad("matrix entries must be {\"re\": x, \"im\": y}");
                mat(i, k) = cplx(number(e.at("re"), "re"), number(e.at("im"), "im"));
            }
        }
        state = validate_state(mat);
    } else {
        PauliDecomposition d;
        const Json& p = doc.at("pauli");
        if (!p.is_object() || !p.contains("a") || !p.contains("b") || !p.contains("T"))
            bad("\"pauli\" needs \"a\", \"b\" and \"T\"");
        d.a = vec3(p.at("a"), "a");
        d.b = vec3(p.at("b"), "b");
        const Json& T = p.at("T");
        if (!T.is_array() || T.size() != 3) bad("\"T\" must be 3x3");
        for (int i = 0; i < 3; ++i) d.T.row(i) = vec3(T[static_cast<std::size_t>(i)], "T").transpose();
        state = state_from_pauli(d);
    }

    std::optional<StateMeta> meta;
    if (doc.contains("meta")) {
        const Json& m = doc.at("meta");
        if (!m.is_object()) bad("\"meta\" must be an object");
        StateMeta sm;
        if (m.contains("family")) {
            if (!m.at("family").is_string()) bad("meta.family must be a string");
            sm.family = m.at("family").get<std::string>();
        }
        if (m.contains("params")) {
            if (!m.at("params").is_object()) bad("meta.params must be an object");
            for (const auto& [k, v] : m.at("params").items()) sm.params[k] = number(v, "meta.params");
        }
        meta = sm;
    }
    return StateFile{*state, meta, has_matrix ? StateForm::Matrix : StateForm::Pauli};
}

std::string fmt_short(double x) {
    if (x == 0.0) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string vec_text(const Vec3& v) {
    return "(" + fmt_short(v(0)) + ", " + fmt_short(v(1)) + ", " + fmt_short(v(2)) + ")";
}

bool wanted(PartyFilter f, Party p) {
    return f == PartyFilter::Both || (f == PartyFilter::Alice) == (p == Party::Alice);
}

} // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    if (x == 0.0) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

StateFile parse_state(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
    return parse_state_object(doc);
}

StateFile read_state_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_state(ss.str());
}

std::string format_state(const StateFile& file) { return to_text(state_json(file, file.form)); }

PartyFilter parse_party_filter(std::string_view s) {
    if (s == "alice") return PartyFilter::Alice;
    if (s == "bob") return PartyFilter::Bob;
    if (s == "both") return PartyFilter::Both;
    bad("party must be alice, bob or both");
}

std::string format_report_json(const StateFile& file, const SteeringClassification& c,
                               const ToleranceConfig& cfg, PartyFilter parties) {
    Json doc = Json::object();
    doc["tool"] = Json{{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    doc["tolerances"] = Json{{"tangency", cfg.tangency_tol},
                             {"purity", cfg.purity_tol},
                             {"cluster_angle", cfg.cluster_angle}};
    doc["state"] = state_json(file, StateForm::Pauli);
    doc["entangled"] = c.entangled;
    doc["negativity"] = c.negativity;

    Json parts = Json::object();
    for (Party p : {Party::Alice, Party::Bob}) {
        if (!wanted(parties, p)) continue;
        const auto& el = p == Party::Alice ? c.ellipsoid_alice : c.ellipsoid_bob;
        const auto& tg = p == Party::Alice ? c.tangency_alice : c.tangency_bob;
        Json part = Json::object();
        if (el) {
            part["ellipsoid"] = Json{{"center", vec_json(el->center)},
                                     {"semiaxes", vec_json(el->semiaxes)},
                                     {"orientation", mat_json(el->orientation)},
                                     {"Q", mat_json(el->Q)},
                                     {"gamma_sq", el->gamma_sq},
                                     {"degeneracy", std::string(to_string(el->degeneracy))},
                                     {"volume", p == Party::Alice ? c.volume_alice : c.volume_bob}};
        } else {
            part["ellipsoid"] = nullptr;
        }
        if (tg) {
            Json pts = Json::array();
            for (const auto& tp : tg->points)
                pts.push_back(Json{{"bloch_point", vec_json(tp.bloch_point)},
                                   {"direction", vec_json(tp.direction)},
                                   {"outcome_sign", tp.outcome_sign},
                                   {"probability", tp.probability},
                                   {"residual", tp.residual}});
            part["tangency"] = Json{{"count", std::string(to_string(tg->count))},
                                    {"max_g", tg->max_g},
                                    {"purity", tg->purity},
                                    {"points", pts}};
        } else {
            part["tangency"] = nullptr;
        }
        parts[std::string(to_string(p))] = part;
    }
    doc["parties"] = parts;
    doc["verdict"] = std::string(to_string(c.verdict));
    doc["verdict_basis"] = std::string(to_string(c.basis));
    doc["chsh"] = Json{{"value", c.chsh_value}, {"violated", c.chsh_violated}};
    Json shortcuts = Json::array();
    for (const auto& s : c.shortcuts)
        shortcuts.push_back(Json{{"steered", std::string(to_string(s.steered))},
                                 {"p_p", s.p_p},
                                 {"p_g", s.p_g},
                                 {"result", std::string(to_string(s.result))}});
    doc["two_point_shortcut"] = shortcuts;
    doc["notes"] = c.notes;
    return to_text(doc);
}

std::string format_report_text(const StateFile& file, const SteeringClassification& c,
                               const ToleranceConfig& cfg, PartyFilter parties) {
    std::ostringstream os;
    os << kToolName << " " << kToolVersion << "\n";
    if (file.meta && !file.meta->family.empty()) {
        os << "family: " << file.meta->family;
        for (const auto& [k, v] : file.meta->params) os << " " << k << "=" << fmt_short(v);
        os << "\n";
    }
    os << "tangency tolerance: " << fmt_short(cfg.tangency_tol) << "\n";
    os << "entangled: " << (c.entangled ? "yes" : "no") << " (negativity "
       << fmt_short(c.negativity) << ")\n";
    os << "chsh: " << fmt_short(c.chsh_value) << (c.chsh_violated ? " (violated)" : " (not violated)")
       << "\n";
    for (Party p : {Party::Alice, Party::Bob}) {
        if (!wanted(parties, p)) continue;
        const std::string who(to_string(p));
        const auto& el = p == Party::Alice ? c.ellipsoid_alice : c.ellipsoid_bob;
        const auto& tg = p == Party::Alice ? c.tangency_alice : c.tangency_bob;
        if (el) {
            os << who << " ellipsoid: center " << vec_text(el->center) << ", semiaxes "
               << vec_text(el->semiaxes) << ", " << to_string(el->degeneracy) << ", volume "
               << fmt_short(p == Party::Alice ? c.volume_alice : c.volume_bob) << "\n";
        } else {
            os << who << " ellipsoid: none (pure steering marginal)\n";
        }
        if (tg) {
            os << who << " tangency: " << to_string(tg->count) << " (max g "
               << fmt_short(tg->max_g) << ")\n";
            for (const auto& tp : tg->points)
                os << "  point " << vec_text(tp.bloch_point) << " from axis "
                   << vec_text(tp.direction) << " outcome " << (tp.outcome_sign > 0 ? '+' : '-')
                   << ", probability " << fmt_short(tp.probability) << ", residual "
                   << fmt_short(tp.residual) << "\n";
        }
    }
    for (const auto& s : c.shortcuts)
        os << "two-point shortcut (" << to_string(s.steered) << "): p_p + p_g = "
           << fmt_short(s.p_p + s.p_g) << ", " << to_string(s.result) << "\n";
    for (const auto& n : c.notes) os << "note: " << n << "\n";
    os << "verdict: " << to_string(c.verdict);
    if (c.basis != VerdictBasis::None) os << " (" << to_string(c.basis) << ")";
    os << "\n";
    return os.str();
}

std::string format_mesh(const SteeringEllipsoid& ellipsoid, int samples, MeshFormat format) {
    if (!ellipsoid.is_full())
        throw Error(ErrorCode::DegenerateEllipsoid,
                    "mesh needs a full ellipsoid, got " + std::string(to_string(ellipsoid.degeneracy)));
    if (samples < 2) bad("mesh needs at least 2 samples");

    const Mat3 root = sqrtm_psd(ellipsoid.Q);
    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(samples) * static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double th = std::numbers::pi * i / (samples - 1);
        for (int j = 0; j < samples; ++j) {
            const double ph = 2.0 * std::numbers::pi * j / samples;
            dirs.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        }
    }
    std::string out;
    const auto emit = [&](const Vec3& x, const std::string& lead, const std::string& sep,
                          const std::string& tail) {
        out += lead + format_number(x(0)) + sep + format_number(x(1)) + sep + format_number(x(2)) +
               tail + "\n";
    };
    if (format == MeshFormat::Csv) {
        out += "x,y,z,surface\n";
        for (const Vec3& d : dirs) emit(ellipsoid.center + root * d, "", ",", ",ellipsoid");
        for (const Vec3& d : dirs) emit(d, "", ",", ",sphere");
        return out;
    }

    out += "# " + std::string(kToolName) + " " + std::string(kToolVersion) +
           " mesh samples=" + std::to_string(samples) + "\n";
    out += "o ellipsoid\n";
    for (const Vec3& d : dirs) emit(ellipsoid.center + root * d, "v ", " ", "");
    out += "o sphere\n";
    for (const Vec3& d : dirs) emit(d, "v ", " ", "");
    const int n = samples;
    for (int surface = 0; surface < 2; ++surface) {
        const int base = surface * n * n + 1;
        const auto idx = [&](int i, int j) { return std::to_string(base + i * n + (j % n)); };
        for (int i = 0; i + 1 < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i + 1 < n - 1)
                    out += "f " + idx(i, j) + " " + idx(i + 1, j) + " " + idx(i + 1, j + 1) + "\n";
                if (i > 0)
                    out += "f " + idx(i, j) + " " + idx(i + 1, j + 1) + " " + idx(i, j + 1) + "\n";
            }
    }
    return out;
}

} // namespace qse::io
