#include "qse/cli.hpp"

#include "qse/error.hpp"
#include "qse/families.hpp"
#include "qse/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace qse::cli {

namespace {

struct Options {
    std::string path;
    std::string party = "both";
    bool json = false;
    std::string out;
    double tol_tangency = ToleranceConfig{}.tangency_tol;
    int grid = 20000;
    int samples = 64;
    std::string format = "csv";
    std::string family;
    std::map<std::string, double> params;
};

const char* const kParamKeys[] = {"q", "eta", "eps", "x", "y", "z", "az", "bz", "tx", "ty", "tz", "w"};

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + o.out);
    f << text;
}

ToleranceConfig tolerances(const Options& o) {
    ToleranceConfig cfg;
    cfg.tangency_tol = o.tol_tangency;
    cfg.validate();
    return cfg;
}

void cmd_analyze(const Options& o, bool json, std::ostream& out) {
    const io::StateFile file = io::read_state_file(o.path);
    const ToleranceConfig cfg = tolerances(o);
    const SteeringClassification c = classify_steering(file.state, cfg);
    const io::PartyFilter parties = io::parse_party_filter(o.party);
    emit(o, out, json ? io::format_report_json(file, c, cfg, parties)
                      : io::format_report_text(file, c, cfg, parties));
}

void cmd_family(const Options& o, std::ostream& out) {
    const FamilyName name = family_from_string(o.family);
    const FamilySpec spec = make_family(name, o.params);
    io::StateFile file{generate(spec), io::StateMeta{o.family, spec.params}};
    emit(o, out, io::format_state(file));
}

void cmd_mesh(const Options& o, std::ostream& out) {
    const io::StateFile file = io::read_state_file(o.path);
    const Party party = o.party == "alice" ? Party::Alice : Party::Bob;
    const SteeringEllipsoid el = compute_ellipsoid(pauli_decompose(file.state), party);
    emit(o, out, io::format_mesh(el, o.samples, o.format == "tri" ? io::MeshFormat::Tri
                                                                  : io::MeshFormat::Csv));
}

std::string vec_text(const Vec3& v) {
    return "(" + io::format_number(v(0)) + ", " + io::format_number(v(1)) + ", " +
           io::format_number(v(2)) + ")";
}

void cmd_scan(const Options& o, std::ostream& out) {
    const io::StateFile file = io::read_state_file(o.path);
    const PauliDecomposition d = pauli_decompose(file.state);
    const io::PartyFilter filter = io::parse_party_filter(o.party);
    std::ostringstream os;
    os << io::kToolName << " " << io::kToolVersion << " scan grid=" << o.grid << "\n";
    for (Party p : {Party::Alice, Party::Bob}) {
        if (filter != io::PartyFilter::Both && (filter == io::PartyFilter::Alice) != (p == Party::Alice))
            continue;
        const std::string who(to_string(p));
        SphereQuadratic q;
        try {
            q = build_quadratic(d, p);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSteerer) throw;
            os << who << ": skipped, steering marginal is pure\n";
            continue;
        }
        const TrsSolution sol = trs_maximize(q);
        const auto cands = scan_pure_directions(d, p, o.grid);
        os << who << ": trs max g " << io::format_number(sol.max_value) << ", argmax "
           << to_string(sol.kind) << "\n";
        for (const Vec3& n : sol.points) os << "  trs direction " << vec_text(n) << "\n";
        os << "  grid candidates " << cands.size() << "\n";
        for (const auto& c : cands) {
            double angle = std::nan("");
            for (const Vec3& n : sol.points) {
                const double a = std::atan2(n.cross(c.direction).norm(), n.dot(c.direction));
                angle = std::isnan(angle) ? a : std::min(angle, a);
            }
            os << "  candidate " << vec_text(c.direction) << " g " << io::format_number(c.g)
               << " delta_g " << io::format_number(sol.max_value - c.g) << " angle_to_trs "
               << io::format_number(angle) << "\n";
        }
    }
    emit(o, out, os.str());
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum steering ellipsoids, pure steered states and steering verdicts", "qse"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(io::kToolVersion));
    Options o;

    const auto add_tolerance = [&](CLI::App* sub) {
        sub->add_option("--tol-tangency", o.tol_tangency, "Tolerance on g for tangency");
    };
    const auto add_party = [&](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--party", o.party, "Party to report")->check(CLI::IsMember(allowed));
    };

    auto* analyze = app.add_subcommand("analyze", "Classify a two-qubit state");
    analyze->add_option("path", o.path, "State file")->required();
    add_party(analyze, {"alice", "bob", "both"});
    analyze->add_flag("--json", o.json, "Machine-readable report");
    analyze->add_option("--out", o.out, "Write to a file instead of stdout");
    add_tolerance(analyze);

    auto* certify = app.add_subcommand("certify", "Same as analyze --json");
    certify->add_option("path", o.path, "State file")->required();
    add_party(certify, {"alice", "bob", "both"});
    certify->add_option("--out", o.out, "Write to a file instead of stdout");
    add_tolerance(certify);

    auto* family = app.add_subcommand("family", "Write a state file for a named family");
    family->add_option("name", o.family, "Family name")->required();
    family->add_option("--out", o.out, "Write to a file instead of stdout");
    std::map<std::string, CLI::Option*> param_opts;
    std::map<std::string, double> param_values;
    for (const char* key : kParamKeys) {
        param_values[key] = 0.0;
        param_opts[key] = family->add_option(std::string("--") + key, param_values[key]);
    }

    auto* mesh = app.add_subcommand("mesh", "Sample an ellipsoid and the Bloch sphere");
    mesh->add_option("path", o.path, "State file")->required();
    o.party = "both";
    add_party(mesh, {"alice", "bob"});
    mesh->add_option("--samples", o.samples, "Samples per angle");
    mesh->add_option("--format", o.format)->check(CLI::IsMember({"csv", "tri"}));
    mesh->add_option("--out", o.out, "Write to a file instead of stdout");

    auto* scan = app.add_subcommand("scan", "Grid oracle next to the exact solver");
    scan->add_option("path", o.path, "State file")->required();
    add_party(scan, {"alice", "bob", "both"});
    scan->add_option("--grid", o.grid, "Number of grid directions");
    scan->add_option("--out", o.out, "Write to a file instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? e.what() : app.help()) << "\n";
            return kExitOk;
        }
        err << "qse: " << e.what() << "\n";
        return kExitInput;
    }

    std::string command = "qse";
    try {
        if (analyze->parsed()) {
            command = "analyze";
            cmd_analyze(o, o.json, out);
        } else if (certify->parsed()) {
            command = "certify";
            cmd_analyze(o, true, out);
        } else if (family->parsed()) {
            command = "family";
            for (const auto& [key, opt] : param_opts)
                if (opt->count() > 0) o.params[key] = param_values[key];
            cmd_family(o, out);
        } else if (mesh->parsed()) {
            command = "mesh";
            if (o.party == "both") o.party = "bob";
            cmd_mesh(o, out);
        } else if (scan->parsed()) {
            command = "scan";
            cmd_scan(o, out);
        }
    } catch (const Error& e) {
        if (is_numeric_failure(e.code())) {
            err << "qse " << command << ": numeric failure: " << e.what() << "\n";
            return kExitNumeric;
        }
        err << "qse " << command << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "qse " << command << ": internal error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace qse::cli
