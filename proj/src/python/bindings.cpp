#include "qse/criteria.hpp"
#include "qse/error.hpp"
#include "qse/families.hpp"
#include "qse/io.hpp"
#include "qse/proofgeom.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qse;

namespace {

PauliDecomposition make_pauli(const Vec3& a, const Vec3& b, const Mat3& T) { return {a, b, T}; }

io::StateFile as_file(const TwoQubitState& s) { return {s, std::nullopt, io::StateForm::Matrix}; }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-qubit steering ellipsoids, tangency points and steering verdicts.";

    static py::exception<Error> qse_error(m, "QseError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = qse_error;
            py::object inst = exc(std::string(to_string(e.code())) + ": " + e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            inst.attr("magnitude") = e.magnitude();
            PyErr_SetObject(qse_error.ptr(), inst.ptr());
        }
    });

    py::enum_<Party>(m, "Party").value("Alice", Party::Alice).value("Bob", Party::Bob);
    py::enum_<Degeneracy>(m, "Degeneracy")
        .value("Full", Degeneracy::Full)
        .value("Pancake", Degeneracy::Pancake)
        .value("Needle", Degeneracy::Needle)
        .value("Point", Degeneracy::Point);
    py::enum_<CountClass>(m, "CountClass")
        .value("Zero", CountClass::Zero)
        .value("One", CountClass::One)
        .value("Two", CountClass::Two)
        .value("Infinite", CountClass::Infinite);
    py::enum_<ArgmaxKind>(m, "ArgmaxKind")
        .value("Point", ArgmaxKind::Point)
        .value("TwoPoints", ArgmaxKind::TwoPoints)
        .value("Circle", ArgmaxKind::Circle)
        .value("Sphere", ArgmaxKind::Sphere);
    py::enum_<Verdict>(m, "Verdict")
        .value("TwoWaySteerable", Verdict::TwoWaySteerable)
        .value("NotEntangled", Verdict::NotEntangled)
        .value("InconclusiveByTangency", Verdict::InconclusiveByTangency);
    py::enum_<VerdictBasis>(m, "VerdictBasis")
        .value("Thm1", VerdictBasis::Thm1)
        .value("Thm2", VerdictBasis::Thm2)
        .value("PureStateGisin", VerdictBasis::PureStateGisin)
        .value("None_", VerdictBasis::None);

    py::class_<PauliDecomposition>(m, "PauliDecomposition")
        .def(py::init(&make_pauli), py::arg("a"), py::arg("b"), py::arg("T"))
        .def_readonly("a", &PauliDecomposition::a)
        .def_readonly("b", &PauliDecomposition::b)
        .def_readonly("T", &PauliDecomposition::T)
        .def("purity", &PauliDecomposition::purity)
        .def("swapped", &PauliDecomposition::swapped);

    py::class_<TwoQubitState>(m, "TwoQubitState")
        .def_property_readonly("matrix", &TwoQubitState::matrix)
        .def_property_readonly("pauli", &TwoQubitState::pauli)
        .def("__repr__", [](const TwoQubitState& s) {
            return "<TwoQubitState purity=" + std::to_string(s.pauli().purity()) + ">";
        });

    m.def("validate_state", &validate_state, py::arg("matrix"));
    m.def("state_from_pauli", [](const Vec3& a, const Vec3& b, const Mat3& T) {
        return state_from_pauli(make_pauli(a, b, T));
    }, py::arg("a"), py::arg("b"), py::arg("T"));
    m.def("random_ginibre_state", [](std::uint64_t seed, int rank) {
        std::mt19937_64 rng(seed);
        return random_ginibre_state(rng, rank);
    }, py::arg("seed"), py::arg("rank") = 4);
    m.def("global_purity", &global_purity);
    m.def("reduced_bloch", [](const TwoQubitState& s, Party p) { return reduced_state(s, p).bloch(); });

    py::class_<PptResult>(m, "PptResult")
        .def_readonly("entangled", &PptResult::entangled)
        .def_readonly("negativity", &PptResult::negativity)
        .def_readonly("min_eigenvalue", &PptResult::min_eigenvalue);
    m.def("is_entangled_ppt", &is_entangled_ppt);

    py::class_<SteeringEllipsoid>(m, "SteeringEllipsoid")
        .def_readonly("party", &SteeringEllipsoid::party)
        .def_readonly("center", &SteeringEllipsoid::center)
        .def_readonly("Q", &SteeringEllipsoid::Q)
        .def_readonly("semiaxes", &SteeringEllipsoid::semiaxes)
        .def_readonly("orientation", &SteeringEllipsoid::orientation)
        .def_readonly("gamma_sq", &SteeringEllipsoid::gamma_sq)
        .def_readonly("degeneracy", &SteeringEllipsoid::degeneracy)
        .def("surface_residual", &SteeringEllipsoid::surface_residual)
        .def("support", &SteeringEllipsoid::support);
    m.def("compute_ellipsoid", [](const TwoQubitState& s, Party p) {
        return compute_ellipsoid(s.pauli(), p);
    }, py::arg("state"), py::arg("party"));
    m.def("ellipsoid_volume", &ellipsoid_volume);
    m.def("surface_point", &surface_point);

    py::class_<ToleranceConfig>(m, "ToleranceConfig")
        .def(py::init<>())
        .def_readwrite("tangency_tol", &ToleranceConfig::tangency_tol)
        .def_readwrite("purity_tol", &ToleranceConfig::purity_tol)
        .def_readwrite("cluster_angle", &ToleranceConfig::cluster_angle);

    py::class_<TangencyPoint>(m, "TangencyPoint")
        .def_readonly("bloch_point", &TangencyPoint::bloch_point)
        .def_readonly("direction", &TangencyPoint::direction)
        .def_readonly("outcome_sign", &TangencyPoint::outcome_sign)
        .def_readonly("probability", &TangencyPoint::probability)
        .def_readonly("residual", &TangencyPoint::residual)
        .def_property_readonly("effect_bloch", &TangencyPoint::effect_bloch);
    py::class_<TangencyReport>(m, "TangencyReport")
        .def_readonly("steered", &TangencyReport::steered)
        .def_readonly("count", &TangencyReport::count)
        .def_readonly("points", &TangencyReport::points)
        .def_readonly("max_g", &TangencyReport::max_g)
        .def_readonly("purity", &TangencyReport::purity);
    m.def("find_tangency", [](const TwoQubitState& s, Party p, const ToleranceConfig& cfg) {
        return find_tangency(s.pauli(), p, cfg);
    }, py::arg("state"), py::arg("steered"), py::arg("config") = ToleranceConfig{});

    py::class_<ChshResult>(m, "ChshResult")
        .def_readonly("value", &ChshResult::value)
        .def_readonly("violated", &ChshResult::violated);
    m.def("horodecki_chsh", &horodecki_chsh, py::arg("T"));

    py::class_<SteeringClassification>(m, "SteeringClassification")
        .def_readonly("entangled", &SteeringClassification::entangled)
        .def_readonly("negativity", &SteeringClassification::negativity)
        .def_readonly("ellipsoid_alice", &SteeringClassification::ellipsoid_alice)
        .def_readonly("ellipsoid_bob", &SteeringClassification::ellipsoid_bob)
        .def_readonly("tangency_alice", &SteeringClassification::tangency_alice)
        .def_readonly("tangency_bob", &SteeringClassification::tangency_bob)
        .def_readonly("verdict", &SteeringClassification::verdict)
        .def_readonly("basis", &SteeringClassification::basis)
        .def_readonly("chsh_value", &SteeringClassification::chsh_value)
        .def_readonly("chsh_violated", &SteeringClassification::chsh_violated)
        .def_readonly("notes", &SteeringClassification::notes);
    m.def("classify_steering", &classify_steering, py::arg("state"), py::arg("config") = ToleranceConfig{});

    m.def("families", [] {
        std::vector<std::string> out;
        for (FamilyName f : kAllFamilies) out.emplace_back(to_string(f));
        return out;
    });
    m.def("family", [](const std::string& name, const std::map<std::string, double>& params) {
        return generate(make_family(family_from_string(name), params));
    }, py::arg("name"), py::arg("params") = std::map<std::string, double>{});

    m.def("lhs_lower_bound", &proof::lhs_lower_bound, py::arg("u"), py::arg("v"), py::arg("theta"),
          py::arg("R"), py::arg("p_p"));

    m.def("parse_state", [](const std::string& text) { return io::parse_state(text).state; });
    m.def("format_state", [](const TwoQubitState& s) { return io::format_state(as_file(s)); });
    m.def("report_json", [](const TwoQubitState& s, const ToleranceConfig& cfg) {
        return io::format_report_json(as_file(s), classify_steering(s, cfg), cfg, io::PartyFilter::Both);
    }, py::arg("state"), py::arg("config") = ToleranceConfig{});
}
