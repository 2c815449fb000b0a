#include "qse/criteria.hpp"

#include "qse/error.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace qse {

ChshResult horodecki_chsh(const Mat3& T) {
    Eigen::JacobiSVD<Mat3> svd(T);
    const Vec3 s = svd.singularValues();   // descending
    ChshResult r;
    r.value = std::sqrt(s(0) * s(0) + s(1) * s(1));
    r.violated = r.value > 1.0 + 1e-12;
    return r;
}

std::string_view to_string(ShortcutResult r) noexcept {
    return r == ShortcutResult::SteerableBySum ? "SteerableBySum" : "RequiresTheorem2";
}

ShortcutResult two_point_shortcut(double p_p, double p_g) {
    const auto inside = [](double p) { return p > 0.0 && p < 1.0; };
    if (!inside(p_p) || !inside(p_g))
        throw Error(ErrorCode::OutOfRange, "two_point_shortcut needs probabilities in (0, 1)",
                    inside(p_p) ? p_g : p_p);
    return p_p + p_g >= 1.0 - 1e-12 ? ShortcutResult::SteerableBySum
                                     : ShortcutResult::RequiresTheorem2;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::TwoWaySteerable: return "TwoWaySteerable";
    case Verdict::NotEntangled: return "NotEntangled";
    case Verdict::InconclusiveByTangency: return "InconclusiveByTangency";
    }
    return "Unknown";
}

std::string_view to_string(VerdictBasis b) noexcept {
    switch (b) {
    case VerdictBasis::Thm1: return "Thm1";
    case VerdictBasis::Thm2: return "Thm2";
    case VerdictBasis::PureStateGisin: return "PureStateGisin";
    case VerdictBasis::None: return "None";
    }
    return "Unknown";
}

SteeringClassification classify_steering(const TwoQubitState& state, const ToleranceConfig& cfg) {
    SteeringClassification c;
    const PauliDecomposition d = pauli_decompose(state);

    const PptResult ppt = is_entangled_ppt(state);
    c.entangled = ppt.entangled;
    c.negativity = ppt.negativity;

    const ChshResult chsh = horodecki_chsh(d.T);
    c.chsh_value = chsh.value;
    c.chsh_violated = chsh.violated;

    for (Party party : {Party::Alice, Party::Bob}) {
        auto& ellipsoid = party == Party::Alice ? c.ellipsoid_alice : c.ellipsoid_bob;
        auto& tangency = party == Party::Alice ? c.tangency_alice : c.tangency_bob;
        double& volume = party == Party::Alice ? c.volume_alice : c.volume_bob;
        try {
            ellipsoid = compute_ellipsoid(d, party);
            volume = ellipsoid_volume(*ellipsoid);
            tangency = find_tangency(d, party, cfg);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSteerer) throw;
            ellipsoid.reset();
            tangency.reset();
            c.notes.push_back("DegenerateSteerer: " + std::string(to_string(other(party))) +
                              " has a pure marginal, no ellipsoid for " +
                              std::string(to_string(party)));
        }
        if (tangency && tangency->count == CountClass::Two) {
            ShortcutDiagnostic diag;
            diag.steered = party;
            diag.p_p = tangency->points[0].probability;
            diag.p_g = tangency->points[1].probability;
            diag.result = two_point_shortcut(diag.p_p, diag.p_g);
            c.shortcuts.push_back(diag);
        }
    }

    if (!c.entangled) {
        c.verdict = Verdict::NotEntangled;
        c.basis = VerdictBasis::None;
        return c;
    }
    if (!c.tangency_alice || !c.tangency_bob) {
        c.verdict = Verdict::InconclusiveByTangency;
        return c;
    }
    const CountClass na = c.tangency_alice->count;
    const CountClass nb = c.tangency_bob->count;
    if (na != nb)
        c.notes.push_back("tangency counts differ: alice " + std::string(to_string(na)) +
                          ", bob " + std::string(to_string(nb)));
    if (na == CountClass::Zero || nb == CountClass::Zero) {
        c.verdict = Verdict::InconclusiveByTangency;
        c.basis = VerdictBasis::None;
        return c;
    }
    c.verdict = Verdict::TwoWaySteerable;
    const auto rank = [](CountClass n) {
        return n == CountClass::Infinite ? 3 : count_value(n);
    };
    switch (std::min(rank(na), rank(nb))) {
    case 1: c.basis = VerdictBasis::Thm1; break;
    case 2: c.basis = VerdictBasis::Thm2; break;
    default: c.basis = VerdictBasis::PureStateGisin; break;
    }
    return c;
}

} // namespace qse
