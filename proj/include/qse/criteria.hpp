#pragma once

#include "qse/ellipsoid.hpp"
#include "qse/states.hpp"
#include "qse/tangency.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qse {

struct ChshResult {
    double value = 0.0;   ///< sqrt(s1^2 + s2^2), two largest singular values of T
    bool violated = false;
};

/// Horodecki form of the maximal CHSH value; violated iff value > 1 + 1e-12.
ChshResult horodecki_chsh(const Mat3& T);

enum class ShortcutResult { SteerableBySum, RequiresTheorem2 };

std::string_view to_string(ShortcutResult r) noexcept;

/// SteerableBySum iff pP + pG >= 1 - 1e-12. OutOfRange unless both lie in (0, 1).
ShortcutResult two_point_shortcut(double p_p, double p_g);

enum class Verdict { TwoWaySteerable, NotEntangled, InconclusiveByTangency };
enum class VerdictBasis { Thm1, Thm2, PureStateGisin, None };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(VerdictBasis b) noexcept;

struct ShortcutDiagnostic {
    Party steered = Party::Bob;
    double p_p = 0.0;
    double p_g = 0.0;
    ShortcutResult result = ShortcutResult::RequiresTheorem2;
};

struct SteeringClassification {
    bool entangled = false;
    double negativity = 0.0;
    std::optional<SteeringEllipsoid> ellipsoid_alice;   ///< absent for a pure steerer
    std::optional<SteeringEllipsoid> ellipsoid_bob;
    std::optional<TangencyReport> tangency_alice;
    std::optional<TangencyReport> tangency_bob;
    Verdict verdict = Verdict::NotEntangled;
    VerdictBasis basis = VerdictBasis::None;
    double chsh_value = 0.0;
    bool chsh_violated = false;
    double volume_alice = 0.0;
    double volume_bob = 0.0;
    std::vector<ShortcutDiagnostic> shortcuts;
    std::vector<std::string> notes;
};

/// PPT test, both ellipsoids and tangency reports, CHSH and the verdict.
/// A pure marginal (DegenerateSteerer) is recorded in `notes` and the
/// affected party's data is left empty.
SteeringClassification classify_steering(const TwoQubitState& state,
                                         const ToleranceConfig& cfg = {});

} // namespace qse
