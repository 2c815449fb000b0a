#pragma once

#include "qse/states.hpp"
#include "qse/tangency.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qse {

enum class FamilyName {
    SingletPlusProduct,
    XState,
    TangentXState,
    AsymPure,
    OnePureA,
    OnePureB,
    OnePureC,
    TwoPureA,
    TwoPureB,
    Werner,
};

inline constexpr FamilyName kAllFamilies[] = {
    FamilyName::SingletPlusProduct, FamilyName::XState,   FamilyName::TangentXState,
    FamilyName::AsymPure,           FamilyName::OnePureA, FamilyName::OnePureB,
    FamilyName::OnePureC,           FamilyName::TwoPureA, FamilyName::TwoPureB,
    FamilyName::Werner,
};

/// CLI name, e.g. "singlet-plus-product", "tangent-x", "one-pure-a".
std::string_view to_string(FamilyName name) noexcept;
/// InvalidInput for unknown names.
FamilyName family_from_string(std::string_view name);
/// Parameter keys in CLI order.
std::vector<std::string> family_parameters(FamilyName name);

/// Known geometry of a family member. Points are Bloch vectors of the pure
/// steered states; every listed point must appear in the computed report.
struct FamilyExpectation {
    std::optional<CountClass> count;   ///< same on both sides
    std::optional<Vec3> semiaxes_alice;
    std::optional<Vec3> semiaxes_bob;
    std::optional<Vec3> center_alice;
    std::optional<Vec3> center_bob;
    std::vector<Vec3> points_alice;
    std::vector<Vec3> points_bob;
};

struct FamilySpec {
    FamilyName name = FamilyName::SingletPlusProduct;
    std::map<std::string, double> params;
    std::optional<FamilyExpectation> expected;
};

/// Figure parameters for `name`, overridden by `overrides`, with the matching
/// expectations attached. InvalidInput for keys the family does not take.
FamilySpec make_family(FamilyName name, const std::map<std::string, double>& overrides = {});

/// The family's explicit density matrix. ParamOutOfRange outside the open
/// parameter intervals; PositivityViolated for X-states breaking
/// (1 +- t_z)^2 >= (a_z +- b_z)^2 + (t_x -+ t_y)^2.
TwoQubitState generate(const FamilySpec& spec);

/// X-state with t_z = 1 + a_z - b_z (Alice tangent at |1>, Bob at |0>).
TwoQubitState tangent_x_state(double a_z, double b_z, double t_x, double t_y);

struct ExpectationItem {
    std::string label;
    bool matched = false;
    double deviation = 0.0;
    std::string detail;
};

struct ExpectationReport {
    std::vector<ExpectationItem> items;
    bool all_matched() const;
};

/// Compares computed geometry against spec.expected: semiaxes and centers to
/// 1e-9, tangency points to 1e-7, counts exactly. Never throws on mismatch.
ExpectationReport expected_check(const TwoQubitState& state, const FamilySpec& spec,
                                 const ToleranceConfig& cfg = {});

} // namespace qse
