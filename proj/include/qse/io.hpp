#pragma once

#include "qse/criteria.hpp"
#include "qse/ellipsoid.hpp"
#include "qse/states.hpp"
#include "qse/tangency.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace qse::io {

inline constexpr std::string_view kToolName = "qse";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct StateMeta {
    std::string family;
    std::map<std::string, double> params;
};

enum class StateForm { Matrix, Pauli };

struct StateFile {
    TwoQubitState state;
    std::optional<StateMeta> meta;
    StateForm form = StateForm::Matrix;   ///< form used by format_state()
};

/// %.17g; non-finite values become "null".
std::string format_number(double x);

/// Accepts {"matrix": 4x4 of {"re", "im"}} or {"pauli": {"a", "b", "T"}} with
/// an optional "meta" block, or a report document carrying such an object
/// under "state". A matrix is decomposed once; Pauli coefficients are kept
/// as written. Reports embed the Pauli form, so a matrix file and the Pauli
/// file of its decomposition produce the same report bytes.
/// InvalidInput for malformed documents; validation errors propagate.
StateFile parse_state(std::string_view text);
StateFile read_state_file(const std::filesystem::path& path);

/// Writes file.form with 17 significant digits and a trailing newline.
std::string format_state(const StateFile& file);

enum class PartyFilter { Alice, Bob, Both };

/// "alice", "bob" or "both"; InvalidInput otherwise.
PartyFilter parse_party_filter(std::string_view s);

std::string format_report_json(const StateFile& file, const SteeringClassification& c,
                               const ToleranceConfig& cfg, PartyFilter parties);
std::string format_report_text(const StateFile& file, const SteeringClassification& c,
                               const ToleranceConfig& cfg, PartyFilter parties);

enum class MeshFormat { Csv, Tri };

/// Surface samples c + Q^{1/2} d(theta_i, phi_j), theta_i = pi i/(samples-1),
/// phi_j = 2 pi j/samples, for the ellipsoid and then the unit sphere.
/// DegenerateEllipsoid unless Full; InvalidInput when samples < 2.
std::string format_mesh(const SteeringEllipsoid& ellipsoid, int samples, MeshFormat format);

} // namespace qse::io
