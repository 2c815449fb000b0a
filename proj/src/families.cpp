#include "qse/families.hpp"

#include "qse/ellipsoid.hpp"
#include "qse/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qse {

namespace {

struct ParamRange {
    const char* key;
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;
    double fallback;
};

std::vector<ParamRange> ranges(FamilyName name) {
    switch (name) {
    case FamilyName::SingletPlusProduct: return {{"q", 0.0, 1.0, false, true, 0.5}};
    case FamilyName::XState:
        return {{"az", -1.0, 1.0, true, true, 1.0 / 3.0}, {"bz", -1.0, 1.0, true, true, 1.0 / 3.0},
                {"tx", -1.0, 1.0, true, true, 0.25},      {"ty", -1.0, 1.0, true, true, -0.25},
                {"tz", -1.0, 1.0, true, true, 1.0}};
    case FamilyName::TangentXState:
        return {{"az", -1.0, 1.0, true, true, 1.0 / 3.0}, {"bz", -1.0, 1.0, true, true, 1.0 / 3.0},
                {"tx", -1.0, 1.0, true, true, 0.25},      {"ty", -1.0, 1.0, true, true, -0.25}};
    case FamilyName::AsymPure:
        return {{"q", 0.0, 1.0, false, false, 1.0 / 3.0}, {"eta", 0.0, 1.0, false, false, 0.25},
                {"eps", 0.0, 1.0, false, false, 0.2}};
    case FamilyName::OnePureA:
        return {{"x", 0.0, 1.0, false, false, 0.75}, {"y", 0.0, 1.0, false, false, 0.5},
                {"z", 0.0, 1.0, false, false, 0.5}};
    case FamilyName::OnePureB:
        return {{"x", 0.0, 1.0, false, false, 0.5}, {"y", 0.0, 1.0, false, false, 0.5},
                {"z", 0.0, 1.0, false, false, 1.0 / 3.0}};
    case FamilyName::OnePureC:
        return {{"x", 0.0, 1.0, false, false, 0.25}, {"y", 0.0, 1.0, false, false, 1.0 / 3.0},
                {"z", 0.0, 1.0, false, false, 1.0 / 3.0}};
    case FamilyName::TwoPureA:
        return {{"x", 0.0, 1.0, false, false, 0.5}, {"y", 0.0, 1.0, false, false, 1.0 / 3.0}};
    case FamilyName::TwoPureB:
        return {{"x", 0.0, 1.0, false, false, 2.0 / 3.0}, {"y", 0.0, 1.0, false, false, 0.25}};
    case FamilyName::Werner: return {{"w", -1.0 / 3.0, 1.0, false, true, 0.5}};
    }
    return {};
}

bool near(double x, double y) { return std::abs(x - y) <= 1e-15; }

// Bloch vector of the real pure state c0|0> + c1|1> (unnormalized).
Vec3 real_ket(double c0, double c1) {
    const double n2 = c0 * c0 + c1 * c1;
    return Vec3(2.0 * c0 * c1, 0.0, c0 * c0 - c1 * c1) / n2;
}

Mat4c from_real(const Eigen::Matrix4d& m) { return m.cast<cplx>(); }

Eigen::Matrix4d symmetric(const Eigen::Matrix4d& upper) {
    Eigen::Matrix4d m = upper;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) m(i, j) = upper(j, i);
    return m;
}

Mat4c x_state_matrix(double az, double bz, double tx, double ty, double tz) {
    const double lhs_plus = (1.0 + tz) * (1.0 + tz);
    const double rhs_plus = (az + bz) * (az + bz) + (tx - ty) * (tx - ty);
    const double lhs_minus = (1.0 - tz) * (1.0 - tz);
    const double rhs_minus = (az - bz) * (az - bz) + (tx + ty) * (tx + ty);
    const double violation = std::max(rhs_plus - lhs_plus, rhs_minus - lhs_minus);
    if (violation > 1e-12 || tz < -1.0 || tz > 1.0)
        throw Error(ErrorCode::PositivityViolated, "X-state parameters violate positivity",
                    violation);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = 1.0 + az + bz + tz;
    m(1, 1) = 1.0 + az - bz - tz;
    m(2, 2) = 1.0 - az + bz - tz;
    m(3, 3) = 1.0 - az - bz + tz;
    m(0, 3) = m(3, 0) = tx - ty;
    m(1, 2) = m(2, 1) = tx + ty;
    return from_real(m / 4.0);
}

Mat4c family_matrix(FamilyName name, const std::map<std::string, double>& p) {
    const auto P = [&](const char* k) { return p.at(k); };
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    switch (name) {
    case FamilyName::SingletPlusProduct: {
        const double q = P("q");
        m(1, 1) = m(2, 2) = q / 2.0;
        m(1, 2) = m(2, 1) = -q / 2.0;
        m(0, 0) += (1.0 - q) / 2.0;
        m(1, 1) += (1.0 - q) / 2.0;
        return from_real(m);
    }
    case FamilyName::XState:
        return x_state_matrix(P("az"), P("bz"), P("tx"), P("ty"), P("tz"));
    case FamilyName::TangentXState:
        return x_state_matrix(P("az"), P("bz"), P("tx"), P("ty"), 1.0 + P("az") - P("bz"));
    case FamilyName::AsymPure: {
        const double q = P("q"), eta = P("eta"), eps = P("eps");
        const double c0 = std::sqrt(1.0 - eps), c3 = std::sqrt(eps);
        m(0, 0) = q * c0 * c0 + (1.0 - q) * (1.0 - eta);
        m(0, 3) = m(3, 0) = q * c0 * c3;
        m(3, 3) = q * c3 * c3;
        m(2, 2) = (1.0 - q) * eta;
        return from_real(m);
    }
    case FamilyName::OnePureA: {
        const double x = P("x"), y = P("y"), z = P("z");
        const double X = std::sqrt(x * (1 - x)), Y = std::sqrt(2 * y / 3), Z = std::sqrt(z * (1 - z));
        const double K = x + y - 2 * x * y;
        m << K * (1 - z), X * (1 - 2 * y) * (1 - z), X * Y * Z, (1 - x) * Y * Z,
             0, (1 - K) * (1 - z), -x * Y * Z, -X * Y * Z,
             0, 0, x * z, X * z,
             0, 0, 0, (1 - x) * z;
        return from_real(symmetric(m));
    }
    case FamilyName::OnePureB: {
        const double x = P("x"), y = P("y"), z = P("z");
        const double X = std::sqrt(x * (1 - x)), Y = std::sqrt(y * (1 - y));
        const double Zp = (std::sqrt(z) + std::sqrt(2 - 2 * z)) / 2;
        const double Zm = (std::sqrt(z) - std::sqrt(2 - 2 * z)) / 2;
        m << x * y, -X * y * Zp, 0, std::sqrt(x) * Y * Zm,
             0, y - x * y, 0, 0,
             0, 0, 0, 0,
             0, 0, 0, 1 - y;
        return from_real(symmetric(m));
    }
    case FamilyName::OnePureC: {
        const double x = P("x"), y = P("y"), z = P("z");
        const double X = std::sqrt(x * (1 - x)), Z = std::sqrt(z * (1 - z)), sy = std::sqrt(y);
        m << (1 - z) * (1 + x - 2 * X * sy), (1 - z) * ((2 * x - 1) * sy + X), (2 * x - 1) * Z, Z * (2 * X - sy),
             0, (z - 1) * (x - 2 - 2 * X * sy), Z * (2 * X + sy), (1 - 2 * x) * Z,
             0, 0, z * (2 * X * sy + x + 1), z * ((1 - 2 * x) * sy + X),
             0, 0, 0, z * (2 - x - 2 * X * sy);
        return from_real(symmetric(m) / 3.0);
    }
    case FamilyName::TwoPureA: {
        const double x = P("x"), y = P("y");
        const double X = std::sqrt(x * (1 - x)), Y = std::sqrt(y * (1 - y)), r2 = std::sqrt(2.0);
        m << 0.5 * (r2 * X - 1) * (y - 1), (2 * x - 1) * (1 - y) / (2 * r2), 0.5 * X * Y, 0.5 * (1 - x) * Y,
             0, 0.5 * (r2 * X + 1) * (1 - y), -0.5 * x * Y, -0.5 * X * Y,
             0, 0, x * y, X * y,
             0, 0, 0, (1 - x) * y;
        return from_real(symmetric(m));
    }
    case FamilyName::TwoPureB: {
        const double x = P("x"), y = P("y");
        const double X = std::sqrt(x * (1 - x)), Y = std::sqrt(y * (1 - y)) / 6;
        const double K = (1 - y) / 6, r6 = std::sqrt(6.0);
        m << 2 * K * (1 + x - r6 * X), K * (2 * r6 * x + 2 * X - r6), (2 - 4 * x - r6 * X) * Y, (r6 * x - 4 * X) * Y,
             0, 2 * K * (2 - x + r6 * X), (r6 * x - 4 * X - r6) * Y, (4 * x + r6 * X - 2) * Y,
             0, 0, (1 + x) * y / 3, X * y / 3,
             0, 0, 0, (2 - x) * y / 3;
        return from_real(symmetric(m));
    }
    case FamilyName::Werner: {
        const double w = P("w");
        m = Eigen::Matrix4d::Identity() * (1.0 - w) / 4.0;
        m(1, 1) += w / 2.0;
        m(2, 2) += w / 2.0;
        m(1, 2) = m(2, 1) = -w / 2.0;
        return from_real(m);
    }
    }
    throw Error(ErrorCode::InvalidInput, "unknown family");
}

FamilyExpectation expectation(FamilyName name, const std::map<std::string, double>& p,
                              bool at_figure) {
    FamilyExpectation e;
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    const Vec3 up = Vec3::UnitZ(), down = -Vec3::UnitZ();
    switch (name) {
    case FamilyName::SingletPlusProduct:
        if (near(p.at("q"), 1.0)) {
            e.count = CountClass::Infinite;
            break;
        }
        e.count = CountClass::One;
        e.points_alice = {up};
        e.points_bob = {up};
        if (at_figure) {
            e.semiaxes_bob = Vec3(2.0 / 3.0, 1.0 / r3, 1.0 / r3);
            e.center_bob = Vec3(0, 0, 1.0 / 3.0);
            e.semiaxes_alice = Vec3::Constant(0.5);
            e.center_alice = Vec3(0, 0, 0.5);
        }
        break;
    case FamilyName::XState:
    case FamilyName::TangentXState: {
        const double az = p.at("az"), bz = p.at("bz");
        const double tz = name == FamilyName::TangentXState ? 1.0 + az - bz : p.at("tz");
        if (near(tz, 1.0) && near(az, bz)) {
            e.count = CountClass::Two;
            e.points_alice = {up, down};
            e.points_bob = {up, down};
        } else if (near(tz, 1.0 + az - bz)) {
            e.points_alice = {down};
            e.points_bob = {up};
        } else if (near(tz, 1.0 - az + bz)) {
            e.points_alice = {up};
            e.points_bob = {down};
        }
        if (at_figure) {
            const Vec3 semi(1.0, 3.0 / (8.0 * r2), 3.0 / (8.0 * r2));
            e.semiaxes_alice = e.semiaxes_bob = semi;
            e.center_alice = e.center_bob = Vec3::Zero();
        }
        break;
    }
    case FamilyName::AsymPure:
        e.count = CountClass::One;
        e.points_alice = {down};
        e.points_bob = {up};
        if (at_figure) {
            e.semiaxes_alice = Vec3(23.0 / 28.0, std::sqrt(2.0 / 7.0), std::sqrt(2.0 / 7.0));
            e.semiaxes_bob = Vec3(4.0 / std::sqrt(161.0), 4.0 / std::sqrt(161.0), 2.0 / 7.0);
        }
        break;
    case FamilyName::OnePureA: {
        const double x = p.at("x");
        e.count = CountClass::One;
        e.points_alice = {up};
        e.points_bob = {real_ket(std::sqrt(x), std::sqrt(1 - x))};
        if (at_figure) {
            e.semiaxes_alice = Vec3::Constant(2.0 / 3.0);
            e.semiaxes_bob = Vec3(1.0 / r3, 1.0 / r3, 0.5);
        }
        break;
    }
    case FamilyName::OnePureB:
        e.count = CountClass::One;
        e.points_alice = {up};
        e.points_bob = {down};
        break;
    case FamilyName::OnePureC: {
        const double x = p.at("x"), z = p.at("z");
        e.count = CountClass::One;
        e.points_alice = {real_ket(std::sqrt(1 - z), -std::sqrt(z))};
        e.points_bob = {real_ket(std::sqrt(x), std::sqrt(1 - x))};
        break;
    }
    case FamilyName::TwoPureA: {
        const double y = p.at("y");
        e.count = CountClass::Two;
        e.points_alice = {up, real_ket(std::sqrt(1 - y), std::sqrt(2 * y))};
        if (near(p.at("x"), 0.5))
            e.points_bob = {real_ket(1, 1), real_ket(r2 - 1, r2 + 1)};
        break;
    }
    case FamilyName::TwoPureB: {
        const double x = p.at("x"), y = p.at("y");
        e.count = CountClass::Two;
        e.points_alice = {real_ket(std::sqrt(1 - y), std::sqrt(y)),
                          real_ket(-std::sqrt(1 - y), 2 * std::sqrt(y))};
        e.points_bob = {real_ket(std::sqrt(x), std::sqrt(1 - x)),
                        real_ket(std::sqrt(3 * (1 - x)) - std::sqrt(2 * x),
                                 -(std::sqrt(2 * (1 - x)) + std::sqrt(3 * x)))};
        break;
    }
    case FamilyName::Werner: {
        const double w = p.at("w");
        e.count = near(w, 1.0) ? CountClass::Infinite : CountClass::Zero;
        e.semiaxes_alice = e.semiaxes_bob = Vec3::Constant(std::abs(w));
        e.center_alice = e.center_bob = Vec3::Zero();
        break;
    }
    }
    return e;
}

std::string fmt_vec(const Vec3& v) {
    std::ostringstream os;
    os.precision(10);
    os << "(" << v(0) << ", " << v(1) << ", " << v(2) << ")";
    return os.str();
}

} // namespace

std::string_view to_string(FamilyName name) noexcept {
    switch (name) {
    case FamilyName::SingletPlusProduct: return "singlet-plus-product";
    case FamilyName::XState: return "x-state";
    case FamilyName::TangentXState: return "tangent-x";
    case FamilyName::AsymPure: return "asym-pure";
    case FamilyName::OnePureA: return "one-pure-a";
    case FamilyName::OnePureB: return "one-pure-b";
    case FamilyName::OnePureC: return "one-pure-c";
    case FamilyName::TwoPureA: return "two-pure-a";
    case FamilyName::TwoPureB: return "two-pure-b";
    case FamilyName::Werner: return "werner";
    }
    return "unknown";
}

FamilyName family_from_string(std::string_view name) {
    for (FamilyName f : kAllFamilies)
        if (to_string(f) == name) return f;
    throw Error(ErrorCode::InvalidInput, "unknown family '" + std::string(name) + "'");
}

std::vector<std::string> family_parameters(FamilyName name) {
    std::vector<std::string> keys;
    for (const auto& r : ranges(name)) keys.emplace_back(r.key);
    return keys;
}

FamilySpec make_family(FamilyName name, const std::map<std::string, double>& overrides) {
    FamilySpec spec;
    spec.name = name;
    for (const auto& r : ranges(name)) spec.params[r.key] = r.fallback;
    bool at_figure = true;
    for (const auto& [key, value] : overrides) {
        const auto it = spec.params.find(key);
        if (it == spec.params.end())
            throw Error(ErrorCode::InvalidInput, "family " + std::string(to_string(name)) +
                                                     " has no parameter '" + key + "'");
        if (!near(it->second, value)) at_figure = false;
        it->second = value;
    }
    spec.expected = expectation(name, spec.params, at_figure);
    return spec;
}

TwoQubitState generate(const FamilySpec& spec) {
    for (const auto& r : ranges(spec.name)) {
        const auto it = spec.params.find(r.key);
        if (it == spec.params.end())
            throw Error(ErrorCode::InvalidInput, std::string("missing parameter ") + r.key);
        const double v = it->second;
        const bool ok = std::isfinite(v) && (r.lo_closed ? v >= r.lo : v > r.lo) &&
                        (r.hi_closed ? v <= r.hi : v < r.hi);
        if (!ok)
            throw Error(ErrorCode::ParamOutOfRange,
                        std::string(to_string(spec.name)) + ": parameter " + r.key +
                            " out of range",
                        v);
    }
    return validate_state(family_matrix(spec.name, spec.params));
}

TwoQubitState tangent_x_state(double a_z, double b_z, double t_x, double t_y) {
    return generate(make_family(FamilyName::TangentXState,
                                {{"az", a_z}, {"bz", b_z}, {"tx", t_x}, {"ty", t_y}}));
}

bool ExpectationReport::all_matched() const {
    return std::all_of(items.begin(), items.end(), [](const ExpectationItem& i) { return i.matched; });
}

ExpectationReport expected_check(const TwoQubitState& state, const FamilySpec& spec,
                                 const ToleranceConfig& cfg) {
    ExpectationReport rep;
    if (!spec.expected) return rep;
    const FamilyExpectation& e = *spec.expected;
    const PauliDecomposition d = pauli_decompose(state);

    const auto add = [&](std::string label, double dev, double tol, std::string detail) {
        rep.items.push_back({std::move(label), dev <= tol, dev, std::move(detail)});
    };

    for (Party party : {Party::Alice, Party::Bob}) {
        const std::string who(to_string(party));
        const auto& semi = party == Party::Alice ? e.semiaxes_alice : e.semiaxes_bob;
        const auto& center = party == Party::Alice ? e.center_alice : e.center_bob;
        const auto& points = party == Party::Alice ? e.points_alice : e.points_bob;

        if (semi || center) {
            try {
                const SteeringEllipsoid el = compute_ellipsoid(d, party);
                if (semi)
                    add(who + " semiaxes", (el.semiaxes - *semi).cwiseAbs().maxCoeff(), 1e-9,
                        "computed " + fmt_vec(el.semiaxes) + ", expected " + fmt_vec(*semi));
                if (center)
                    add(who + " center", (el.center - *center).cwiseAbs().maxCoeff(), 1e-9,
                        "computed " + fmt_vec(el.center) + ", expected " + fmt_vec(*center));
            } catch (const Error& err) {
                rep.items.push_back({who + " ellipsoid", false, 0.0, err.what()});
            }
        }
        if (e.count || !points.empty()) {
            try {
                const TangencyReport t = find_tangency(d, party, cfg);
                if (e.count) {
                    const bool ok = t.count == *e.count;
                    rep.items.push_back({who + " count", ok, ok ? 0.0 : 1.0,
                                         "computed " + std::string(to_string(t.count)) +
                                             ", expected " + std::string(to_string(*e.count))});
                }
                for (const Vec3& want : points) {
                    double best = std::numeric_limits<double>::infinity();
                    for (const auto& tp : t.points)
                        best = std::min(best, (tp.bloch_point - want).norm());
                    add(who + " point " + fmt_vec(want), best, 1e-7,
                        t.points.empty() ? "no tangency points" : "closest distance");
                }
            } catch (const Error& err) {
                rep.items.push_back({who + " tangency", false, 0.0, err.what()});
            }
        }
    }
    return rep;
}

} // namespace qse
