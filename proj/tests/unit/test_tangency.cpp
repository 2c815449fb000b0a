#include "doctest.h"
#include "support.hpp"

#include "qse/error.hpp"
#include "qse/families.hpp"
#include "qse/tangency.hpp"

#include <cmath>

using namespace qse;
using namespace qse::test;

namespace {

PauliDecomposition decomp(const Mat4c& m) { return pauli_decompose(validate_state(m)); }

SphereQuadratic quad(const Mat3& M, const Vec3& w, double c0 = 0.0) {
    SphereQuadratic q;
    q.M = M;
    q.w = w;
    q.c0 = c0;
    return q;
}

Mat3 diag(double x, double y, double z) { return Vec3(x, y, z).asDiagonal().toDenseMatrix(); }

void check_report(const TangencyReport& r, const PauliDecomposition& d) {
    const std::size_t expected = r.count == CountClass::One ? 1 : r.count == CountClass::Two ? 2 : 0;
    CHECK(r.points.size() == expected);
    const Vec3 steerer = r.steered == Party::Bob ? d.a : d.b;
    const auto e = compute_ellipsoid(d, r.steered);
    for (const auto& p : r.points) {
        CHECK(std::abs(p.bloch_point.norm() - 1.0) <= 1e-7);
        CHECK(p.residual <= 1e-9);
        CHECK(p.probability > 0.0);
        CHECK(p.probability == doctest::Approx((1 + p.effect_bloch().dot(steerer)) / 2).epsilon(1e-12));
        CHECK(std::abs(e.surface_residual(p.bloch_point)) <= 1e-8);
        CHECK(std::abs(p.direction.norm() - 1.0) <= 1e-12);
    }
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidInput;
}

} // namespace

TEST_CASE("build_quadratic examples") {
    const auto q = build_quadratic(decomp(spp_matrix(0.5)), Party::Bob);
    CHECK((q.M - diag(0.25, 0.25, 0)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((q.w - Vec3(0, 0, -0.5)).norm() <= 1e-15);
    CHECK(q.c0 == doctest::Approx(-1.0));
    CHECK(std::abs(q(-Vec3::UnitZ())) <= 1e-15);

    const auto s = build_quadratic(decomp(singlet()), Party::Bob);
    CHECK((s.M - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(s.w.norm() <= 1e-15);
    CHECK(s.c0 == doctest::Approx(-1.0));

    const auto z = build_quadratic(decomp(maximally_mixed()), Party::Alice);
    CHECK(z.M.norm() + z.w.norm() == 0.0);
    CHECK(z(Vec3::UnitX()) == -1.0);
}

TEST_CASE("build_quadratic matches the pure-state condition") {
    std::mt19937_64 rng(seed());
    for (int i = 0; i < 200; ++i) {
        const auto s = random_ginibre_state(rng, 1 + i % 4);
        const auto o = brute_pauli(s.matrix());
        const auto d = pauli_decompose(s);
        for (Party p : {Party::Alice, Party::Bob}) {
            const auto q = build_quadratic(d, p);
            const Vec3 steerer = p == Party::Bob ? o.a : o.b;
            const Vec3 steered = p == Party::Bob ? o.b : o.a;
            const Mat3 Tt = p == Party::Bob ? Mat3(o.T.transpose()) : o.T;
            for (int k = 0; k < 5; ++k) {
                const Vec3 n = random_unit(rng);
                const double g = (steered + Tt * n).squaredNorm() - std::pow(1 + steerer.dot(n), 2);
                CHECK(std::abs(q(n) - g) <= 1e-12);
            }
        }
    }
}

TEST_CASE("build_quadratic rejects a pure steerer") {
    Mat4c p00 = Mat4c::Zero();
    p00(0, 0) = 1;
    CHECK(code_of([&] { build_quadratic(decomp(p00), Party::Bob); }) == ErrorCode::DegenerateSteerer);
}

TEST_CASE("trs_maximize examples") {
    const auto pair = trs_maximize(quad(diag(1, 2, 3), Vec3::Zero()));
    CHECK(pair.max_value == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(pair.kind == ArgmaxKind::TwoPoints);
    CHECK(pair.hard_case);
    REQUIRE(pair.points.size() == 2);
    CHECK((pair.points[0] - Vec3::UnitZ()).norm() <= 1e-12);
    CHECK((pair.points[1] + Vec3::UnitZ()).norm() <= 1e-12);

    const auto lin = trs_maximize(quad(Mat3::Zero(), Vec3(0, 0, 0.5)));
    CHECK(lin.max_value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lin.kind == ArgmaxKind::Point);
    REQUIRE(lin.points.size() == 1);
    CHECK((lin.points[0] - Vec3::UnitZ()).norm() <= 1e-12);
}

TEST_CASE("trs_maximize hard case with an offset") {
    // n0 = (0, 1/2, 0), r^2 = 3/4: maximizers (+-sqrt(3)/2, 1/2, 0), value 7/2.
    const auto sol = trs_maximize(quad(diag(3, 1, 0), Vec3(0, 1, 0)));
    CHECK(sol.max_value == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(sol.kind == ArgmaxKind::TwoPoints);
    CHECK(sol.multiplier == doctest::Approx(3.0).epsilon(1e-12));
    REQUIRE(sol.points.size() == 2);
    CHECK((sol.points[0] - Vec3(std::sqrt(0.75), 0.5, 0)).norm() <= 1e-12);
    CHECK((sol.points[1] - Vec3(-std::sqrt(0.75), 0.5, 0)).norm() <= 1e-12);
}

TEST_CASE("trs_maximize degenerate argmax sets") {
    const auto circle = trs_maximize(quad(diag(1, 1, 0), Vec3::Zero()));
    CHECK(circle.kind == ArgmaxKind::Circle);
    CHECK(circle.circle_radius == doctest::Approx(1.0));
    CHECK(std::abs(circle.circle_u1.cross(circle.circle_u2).dot(Vec3::UnitZ())) == doctest::Approx(1.0));

    const auto shifted = trs_maximize(quad(diag(2, 2, 0), Vec3(0, 0, 1)));
    CHECK(shifted.kind == ArgmaxKind::Circle);
    CHECK((shifted.circle_center - Vec3(0, 0, 0.5)).norm() <= 1e-12);
    CHECK(shifted.circle_radius == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    CHECK(shifted.max_value == doctest::Approx(2 * 0.75 + 1.0).epsilon(1e-12));

    const auto sphere = trs_maximize(quad(Mat3::Identity(), Vec3::Zero(), -1.0));
    CHECK(sphere.kind == ArgmaxKind::Sphere);
    CHECK(sphere.max_value == doctest::Approx(0.0));
    CHECK(to_string(ArgmaxKind::Sphere) == "Sphere");
}

TEST_CASE("trs_maximize agrees with the grid oracle") {
    std::mt19937_64 rng(seed() + 1);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Mat3 G;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) G(r, c) = nd(rng);
        const Mat3 M = (G + G.transpose()) / 2;
        const Vec3 w = Vec3(nd(rng), nd(rng), nd(rng)) * (i % 4 == 0 ? 0.05 : 1.0);
        const auto q = quad(M, w, nd(rng));
        const auto sol = trs_maximize(q);
        const auto oracle = grid_oracle(q);
        CHECK(std::abs(sol.max_value - oracle.value) <= 1e-6);
        REQUIRE(!sol.points.empty());
        for (const Vec3& p : sol.points) CHECK(std::abs(q(p) - sol.max_value) <= 1e-10);
        // Every near-optimal oracle maximum is one of the solver's maximizers.
        for (std::size_t k = 0; k < oracle.points.size(); ++k) {
            if (oracle.values[k] < oracle.value - 1e-6) continue;
            double best = 10;
            for (const Vec3& p : sol.points) best = std::min(best, angle(p, oracle.points[k]));
            CHECK(best <= 1e-3);
        }
    }
}

TEST_CASE("find_tangency examples") {
    const auto dspp = decomp(spp_matrix(0.5));
    const auto r = find_tangency(dspp, Party::Bob);
    CHECK(r.count == CountClass::One);
    REQUIRE(r.points.size() == 1);
    CHECK((r.points[0].bloch_point - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK(r.points[0].probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK((r.points[0].effect_bloch() + Vec3::UnitZ()).norm() <= 1e-7);
    CHECK(r.purity == doctest::Approx(0.5));
    check_report(r, dspp);

    const auto dx = decomp(x_state_matrix(1.0 / 3, 1.0 / 3, 0.25, -0.25, 1.0));
    const auto x = find_tangency(dx, Party::Bob);
    CHECK(x.count == CountClass::Two);
    REQUIRE(x.points.size() == 2);
    CHECK((x.points[0].bloch_point - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK((x.points[1].bloch_point + Vec3::UnitZ()).norm() <= 1e-7);
    CHECK((x.points[0].direction - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK((x.points[1].direction - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK(x.points[0].outcome_sign == -x.points[1].outcome_sign);
    check_report(x, dx);

    const auto w = find_tangency(decomp(werner_matrix(0.5)), Party::Bob);
    CHECK(w.count == CountClass::Zero);
    CHECK(w.points.empty());
    CHECK(w.max_g == doctest::Approx(0.25 - 1.0).epsilon(1e-12));

    const auto s = find_tangency(decomp(singlet()), Party::Alice);
    CHECK(s.count == CountClass::Infinite);
    CHECK(s.points.empty());
    CHECK(count_value(s.count) == -1);
}

TEST_CASE("pure entangled states have infinitely many tangencies") {
    std::mt19937_64 rng(seed() + 2);
    for (int i = 0; i < 50; ++i) {
        const auto s = random_ginibre_state(rng, 1);
        const auto d = pauli_decompose(s);
        CHECK(find_tangency(d, Party::Bob).count == CountClass::Infinite);
        CHECK(find_tangency(d, Party::Alice).count == CountClass::Infinite);
    }
}

TEST_CASE("infinite iff pure") {
    std::mt19937_64 rng(seed() + 3);
    const ToleranceConfig cfg;
    for (int i = 0; i < 200; ++i) {
        const auto s = random_ginibre_state(rng, 1 + i % 4);
        const auto d = pauli_decompose(s);
        const auto r = find_tangency(d, Party::Bob, cfg);
        const bool pure = global_purity(s) >= 1 - cfg.purity_tol;
        CHECK((r.count == CountClass::Infinite) == pure);
    }
}

TEST_CASE("physicality of the tangency quadratic") {
    std::mt19937_64 rng(seed() + 4);
    const auto grid = lattice(20000);
    for (int i = 0; i < 60; ++i) {
        const auto d = pauli_decompose(random_ginibre_state(rng, 1 + i % 4));
        for (Party p : {Party::Alice, Party::Bob}) {
            const auto q = build_quadratic(d, p);
            double worst = -1e300;
            for (const Vec3& n : grid) worst = std::max(worst, q(n));
            CHECK(worst <= 1e-9);
        }
    }
}

TEST_CASE("count symmetry and report invariants on random states") {
    std::mt19937_64 rng(seed() + 5);
    int n2 = 0;
    for (int i = 0; i < 200; ++i) {
        const auto s = random_ginibre_state(rng, 1 + i % 4);
        if (!is_entangled_ppt(s).entangled) continue;
        const auto d = pauli_decompose(s);
        const auto a = find_tangency(d, Party::Alice);
        const auto b = find_tangency(d, Party::Bob);
        CHECK(a.count == b.count);
        if (a.count != CountClass::Infinite) {
            check_report(a, d);
            check_report(b, d);
        }
        n2 += b.count == CountClass::Two;
    }
    CHECK(n2 > 0);
}

TEST_CASE("tolerance config validation") {
    ToleranceConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tangency_tol = 1e-5;
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidInput);
    cfg = {};
    cfg.cluster_angle = 0;
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidInput);
}

TEST_CASE("correspondence for the one-pure family") {
    const auto spec = make_family(FamilyName::OnePureA, {{"x", 0.75}, {"y", 0.5}, {"z", 0.5}});
    const auto s = generate(spec);
    const auto bob = find_tangency(pauli_decompose(s), Party::Bob);
    REQUIRE(bob.count == CountClass::One);
    const auto pairs = correspondence_map(s, bob);
    REQUIRE(pairs.size() == 1);
    const auto& p = pairs[0];
    CHECK((p.bob_pure.bloch() - Vec3(std::sqrt(3.0) / 2, 0, 0.5)).norm() <= 1e-7);
    CHECK((p.alice_effect - projector(-Vec3::UnitZ())).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((p.alice_pure.bloch() - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK((p.bob_effect - projector(Vec3(-std::sqrt(3.0) / 2, 0, -0.5))).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(p.residual_alice <= 1e-8);
    CHECK(p.residual_bob <= 1e-8);
    CHECK(p.fidelity_alice >= 1 - 1e-8);
    CHECK(p.fidelity_bob >= 1 - 1e-8);
}

TEST_CASE("correspondence for spp") {
    const auto s = validate_state(spp_matrix(0.5));
    const auto pairs = correspondence_map(s, find_tangency(pauli_decompose(s), Party::Bob));
    REQUIRE(pairs.size() == 1);
    CHECK((pairs[0].bob_pure.bloch() - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK((pairs[0].alice_pure.bloch() - Vec3::UnitZ()).norm() <= 1e-7);
    CHECK((pairs[0].alice_effect - projector(-Vec3::UnitZ())).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((pairs[0].bob_effect - projector(-Vec3::UnitZ())).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("correspondence for the singlet pairs antipodes") {
    std::mt19937_64 rng(seed() + 6);
    const auto s = validate_state(singlet());
    for (int i = 0; i < 20; ++i) {
        const Vec3 n = random_unit(rng);
        const auto p = correspondence_for_effect(s, n);
        CHECK((p.bob_pure.bloch() + n).norm() <= 1e-12);
        CHECK((p.alice_pure.bloch() + n).norm() <= 1e-12);
        CHECK(p.residual_alice <= 1e-8);
        CHECK(p.residual_bob <= 1e-8);
        CHECK(p.fidelity_alice >= 1 - 1e-8);
    }
}

TEST_CASE("correspondence errors") {
    const auto s = validate_state(spp_matrix(0.5));
    auto bob = find_tangency(pauli_decompose(s), Party::Bob);
    bob.count = CountClass::Two;
    bob.points.push_back(bob.points.front());
    CHECK(code_of([&] { correspondence_map(s, bob); }) == ErrorCode::CountMismatch);

    const auto w = validate_state(werner_matrix(0.5));
    const auto zero = find_tangency(pauli_decompose(w), Party::Bob);
    CHECK(code_of([&] { correspondence_map(w, zero); }) == ErrorCode::InvalidInput);
}

TEST_CASE("scan_pure_directions examples") {
    const auto dspp = decomp(spp_matrix(0.5));
    const auto c = scan_pure_directions(dspp, Party::Bob, 20000);
    REQUIRE(c.size() == 1);
    CHECK(angle(c[0].direction, -Vec3::UnitZ()) <= 1e-3);

    CHECK(scan_pure_directions(decomp(maximally_mixed()), Party::Bob, 20000).empty());

    const auto x = scan_pure_directions(decomp(x_state_matrix(1.0 / 3, 1.0 / 3, 0.25, -0.25, 1.0)), Party::Bob, 20000);
    REQUIRE(x.size() == 2);
    CHECK(angle(x[0].direction, -x[1].direction) <= 1e-3);
    CHECK(std::abs(std::abs(x[0].direction.z()) - 1.0) <= 1e-6);

    CHECK(code_of([&] { scan_pure_directions(dspp, Party::Bob, 999); }) == ErrorCode::OutOfRange);
}

TEST_CASE("scan is deterministic") {
    std::mt19937_64 rng(seed() + 7);
    const auto d = pauli_decompose(random_ginibre_state(rng, 2));
    const auto a = scan_pure_directions(d, Party::Alice, 5000);
    const auto b = scan_pure_directions(d, Party::Alice, 5000);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].g == b[i].g);
        CHECK(a[i].direction == b[i].direction);
    }
}
