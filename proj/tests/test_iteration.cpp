#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "orbitforge/iteration.hpp"
#include "support/random.hpp"

using namespace orbitforge;
using orbitforge::testing::Gen;

namespace {

ProjectivePoint A(Scalar z) { return ProjectivePoint::affine(z); }
const ProjectivePoint kInf = ProjectivePoint::infinity();

Configuration C(std::vector<Scalar> z) { return Configuration::from_affine(z); }

std::vector<Scalar> random_distinct(Gen& g, int n, Real radius = 2, Real gap = 0.2) {
    std::vector<Scalar> out;
    while (static_cast<int>(out.size()) < n) {
        Scalar s = g.scalar(radius);
        bool ok = std::all_of(out.begin(), out.end(), [&](Scalar o) { return std::abs(o - s) > gap; });
        if (ok) out.push_back(s);
    }
    return out;
}

// Plain sum-form step written independently of the library kernels.
Scalar ea_oracle(const std::vector<Scalar>& roots, std::size_t i, const std::vector<Scalar>& z) {
    Scalar s{};
    for (Scalar a : roots) s += Scalar{1} / (z[i] - a);
    for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i) s -= Scalar{1} / (z[i] - z[j]);
    return z[i] - Scalar{1} / s;
}

Scalar ws_oracle(const std::vector<Scalar>& roots, std::size_t i, const std::vector<Scalar>& z) {
    Scalar num{1}, den{1};
    for (Scalar a : roots) num *= z[i] - a;
    for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i) den *= z[i] - z[j];
    return z[i] - num / den;
}

Real p3_distance(const std::array<Scalar, 4>& a, const std::array<Scalar, 4>& b) {
    return projective_distance(std::span<const Scalar>(a), std::span<const Scalar>(b));
}

}  // namespace

TEST_CASE("weierstrass_step examples") {
    auto sq = MonicPolynomial::from_coefficients({-1, 0});
    CHECK(std::abs(weierstrass_step(sq, 0, C({2, -1})) - Scalar{1}) < 1e-14);
    CHECK(std::abs(weierstrass_step(sq, 1, C({2, -1})) - Scalar{-1}) < 1e-14);
    auto cube = MonicPolynomial::from_coefficients({0, 0, 0});
    CHECK(std::abs(weierstrass_step(cube, 0, C({1, 2, 3})) - Scalar{0.5}) < 1e-14);

    try {
        weierstrass_step(sq, 0, C({1, 1}));
        FAIL("expected CoincidentCoordinates");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::CoincidentCoordinates);
    }
    try {
        weierstrass_step(sq, 0, Configuration({A(1), kInf}));
        FAIL("expected InfiniteCoordinate");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::InfiniteCoordinate);
    }
    CHECK_THROWS_AS(weierstrass_step(sq, 0, C({1, 2, 3})), NumericError);
}

TEST_CASE("ea_step_affine examples") {
    auto sq = from_roots({1, -1});
    CHECK(std::abs(ea_step_affine(sq, 0, C({3, -1})) - Scalar{1}) < 1e-14);
    // z_i on exactly one root stays put.
    CHECK(std::abs(ea_step_affine(sq, 0, C({1, 4})) - Scalar{1}) < 1e-15);
    auto sq_coeffs = MonicPolynomial::from_coefficients({-1, 0});
    CHECK(std::abs(ea_step_affine(sq_coeffs, 0, C({0, 5})) - Scalar{-5}) < 1e-14);
    CHECK(std::abs(ea_step_affine(sq_coeffs, 0, C({3, -1})) - Scalar{1}) < 1e-14);

    try {
        ea_step_affine(sq, 0, C({1, 1}));
        FAIL("expected IndeterminateStep");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::IndeterminateStep);
    }
    // S = 1/(z-1) + 1/(z+1) - 1/(z - z2) = 0 at z = 0 with z2 = infinity-like; pick
    // z = 2, z2 solving 1/(2 - z2) = 1 + 1/3.
    Scalar z2 = Scalar{2} - Scalar{0.75};
    try {
        ea_step_affine(sq, 0, C({2, z2}));
        FAIL("expected ResultAtInfinity");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::ResultAtInfinity);
    }
    // The projective step gives infinity there.
    CHECK(ea_step_projective(sq, 0, C({2, z2})).is_infinity());
}

TEST_CASE("ea_step_projective at infinity") {
    Scalar lambda{0.6, 0.45};
    Scalar l2 = lambda * lambda;
    std::vector<ProjectivePoint> roots{A(1), A(-1), A(l2), A(-l2)};
    Scalar z3{0.3, -1.2}, z4{2, 0.5};
    auto direct = ea_step_projective(roots, 0, Configuration({kInf, A(0), A(z3), A(z4)}));
    CHECK(chordal_distance(direct, A(-z3 - z4)) < 1e-12);
    Scalar il = Scalar{0, 1} * lambda;
    auto zero = ea_step_projective(roots, 0, Configuration({kInf, A(0), A(il), A(-il)}));
    CHECK(chordal_distance(zero, A(0)) < 1e-12);

    // The conjugated chart reproduces the direct formula.
    IterationMap map = IterationMap::ehrlich_aberth(roots, Schedule::Jacobi);
    auto h = Configuration({kInf, A(0), A(z3), A(z4)}).homogeneous();
    CHECK(chordal_distance(from_homogeneous(map.step<Scalar>(0, h)), A(-z3 - z4)) < 1e-10);
    // Nearly infinite start also goes through the conjugated chart.
    auto near = Configuration({ProjectivePoint(Scalar{1}, Scalar{1e-9}), A(0), A(z3), A(z4)});
    CHECK(chordal_distance(ea_step_projective(roots, 0, near), A(-z3 - z4)) < 1e-6);

    // One infinite summand: the step returns infinity.
    CHECK(ea_step_projective(roots, 0, Configuration({kInf, kInf, A(z3), A(z4)})).is_infinity());
    // Two infinite summands: indeterminate.
    std::vector<ProjectivePoint> with_inf{A(1), A(-1), A(l2), kInf};
    try {
        ea_step_projective(with_inf, 0, Configuration({kInf, kInf, A(z3), A(z4)}));
        FAIL("expected IndeterminatePoint");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::IndeterminatePoint);
    }
    std::vector<ProjectivePoint> two_inf{kInf, kInf, A(1), A(2)};
    CHECK_THROWS_AS(ea_step_projective(two_inf, 0, C({1, 2, 3, 4})), NumericError);
}

TEST_CASE("roots at infinity: lower-degree polynomial") {
    // Roots {0, 1, inf}: EA for z(z-1) with three coordinates.
    std::vector<ProjectivePoint> roots{A(0), A(1), kInf};
    std::vector<Scalar> z{Scalar{0.3, 0.2}, Scalar{2, -1}, Scalar{-1, 0.5}};
    // Field interpretation with the infinite root dropped.
    Scalar expect = ea_oracle({0, 1}, 0, z);
    CHECK(chordal_distance(ea_step_projective(roots, 0, C(z)), A(expect)) < 1e-10);
}

TEST_CASE("apply_schedule examples") {
    auto sq = MonicPolynomial::from_coefficients({-1, 0});
    auto out = apply_schedule(UpdateRule::Weierstrass, Schedule::Jacobi, sq, C({2, -1}));
    CHECK(configuration_distance(out, C({1, -1})) < 1e-14);

    Scalar lambda{0.6, 0.45};
    auto p = parallelogram_family(lambda);
    auto cycle = apply_schedule(UpdateRule::EhrlichAberth, Schedule::Jacobi, p,
                                Configuration({A(lambda), A(-lambda), A(0), kInf}));
    CHECK(configuration_distance(cycle, Configuration({A(-lambda), A(lambda), kInf, A(0)})) < 1e-10);
}

TEST_CASE("errors are tagged with index and substep") {
    auto p = MonicPolynomial::from_coefficients({1, 0, 0});
    try {
        apply_schedule(UpdateRule::Weierstrass, Schedule::GaussSeidel, p, C({0, 1, 1}));
        FAIL("expected error");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::CoincidentCoordinates);
        REQUIRE(e.index().has_value());
        REQUIRE(e.substep().has_value());
    }
}

TEST_CASE("rp_homogeneous and phi_map examples") {
    auto cube = MonicPolynomial::from_coefficients({0, 0, 0});
    auto other = MonicPolynomial::from_coefficients({-5, 2, 0});
    std::array<Scalar, 4> at_w0{1, 2, 3, 0};
    auto a = rp_homogeneous(cube, at_w0);
    auto b = rp_homogeneous(other, at_w0);
    CHECK(p3_distance(a, b) < 1e-14);
    CHECK(p3_distance(a, {4, 6, 1, 0}) < 1e-14);

    std::array<Scalar, 3> x{1, 2, 3};
    auto phi = phi_map(x);
    std::array<Scalar, 3> expect{4, 6, 1};
    CHECK(projective_distance(phi, expect) < 1e-14);
    std::array<Scalar, 3> y{0, 1, 2};
    std::array<Scalar, 3> expect_y{2, 4, 0};
    CHECK(projective_distance(phi_map(y), expect_y) < 1e-14);

    std::array<Scalar, 3> bad{0, 0, 1};
    try {
        phi_map(bad);
        FAIL("expected IndeterminatePoint");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::IndeterminatePoint);
    }
    CHECK_THROWS_AS(rp_homogeneous(MonicPolynomial::from_coefficients({1, 1}), {1, 2, 3, 1}), NumericError);
}

TEST_CASE("property: rp_homogeneous matches cyclic-shift Weierstrass on w = 1") {
    Gen g(21);
    for (int t = 0; t < 200; ++t) {
        std::vector<Scalar> c{g.scalar(2), g.scalar(2), g.scalar(2)};
        auto p = MonicPolynomial::from_coefficients(c);
        auto z = random_distinct(g, 3);
        auto shifted = apply_schedule(UpdateRule::Weierstrass, Schedule::CyclicShift, p, C(z)).affine_values();
        auto hom = rp_homogeneous(p, {z[0], z[1], z[2], Scalar{1}});
        std::array<Scalar, 4> expect{shifted[0], shifted[1], shifted[2], Scalar{1}};
        CHECK(p3_distance(hom, expect) < 1e-10);
    }
}

TEST_CASE("property: phi is projectively well defined") {
    Gen g(22);
    for (int t = 0; t < 200; ++t) {
        std::array<Scalar, 3> x{g.scalar(), g.scalar(), g.scalar()};
        Scalar s = g.unit_scale_scalar() * 3.0;
        std::array<Scalar, 3> sx{s * x[0], s * x[1], s * x[2]};
        CHECK(projective_distance(phi_map(x), phi_map(sx)) < 1e-10);
    }
}

TEST_CASE("property: known-root and log-derivative EA agree") {
    Gen g(23);
    for (int t = 0; t < 300; ++t) {
        int n = g.integer(2, 6);
        auto roots = random_distinct(g, n);
        auto z = random_distinct(g, n, 3);
        auto p = from_roots(roots);
        auto q = MonicPolynomial::from_coefficients(p.coefficients());
        for (int i = 0; i < n; ++i) {
            Scalar expect = ea_oracle(roots, i, z);
            Real scale = std::max<Real>(1, std::abs(expect));
            CHECK(std::abs(ea_step_affine(p, i, C(z)) - expect) < 1e-9 * scale);
            CHECK(std::abs(ea_step_affine(q, i, C(z)) - expect) < 1e-8 * scale);
            CHECK(chordal_distance(ea_step_projective(p, i, C(z)), A(expect)) < 1e-10);
            CHECK(chordal_distance(ea_step_projective(q, i, C(z)), A(expect)) < 1e-9);
            CHECK(std::abs(weierstrass_step(p, i, C(z)) - ws_oracle(roots, i, z)) < 1e-9 * std::max<Real>(1, std::abs(ws_oracle(roots, i, z))));
        }
    }
}

TEST_CASE("property: Möbius equivariance of the projective EA step") {
    Gen g(24);
    for (int t = 0; t < 300; ++t) {
        auto roots = random_distinct(g, 4);
        auto z = random_distinct(g, 4, 3);
        MobiusMap m = g.mobius();
        std::vector<ProjectivePoint> r0, r1;
        for (Scalar a : roots) {
            r0.push_back(A(a));
            r1.push_back(m(A(a)));
        }
        std::vector<ProjectivePoint> moved;
        for (Scalar x : z) moved.push_back(m(A(x)));
        int infinite_roots = 0;
        for (const auto& r : r1) infinite_roots += r.is_infinity();
        if (infinite_roots > 1) continue;
        for (std::size_t i = 0; i < 4; ++i) {
            ProjectivePoint lhs = m(ea_step_projective(r0, i, C(z)));
            ProjectivePoint rhs = ea_step_projective(r1, i, Configuration(moved));
            CHECK(chordal_distance(lhs, rhs) < 1e-8);
        }
    }
}

TEST_CASE("property: affine invariance of Weierstrass") {
    Gen g(25);
    for (int t = 0; t < 300; ++t) {
        int n = g.integer(2, 6);
        auto roots = random_distinct(g, n);
        auto z = random_distinct(g, n, 3);
        Scalar a = g.unit_scale_scalar() * 2.0, b = g.scalar();
        std::vector<Scalar> moved_roots, moved_z;
        for (Scalar r : roots) moved_roots.push_back(a * r + b);
        for (Scalar x : z) moved_z.push_back(a * x + b);
        auto p = from_roots(roots);
        auto q = from_roots(moved_roots);
        for (int i = 0; i < n; ++i) {
            Scalar lhs = a * weierstrass_step(p, i, C(z)) + b;
            Scalar rhs = weierstrass_step(q, i, C(moved_z));
            CHECK(chordal_distance(A(lhs), A(rhs)) < 1e-9);
        }
    }
}

TEST_CASE("property: roots are fixed by every rule and schedule") {
    Gen g(26);
    for (int t = 0; t < 100; ++t) {
        int n = g.integer(2, 7);
        auto roots = random_distinct(g, n);
        for (bool known : {true, false}) {
            auto p = known ? from_roots(roots) : MonicPolynomial::from_coefficients(from_roots(roots).coefficients());
            for (auto rule : {UpdateRule::Weierstrass, UpdateRule::EhrlichAberth})
                for (auto schedule : {Schedule::Jacobi, Schedule::GaussSeidel, Schedule::CyclicShift}) {
                    auto out = apply_schedule(rule, schedule, p, C(roots));
                    auto expect = roots;
                    if (schedule == Schedule::CyclicShift) std::rotate(expect.begin(), expect.begin() + 1, expect.end());
                    CHECK(configuration_distance(out, C(expect)) < 1e-10);
                }
        }
    }
}

TEST_CASE("property: Gauss-Seidel equals n cyclic shifts") {
    Gen g(27);
    for (int t = 0; t < 100; ++t) {
        int n = g.integer(3, 5);
        std::vector<Scalar> c;
        for (int k = 0; k < n; ++k) c.push_back(g.scalar(2));
        auto p = MonicPolynomial::from_coefficients(c);
        auto z = random_distinct(g, n, 3);
        for (auto rule : {UpdateRule::Weierstrass, UpdateRule::EhrlichAberth}) {
            auto gs = apply_schedule(rule, Schedule::GaussSeidel, p, C(z));
            Configuration cs = C(z);
            for (int k = 0; k < n; ++k) cs = apply_schedule(rule, Schedule::CyclicShift, p, cs);
            CHECK(configuration_distance(gs, cs) < 1e-10);
        }
    }
}

TEST_CASE("property: homogeneity of Gauss-Seidel Weierstrass for z^3") {
    Gen g(28);
    auto cube = MonicPolynomial::from_coefficients({0, 0, 0});
    for (int t = 0; t < 200; ++t) {
        auto z = random_distinct(g, 3);
        Scalar s = g.unit_scale_scalar() * 2.0;
        std::vector<Scalar> sz{s * z[0], s * z[1], s * z[2]};
        auto a = apply_schedule(UpdateRule::Weierstrass, Schedule::GaussSeidel, cube, C(z)).affine_values();
        auto b = apply_schedule(UpdateRule::Weierstrass, Schedule::GaussSeidel, cube, C(sz)).affine_values();
        for (int k = 0; k < 3; ++k) CHECK(std::abs(s * a[k] - b[k]) <= 1e-9 * std::max<Real>(1, std::abs(b[k])));
    }
}

TEST_CASE("property: Jacobi schedule is permutation equivariant") {
    Gen g(29);
    for (int t = 0; t < 100; ++t) {
        int n = g.integer(2, 6);
        auto roots = random_distinct(g, n);
        auto z = random_distinct(g, n, 3);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), g.engine());
        std::vector<Scalar> pz(n);
        for (int k = 0; k < n; ++k) pz[k] = z[perm[k]];
        auto p = from_roots(roots);
        for (auto rule : {UpdateRule::Weierstrass, UpdateRule::EhrlichAberth}) {
            auto out = apply_schedule(rule, Schedule::Jacobi, p, C(z));
            auto pout = apply_schedule(rule, Schedule::Jacobi, p, C(pz));
            for (int k = 0; k < n; ++k) CHECK(chordal_distance(pout[k], out[perm[k]]) < 1e-12);
        }
    }
}

TEST_CASE("solve_roots and default start") {
    auto p = MonicPolynomial::from_coefficients({-6, 11, -6});
    auto roots = solve_roots(p);
    std::sort(roots.begin(), roots.end(), [](Scalar a, Scalar b) { return a.real() < b.real(); });
    for (int k = 0; k < 3; ++k) CHECK(std::abs(roots[k] - Scalar{static_cast<Real>(k + 1)}) < 1e-12);
    CHECK(default_initial_configuration(p).size() == 3);
}
