#include <cmath>

#include "doctest.h"
#include "orbitforge/projective.hpp"
#include "support/random.hpp"

using namespace orbitforge;
using orbitforge::testing::Gen;

namespace {

ProjectivePoint A(Scalar z) { return ProjectivePoint::affine(z); }
const ProjectivePoint kInf = ProjectivePoint::infinity();

// Affine cross ratio straight from the formula; oracle for finite inputs.
Scalar cross_ratio_oracle(Scalar a, Scalar b, Scalar c, Scalar d) {
    return (a - c) * (b - d) / ((a - d) * (b - c));
}

}  // namespace

TEST_CASE("ProjectivePoint construction and normalization") {
    ProjectivePoint p(Scalar{2}, Scalar{4});
    CHECK(std::abs(p.w() - Scalar{1}) == 0.0);
    CHECK(std::abs(p.affine_value() - Scalar{0.5}) < 1e-15);
    ProjectivePoint q(Scalar{4}, Scalar{2});
    CHECK(q.z() == Scalar{1});
    CHECK_THROWS_AS(ProjectivePoint(Scalar{0}, Scalar{0}), std::invalid_argument);
    CHECK_THROWS_AS(make_scalar(NAN), std::invalid_argument);
    CHECK(kInf.is_infinity());
    CHECK(std::isinf(kInf.affine_modulus()));
    CHECK_THROWS_AS(kInf.affine_value(), NumericError);
}

TEST_CASE("chordal_distance examples") {
    CHECK(chordal_distance(A(1), A(1)) == doctest::Approx(0));
    CHECK(chordal_distance(A(0), kInf) == doctest::Approx(1));
    CHECK(chordal_distance(A(1), A(2)) == doctest::Approx(1 / std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("cross_ratio examples") {
    Scalar c{2, 1}, d{-0.5, 3};
    CHECK(chordal_distance(cross_ratio(A(0), kInf, A(c), A(d)), A(c / d)) < 1e-14);
    CHECK(chordal_distance(cross_ratio(A(1), A(-1), A(Scalar{0, 1}), A(Scalar{0, -1})), A(-1)) < 1e-14);
    CHECK(chordal_distance(cross_ratio(A(0), kInf, A(5), A(5)), A(1)) < 1e-14);
    CHECK_THROWS_AS(cross_ratio(A(0), A(0), A(1), A(1)), NumericError);
}

TEST_CASE("mobius_involution examples") {
    MobiusMap m = mobius_involution(A(0), kInf);
    for (Scalar z : {Scalar{1}, Scalar{2, -3}, Scalar{0.25, 0.5}}) CHECK(chordal_distance(m(A(z)), A(-z)) < 1e-14);
    MobiusMap n = mobius_involution(A(1), A(-1));
    for (Scalar z : {Scalar{3}, Scalar{2, -3}, Scalar{0.25, 0.5}})
        CHECK(chordal_distance(n(A(z)), A(Scalar{1} / z)) < 1e-14);
    CHECK(chordal_distance(n(A(1)), A(1)) < 1e-14);
    CHECK(chordal_distance(n(A(-1)), A(-1)) < 1e-14);
    CHECK_THROWS_AS(mobius_involution(A(2), A(2)), NumericError);
}

TEST_CASE("is_harmonic examples") {
    Scalar lambda{0.7, 0.4};
    CHECK(is_harmonic({A(0), kInf}, {A(Scalar{3, 1}), A(Scalar{-3, -1})}));
    CHECK(is_harmonic({A(lambda), A(-lambda)}, {A(1), A(lambda * lambda)}));
    CHECK_FALSE(is_harmonic({A(0), kInf}, {A(1), A(2)}));
}

TEST_CASE("harmonic_pair examples") {
    Scalar lambda{0.7, 0.4};
    Scalar l2 = lambda * lambda;
    UnorderedPair zero_inf{A(0), kInf};
    CHECK(same_pair(harmonic_pair({A(1), A(-1)}, {A(l2), A(-l2)}), zero_inf));
    CHECK(same_pair(harmonic_pair({A(1), A(l2)}, {A(-1), A(-l2)}), {A(lambda), A(-lambda)}));
    CHECK_THROWS_AS(harmonic_pair(zero_inf, zero_inf), NumericError);
    try {
        harmonic_pair(zero_inf, zero_inf);
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::DegenerateQuadruple);
    }
}

TEST_CASE("MobiusMap basics") {
    CHECK_THROWS_AS(MobiusMap(Scalar{1}, Scalar{2}, Scalar{2}, Scalar{4}), NumericError);
    MobiusMap m(Scalar{1, 1}, Scalar{2}, Scalar{0.5}, Scalar{-1});
    MobiusMap id = m * m.inverse();
    for (Scalar z : {Scalar{1}, Scalar{2, -3}}) CHECK(chordal_distance(id(A(z)), A(z)) < 1e-14);
    // z -> (az+b)/(cz+d) sends infinity to a/c.
    CHECK(chordal_distance(m(kInf), A(Scalar{1, 1} / 0.5)) < 1e-14);
    auto [f1, f2] = m.fixed_points();
    CHECK(chordal_distance(m(f1), f1) < 1e-12);
    CHECK(chordal_distance(m(f2), f2) < 1e-12);
    CHECK_THROWS_AS(MobiusMap::affine(Scalar{1}, Scalar{1}).fixed_points(), NumericError);
}

TEST_CASE("property: cross ratio agrees with the affine formula") {
    Gen g(1);
    for (int t = 0; t < 500; ++t) {
        Scalar a = g.scalar(), b = g.scalar(), c = g.scalar(), d = g.scalar();
        Scalar oracle = cross_ratio_oracle(a, b, c, d);
        CHECK(chordal_distance(cross_ratio(A(a), A(b), A(c), A(d)), A(oracle)) < 1e-10);
    }
}

TEST_CASE("property: Möbius invariance and symmetry of the cross ratio") {
    Gen g(2);
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        ProjectivePoint a = g.point(), b = g.point(), c = g.point(), d = g.point();
        MobiusMap m = g.mobius();
        ProjectivePoint cr = [&] {
            try {
                return cross_ratio(a, b, c, d);
            } catch (const NumericError&) {
                return ProjectivePoint::affine(Scalar{});
            }
        }();
        if (chordal_distance(a, b) < 1e-3 || chordal_distance(c, d) < 1e-3 || chordal_distance(a, c) < 1e-3 ||
            chordal_distance(a, d) < 1e-3 || chordal_distance(b, c) < 1e-3 || chordal_distance(b, d) < 1e-3)
            continue;
        ++checked;
        CHECK(chordal_distance(cross_ratio(m(a), m(b), m(c), m(d)), cr) < 1e-9);
        CHECK(chordal_distance(cross_ratio(c, d, a, b), cr) < 1e-12);
    }
    CHECK(checked > 900);
}

TEST_CASE("property: involutions square to the identity and fix their points") {
    Gen g(3);
    for (int t = 0; t < 100; ++t) {
        ProjectivePoint a = g.point(), b = g.point();
        if (chordal_distance(a, b) < 1e-2) continue;
        MobiusMap m = mobius_involution(a, b);
        CHECK(chordal_distance(m(a), a) < 1e-10);
        CHECK(chordal_distance(m(b), b) < 1e-10);
        for (int k = 0; k < 100; ++k) {
            ProjectivePoint x = g.point();
            CHECK(chordal_distance(m(m(x)), x) < 1e-10);
        }
    }
}

TEST_CASE("property: harmonic pair is harmonic to both inputs and order stable") {
    Gen g(4);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        ProjectivePoint a = g.point(), b = g.point(), c = g.point(), d = g.point();
        std::array<ProjectivePoint, 4> pts{a, b, c, d};
        bool separated = true;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) separated = separated && chordal_distance(pts[i], pts[j]) > 1e-2;
        if (!separated) continue;
        UnorderedPair p1{a, b}, p2{c, d};
        UnorderedPair h = [&]() -> UnorderedPair {
            try {
                return harmonic_pair(p1, p2);
            } catch (const NumericError& e) {
                CHECK(e.kind() == ErrorKind::ParabolicComposition);
                return p1;
            }
        }();
        if (same_pair(h, p1)) continue;
        ++checked;
        CHECK(is_harmonic(h, p1, 1e-7));
        CHECK(is_harmonic(h, p2, 1e-7));
        CHECK(same_pair(harmonic_pair({b, a}, {d, c}), h, 1e-9));
        CHECK(same_pair(harmonic_pair(p2, p1), h, 1e-9));
    }
    CHECK(checked > 200);
}
