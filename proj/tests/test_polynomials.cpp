#include <cmath>
#include <vector>

#include "doctest.h"
#include "orbitforge/dual.hpp"
#include "orbitforge/polynomial.hpp"
#include "support/random.hpp"

using namespace orbitforge;
using orbitforge::testing::Gen;

namespace {

bool coefficients_equal(const MonicPolynomial& p, std::vector<Scalar> expected, Real tol = 1e-12) {
    if (p.coefficients().size() != expected.size()) return false;
    for (std::size_t k = 0; k < expected.size(); ++k)
        if (std::abs(p.coefficients()[k] - expected[k]) > tol) return false;
    return true;
}

// Naive power-sum evaluation, independent of Horner and product forms.
Scalar eval_oracle(const MonicPolynomial& p, Scalar z) {
    Scalar acc = std::pow(z, p.degree());
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) acc += p.coefficients()[k] * std::pow(z, static_cast<int>(k));
    return acc;
}

}  // namespace

TEST_CASE("from_roots examples") {
    CHECK(coefficients_equal(from_roots({1, -1}), {-1, 0}));
    CHECK(coefficients_equal(from_roots({1, -1, 4, -4}), {16, 0, -17, 0}));
    CHECK(coefficients_equal(from_roots({0, 0, 0}), {0, 0, 0}));
    CHECK_THROWS_AS(from_roots({}), NumericError);
    CHECK(from_roots({1, 2}).has_roots());
}

TEST_CASE("eval and derivative examples") {
    auto cube = MonicPolynomial::from_coefficients({0, 0, 0});
    auto sq = MonicPolynomial::from_coefficients({-1, 0});
    CHECK(std::abs(eval(cube, 2) - Scalar{8}) < 1e-14);
    CHECK(std::abs(eval(sq, 2) - Scalar{3}) < 1e-14);
    CHECK(std::abs(eval(parallelogram_family(2), 3) - Scalar{-56}) < 1e-12);
    CHECK(std::abs(derivative_eval(cube, 1) - Scalar{3}) < 1e-14);
    CHECK(std::abs(derivative_eval(sq, 0)) < 1e-14);
    CHECK(std::abs(derivative_eval(MonicPolynomial::from_coefficients({16, 0, -17, 0}), 1) - Scalar{-30}) < 1e-12);
    auto linear = MonicPolynomial::from_coefficients({5});
    CHECK(std::abs(derivative_eval(linear, 7) - Scalar{1}) < 1e-14);
}

TEST_CASE("homogeneous_eval examples") {
    HomogeneousPolynomial p(MonicPolynomial::from_coefficients({-1, 0, 0}));
    CHECK(p.degree() == 3);
    CHECK(std::abs(homogeneous_eval(p, 2, 0) - Scalar{8}) < 1e-14);
    CHECK(std::abs(homogeneous_eval(p, 2, 1) - Scalar{7}) < 1e-14);
    CHECK(std::abs(homogeneous_eval(p, 2, 2)) < 1e-14);
    HomogeneousPolynomial r(from_roots({1, Scalar{0, 2}, -3}));
    CHECK(std::abs(homogeneous_eval(r, Scalar{1.5, 2}, 0) - std::pow(Scalar{1.5, 2}, 3)) < 1e-12);
}

TEST_CASE("parallelogram_family") {
    auto p = parallelogram_family(2);
    CHECK(coefficients_equal(p, {16, 0, -17, 0}));
    CHECK_THROWS_AS(parallelogram_family(Scalar{0, 1}), NumericError);
    CHECK_THROWS_AS(parallelogram_family(1), NumericError);
    CHECK_THROWS_AS(parallelogram_family(-1), NumericError);
    CHECK_THROWS_AS(parallelogram_family(0), NumericError);
    Scalar lambda = 0.5 * std::sqrt(Scalar{3, std::sqrt(7.0)});
    auto q = parallelogram_family(lambda);
    Scalar l2{0.75, std::sqrt(7.0) / 4};
    const auto& roots = *q.roots();
    CHECK(std::abs(roots[0] - Scalar{1}) < 1e-15);
    CHECK(std::abs(roots[1] - Scalar{-1}) < 1e-15);
    CHECK(std::abs(roots[2] - l2) < 1e-14);
    CHECK(std::abs(roots[3] + l2) < 1e-14);
}

TEST_CASE("with_extra_roots") {
    auto p = MonicPolynomial::from_coefficients({-1, 0});
    std::vector<Scalar> extra{3, Scalar{0, 1}};
    auto q = p.with_extra_roots(extra);
    CHECK(q.degree() == 4);
    for (Scalar z : {Scalar{1}, Scalar{-1}, Scalar{3}, Scalar{0, 1}}) CHECK(std::abs(eval(q, z)) < 1e-12);
    auto r = from_roots({1, -1}).with_extra_roots(extra);
    CHECK(r.has_roots());
    CHECK(coefficients_equal(r, q.coefficients()));
}

TEST_CASE("property: from_roots vanishes at its roots and matches the naive expansion") {
    Gen g(11);
    for (int t = 0; t < 300; ++t) {
        int n = g.integer(1, 8);
        std::vector<Scalar> roots;
        for (int k = 0; k < n; ++k) roots.push_back(g.scalar(2));
        auto p = from_roots(roots);
        auto coeffs = MonicPolynomial::from_coefficients(p.coefficients());
        for (Scalar r : roots) CHECK(std::abs(eval(coeffs, r)) <= 1e-9 * coeffs.magnitude_scale(r));
        Scalar z = g.scalar(2);
        CHECK(std::abs(eval(p, z) - eval_oracle(p, z)) <= 1e-10 * p.magnitude_scale(z));
    }
}

TEST_CASE("property: derivative matches finite differences and dual numbers") {
    Gen g(12);
    for (int t = 0; t < 300; ++t) {
        int n = g.integer(1, 8);
        std::vector<Scalar> c;
        for (int k = 0; k < n; ++k) c.push_back(g.scalar(2));
        auto p = MonicPolynomial::from_coefficients(c);
        Scalar z = g.scalar(2);
        Real h = 1e-6;
        Scalar fd = (eval(p, z + h) - eval(p, z - h)) / (2 * h);
        Scalar d = derivative_eval(p, z);
        CHECK(std::abs(fd - d) <= 1e-5 * std::max<Real>(1, std::abs(d)));
        Dual dz{z, Scalar{1}};
        CHECK(std::abs(p.evaluate(dz).d - d) <= 1e-10 * std::max<Real>(1, std::abs(d)));
    }
}

TEST_CASE("property: homogenization restricts to p on w = 1") {
    Gen g(13);
    for (int t = 0; t < 100; ++t) {
        int n = g.integer(1, 8);
        std::vector<Scalar> c;
        for (int k = 0; k < n; ++k) c.push_back(g.scalar(2));
        HomogeneousPolynomial p(MonicPolynomial::from_coefficients(c));
        for (int k = 0; k < 100; ++k) {
            Scalar z = g.scalar(2);
            Scalar v = eval(p.base(), z);
            CHECK(std::abs(homogeneous_eval(p, z, 1) - v) <= 1e-12 * std::max<Real>(1, std::abs(v)));
            Scalar tt = g.unit_scale_scalar();
            // Degree-n homogeneity.
            Scalar scaled = homogeneous_eval(p, tt * z, tt);
            CHECK(std::abs(scaled - std::pow(tt, n) * v) <= 1e-10 * p.base().magnitude_scale(z));
        }
    }
}
