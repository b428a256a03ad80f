#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "orbitforge/embedding.hpp"
#include "orbitforge/gsw.hpp"
#include "orbitforge/harmonic.hpp"
#include "orbitforge/manifold.hpp"
#include "support/random.hpp"

using namespace orbitforge;
using orbitforge::testing::Gen;

namespace {

struct SaddleFixture {
    SaddleProbe probe = probe_saddle_lambda(reference_lambda());
    CycleReport cycle = analyze_permutation_cycle(
        IterationMap(UpdateRule::EhrlichAberth, Schedule::Jacobi, parallelogram_family(probe.lambda)),
        harmonic_base_point(probe.lambda), harmonic_base_charts());
};

const SaddleFixture& saddle() {
    static const SaddleFixture f;
    return f;
}

const GswSolveResult& gsw() {
    static const GswSolveResult r = solve_gsw_z3_cycles();
    return r;
}

// Coefficients as printed, highest degree first.
Scalar horner(std::initializer_list<Real> coeffs, Scalar x) {
    Scalar acc{};
    for (Real c : coeffs) acc = acc * x + c;
    return acc;
}

// Gauss-Seidel Weierstrass for z^3, evaluated directly.
std::array<Scalar, 3> gsw_z3(std::array<Scalar, 3> z) {
    z[0] = z[0] - z[0] * z[0] * z[0] / ((z[0] - z[1]) * (z[0] - z[2]));
    z[1] = z[1] - z[1] * z[1] * z[1] / ((z[1] - z[0]) * (z[1] - z[2]));
    z[2] = z[2] - z[2] * z[2] * z[2] / ((z[2] - z[0]) * (z[2] - z[1]));
    return z;
}

std::vector<Scalar> distinct(Gen& g, int n, Real radius = 2, Real gap = 0.2) {
    std::vector<Scalar> out;
    while (static_cast<int>(out.size()) < n) {
        Scalar s = g.scalar(radius);
        if (std::all_of(out.begin(), out.end(), [&](Scalar o) { return std::abs(o - s) > gap; })) out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("saddle probe near the reference parameter") {
    const auto& f = saddle();
    int inside = 0, outside = 0;
    for (Scalar mu : f.cycle.eigenvalues) {
        if (std::abs(mu) < 1) ++inside;
        if (std::abs(mu) > 1) ++outside;
    }
    CHECK(inside == 1);
    CHECK(outside == 3);
    CHECK(f.cycle.classification == Stability::Saddle);
    CHECK(std::abs(f.probe.lambda / reference_lambda() - 1.0) <= 0.1 + 1e-12);
}

TEST_CASE("shooting along the stable direction") {
    const auto& f = saddle();
    for (Real eps : {1e-4, -1e-4}) {
        auto shot = shoot_stable_manifold(f.cycle, f.probe.stable_index, eps);
        CHECK(shot.refined);
        CHECK(shot.trace.status == OrbitStatus::Diverged);
        CHECK(shot.trace.iterations > 0);
        CHECK(shot.stayed_near_cycle);
        CHECK(shot.success);
        // Approaches the cycle.
        const auto& d = shot.trace.cycle_distance;
        REQUIRE(d.size() >= 2);
        CHECK(d.back() < d.front());
        for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] <= d[k - 1] + 1e-12);
    }
    auto still = shoot_stable_manifold(f.cycle, f.probe.stable_index, 0, {.max_iter = 50});
    CHECK(still.trace.status == OrbitStatus::MaxIterations);
    CHECK_FALSE(still.success);
    for (Real d : still.trace.cycle_distance) CHECK(d == 0);
}

TEST_CASE("shooting along an expanding direction is not a success") {
    const auto& f = saddle();
    for (std::size_t k = 0; k < f.cycle.eigenvalues.size(); ++k) {
        if (k == f.probe.stable_index) continue;
        auto shot = shoot_stable_manifold(f.cycle, k, 1e-4);
        CHECK_FALSE(shot.success);
    }
}

TEST_CASE("shooting requires a saddle") {
    IterationMap map(UpdateRule::EhrlichAberth, Schedule::Jacobi, parallelogram_family(2));
    auto repelling = analyze_permutation_cycle(map, harmonic_base_point(2), harmonic_base_charts());
    try {
        shoot_stable_manifold(repelling, 0, 1e-4);
        FAIL("expected NotSaddle");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::NotSaddle);
    }
}

TEST_CASE("GSW z^3 cycle system: count, residuals and lambda values") {
    const auto& r = gsw();
    CHECK(r.solutions.size() == 18);
    CHECK(r.empty_lambdas.empty());
    int per_factor[3] = {0, 0, 0};
    for (const auto& s : r.solutions) {
        ++per_factor[s.factor];
        CHECK(s.residual < 1e-10);
        CHECK(std::abs(s.z[5] - Scalar{1}) < 1e-15);
        // The system as stated: Weierstrass relations and the scaling.
        const auto& z = s.z;
        const Real scale = std::max<Real>(1, std::abs(z[0]) + std::abs(z[1]) + std::abs(z[2]) + std::abs(z[3]));
        CHECK(std::abs((z[0] - z[1]) * (z[0] - z[2]) * (z[0] - z[3]) - z[0] * z[0] * z[0]) < 1e-9 * std::pow(scale, 3));
        CHECK(std::abs((z[1] - z[2]) * (z[1] - z[3]) * (z[1] - z[4]) - z[1] * z[1] * z[1]) < 1e-9 * std::pow(scale, 3));
        CHECK(std::abs((z[2] - z[3]) * (z[2] - z[4]) * (z[2] - z[5]) - z[2] * z[2] * z[2]) < 1e-9 * std::pow(scale, 3));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(z[k] - s.lambda * z[k + 3]) < 1e-9 * scale);
        const Scalar l = s.lambda;
        const Scalar value = s.factor == 0   ? horner({1, -2, -3, 8, -4, 1}, l)
                             : s.factor == 1 ? horner({1, -5, 4, -1}, l)
                                             : horner({1, -3, 1}, l);
        CHECK(std::abs(value) < 1e-9);
        CHECK(s.has_zero_coordinate() == (s.factor == 2));
    }
    CHECK(per_factor[0] + per_factor[1] + per_factor[2] == 18);
    for (std::size_t a = 0; a < r.solutions.size(); ++a)
        for (std::size_t b = a + 1; b < r.solutions.size(); ++b) {
            Real d = 0;
            for (int k = 0; k < 5; ++k)
                d = std::max(d, chordal_distance(ProjectivePoint::affine(r.solutions[a].z[k]),
                                                 ProjectivePoint::affine(r.solutions[b].z[k])));
            CHECK(d > 1e-6);
        }
}

TEST_CASE("GSW solutions with nonzero coordinates are eigenvectors of GSW_{z^3}") {
    for (const auto& s : gsw().solutions) {
        if (s.has_zero_coordinate()) continue;
        auto img = gsw_z3(s.cycle_point());
        for (int k = 0; k < 3; ++k) CHECK(std::abs(s.lambda * img[k] - s.z[k]) < 1e-9 * std::max<Real>(1, std::abs(s.z[k])));
    }
}

TEST_CASE("phi cycles: repelling cycle inside the disk and transverse eigenvalue") {
    bool found = false;
    for (const auto& s : gsw().solutions) {
        if (s.has_zero_coordinate()) {
            try {
                classify_phi_cycle(s);
                FAIL("expected ZeroCoordinate");
            } catch (const NumericError& e) {
                CHECK(e.kind() == ErrorKind::ZeroCoordinate);
            }
            continue;
        }
        auto rep = classify_phi_cycle(s);
        CHECK(rep.scaling_error < 1e-9);
        CHECK(std::abs(rep.mu * s.lambda - 1.0) < 1e-12);
        CHECK(rep.transverse.size() == 2);
        CHECK(rep.transverse_error < 1e-8);
        CHECK(rep.transverse_spread < 1e-9);
        for (const auto& t : rep.transverse) CHECK(std::abs(t.eigenvalue - s.lambda) < 1e-8);
        if (std::abs(s.lambda) < 1 && rep.classification == Stability::Repelling) found = true;
    }
    CHECK(found);
    auto chosen = select_divergence_cycle(gsw());
    CHECK(std::abs(chosen.solution.lambda) < 1);
    CHECK(chosen.classification == Stability::Repelling);
}

TEST_CASE("GSW divergence from the plane at infinity") {
    const auto cycle = select_divergence_cycle(gsw());
    for (auto p : {from_roots({1, Scalar{-0.5, std::sqrt(3.0) / 2}, Scalar{-0.5, -std::sqrt(3.0) / 2}}), from_roots({1, 2, 3})}) {
        auto run = gsw_divergence_run(p, cycle, 1e-6);
        CHECK(run.trace.status == OrbitStatus::Diverged);
        CHECK(run.trace.iterations > 0);
        const auto& last = run.trace.states.back();
        for (const auto& pt : last) CHECK(pt.affine_modulus() > 1e8);
    }
    // delta = 0 stays on w = 0.
    auto flat = gsw_divergence_run(from_roots({1, 2, 3}), cycle, 0, {.max_iter = 30});
    CHECK(flat.trace.status == OrbitStatus::MaxIterations);
    for (const auto& v : flat.projective_states) CHECK(v[3] == Scalar{});
    CHECK_THROWS_AS(gsw_divergence_run(from_roots({1, 1, 3}), cycle, 1e-6), NumericError);
}

TEST_CASE("property: embedding commutes with the iteration maps") {
    Gen g(201);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const bool ea = t % 2 == 0;
        const int n = ea ? g.integer(3, 5) : 3;
        auto roots = distinct(g, n);
        auto x = distinct(g, n);
        auto extra = distinct(g, g.integer(1, 3), 2, 0.2);
        for (auto& e : extra) e += Scalar{6, 0};
        try {
            auto check = verify_embedding(ea ? UpdateRule::EhrlichAberth : UpdateRule::Weierstrass,
                                          ea ? Schedule::Jacobi : Schedule::GaussSeidel, from_roots(roots),
                                          Configuration::from_affine(x), extra);
            CHECK(check.distance < 1e-9);
            ++checked;
        } catch (const NumericError& e) {
            CHECK(e.kind() == ErrorKind::CoincidenceWithExtra);
        }
    }
    CHECK(checked >= 190);
    // An extra root on a coordinate is rejected.
    auto x = Configuration::from_affine(std::vector<Scalar>{1, 2, 3});
    std::vector<Scalar> clash{2};
    try {
        verify_embedding(UpdateRule::EhrlichAberth, Schedule::Jacobi, from_roots({4, 5, 6}), x, clash);
        FAIL("expected CoincidenceWithExtra");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::CoincidenceWithExtra);
    }
}

TEST_CASE("default_extra_roots skips forbidden values") {
    std::vector<Scalar> avoid{7, 9};
    auto extra = default_extra_roots(3, avoid);
    REQUIRE(extra.size() == 3);
    CHECK(extra[0] == Scalar{-6});
    CHECK(extra[1] == Scalar{-8});
    CHECK(extra[2] == Scalar{11});
}

TEST_CASE("Jacobi EA diverges in every degree from 4 to 6") {
    for (int d : {4, 5, 6}) {
        auto run = ea_divergence_run(d);
        CHECK(run.polynomial.degree() == static_cast<std::size_t>(d));
        CHECK(run.extras.size() == static_cast<std::size_t>(d - 4));
        CHECK(run.trace.status == OrbitStatus::Diverged);
        CHECK(run.trace.iterations <= 10000);
        CHECK(run.monotone);
        CHECK(run.pinned_error <= 1e-9);
        for (const auto& state : run.trace.states)
            for (std::size_t k = 4; k < state.size(); ++k)
                CHECK(std::abs(state[k].affine_value() - run.extras[k - 4]) <= 1e-9);
    }
    CHECK_THROWS_AS(ea_divergence_run(3), NumericError);
}

TEST_CASE("Gauss-Seidel Weierstrass diverges in every component in degrees 3 to 5") {
    const auto cycle = select_divergence_cycle(gsw());
    const Scalar w{-0.5, std::sqrt(3.0) / 2};
    const std::vector<Scalar> cube{1, w, std::conj(w)};
    for (std::size_t extra = 0; extra <= 2; ++extra) {
        std::vector<Scalar> roots = cube;
        if (extra >= 1) roots.push_back(5);
        if (extra >= 2) roots.push_back(-7);
        auto run = gsw_embedded_run(roots, {0, 1, 2}, cycle);
        CHECK(run.trace.status == OrbitStatus::Diverged);
        CHECK(run.trace.iterations <= 10000);
        const auto& last = run.trace.states.back();
        for (int k = 0; k < 3; ++k) CHECK(last[k].affine_modulus() > 1e8);
        CHECK(run.max_step_mismatch < 1e-9);
        CHECK(run.pinned_error <= 1e-9);
        for (const auto& state : run.trace.states)
            for (std::size_t k = 3; k < state.size(); ++k) CHECK(std::abs(state[k].affine_value() - roots[k]) <= 1e-9);
    }
    try {
        gsw_embedded_run({1, w, std::conj(w), 5}, {0, 1, 2}, cycle, {.root_clearance = 10});
        FAIL("expected TailNotFound");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::TailNotFound);
    }
}
