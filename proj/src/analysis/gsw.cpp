#include "orbitforge/gsw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "orbitforge/jacobian.hpp"
#include "orbitforge/manifold.hpp"

namespace orbitforge {

namespace {

template <class T>
std::vector<T> residual_vector(const std::vector<T>& z, Scalar lambda) {
    const T one{Scalar{1}};
    const T& z1 = z[0];
    const T& z2 = z[1];
    const T& z3 = z[2];
    const T& z4 = z[3];
    const T& z5 = z[4];
    return {(z1 - z2) * (z1 - z3) * (z1 - z4) - z1 * z1 * z1,
            (z2 - z3) * (z2 - z4) * (z2 - z5) - z2 * z2 * z2,
            (z3 - z4) * (z3 - z5) * (z3 - one) - z3 * z3 * z3,
            z1 - lambda * z4,
            z2 - lambda * z5,
            z3 - lambda * one};
}

Real max_abs(const std::vector<Scalar>& v) {
    Real m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform,
// unlike the standard distributions.
Real unit(std::mt19937_64& engine) { return static_cast<Real>(engine() >> 11) * 0x1.0p-53; }

Scalar gaussian_scalar(std::mt19937_64& engine) {
    Real u = unit(engine), v = unit(engine);
    Real r = std::sqrt(-2 * std::log1p(-u));
    return {r * std::cos(2 * std::numbers::pi * v), r * std::sin(2 * std::numbers::pi * v)};
}

Real coordinate_distance(const std::array<Scalar, 6>& a, const std::array<Scalar, 6>& b) {
    Real worst = 0;
    for (std::size_t k = 0; k < 5; ++k)
        worst = std::max(worst, chordal_distance(ProjectivePoint::affine(a[k]), ProjectivePoint::affine(b[k])));
    return worst;
}

bool lex_less(Scalar a, Scalar b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

// f applied `power` times in the chart where coordinate k is 1.
template <std::size_t N, class T, class F>
std::vector<T> in_chart(const F& f, std::size_t k, const std::vector<T>& x, int power) {
    std::array<T, N> v;
    for (std::size_t i = 0, j = 0; i < N; ++i) v[i] = i == k ? T(Scalar{1}) : x[j++];
    for (int s = 0; s < power; ++s) v = f(v);
    std::vector<T> out;
    for (std::size_t i = 0; i < N; ++i)
        if (i != k) out.push_back(v[i] / v[k]);
    return out;
}

struct RpCube {
    const MonicPolynomial* p;
    std::size_t chart;
    template <class T>
    std::vector<T> operator()(const std::vector<T>& x) const {
        return in_chart<4>([this](const std::array<T, 4>& v) { return rp_raw(*p, v); }, chart, x, 3);
    }
};

struct PhiCube {
    std::size_t chart;
    template <class T>
    std::vector<T> operator()(const std::vector<T>& x) const {
        return in_chart<3>([](const std::array<T, 3>& v) { return phi_raw(v); }, chart, x, 3);
    }
};

std::vector<Scalar> chart_coordinates(const std::array<Scalar, 3>& z, std::size_t k) {
    std::vector<Scalar> x;
    for (std::size_t i = 0; i < 3; ++i)
        if (i != k) x.push_back(z[i] / z[k]);
    return x;
}

}  // namespace

std::array<MonicPolynomial, 3> gsw_lambda_factors() {
    return {MonicPolynomial::from_coefficients({1, -4, 8, -3, -2}),
            MonicPolynomial::from_coefficients({-1, 4, -5}),
            MonicPolynomial::from_coefficients({1, -3})};
}

std::array<Scalar, 6> gsw_residuals(const GswUnknowns& z, Scalar lambda) {
    auto r = residual_vector(std::vector<Scalar>(z.begin(), z.end()), lambda);
    std::array<Scalar, 6> out;
    std::copy(r.begin(), r.end(), out.begin());
    return out;
}

bool GswSolution::has_zero_coordinate(Real tol) const {
    Real scale = 0;
    for (const auto& x : z) scale = std::max(scale, std::abs(x));
    return std::any_of(z.begin(), z.end(), [&](Scalar x) { return std::abs(x) <= tol * scale; });
}

GswSolveResult solve_gsw_z3_cycles(const GswSolveOptions& options) {
    GswSolveResult result;
    const auto factors = gsw_lambda_factors();
    for (int f = 0; f < 3; ++f) {
        auto lambdas = solve_roots(factors[f]);
        for (auto& l : lambdas) {
            for (int it = 0; it < 3; ++it) {
                Scalar d = factors[f].evaluate_derivative(l);
                if (d == Scalar{}) break;
                l -= factors[f].evaluate(l) / d;
            }
        }
        std::sort(lambdas.begin(), lambdas.end(), lex_less);

        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            const Scalar lambda = lambdas[li];
            auto residual = [lambda](const auto& z) { return residual_vector(z, lambda); };
            GswLambdaReport report{lambda, f, 0, 0};
            std::vector<GswSolution> found;
            for (int s = 0; s < options.starts; ++s) {
                std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                                  static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(li),
                                  static_cast<std::uint32_t>(s)};
                std::mt19937_64 engine(seq);
                std::vector<Scalar> z(5);
                for (auto& x : z) x = 2.0 * gaussian_scalar(engine);

                bool ok = false;
                try {
                    std::vector<Scalar> r = residual(z);
                    for (int it = 0; it < options.max_newton; ++it) {
                        Matrix jac = jacobian_dual(residual, z);
                        std::vector<Scalar> rhs(r.size());
                        for (std::size_t k = 0; k < r.size(); ++k) rhs[k] = -r[k];
                        auto dz = least_squares(jac, rhs);
                        Real t = 1;
                        std::vector<Scalar> trial(5), r_trial;
                        for (int h = 0; h <= options.max_halvings; ++h, t /= 2) {
                            for (std::size_t k = 0; k < 5; ++k) trial[k] = z[k] + t * dz[k];
                            r_trial = residual(trial);
                            if (vector_norm(r_trial) <= vector_norm(r)) break;
                        }
                        z = trial;
                        r = r_trial;
                        if (vector_norm(dz) * t < 1e-14 * std::max<Real>(1, vector_norm(z))) break;
                    }
                    ok = max_abs(r) < options.residual_tol;
                } catch (const NumericError&) {
                    ok = false;
                }
                if (!ok) {
                    ++report.failed_starts;
                    continue;
                }
                GswSolution sol;
                sol.lambda = lambda;
                sol.factor = f;
                std::copy(z.begin(), z.end(), sol.z.begin());
                sol.z[5] = Scalar{1};
                sol.residual = max_abs(residual(z));
                bool duplicate = std::any_of(found.begin(), found.end(), [&](const GswSolution& other) {
                    return coordinate_distance(other.z, sol.z) < options.dedupe_tol;
                });
                if (!duplicate) found.push_back(sol);
            }
            std::sort(found.begin(), found.end(), [](const GswSolution& a, const GswSolution& b) {
                return std::lexicographical_compare(a.z.begin(), a.z.end(), b.z.begin(), b.z.end(), lex_less);
            });
            report.solutions = static_cast<int>(found.size());
            if (found.empty()) result.empty_lambdas.push_back(lambda);
            result.lambdas.push_back(report);
            result.solutions.insert(result.solutions.end(), found.begin(), found.end());
        }
    }
    return result;
}

std::vector<MonicPolynomial> default_transverse_cubics() {
    return {MonicPolynomial::from_coefficients({-1, 0, 0}), MonicPolynomial::from_coefficients({-5, 2, 0})};
}

std::size_t largest_coordinate(const std::array<Scalar, 3>& z) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(z[i]) > std::abs(z[k])) k = i;
    return k;
}

PhiCycleReport classify_phi_cycle(const GswSolution& solution, const std::vector<MonicPolynomial>& cubics) {
    if (solution.has_zero_coordinate()) fail(ErrorKind::ZeroCoordinate, "the cycle has a vanishing coordinate");
    PhiCycleReport report;
    report.solution = solution;
    report.mu = Scalar{1} / solution.lambda;

    const auto z = solution.cycle_point();
    report.orbit[0] = normalize_homogeneous(z);
    for (std::size_t k = 1; k < 3; ++k) report.orbit[k] = phi_map(report.orbit[k - 1]);
    const auto back = phi_map(report.orbit[2]);
    if (projective_distance(back, report.orbit[0]) > 1e-8)
        fail(ErrorKind::VerificationFailed, "phi^3 does not return to the cycle point");

    // GSW_{z^3} in affine coordinates: three Weierstrass substeps.
    std::array<Scalar, 6> w{z[0], z[1], z[2]};
    for (std::size_t k = 0; k < 3; ++k)
        w[k + 3] = w[k] - w[k] * w[k] * w[k] / ((w[k] - w[k + 1]) * (w[k] - w[k + 2]));
    Real scale = std::max({std::abs(z[0]), std::abs(z[1]), std::abs(z[2])});
    for (std::size_t k = 0; k < 3; ++k)
        report.scaling_error = std::max(report.scaling_error, std::abs(w[k + 3] - report.mu * z[k]) / scale);

    report.chart = largest_coordinate(z);
    const auto x = chart_coordinates(z, report.chart);
    report.jacobian = jacobian_dual(PhiCube{report.chart}, x);
    report.eigenvalues = eigenvalues(report.jacobian);
    report.classification = classify_spectrum(report.eigenvalues);

    std::vector<Scalar> x4 = x;
    x4.push_back(Scalar{0});
    for (const auto& p : cubics) {
        if (p.degree() != 3) fail(ErrorKind::PreconditionViolated, "transverse check needs cubics");
        TransverseCheck t{p, jacobian_dual(RpCube{&p, report.chart}, x4), {}, 0};
        t.eigenvalue = t.jacobian(2, 2);
        t.off_block = std::max(std::abs(t.jacobian(2, 0)), std::abs(t.jacobian(2, 1)));
        report.transverse_error = std::max(report.transverse_error, std::abs(t.eigenvalue - solution.lambda));
        for (const auto& other : report.transverse)
            report.transverse_spread = std::max(report.transverse_spread, std::abs(other.eigenvalue - t.eigenvalue));
        report.transverse.push_back(std::move(t));
    }
    return report;
}

PhiCycleReport select_divergence_cycle(const GswSolveResult& result) {
    for (const auto& s : result.solutions) {
        if (std::abs(s.lambda) >= 1 || s.has_zero_coordinate()) continue;
        auto report = classify_phi_cycle(s);
        if (report.classification == Stability::Repelling) return report;
    }
    fail(ErrorKind::PreconditionViolated, "no phi-repelling cycle with |lambda| < 1");
}

Configuration gsw_configuration(const std::array<Scalar, 4>& v) {
    return Configuration({ProjectivePoint(v[0], v[3]), ProjectivePoint(v[1], v[3]), ProjectivePoint(v[2], v[3])});
}

GswRunResult gsw_divergence_run(const MonicPolynomial& p, const PhiCycleReport& cycle, Real delta,
                                const GswRunOptions& options) {
    if (p.degree() != 3) fail(ErrorKind::PreconditionViolated, "the cyclic shift map needs a cubic");
    const auto roots = p.has_roots() ? *p.roots() : solve_roots(p);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8) fail(ErrorKind::PreconditionViolated, "repeated roots");
    if (cycle.classification != Stability::Repelling || std::abs(cycle.solution.lambda) >= 1)
        fail(ErrorKind::PreconditionViolated, "the cycle must be phi-repelling with |lambda| < 1");

    const std::size_t k = cycle.chart;
    const RpCube map{&p, k};
    std::vector<Scalar> fixed = chart_coordinates(cycle.solution.cycle_point(), k);
    fixed.push_back(Scalar{0});

    GswRunResult result;
    std::vector<Scalar> x0 = fixed;
    x0[2] = delta;
    if (delta != 0 && options.refine) {
        const Matrix jac = jacobian_dual(map, fixed);
        const auto mu = eigenvalues(jac);
        std::size_t stable = 0;
        for (std::size_t i = 1; i < mu.size(); ++i)
            if (std::abs(mu[i]) < std::abs(mu[stable])) stable = i;
        Matrix vectors = eigenvector_matrix(jac, mu);
        const Scalar lead = vectors(2, stable);
        if (std::abs(lead) < 1e-12) fail(ErrorKind::PreconditionViolated, "the attracting direction lies in w = 0");
        for (std::size_t r = 0; r < 3; ++r) vectors(r, stable) /= lead;
        x0 = refine_onto_stable_manifold(map, fixed, vectors, stable, Scalar{delta}, options.refine_steps);
        result.refined = true;
    }
    for (std::size_t i = 0, j = 0; i < 4; ++i) result.start[i] = i == k ? Scalar{1} : x0[j++];

    std::array<Scalar, 4> cycle_point{};
    for (std::size_t i = 0; i < 3; ++i) cycle_point[i] = cycle.solution.z[i];

    auto diverged = [&](const std::array<Scalar, 4>& v) {
        if (v[3] == Scalar{}) return false;
        for (std::size_t i = 0; i < 3; ++i)
            if (std::abs(v[i] / v[3]) <= options.divergence_threshold) return false;
        return true;
    };
    auto record = [&](const std::array<Scalar, 4>& v) {
        result.projective_states.push_back(v);
        result.trace.record(gsw_configuration(v));
        result.trace.cycle_distance.push_back(projective_distance(v, cycle_point));
    };

    std::array<Scalar, 4> v = normalize_homogeneous(result.start);
    record(v);
    result.trace.status = OrbitStatus::MaxIterations;
    for (int it = 0; it < options.max_iter; ++it) {
        if (diverged(v)) {
            result.trace.status = OrbitStatus::Diverged;
            break;
        }
        try {
            for (int s = 0; s < 3; ++s) v = rp_homogeneous(p, v);
        } catch (const NumericError& e) {
            result.trace.status = OrbitStatus::Indeterminate;
            result.trace.failure = e.what();
            break;
        }
        record(v);
    }
    if (result.trace.status == OrbitStatus::MaxIterations && diverged(v)) result.trace.status = OrbitStatus::Diverged;
    result.trace.iterations = static_cast<int>(result.projective_states.size()) - 1;
    return result;
}

}  // namespace orbitforge
