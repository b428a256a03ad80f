#include "orbitforge/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace orbitforge {

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::Attracting: return "Attracting";
        case Stability::Repelling: return "Repelling";
        case Stability::Saddle: return "Saddle";
        case Stability::NonHyperbolic: return "NonHyperbolic";
    }
    return "?";
}

Stability classify_spectrum(const std::vector<Scalar>& eigenvalues, Real band) {
    bool inside = false, outside = false;
    for (const Scalar& mu : eigenvalues) {
        Real m = std::abs(mu);
        if (std::abs(m - 1) <= band) return Stability::NonHyperbolic;
        (m < 1 ? inside : outside) = true;
    }
    if (inside && outside) return Stability::Saddle;
    return inside ? Stability::Attracting : Stability::Repelling;
}

CycleReport analyze_permutation_cycle(const IterationMap& map, const Configuration& point,
                                      const std::optional<ChartBasis>& chosen_charts, Real tol) {
    const std::size_t n = point.size();
    const Configuration image = map(point);
    std::vector<std::size_t> sigma(n, n);
    std::vector<bool> used(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!used[j] && chordal_distance(image[k], point[j]) < tol) {
                sigma[k] = j;
                used[j] = true;
                break;
            }
        }
        if (sigma[k] == n) fail(ErrorKind::VerificationFailed, "image is not a permutation of the configuration");
    }
    std::vector<std::size_t> sigma_inverse(n);
    for (std::size_t k = 0; k < n; ++k) sigma_inverse[sigma[k]] = k;

    std::vector<Configuration> orbit{point};
    Configuration current = image;
    constexpr int kMaxPeriod = 64;
    while (configuration_distance(current, point) >= tol) {
        if (static_cast<int>(orbit.size()) >= kMaxPeriod) fail(ErrorKind::VerificationFailed, "orbit does not close up");
        orbit.push_back(current);
        current = map(current);
    }

    const ChartBasis charts = chosen_charts ? *chosen_charts : ChartBasis::for_configuration(point);
    const IterationMap reduced = map.with_post_permutation(sigma_inverse);
    Matrix jac = jacobian_dual(reduced, point, charts);
    auto spectrum = eigenvalues(jac);
    Stability cls = classify_spectrum(spectrum);
    const int period = static_cast<int>(orbit.size());
    return CycleReport{map, std::move(orbit), period, std::move(sigma), std::move(jac), charts, std::move(spectrum), cls};
}

Real cycle_return_error(const CycleReport& report) {
    Configuration x = report.points.front();
    for (int k = 0; k < report.period; ++k) x = report.map(x);
    return configuration_distance(x, report.points.front());
}

namespace {

void check_family_parameter(Scalar lambda) {
    Scalar l2 = lambda * lambda;
    if (std::abs(lambda) < kRootCollisionTolerance || std::abs(l2 * l2 - Scalar{1}) < kRootCollisionTolerance)
        fail(ErrorKind::ForbiddenParameter, "lambda must avoid 0 and the fourth roots of unity");
}

}  // namespace

Matrix jacobian_analytic_harmonic(Scalar lambda) {
    check_family_parameter(lambda);
    const Scalar l2 = lambda * lambda;
    const Scalar l4 = l2 * l2;
    const Scalar one{1};
    const Scalar a = -2.0 * (l4 + 14.0 * l2 + one) / ((lambda + one) * (lambda + one) * (lambda - one) * (lambda - one));
    return Matrix{
        {-one, a, Scalar{-4}, -4.0 * l2},
        {a, -one, Scalar{-4}, -4.0 * l2},
        {-one, -one, -one, -2.0 * l4 + 2.0 * l2 - 2.0},
        {-one / l2, -one / l2, -2.0 * (l4 - l2 + one) / l4, -one},
    };
}

HarmonicEigensystem harmonic_eigensystem(Scalar lambda) {
    check_family_parameter(lambda);
    const Scalar one{1};
    const Scalar l2 = lambda * lambda;
    const Scalar l4 = l2 * l2, l6 = l4 * l2, l8 = l4 * l4;
    const Scalar l10 = l8 * l2, l12 = l8 * l4, l14 = l8 * l6, l16 = l8 * l8;
    const Scalar disc = l16 - 8.0 * l14 + 12.0 * l12 + 8.0 * l10 + 230.0 * l8 + 8.0 * l6 + 12.0 * l4 - 8.0 * l2 + one;
    if (std::abs(disc) < 1e-12) fail(ErrorKind::BranchAmbiguity, "discriminant vanishes: the square-root branch is ambiguous");
    const Scalar root = std::sqrt(disc);

    HarmonicEigensystem out{};
    out.discriminant = disc;
    const Scalar split_den = l6 - 2.0 * l4 + l2;
    out.eigenvalues[0] = (l4 + 30.0 * l2 + one) / ((l2 - one) * (l2 - one));
    out.eigenvalues[1] = -(l8 - l6 + 16.0 * l4 - l2 + root + one) / split_den;
    out.eigenvalues[2] = -(l8 - l6 + 16.0 * l4 - l2 - root + one) / split_den;
    out.eigenvalues[3] = (2.0 * l4 - 3.0 * l2 + 2.0) / l2;

    Matrix v(4, 4);
    v(0, 0) = one;
    v(1, 0) = -one;
    for (int s = 0; s < 2; ++s) {
        const Scalar r = s == 0 ? root : -root;
        const Scalar numerator = l8 - 4.0 * l6 - 10.0 * l4 - 4.0 * l2 + r + one;
        v(0, 1 + s) = one;
        v(1, 1 + s) = one;
        v(2, 1 + s) = numerator / (8.0 * split_den);
        v(3, 1 + s) = numerator / (8.0 * (l8 - 2.0 * l6 + l4));
    }
    v(2, 3) = one;
    v(3, 3) = -one / l2;
    out.eigenvectors = std::move(v);
    return out;
}

Configuration harmonic_base_point(Scalar lambda) {
    return Configuration({ProjectivePoint::affine(lambda), ProjectivePoint::affine(-lambda),
                          ProjectivePoint::affine(Scalar{}), ProjectivePoint::infinity()});
}

ChartBasis harmonic_base_charts() {
    return ChartBasis({ChartKind::Affine, ChartKind::Affine, ChartKind::Affine, ChartKind::Inverted});
}

std::vector<HarmonicCycleSpec> all_harmonic_cycle_specs() {
    std::vector<HarmonicCycleSpec> specs;
    for (Pairing first = 0; first < 3; ++first)
        for (Pairing second = 0; second < 3; ++second) {
            if (first == second) continue;
            for (int bits = 0; bits < 4; ++bits) specs.push_back({first, second, (bits & 1) != 0, (bits & 2) != 0});
        }
    return specs;
}

UnorderedPair harmonic_pair_for(const std::vector<ProjectivePoint>& roots, Pairing pairing) {
    if (roots.size() != 4) fail(ErrorKind::DimensionMismatch, "pairings need exactly four roots");
    static constexpr std::array<std::array<int, 4>, 3> kSplits{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    if (pairing < 0 || pairing > 2) fail(ErrorKind::PreconditionViolated, "pairing index must be 0, 1 or 2");
    const auto& s = kSplits[static_cast<std::size_t>(pairing)];
    return harmonic_pair({roots[s[0]], roots[s[1]]}, {roots[s[2]], roots[s[3]]});
}

namespace {

std::vector<ProjectivePoint> distinct_roots_of(const MonicPolynomial& p) {
    if (p.degree() != 4) fail(ErrorKind::DegenerateRoots, "harmonic two-cycles need a quartic");
    std::vector<Scalar> values = p.has_roots() ? *p.roots() : solve_roots(p);
    std::vector<ProjectivePoint> roots;
    for (const Scalar& v : values) roots.push_back(ProjectivePoint::affine(v));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (chordal_distance(roots[i], roots[j]) < kRootCollisionTolerance)
                fail(ErrorKind::DegenerateRoots, "roots must be pairwise distinct");
    return roots;
}

}  // namespace

CycleReport build_harmonic_two_cycle(const MonicPolynomial& p, const HarmonicCycleSpec& spec) {
    if (spec.first == spec.second) fail(ErrorKind::PreconditionViolated, "the two pairings must differ");
    const auto roots = distinct_roots_of(p);
    UnorderedPair a = harmonic_pair_for(roots, spec.first);
    UnorderedPair b = harmonic_pair_for(roots, spec.second);
    ProjectivePoint z1 = spec.swap_first ? a.second() : a.first();
    ProjectivePoint z2 = spec.swap_first ? a.first() : a.second();
    ProjectivePoint z3 = spec.swap_second ? b.second() : b.first();
    ProjectivePoint z4 = spec.swap_second ? b.first() : b.second();
    const Configuration point({z1, z2, z3, z4});
    const IterationMap map = IterationMap::ehrlich_aberth(roots, Schedule::Jacobi);

    const Configuration image = map(point);
    const Configuration swapped({z2, z1, z4, z3});
    if (configuration_distance(image, swapped) >= 1e-8)
        fail(ErrorKind::VerificationFailed, "configuration is not mapped to its (12)(34) swap");
    return analyze_permutation_cycle(map, point);
}

std::vector<CycleReport> enumerate_harmonic_two_cycles(const MonicPolynomial& p) {
    std::vector<CycleReport> out;
    for (const auto& spec : all_harmonic_cycle_specs()) out.push_back(build_harmonic_two_cycle(p, spec));
    return out;
}

std::size_t count_distinct_configurations(const std::vector<Configuration>& configs, Real tol) {
    std::vector<const Configuration*> kept;
    for (const auto& c : configs) {
        bool seen = std::any_of(kept.begin(), kept.end(),
                                [&](const Configuration* k) { return configuration_distance(*k, c) < tol; });
        if (!seen) kept.push_back(&c);
    }
    return kept.size();
}

TraceCheck trace_check(const CycleReport& report) {
    const IterationMap& map = report.map;
    if (map.rule() != UpdateRule::EhrlichAberth || map.schedule() != Schedule::Jacobi)
        fail(ErrorKind::UnsupportedInput, "the trace law concerns the Jacobi Ehrlich-Aberth map");
    if (!report.permutation) fail(ErrorKind::PreconditionViolated, "not a permutation-type periodic point");
    const Configuration& x = report.points.front();
    const std::size_t n = x.size();

    std::vector<Homogeneous<Scalar>> roots = map.roots();
    if (roots.empty())
        for (const Scalar& r : solve_roots(*map.polynomial())) roots.push_back({r, Scalar{1}});
    std::vector<ProjectivePoint> root_points;
    for (const auto& r : roots) root_points.push_back(from_homogeneous(r));

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j)
            if (chordal_distance(x[i], x[j]) < 1e-8) fail(ErrorKind::PreconditionViolated, "coordinates coincide");
        for (const auto& r : root_points)
            if (chordal_distance(x[i], r) < 1e-8) fail(ErrorKind::PreconditionViolated, "a coordinate is a root");
    }

    std::vector<ProjectivePoint> moved_points = x.points();
    std::vector<ProjectivePoint> moved_roots = root_points;
    std::optional<MobiusMap> normalization;
    bool near_infinity = false;
    for (const auto& p : moved_points) near_infinity = near_infinity || distance_to_infinity(p) < 0.5;
    for (const auto& r : moved_roots) near_infinity = near_infinity || distance_to_infinity(r) < 0.5;
    if (near_infinity) {
        std::vector<Homogeneous<Scalar>> data = roots;
        for (const auto& p : x) data.push_back(p.homogeneous());
        normalization = MobiusMap::inversion_about(detail::conjugation_center(data));
        for (auto& p : moved_points) p = (*normalization)(p);
        for (auto& r : moved_roots) r = (*normalization)(r);
    }

    std::vector<std::size_t> sigma_inverse(n);
    for (std::size_t k = 0; k < n; ++k) sigma_inverse[(*report.permutation)[k]] = k;
    const IterationMap reduced =
        IterationMap::ehrlich_aberth(moved_roots, Schedule::Jacobi).with_post_permutation(sigma_inverse);
    const Matrix jac = jacobian_dual(reduced, Configuration(moved_points), ChartBasis::affine(n));

    TraceCheck out{jac.trace(), {}, normalization};
    for (std::size_t k = 0; k < n; ++k) out.diagonal.push_back(jac(k, k));
    return out;
}

Scalar reference_lambda() { return 0.5 * std::sqrt(Scalar{3, std::sqrt(7.0)}); }

SaddleProbe probe_saddle_lambda(Scalar lambda0) {
    for (Real delta : {1e-3, -1e-3, 1e-2, -1e-2, 1e-1, -1e-1}) {
        const Scalar lambda = lambda0 * (1 + delta);
        const IterationMap map(UpdateRule::EhrlichAberth, Schedule::Jacobi, parallelogram_family(lambda));
        CycleReport report = analyze_permutation_cycle(map, harmonic_base_point(lambda), harmonic_base_charts());
        int outside = 0, inside = 0;
        std::size_t stable = 0;
        for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
            Real m = std::abs(report.eigenvalues[k]);
            if (m > 1 + kHyperbolicityBand) {
                ++outside;
            } else if (m > kHyperbolicityBand && m < 1 - kHyperbolicityBand) {
                ++inside;
                stable = k;
            }
        }
        if (outside == 3 && inside == 1) return {lambda, delta, report.eigenvalues, stable};
    }
    fail(ErrorKind::NotSaddle, "no probed lambda gives three repelling and one attracting direction");
}

}  // namespace orbitforge
