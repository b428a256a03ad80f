#include "orbitforge/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orbitforge {

namespace {

void require_clear(const Configuration& config, std::span<const Scalar> extra, Real tol) {
    for (std::size_t a = 0; a < extra.size(); ++a) {
        const auto alpha = ProjectivePoint::affine(extra[a]);
        for (const auto& z : config)
            if (chordal_distance(z, alpha) <= tol)
                fail(ErrorKind::CoincidenceWithExtra, "an extra value coincides with a coordinate");
        for (std::size_t b = 0; b < a; ++b)
            if (chordal_distance(ProjectivePoint::affine(extra[b]), alpha) <= tol)
                fail(ErrorKind::CoincidenceWithExtra, "repeated extra value");
    }
}

Real relative_difference(const ProjectivePoint& a, const ProjectivePoint& b) {
    if (a.is_infinity() || b.is_infinity()) return chordal_distance(a, b);
    const Scalar x = a.affine_value(), y = b.affine_value();
    return std::abs(x - y) / std::max<Real>(1, std::abs(y));
}

}  // namespace

Configuration embed_configuration(const Configuration& config, std::span<const Scalar> extra) {
    require_clear(config, extra, 1e-12);
    std::vector<ProjectivePoint> points(config.begin(), config.end());
    for (const auto& a : extra) points.push_back(ProjectivePoint::affine(a));
    return Configuration(std::move(points));
}

EmbeddingCheck verify_embedding(UpdateRule rule, Schedule schedule, const MonicPolynomial& p, const Configuration& x,
                                std::span<const Scalar> extra) {
    const Configuration lifted = embed_configuration(x, extra);
    const Configuration image = IterationMap(rule, schedule, p)(x);
    require_clear(image, extra, 1e-12);
    EmbeddingCheck check;
    check.lifted_image = IterationMap(rule, schedule, p.with_extra_roots(extra))(lifted);
    check.embedded_image = embed_configuration(image, extra);
    check.distance = configuration_distance(check.lifted_image, check.embedded_image);
    return check;
}

std::vector<Scalar> default_extra_roots(std::size_t count, std::span<const Scalar> avoid) {
    std::vector<Scalar> out;
    for (int k = 0; out.size() < count; ++k) {
        // 7, -6, 9, -8, 11, -10, ...
        const Scalar candidate = k % 2 == 0 ? Scalar(7 + k) : Scalar(-(5 + k));
        bool clash = std::any_of(avoid.begin(), avoid.end(), [&](Scalar a) { return std::abs(a - candidate) < 1e-6; });
        if (!clash) out.push_back(candidate);
    }
    return out;
}

EaDivergenceResult ea_divergence_run(int degree, const EaDivergenceOptions& options) {
    if (degree < 4) fail(ErrorKind::PreconditionViolated, "degree must be at least 4");
    const SaddleProbe probe = probe_saddle_lambda(reference_lambda());
    const Scalar lambda = probe.lambda;
    const MonicPolynomial p = parallelogram_family(lambda);

    const std::size_t k = static_cast<std::size_t>(degree - 4);
    std::vector<Scalar> forbidden{Scalar{0}, lambda, -lambda};
    for (const auto& r : *p.roots()) forbidden.push_back(r);
    std::vector<Scalar> extras = options.extras;
    if (extras.empty()) extras = default_extra_roots(k, forbidden);
    if (extras.size() != k) fail(ErrorKind::DimensionMismatch, "need degree - 4 extra roots");
    require_clear(Configuration::from_affine(forbidden), extras, 1e-6);

    EaDivergenceResult result{probe,
                              analyze_permutation_cycle(IterationMap(UpdateRule::EhrlichAberth, Schedule::Jacobi, p),
                                                        harmonic_base_point(lambda), harmonic_base_charts()),
                              {},
                              p.with_extra_roots(extras),
                              extras,
                              {},
                              0,
                              false};
    ShootingOptions shooting;
    shooting.max_iter = options.max_iter;
    shooting.divergence_threshold = options.divergence_threshold;
    result.base = shoot_stable_manifold(result.cycle, probe.stable_index, options.epsilon, shooting);

    const IterationMap map(UpdateRule::EhrlichAberth, Schedule::Jacobi, result.polynomial);
    OrbitOptions orbit{options.max_iter, options.divergence_threshold, DivergenceMode::AnyComponent, 1e-12};
    result.trace = iterate_orbit(map, embed_configuration(result.base.start, result.extras), orbit);

    for (const auto& s : result.trace.states) {
        Configuration head(std::vector<ProjectivePoint>(s.begin(), s.begin() + 4));
        result.trace.cycle_distance.push_back(distance_to_cycle(head, result.cycle.points));
        for (std::size_t a = 0; a < k; ++a) {
            const auto& z = s[4 + a];
            Real err = z.is_infinity() ? std::numeric_limits<Real>::infinity() : std::abs(z.affine_value() - result.extras[a]);
            result.pinned_error = std::max(result.pinned_error, err);
        }
    }
    const auto& d = result.trace.cycle_distance;
    const std::size_t from = d.size() > options.monotone_window ? d.size() - options.monotone_window : 0;
    result.monotone = true;
    for (std::size_t i = from + 1; i < d.size(); ++i)
        if (d[i] > d[i - 1] + 1e-12) result.monotone = false;
    return result;
}

GswEmbeddedResult gsw_embedded_run(const std::vector<Scalar>& roots, const std::array<std::size_t, 3>& cubic,
                                   const PhiCycleReport& cycle, const GswEmbeddedOptions& options) {
    const std::size_t d = roots.size();
    if (d < 3) fail(ErrorKind::PreconditionViolated, "need at least three roots");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8) fail(ErrorKind::PreconditionViolated, "repeated roots");
    std::vector<bool> in_cubic(d, false);
    std::vector<Scalar> cubic_roots;
    for (auto i : cubic) {
        if (i >= d || in_cubic[i]) fail(ErrorKind::PreconditionViolated, "invalid cubic factor selection");
        in_cubic[i] = true;
        cubic_roots.push_back(roots[i]);
    }

    GswEmbeddedResult result{from_roots(cubic_roots), {}, {}, 0, {}, 0, 0};
    for (std::size_t i = 0; i < d; ++i)
        if (!in_cubic[i]) result.extras.push_back(roots[i]);

    GswRunOptions run;
    run.max_iter = options.max_iter;
    run.divergence_threshold = options.divergence_threshold;
    result.base = gsw_divergence_run(result.cubic, cycle, options.delta, run);

    // The tail begins after the last state with a coordinate near a root.
    const auto& states = result.base.trace.states;
    std::size_t start = 0;
    for (std::size_t s = 0; s < states.size(); ++s) {
        for (const auto& z : states[s])
            for (const auto& r : roots)
                if (chordal_distance(z, ProjectivePoint::affine(r)) <= options.root_clearance) start = s + 1;
    }
    if (start >= states.size()) fail(ErrorKind::TailNotFound, "no tail of the orbit stays clear of the roots");
    for (std::size_t s = start; s < states.size(); ++s)
        if (std::any_of(states[s].begin(), states[s].end(), [](const ProjectivePoint& z) { return z.is_infinity(); }))
            fail(ErrorKind::TailNotFound, "the orbit has a coordinate at infinity");
    result.tail_start = start;

    const IterationMap map(UpdateRule::Weierstrass, Schedule::GaussSeidel, from_roots(roots));
    for (std::size_t s = start; s < states.size(); ++s) {
        result.trace.record(embed_configuration(states[s], result.extras));
        result.trace.cycle_distance.push_back(result.base.trace.cycle_distance[s]);
    }
    for (std::size_t s = 0; s + 1 < result.trace.states.size(); ++s) {
        const Configuration image = map(result.trace.states[s]);
        const Configuration& next = result.trace.states[s + 1];
        for (std::size_t i = 0; i < 3; ++i)
            result.max_step_mismatch = std::max(result.max_step_mismatch, relative_difference(image[i], next[i]));
        for (std::size_t a = 0; a < result.extras.size(); ++a) {
            const auto& z = image[3 + a];
            Real err = z.is_infinity() ? std::numeric_limits<Real>::infinity() : std::abs(z.affine_value() - result.extras[a]);
            result.pinned_error = std::max(result.pinned_error, err);
        }
    }
    result.trace.status = result.base.trace.status;
    result.trace.failure = result.base.trace.failure;
    result.trace.iterations = static_cast<int>(result.trace.states.size()) - 1;
    return result;
}

}  // namespace orbitforge
