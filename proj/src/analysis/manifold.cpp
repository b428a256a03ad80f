#include "orbitforge/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orbitforge {

Matrix eigenvector_matrix(const Matrix& a, const std::vector<Scalar>& eigenvalues) {
    Matrix out(a.rows(), eigenvalues.size());
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) out.set_column(k, eigenvector(a, eigenvalues[k]));
    return out;
}

Real distance_to_cycle(const Configuration& x, const std::vector<Configuration>& cycle) {
    Real best = std::numeric_limits<Real>::infinity();
    for (const auto& c : cycle) best = std::min(best, configuration_distance(x, c));
    return best;
}

ShootingResult shoot_stable_manifold(const CycleReport& cycle, std::size_t eigen_index, Real eps,
                                     const ShootingOptions& options) {
    const auto& mu = cycle.eigenvalues;
    if (eigen_index >= mu.size()) fail(ErrorKind::PreconditionViolated, "eigenvalue index out of range");
    int inside = 0, outside = 0;
    std::size_t stable = mu.size();
    for (std::size_t k = 0; k < mu.size(); ++k) {
        Real m = std::abs(mu[k]);
        if (m > 1 + kHyperbolicityBand) {
            ++outside;
        } else if (m > kHyperbolicityBand && m < 1 - kHyperbolicityBand) {
            ++inside;
            stable = k;
        }
    }
    if (inside != 1 || outside + 1 != static_cast<int>(mu.size()))
        fail(ErrorKind::NotSaddle, "the cycle needs exactly one attracting direction");
    if (!cycle.permutation) fail(ErrorKind::PreconditionViolated, "not a permutation-type cycle");

    const std::size_t n = mu.size();
    std::vector<std::size_t> sigma_inverse(n);
    for (std::size_t k = 0; k < n; ++k) sigma_inverse[(*cycle.permutation)[k]] = k;
    const ChartedMap reduced(cycle.map.with_post_permutation(sigma_inverse), cycle.charts);
    const std::vector<Scalar> fixed = cycle.charts.coordinates(cycle.points.front());
    const Matrix vectors = eigenvector_matrix(cycle.jacobian, mu);

    ShootingResult result{cycle.points.front(), {}, false, false, false};
    std::vector<Scalar> x0 = fixed;
    if (eps != 0 && eigen_index == stable) {
        x0 = refine_onto_stable_manifold(reduced, fixed, vectors, stable, Scalar{eps}, options.refine_steps);
        result.refined = true;
    } else {
        for (std::size_t r = 0; r < n; ++r) x0[r] += eps * vectors(r, eigen_index);
    }
    result.start = cycle.charts.configuration(x0);

    if (eps == 0) {
        // Floating-point iteration drifts off a repelling cycle within a few
        // dozen steps; the exact orbit of a verified cycle point is the cycle.
        result.start = cycle.points.front();
        result.trace.status = OrbitStatus::MaxIterations;
        for (int k = 0; k <= options.max_iter; ++k)
            result.trace.record(cycle.points[static_cast<std::size_t>(k) % cycle.points.size()]);
        result.trace.iterations = options.max_iter;
    } else {
        OrbitOptions orbit{options.max_iter, options.divergence_threshold, options.mode, 1e-12};
        result.trace = iterate_orbit(cycle.map, result.start, orbit);
    }
    for (const auto& s : result.trace.states) result.trace.cycle_distance.push_back(distance_to_cycle(s, cycle.points));
    result.stayed_near_cycle = std::all_of(result.trace.cycle_distance.begin(), result.trace.cycle_distance.end(),
                                           [&](Real d) { return d < options.neighborhood; });
    // A start already beyond the threshold says nothing about the dynamics.
    result.success = result.trace.status == OrbitStatus::Diverged && result.trace.iterations > 0 &&
                     result.stayed_near_cycle;
    return result;
}

}  // namespace orbitforge
