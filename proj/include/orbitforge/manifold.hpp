#pragma once

#include <vector>

#include "orbitforge/dual.hpp"
#include "orbitforge/harmonic.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge {

/// Start point x* + eps v_s + V_u c near a fixed point x* of g with exactly one
/// contracting eigendirection v_s (column `stable_index` of `eigenvectors`).
/// c is chosen by Newton's method so that g^steps(x0) - x* has no component
/// along the expanding eigenvectors V_u: a second-order point on the stable
/// manifold, without which the expanding directions amplify the O(eps^2)
/// error of the linear approximation.
template <class G>
std::vector<Scalar> refine_onto_stable_manifold(const G& g, const std::vector<Scalar>& fixed, const Matrix& eigenvectors,
                                                std::size_t stable_index, Scalar eps, int steps = 2,
                                                int newton_iters = 20) {
    const std::size_t n = fixed.size();
    const Matrix to_eigen = inverse(eigenvectors);
    std::vector<std::size_t> unstable;
    for (std::size_t k = 0; k < n; ++k)
        if (k != stable_index) unstable.push_back(k);
    const std::size_t m = unstable.size();

    auto start = [&](const std::vector<Dual>& c) {
        std::vector<Dual> x(n);
        for (std::size_t r = 0; r < n; ++r) {
            Dual acc = fixed[r] + eps * eigenvectors(r, stable_index);
            for (std::size_t j = 0; j < m; ++j) acc = acc + c[j] * eigenvectors(r, unstable[j]);
            x[r] = acc;
        }
        return x;
    };
    // Expanding eigencomponents of g^steps(x0) - x*, with one tangent seeded.
    auto residual = [&](const std::vector<Dual>& c) {
        std::vector<Dual> y = start(c);
        for (int s = 0; s < steps; ++s) y = g(y);
        std::vector<Dual> out(m);
        for (std::size_t j = 0; j < m; ++j) {
            Dual acc{};
            for (std::size_t r = 0; r < n; ++r) acc = acc + to_eigen(unstable[j], r) * (y[r] - fixed[r]);
            out[j] = acc;
        }
        return out;
    };

    std::vector<Scalar> c(m);
    for (int it = 0; it < newton_iters; ++it) {
        Matrix jac(m, m);
        std::vector<Scalar> r(m);
        for (std::size_t col = 0; col < m; ++col) {
            std::vector<Dual> seeded(c.begin(), c.end());
            seeded[col].d = Scalar{1};
            auto out = residual(seeded);
            for (std::size_t row = 0; row < m; ++row) {
                jac(row, col) = out[row].d;
                r[row] = out[row].v;
            }
        }
        for (auto& x : r) x = -x;
        const auto dc = solve(jac, r);
        Real size = 0, change = 0;
        for (std::size_t j = 0; j < m; ++j) {
            c[j] += dc[j];
            size = std::max(size, std::abs(c[j]));
            change = std::max(change, std::abs(dc[j]));
        }
        if (change <= 1e-16 * std::max<Real>(size, std::abs(eps))) break;
    }
    std::vector<Scalar> x(n);
    for (std::size_t r = 0; r < n; ++r) {
        x[r] = fixed[r] + eps * eigenvectors(r, stable_index);
        for (std::size_t j = 0; j < m; ++j) x[r] += c[j] * eigenvectors(r, unstable[j]);
    }
    return x;
}

/// Eigenvector matrix (columns) of a matrix with distinct eigenvalues.
Matrix eigenvector_matrix(const Matrix& a, const std::vector<Scalar>& eigenvalues);

struct ShootingOptions {
    int max_iter = kDefaultMaxIterations;
    Real divergence_threshold = kDivergenceThreshold;
    DivergenceMode mode = DivergenceMode::AnyComponent;
    /// The orbit counts as staying near the cycle while its distance is below this.
    Real neighborhood = 0.1;
    /// Iterates of the reduced map used by the stable-manifold refinement.
    int refine_steps = 2;
};

struct ShootingResult {
    Configuration start;
    OrbitTrace trace;
    /// Whether the Newton refinement onto the stable manifold was applied.
    bool refined = false;
    bool stayed_near_cycle = false;
    /// Diverged after at least one step while staying near the cycle.
    bool success = false;
};

/// Largest per-coordinate chordal distance to the nearest point of the cycle.
Real distance_to_cycle(const Configuration& x, const std::vector<Configuration>& cycle);

/// Perturbs the cycle point by eps along eigenvector `eigen_index` of the
/// cycle Jacobian (in the cycle charts) and iterates the cycle's map.
/// Along the attracting direction the start is refined onto the stable
/// manifold. eps = 0 yields the cycle orbit itself. NotSaddle unless exactly one eigenvalue lies strictly inside the
/// unit disk (and away from 0) and all others strictly outside.
ShootingResult shoot_stable_manifold(const CycleReport& cycle, std::size_t eigen_index, Real eps,
                                     const ShootingOptions& options = {});

}  // namespace orbitforge
