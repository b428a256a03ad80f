#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "orbitforge/harmonic.hpp"
#include "orbitforge/iteration.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge {

// Gauss-Seidel Weierstrass for cubics. On the plane w = 0 of P^3 the cyclic
// shift R_p reduces to phi, independent of p; a configuration with
// GSW_{z^3}(z1, z2, z3) = (z1, z2, z3) / lambda is a fixed point of phi^3.

/// Monic factors whose roots are the admissible lambda values, lower
/// coefficients in ascending order: a quintic, a cubic and a quadratic.
std::array<MonicPolynomial, 3> gsw_lambda_factors();

/// (z1, ..., z5) with z6 = 1.
using GswUnknowns = std::array<Scalar, 5>;

/// The three Weierstrass relations followed by -lambda z_{k+3} + z_k.
std::array<Scalar, 6> gsw_residuals(const GswUnknowns& z, Scalar lambda);

struct GswSolution {
    Scalar lambda;
    /// Index into gsw_lambda_factors().
    int factor = 0;
    /// z1 ... z6 with z6 = 1.
    std::array<Scalar, 6> z{};
    /// Largest modulus among the six residuals.
    Real residual = 0;

    bool has_zero_coordinate(Real tol = 1e-8) const;
    std::array<Scalar, 3> cycle_point() const { return {z[0], z[1], z[2]}; }
};

struct GswLambdaReport {
    Scalar lambda;
    int factor = 0;
    int solutions = 0;
    /// Starts whose damped Newton run did not reach the residual tolerance.
    int failed_starts = 0;
};

struct GswSolveOptions {
    int starts = 200;
    std::uint64_t seed = 20240611;
    int max_newton = 100;
    int max_halvings = 50;
    Real residual_tol = 1e-10;
    Real dedupe_tol = 1e-6;
};

struct GswSolveResult {
    /// Sorted by factor, then lambda, then coordinates.
    std::vector<GswSolution> solutions;
    std::vector<GswLambdaReport> lambdas;
    /// Lambda roots for which no start converged.
    std::vector<Scalar> empty_lambdas;
};

/// Damped Gauss-Newton on the six equations in z1..z5 for every lambda root,
/// from seeded random starts (one engine per start index), with
/// deduplication by per-coordinate chordal distance.
GswSolveResult solve_gsw_z3_cycles(const GswSolveOptions& options = {});

/// The z^3 - 1 and z^3 + 2z - 5 pair used to check p-independence.
std::vector<MonicPolynomial> default_transverse_cubics();

struct TransverseCheck {
    MonicPolynomial p;
    /// D(R_p^3) at [z1:z2:z3:0] in the chart of the largest z, w last.
    Matrix jacobian;
    Scalar eigenvalue;
    /// Largest modulus of the entries that vanish for a triangular block form.
    Real off_block = 0;
};

struct PhiCycleReport {
    GswSolution solution;
    /// [z1:z2:z3], phi of it and phi^2 of it, normalized.
    std::array<std::array<Scalar, 3>, 3> orbit{};
    /// Index of the coordinate set to 1 in the chart.
    std::size_t chart = 0;
    Matrix jacobian;
    std::vector<Scalar> eigenvalues;
    Stability classification = Stability::NonHyperbolic;
    /// 1 / lambda, the scaling of the affine cycle.
    Scalar mu;
    /// |GSW_{z^3}(z1, z2, z3) - mu (z1, z2, z3)| relative to max |z|.
    Real scaling_error = 0;
    std::vector<TransverseCheck> transverse;
    /// max |transverse eigenvalue - lambda|.
    Real transverse_error = 0;
    /// Largest difference between the transverse eigenvalues of the cubics.
    Real transverse_spread = 0;
};

/// D(phi^3) at the cycle point and D(R_p^3) at the w = 0 point for each
/// cubic. ZeroCoordinate if some z_k vanishes; VerificationFailed if phi^3
/// does not return to the start within 1e-8.
PhiCycleReport classify_phi_cycle(const GswSolution& solution,
                                  const std::vector<MonicPolynomial>& cubics = default_transverse_cubics());

/// The first solution (in result order) with |lambda| < 1, no zero
/// coordinate, and a phi-repelling cycle. PreconditionViolated if none.
PhiCycleReport select_divergence_cycle(const GswSolveResult& result);

/// Index of the largest-modulus coordinate.
std::size_t largest_coordinate(const std::array<Scalar, 3>& z);

struct GswRunOptions {
    int max_iter = kDefaultMaxIterations;
    Real divergence_threshold = kDivergenceThreshold;
    /// Refine the start onto the stable manifold of the w = 0 point.
    bool refine = true;
    int refine_steps = 2;
};

struct GswRunResult {
    /// Normalized points of P^3 after each application of R_p^3.
    std::vector<std::array<Scalar, 4>> projective_states;
    /// The same states as configurations [z_k : w].
    OrbitTrace trace;
    std::array<Scalar, 4> start{};
    bool refined = false;
};

/// Iterates R_p^3 from [z1 : z2 : z3 : delta] near the w = 0 cycle point,
/// with delta measured in the chart of the largest z. For delta != 0 and
/// refine, the start is moved onto the stable manifold. Divergence is
/// tested with every affine coordinate z_k / w; trace.cycle_distance holds
/// the projective distance to the cycle point.
/// PreconditionViolated unless p is a cubic with distinct roots and the
/// cycle is phi-repelling with an attracting transverse direction.
GswRunResult gsw_divergence_run(const MonicPolynomial& p, const PhiCycleReport& cycle, Real delta,
                                const GswRunOptions& options = {});

/// [z1 : z2 : z3 : w] as the configuration ([z1 : w], [z2 : w], [z3 : w]).
Configuration gsw_configuration(const std::array<Scalar, 4>& v);

}  // namespace orbitforge
