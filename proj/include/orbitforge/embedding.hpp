#pragma once

#include <array>
#include <span>
#include <vector>

#include "orbitforge/gsw.hpp"
#include "orbitforge/harmonic.hpp"
#include "orbitforge/manifold.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge {

/// (z1, ..., zn) -> (z1, ..., zn, extra...). CoincidenceWithExtra if an extra
/// value is within chordal 1e-12 of a coordinate or of another extra.
Configuration embed_configuration(const Configuration& config, std::span<const Scalar> extra);

struct EmbeddingCheck {
    /// map_{p (z - extra)}(embedded x).
    Configuration lifted_image;
    /// embedded map_p(x).
    Configuration embedded_image;
    /// Largest per-coordinate chordal distance between the two.
    Real distance = 0;
};

/// Compares the map for p times the extra linear factors at the embedded
/// point with the embedded image under the map for p. For Gauss-Seidel the
/// extra coordinates are updated last; CoincidenceWithExtra if an image
/// coordinate of x lands on an extra value.
EmbeddingCheck verify_embedding(UpdateRule rule, Schedule schedule, const MonicPolynomial& p, const Configuration& x,
                                std::span<const Scalar> extra);

/// Extra roots 7, -6, 9, -8, 11, ... skipping values within 1e-6 of `avoid`.
std::vector<Scalar> default_extra_roots(std::size_t count, std::span<const Scalar> avoid);

// ---------------------------------------------------------------------------
// Diverging orbits of Jacobi Ehrlich-Aberth in any degree d >= 4.

struct EaDivergenceOptions {
    int max_iter = kDefaultMaxIterations;
    Real divergence_threshold = kDivergenceThreshold;
    Real epsilon = 1e-4;
    /// Extra roots; defaults to default_extra_roots avoiding 0, +-lambda and the roots.
    std::vector<Scalar> extras;
    /// Window at the end of the trace checked for monotone approach to the cycle.
    std::size_t monotone_window = 100;
};

struct EaDivergenceResult {
    SaddleProbe probe;
    CycleReport cycle;
    /// The degree-4 run on the stable manifold.
    ShootingResult base;
    MonicPolynomial polynomial;
    std::vector<Scalar> extras;
    /// The run of the degree-d map from the embedded start; cycle_distance on
    /// the first four coordinates.
    OrbitTrace trace;
    /// max |z_k - alpha_k| over states and extra coordinates.
    Real pinned_error = 0;
    /// Distance to the cycle never grows by more than 1e-12 within the window.
    bool monotone = false;
};

/// PreconditionViolated for d < 4.
EaDivergenceResult ea_divergence_run(int degree, const EaDivergenceOptions& options = {});

// ---------------------------------------------------------------------------
// Diverging orbits of Gauss-Seidel Weierstrass in any degree d >= 3.

struct GswEmbeddedOptions {
    int max_iter = kDefaultMaxIterations;
    Real divergence_threshold = kDivergenceThreshold;
    Real delta = 1e-6;
    /// The tail starts where every coordinate keeps this chordal distance from the roots.
    Real root_clearance = 1e-6;
};

struct GswEmbeddedResult {
    MonicPolynomial cubic;
    std::vector<Scalar> extras;
    GswRunResult base;
    /// Index into base states where the embedded orbit starts.
    std::size_t tail_start = 0;
    /// Embedded tail; status Diverged when the first three coordinates all
    /// exceed the threshold in the last state.
    OrbitTrace trace;
    /// Largest relative difference between the map for the full polynomial
    /// at each embedded state and the next embedded state.
    Real max_step_mismatch = 0;
    /// max |image extra - alpha| over the verified steps.
    Real pinned_error = 0;
};

/// Runs the cubic orbit for roots[cubic[0..2]], keeps the tail that stays
/// clear of all roots (TailNotFound if none) and verifies it stepwise under
/// Gauss-Seidel Weierstrass for the full polynomial. PreconditionViolated if
/// the roots are not distinct.
GswEmbeddedResult gsw_embedded_run(const std::vector<Scalar>& roots, const std::array<std::size_t, 3>& cubic,
                                   const PhiCycleReport& cycle, const GswEmbeddedOptions& options = {});

}  // namespace orbitforge
