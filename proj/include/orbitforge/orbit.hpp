#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "orbitforge/iteration.hpp"

namespace orbitforge {

enum class OrbitStatus { Converged, Diverged, Indeterminate, MaxIterations };
std::string_view to_string(OrbitStatus status);

enum class DivergenceMode { AnyComponent, EveryComponent };
std::string_view to_string(DivergenceMode mode);

inline constexpr Real kDivergenceThreshold = 1e8;
inline constexpr int kDefaultMaxIterations = 10000;

struct OrbitOptions {
    int max_iter = kDefaultMaxIterations;
    Real divergence_threshold = kDivergenceThreshold;
    DivergenceMode mode = DivergenceMode::AnyComponent;
    /// Converged once no coordinate moves more than this (chordal) in one step.
    Real convergence_tol = 1e-12;
};

struct OrbitTrace {
    std::vector<Configuration> states;
    /// Largest affine modulus per state (+inf if a coordinate is infinite).
    std::vector<Real> affine_norms;
    /// Per state and coordinate: is the coordinate exactly infinite.
    std::vector<std::vector<bool>> infinite;
    OrbitStatus status = OrbitStatus::MaxIterations;
    int iterations = 0;
    /// Optional per-state distance to a reference cycle (filled by experiments).
    std::vector<Real> cycle_distance;
    /// Message of the step error for Indeterminate runs.
    std::string failure;

    void record(const Configuration& state);
};

/// Divergence of a single state in C^n. A state with an exactly infinite
/// coordinate is not in C^n and never counts as diverging.
bool detect_divergence(const Configuration& state, DivergenceMode mode, Real threshold = kDivergenceThreshold);
bool detect_divergence(const OrbitTrace& trace, DivergenceMode mode, Real threshold = kDivergenceThreshold);

using StepFunction = std::function<Configuration(const Configuration&)>;

/// Iterates until a step fails (Indeterminate), the divergence predicate
/// fires (Diverged), the step size falls below the tolerance (Converged), or
/// max_iter steps were taken.
OrbitTrace iterate_orbit(const StepFunction& step, const Configuration& start, const OrbitOptions& options = {});
OrbitTrace iterate_orbit(const IterationMap& map, const Configuration& start, const OrbitOptions& options = {});

// ---------------------------------------------------------------------------

struct RootFindOptions {
    UpdateRule rule = UpdateRule::EhrlichAberth;
    Schedule schedule = Schedule::Jacobi;
    std::optional<Configuration> init;
    int max_iter = 500;
    /// Stop once every |dz_i| <= tol * max(1, |z_i|).
    Real tol = 1e-14;
};

struct RootFindResult {
    OrbitStatus status = OrbitStatus::MaxIterations;
    Configuration approximations;
    int iterations = 0;
    /// max |p(z_i)| over the final approximations.
    Real residual = 0;
    /// When the polynomial carries its roots: the known roots reordered to
    /// match the approximations, and the largest mismatch.
    std::optional<std::vector<Scalar>> matched_roots;
    std::optional<Real> match_error;
    std::string failure;
};

RootFindResult root_find(const MonicPolynomial& p, const RootFindOptions& options = {});

/// Reorders `targets` to minimize the largest |approx_k - target_k|.
std::vector<Scalar> match_roots(const std::vector<Scalar>& approximations, const std::vector<Scalar>& targets);

}  // namespace orbitforge
