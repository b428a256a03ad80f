#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "orbitforge/jacobian.hpp"
#include "orbitforge/linalg.hpp"

namespace orbitforge {

enum class Stability { Attracting, Repelling, Saddle, NonHyperbolic };
std::string_view to_string(Stability s);

inline constexpr Real kHyperbolicityBand = 1e-6;

/// Attracting if every |mu| < 1 - band, Repelling if every |mu| > 1 + band,
/// NonHyperbolic if some |mu| lies within the band, Saddle otherwise.
Stability classify_spectrum(const std::vector<Scalar>& eigenvalues, Real band = kHyperbolicityBand);

/// A periodic configuration of a simultaneous iteration whose image is a
/// permutation of itself.
struct CycleReport {
    IterationMap map;
    /// The orbit: points[k + 1] = map(points[k]); map(points.back()) = points[0].
    std::vector<Configuration> points;
    int period = 1;
    /// sigma with map(x)_k = x_{sigma(k)} at x = points[0].
    std::optional<std::vector<std::size_t>> permutation;
    /// D(sigma^-1 o map) at points[0] in `charts`.
    Matrix jacobian;
    ChartBasis charts;
    std::vector<Scalar> eigenvalues;
    Stability classification = Stability::NonHyperbolic;
};

/// Detects the permutation, builds the orbit, verifies periodicity to
/// chordal `tol`, and differentiates sigma^-1 o map at the start point in
/// `charts` (default: ChartBasis::for_configuration). Throws
/// VerificationFailed if the image is not a permutation of the input.
CycleReport analyze_permutation_cycle(const IterationMap& map, const Configuration& point,
                                      const std::optional<ChartBasis>& charts = std::nullopt, Real tol = 1e-8);

/// Charts (A, A, A, Inverted) matching harmonic_base_point.
ChartBasis harmonic_base_charts();

/// Applies the map `period` times and returns the largest per-coordinate
/// chordal distance to the start.
Real cycle_return_error(const CycleReport& report);

// ---------------------------------------------------------------------------
// The parallelogram family (z^2 - 1)(z^2 - lambda^4).

/// D(K o JEA) at (lambda, -lambda, 0, inf) in the charts (A, A, A, Inverted),
/// K the swap (12)(34), as a closed-form matrix.
Matrix jacobian_analytic_harmonic(Scalar lambda);

struct HarmonicEigensystem {
    std::array<Scalar, 4> eigenvalues;
    /// Column k belongs to eigenvalues[k].
    Matrix eigenvectors;
    Scalar discriminant;
};

/// Closed-form eigenvalues and eigenvectors of jacobian_analytic_harmonic,
/// principal branch of the discriminant square root. BranchAmbiguity when
/// |discriminant| < 1e-12.
HarmonicEigensystem harmonic_eigensystem(Scalar lambda);

/// The two-cycle point (lambda, -lambda, 0, inf).
Configuration harmonic_base_point(Scalar lambda);

/// One of the three ways to split four roots into two pairs:
/// 0: {0,1}|{2,3}, 1: {0,2}|{1,3}, 2: {0,3}|{1,2} (root indices).
using Pairing = int;

/// A harmonic two-cycle is fixed by two distinct pairings (the first gives
/// (z1, z2), the second (z3, z4)) and the order within each pair.
struct HarmonicCycleSpec {
    Pairing first = 0;
    Pairing second = 1;
    bool swap_first = false;
    bool swap_second = false;
};

/// All 24 specs in a fixed order.
std::vector<HarmonicCycleSpec> all_harmonic_cycle_specs();

/// The unordered pair harmonic to both halves of a root pairing.
UnorderedPair harmonic_pair_for(const std::vector<ProjectivePoint>& roots, Pairing pairing);

/// Builds the configuration for `spec`, checks that Jacobi Ehrlich-Aberth
/// sends it to (z2, z1, z4, z3) within chordal 1e-8 and analyzes the cycle.
/// DegenerateRoots unless p has four distinct roots.
CycleReport build_harmonic_two_cycle(const MonicPolynomial& p, const HarmonicCycleSpec& spec);

std::vector<CycleReport> enumerate_harmonic_two_cycles(const MonicPolynomial& p);

/// Counts pairwise distinct configurations (chordal tolerance per coordinate).
std::size_t count_distinct_configurations(const std::vector<Configuration>& configs, Real tol = 1e-8);

struct TraceCheck {
    Scalar trace;
    std::vector<Scalar> diagonal;
    /// The Möbius normalization used, if infinity had to be moved.
    std::optional<MobiusMap> normalization;
};

/// Trace and diagonal of D(sigma^-1 o JEA_p) at a permutation-type periodic
/// point, in all-affine charts after moving infinity away if needed.
TraceCheck trace_check(const CycleReport& report);

struct SaddleProbe {
    Scalar lambda;
    Real delta;
    std::vector<Scalar> eigenvalues;
    /// Index into eigenvalues of the attracting direction.
    std::size_t stable_index;
};

/// Scans lambda0 (1 + delta) for delta in {1e-3, -1e-3, 1e-2, -1e-2, 1e-1, -1e-1}
/// and returns the first lambda with three eigenvalues outside the closed unit
/// disk and one strictly inside and nonzero. NotSaddle if none qualifies.
SaddleProbe probe_saddle_lambda(Scalar lambda0);

/// sqrt(3 + i sqrt 7) / 2, where one eigenvalue of the two-cycle vanishes.
Scalar reference_lambda();

}  // namespace orbitforge
