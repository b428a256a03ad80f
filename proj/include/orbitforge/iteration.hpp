#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orbitforge/error.hpp"
#include "orbitforge/polynomial.hpp"
#include "orbitforge/projective.hpp"

namespace orbitforge {

/// Ordered tuple of points of P^1: the state of a degree-n simultaneous method.
/// Coordinates may coincide; the steps, not the type, reject that.
class Configuration {
  public:
    Configuration() = default;
    explicit Configuration(std::vector<ProjectivePoint> points) : points_(std::move(points)) {}

    static Configuration from_affine(std::span<const Scalar> values);
    static Configuration from_homogeneous(std::span<const Homogeneous<Scalar>> values);

    std::size_t size() const noexcept { return points_.size(); }
    const ProjectivePoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<ProjectivePoint>& points() const noexcept { return points_; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    std::vector<Homogeneous<Scalar>> homogeneous() const;
    /// Affine values; throws InfiniteCoordinate if a coordinate is at infinity.
    std::vector<Scalar> affine_values() const;

  private:
    std::vector<ProjectivePoint> points_;
};

/// Largest per-coordinate chordal distance.
Real configuration_distance(const Configuration& a, const Configuration& b);

enum class UpdateRule { Weierstrass, EhrlichAberth };
enum class Schedule { Jacobi, GaussSeidel, CyclicShift };

std::string_view to_string(UpdateRule rule);
std::string_view to_string(Schedule schedule);

/// Relative threshold below which two affine coordinates count as coincident.
inline constexpr Real kCoincidenceTolerance = 1e-12;
/// Chordal threshold for coincidences in the projective Ehrlich-Aberth step.
inline constexpr Real kProjectiveCoincidenceTolerance = 1e-12;
/// Points this close (chordally) to infinity trigger the conjugated chart.
inline constexpr Real kNearInfinity = 1e-6;

// Indices are 0-based throughout the API.

/// z_i - p(z_i) / prod_{j != i} (z_i - z_j). Affine only.
Scalar weierstrass_step(const MonicPolynomial& p, std::size_t i, const Configuration& config);

/// z_i - 1/S with S = sum_j 1/(z_i - alpha_j) - sum_{j != i} 1/(z_i - z_j)
/// (root-sum form when roots are stored, p'/p otherwise).
Scalar ea_step_affine(const MonicPolynomial& p, std::size_t i, const Configuration& config);

/// Möbius-equivariant Ehrlich-Aberth step on P^1. Roots may contain at most
/// one point at infinity (a polynomial of lower degree).
ProjectivePoint ea_step_projective(std::span<const ProjectivePoint> roots, std::size_t i,
                                   const Configuration& config);
ProjectivePoint ea_step_projective(const MonicPolynomial& p, std::size_t i, const Configuration& config);

/// Roots of p by the Jacobi Ehrlich-Aberth iteration from the default start.
std::vector<Scalar> solve_roots(const MonicPolynomial& p);

/// Scaled roots of unity around the root centroid, deterministically perturbed.
Configuration default_initial_configuration(const MonicPolynomial& p);

namespace detail {

template <class T>
Real chordal_to_infinity(const Homogeneous<T>& h) {
    Real nz = std::abs(value(h.z));
    Real nw = std::abs(value(h.w));
    return nw / std::sqrt(nz * nz + nw * nw);
}

template <class T, class U>
Real chordal_between(const Homogeneous<T>& p, const Homogeneous<U>& q) {
    Scalar pz = value(p.z), pw = value(p.w), qz = value(q.z), qw = value(q.w);
    Real np = std::sqrt(std::norm(pz) + std::norm(pw));
    Real nq = std::sqrt(std::norm(qz) + std::norm(qw));
    return std::abs(pz * qw - qz * pw) / (np * nq);
}

/// Picks c far (chordally) from every data point, from a fixed candidate list.
Scalar conjugation_center(std::span<const Homogeneous<Scalar>> data);

// Product form of the field interpretation. With D_j = z_i d_j - c_j over the
// data points [c_j : d_j] (roots with sign +1, other coordinates with -1),
//   S = sum_j s_j d_j / D_j,  result = [z_i S - 1 : S] = [z_i N - P : N]
// where P = prod D_j and N = S P. This stays polynomial when z_i meets exactly
// one data point (result z_i), and it differentiates cleanly.
template <class T>
Homogeneous<T> ea_finite_chart(std::span<const Homogeneous<Scalar>> roots, std::size_t i,
                               std::span<const Homogeneous<T>> cfg, Real tol) {
    const T zi = cfg[i].z / cfg[i].w;
    const Homogeneous<T> zi_h{zi, T(Scalar{1})};
    std::vector<T> denominators;
    std::vector<T> weights;
    denominators.reserve(roots.size() + cfg.size());
    weights.reserve(roots.size() + cfg.size());
    int coincidences = 0;
    for (const auto& r : roots) {
        denominators.push_back(zi * r.w - r.z);
        weights.push_back(T(r.w));
        if (chordal_between(zi_h, r) < tol) ++coincidences;
    }
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        if (j == i) continue;
        denominators.push_back(zi * cfg[j].w - cfg[j].z);
        weights.push_back(-cfg[j].w);
        if (chordal_between(zi_h, cfg[j]) < tol) ++coincidences;
    }
    if (coincidences >= 2)
        fail(ErrorKind::IndeterminatePoint, "coordinate lies on the intersection of two diagonals");

    const std::size_t m = denominators.size();
    std::vector<T> prefix(m + 1, T(Scalar{1}));
    for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = prefix[j] * denominators[j];
    T suffix = T(Scalar{1});
    T numerator = T(Scalar{0});
    for (std::size_t j = m; j-- > 0;) {
        numerator = numerator + weights[j] * prefix[j] * suffix;
        suffix = suffix * denominators[j];
    }
    const T& product = prefix[m];
    return {zi * numerator - product, numerator};
}

// Same idea with unknown roots: S = p'(z)/p(z) - sum_j d_j / D_j over the
// other coordinates, cleared by p(z) prod D_j.
template <class T>
Homogeneous<T> ea_finite_chart_logderivative(const MonicPolynomial& p, std::size_t i,
                                             std::span<const Homogeneous<T>> cfg, Real tol) {
    const T zi = cfg[i].z / cfg[i].w;
    const Homogeneous<T> zi_h{zi, T(Scalar{1})};
    std::vector<T> denominators;
    std::vector<T> weights;
    int coincidences = 0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        if (j == i) continue;
        denominators.push_back(zi * cfg[j].w - cfg[j].z);
        weights.push_back(cfg[j].w);
        if (chordal_between(zi_h, cfg[j]) < tol) ++coincidences;
    }
    const T pz = p.evaluate(zi);
    const T dpz = p.evaluate_derivative(zi);
    if (std::abs(value(pz)) <= tol * p.magnitude_scale(value(zi))) ++coincidences;
    if (coincidences >= 2)
        fail(ErrorKind::IndeterminatePoint, "coordinate lies on the intersection of two diagonals");

    const std::size_t m = denominators.size();
    std::vector<T> prefix(m + 1, T(Scalar{1}));
    for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = prefix[j] * denominators[j];
    T suffix = T(Scalar{1});
    T others = T(Scalar{0});
    for (std::size_t j = m; j-- > 0;) {
        others = others + weights[j] * prefix[j] * suffix;
        suffix = suffix * denominators[j];
    }
    const T numerator = dpz * prefix[m] - pz * others;
    const T product = pz * prefix[m];
    return {zi * numerator - product, numerator};
}

template <class T>
Homogeneous<T> ea_projective(std::span<const Homogeneous<Scalar>> roots, std::size_t i,
                             std::span<const Homogeneous<T>> cfg, Real tol) {
    bool near_infinity = false;
    for (const auto& r : roots) near_infinity = near_infinity || chordal_to_infinity(r) < kNearInfinity;
    for (const auto& c : cfg) near_infinity = near_infinity || chordal_to_infinity(c) < kNearInfinity;
    if (!near_infinity) return ea_finite_chart<T>(roots, i, cfg, tol);

    // Conjugate by z -> 1/(z - c) so every data point is finite, step, map back.
    std::vector<Homogeneous<Scalar>> data(roots.begin(), roots.end());
    for (const auto& c : cfg) data.push_back({value(c.z), value(c.w)});
    const MobiusMap chart = MobiusMap::inversion_about(conjugation_center(data));
    const MobiusMap back = chart.inverse();
    std::vector<Homogeneous<Scalar>> moved_roots;
    moved_roots.reserve(roots.size());
    for (const auto& r : roots) moved_roots.push_back(chart.apply(r));
    std::vector<Homogeneous<T>> moved;
    moved.reserve(cfg.size());
    for (const auto& c : cfg) moved.push_back(chart.apply(c));
    return back.apply(ea_finite_chart<T>(moved_roots, i, std::span<const Homogeneous<T>>(moved), tol));
}

/// Divides by the larger-modulus coordinate; projectively a no-op.
template <class T>
Homogeneous<T> rescale(const Homogeneous<T>& h) {
    const T& pivot = std::abs(value(h.z)) >= std::abs(value(h.w)) ? h.z : h.w;
    if (value(pivot) == Scalar{}) fail(ErrorKind::IndeterminatePoint, "step produced the zero vector");
    return {h.z / pivot, h.w / pivot};
}

/// Zeroes a homogeneous coordinate that is rounding noise next to the other,
/// so that exact 0 and infinity survive a step (value part only).
template <class T>
Homogeneous<T> snap_rounding(Homogeneous<T> h) {
    constexpr Real noise = 8 * std::numeric_limits<Real>::epsilon();
    auto zero = [](T& x) {
        if constexpr (std::is_same_v<T, Scalar>) x = Scalar{};
        else x.v = Scalar{};
    };
    const Real nz = std::abs(value(h.z)), nw = std::abs(value(h.w));
    if (nw <= noise * nz) zero(h.w);
    else if (nz <= noise * nw) zero(h.z);
    return h;
}

template <class T>
T affine_coordinate(const Homogeneous<T>& h) {
    if (value(h.w) == Scalar{}) fail(ErrorKind::InfiniteCoordinate, "the Weierstrass step is affine-only");
    return h.z / h.w;
}

template <class T>
T weierstrass(const MonicPolynomial& p, std::size_t i, std::span<const Homogeneous<T>> cfg) {
    const T zi = affine_coordinate(cfg[i]);
    T denominator = T(Scalar{1});
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        if (j == i) continue;
        const T zj = affine_coordinate(cfg[j]);
        const T diff = zi - zj;
        Real scale = std::max<Real>({1, std::abs(value(zi)), std::abs(value(zj))});
        if (std::abs(value(diff)) <= kCoincidenceTolerance * scale)
            fail(ErrorKind::CoincidentCoordinates, "Weierstrass denominator vanishes");
        denominator = denominator * diff;
    }
    return zi - p.evaluate(zi) / denominator;
}

}  // namespace detail

/// One application of an update rule under a schedule, optionally followed by
/// a fixed permutation of the output coordinates (out[k] = raw[perm[k]]).
///
/// The map is generic over the scalar type so the same code path runs on
/// complex numbers and on dual numbers for differentiation.
class IterationMap {
  public:
    IterationMap(UpdateRule rule, Schedule schedule, MonicPolynomial p);

    /// Ehrlich-Aberth map for an explicit root list, possibly with one root at
    /// infinity. The root count fixes the dimension.
    static IterationMap ehrlich_aberth(std::vector<ProjectivePoint> roots, Schedule schedule);

    IterationMap with_post_permutation(std::vector<std::size_t> permutation) const;

    UpdateRule rule() const noexcept { return rule_; }
    Schedule schedule() const noexcept { return schedule_; }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::optional<MonicPolynomial>& polynomial() const noexcept { return polynomial_; }
    const std::vector<Homogeneous<Scalar>>& roots() const noexcept { return roots_; }
    const std::vector<std::size_t>& post_permutation() const noexcept { return permutation_; }

    template <class T>
    std::vector<Homogeneous<T>> apply(std::vector<Homogeneous<T>> x) const {
        if (x.size() != dimension_) fail(ErrorKind::DimensionMismatch, "configuration size differs from degree");
        const std::size_t n = x.size();
        switch (schedule_) {
            case Schedule::Jacobi: {
                std::vector<Homogeneous<T>> out;
                out.reserve(n);
                for (std::size_t i = 0; i < n; ++i) out.push_back(tagged_step<T>(i, 0, x));
                x = std::move(out);
                break;
            }
            case Schedule::GaussSeidel:
                for (std::size_t i = 0; i < n; ++i) x[i] = tagged_step<T>(i, i, x);
                break;
            case Schedule::CyclicShift: {
                Homogeneous<T> moved = tagged_step<T>(0, 0, x);
                for (std::size_t i = 0; i + 1 < n; ++i) x[i] = x[i + 1];
                x[n - 1] = moved;
                break;
            }
        }
        if (permutation_.empty()) return x;
        std::vector<Homogeneous<T>> permuted;
        permuted.reserve(n);
        for (std::size_t k = 0; k < n; ++k) permuted.push_back(x[permutation_[k]]);
        return permuted;
    }

    Configuration operator()(const Configuration& config) const;

    /// The rule applied to coordinate i of x, without schedule or permutation.
    template <class T>
    Homogeneous<T> step(std::size_t i, const std::vector<Homogeneous<T>>& x) const {
        std::span<const Homogeneous<T>> view(x);
        if (rule_ == UpdateRule::Weierstrass) return {detail::weierstrass<T>(*polynomial_, i, view), T(Scalar{1})};
        if (!roots_.empty())
            return detail::ea_projective<T>(roots_, i, view, kProjectiveCoincidenceTolerance);
        for (const auto& c : x) {
            if (detail::chordal_to_infinity(c) < kNearInfinity) {
                // Unknown roots and a point near infinity: the conjugated chart
                // needs the roots themselves.
                std::vector<Homogeneous<Scalar>> roots;
                for (const Scalar& r : solve_roots(*polynomial_)) roots.push_back({r, Scalar{1}});
                return detail::ea_projective<T>(roots, i, view, kProjectiveCoincidenceTolerance);
            }
        }
        return detail::ea_finite_chart_logderivative<T>(*polynomial_, i, view, kProjectiveCoincidenceTolerance);
    }

  private:
    IterationMap(UpdateRule rule, Schedule schedule, std::optional<MonicPolynomial> p,
                 std::vector<Homogeneous<Scalar>> roots, std::size_t dimension);

    template <class T>
    Homogeneous<T> tagged_step(std::size_t i, std::size_t substep, const std::vector<Homogeneous<T>>& x) const {
        try {
            auto h = detail::rescale(step<T>(i, x));
            return rule_ == UpdateRule::EhrlichAberth ? detail::snap_rounding(h) : h;
        } catch (const NumericError& e) {
            throw e.tagged(i, substep);
        }
    }

    UpdateRule rule_;
    Schedule schedule_;
    std::optional<MonicPolynomial> polynomial_;
    std::vector<Homogeneous<Scalar>> roots_;
    std::size_t dimension_;
    std::vector<std::size_t> permutation_;
};

Configuration apply_schedule(UpdateRule rule, Schedule schedule, const MonicPolynomial& p,
                             const Configuration& config);

// ---------------------------------------------------------------------------
// Homogeneous maps for cubic Weierstrass.

/// R_p on P^3: [z1:z2:z3:w] -> [q z2 : q z3 : q z1 - p*(z1,w) : q w] with
/// q = (z1 - z2)(z1 - z3). Unnormalized.
template <class T>
std::array<T, 4> rp_raw(const MonicPolynomial& p, const std::array<T, 4>& v) {
    const T q = (v[0] - v[1]) * (v[0] - v[2]);
    return {q * v[1], q * v[2], q * v[0] - p.evaluate_homogeneous(v[0], v[3]), q * v[3]};
}

/// phi on P^2: the restriction of R_p to w = 0, independent of p. Unnormalized.
template <class T>
std::array<T, 3> phi_raw(const std::array<T, 3>& v) {
    const T q = (v[0] - v[1]) * (v[0] - v[2]);
    return {q * v[1], q * v[2], q * v[0] - v[0] * v[0] * v[0]};
}

/// Normalized R_p for a cubic p; IndeterminatePoint if the image vanishes.
std::array<Scalar, 4> rp_homogeneous(const MonicPolynomial& p, const std::array<Scalar, 4>& point);

/// Normalized phi; IndeterminatePoint if the image vanishes.
std::array<Scalar, 3> phi_map(const std::array<Scalar, 3>& point);

/// Divides a homogeneous vector by its largest-modulus entry.
template <std::size_t N>
std::array<Scalar, N> normalize_homogeneous(std::array<Scalar, N> v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    const Scalar pivot = v[k];
    for (auto& x : v) x /= pivot;
    v[k] = Scalar{1};
    return v;
}

/// sin of the angle between two lines in C^N (Fubini-Study chordal distance).
Real projective_distance(std::span<const Scalar> a, std::span<const Scalar> b);

}  // namespace orbitforge
