#pragma once

#include <algorithm>
#include <utility>

#include "orbitforge/error.hpp"
#include "orbitforge/scalar.hpp"

namespace orbitforge {

// Raw homogeneous pair over an arbitrary scalar-like type. Generic kernels
// (iteration steps, Jacobians through dual numbers) work on these; they are
// never normalized implicitly.
template <class T>
struct Homogeneous {
    T z;
    T w;
};

/// A point [z : w] of the complex projective line.
///
/// Stored normalized: the coordinate of larger modulus is exactly 1. The point
/// at infinity is [1 : 0]. Comparisons go through the chordal metric.
class ProjectivePoint {
  public:
    ProjectivePoint(Scalar z, Scalar w);

    static ProjectivePoint affine(Scalar z) { return {z, Scalar{1}}; }
    static ProjectivePoint infinity() { return {Scalar{1}, Scalar{0}}; }

    const Scalar& z() const noexcept { return z_; }
    const Scalar& w() const noexcept { return w_; }

    bool is_infinity() const noexcept { return w_ == Scalar{}; }

    /// z / w; throws InfiniteCoordinate for the point at infinity.
    Scalar affine_value() const;
    /// |z / w|, +inf at infinity.
    Real affine_modulus() const;
    Real norm() const { return std::sqrt(std::norm(z_) + std::norm(w_)); }

    Homogeneous<Scalar> homogeneous() const { return {z_, w_}; }

  private:
    Scalar z_;
    Scalar w_;
};

ProjectivePoint from_homogeneous(const Homogeneous<Scalar>& h);

/// |z1 w2 - z2 w1| / (|p| |q|); a metric on P^1 with values in [0, 1].
Real chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

inline Real distance_to_infinity(const ProjectivePoint& p) { return std::abs(p.w()) / p.norm(); }

inline bool same_point(const ProjectivePoint& p, const ProjectivePoint& q,
                       Real tol = kDefaultEqualityTolerance) {
    return chordal_distance(p, q) < tol;
}

/// z1 w2 - z2 w1, the bracket of two homogeneous pairs.
inline Scalar bracket(const ProjectivePoint& p, const ProjectivePoint& q) {
    return p.z() * q.w() - q.z() * p.w();
}

/// Total order used to canonicalize unordered data: finite points by real
/// part, then imaginary part (ties within a small relative band), infinity last.
bool canonical_less(const ProjectivePoint& p, const ProjectivePoint& q);

class MobiusMap {
  public:
    /// z -> (a z + b) / (c z + d). Rejects |ad - bc| <= tol * (max entry)^2.
    MobiusMap(Scalar a, Scalar b, Scalar c, Scalar d, Real tol = 1e-12);

    static MobiusMap identity() { return {Scalar{1}, Scalar{0}, Scalar{0}, Scalar{1}}; }
    static MobiusMap affine(Scalar a, Scalar b) { return {a, b, Scalar{0}, Scalar{1}}; }
    /// z -> 1 / (z - c).
    static MobiusMap inversion_about(Scalar c) { return {Scalar{0}, Scalar{1}, Scalar{1}, -c}; }
    /// Some N with N(zero) = 0 and N(pole) = infinity.
    static MobiusMap sending_to_zero_and_infinity(const ProjectivePoint& zero, const ProjectivePoint& pole);

    const Scalar& a() const noexcept { return a_; }
    const Scalar& b() const noexcept { return b_; }
    const Scalar& c() const noexcept { return c_; }
    const Scalar& d() const noexcept { return d_; }
    Scalar determinant() const { return a_ * d_ - b_ * c_; }

    ProjectivePoint operator()(const ProjectivePoint& p) const;

    template <class T>
    Homogeneous<T> apply(const Homogeneous<T>& p) const {
        return {a_ * p.z + b_ * p.w, c_ * p.z + d_ * p.w};
    }

    MobiusMap inverse() const { return {d_, -b_, -c_, a_}; }

    /// Fixed points from the eigenvectors of the matrix. Throws
    /// ParabolicComposition when the two eigenvalues agree to `parabolic_tol`
    /// relative.
    std::pair<ProjectivePoint, ProjectivePoint> fixed_points(Real parabolic_tol = 1e-8) const;

    /// Composition (lhs o rhs).
    friend MobiusMap operator*(const MobiusMap& lhs, const MobiusMap& rhs) {
        return {lhs.a_ * rhs.a_ + lhs.b_ * rhs.c_, lhs.a_ * rhs.b_ + lhs.b_ * rhs.d_,
                lhs.c_ * rhs.a_ + lhs.d_ * rhs.c_, lhs.c_ * rhs.b_ + lhs.d_ * rhs.d_};
    }

  private:
    Scalar a_, b_, c_, d_;
};

/// Order-insensitive pair of points. Stored in canonical order.
class UnorderedPair {
  public:
    UnorderedPair(ProjectivePoint p, ProjectivePoint q);

    const ProjectivePoint& first() const noexcept { return first_; }
    const ProjectivePoint& second() const noexcept { return second_; }

  private:
    ProjectivePoint first_;
    ProjectivePoint second_;
};

bool same_pair(const UnorderedPair& x, const UnorderedPair& y, Real tol = kDefaultEqualityTolerance);

inline constexpr Real kHarmonicTolerance = 1e-9;

/// CR(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c)) as a projective point. Requires at
/// least three distinct points.
ProjectivePoint cross_ratio(const ProjectivePoint& a, const ProjectivePoint& b, const ProjectivePoint& c,
                            const ProjectivePoint& d, Real tol = kDefaultEqualityTolerance);

/// The unique non-trivial involution fixing a and b.
MobiusMap mobius_involution(const ProjectivePoint& a, const ProjectivePoint& b,
                            Real tol = kDefaultEqualityTolerance);

bool is_harmonic(const UnorderedPair& pair1, const UnorderedPair& pair2, Real tol = kHarmonicTolerance);

/// The pair harmonic to both inputs: fixed points of M_{a,b} o M_{c,d}.
UnorderedPair harmonic_pair(const UnorderedPair& pair1, const UnorderedPair& pair2);

}  // namespace orbitforge
