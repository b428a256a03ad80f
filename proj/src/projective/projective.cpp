#include "orbitforge/projective.hpp"

#include <array>
#include <cassert>
#include <stdexcept>

namespace orbitforge {

ProjectivePoint::ProjectivePoint(Scalar z, Scalar w) {
    if (!is_finite(z) || !is_finite(w)) throw std::invalid_argument("projective point with non-finite coordinate");
    if (z == Scalar{} && w == Scalar{}) throw std::invalid_argument("projective point [0 : 0]");
    if (std::abs(w) >= std::abs(z)) {
        z_ = z / w;
        w_ = Scalar{1};
    } else {
        w_ = w / z;
        z_ = Scalar{1};
    }
}

Scalar ProjectivePoint::affine_value() const {
    if (is_infinity()) fail(ErrorKind::InfiniteCoordinate, "affine value of the point at infinity");
    return z_ / w_;
}

Real ProjectivePoint::affine_modulus() const {
    if (is_infinity()) return std::numeric_limits<Real>::infinity();
    return std::abs(z_ / w_);
}

ProjectivePoint from_homogeneous(const Homogeneous<Scalar>& h) { return {h.z, h.w}; }

Real chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    Real d = std::abs(bracket(p, q)) / (p.norm() * q.norm());
    return std::min<Real>(d, 1);
}

bool canonical_less(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.is_infinity() || q.is_infinity()) return !p.is_infinity() && q.is_infinity();
    Scalar x = p.affine_value();
    Scalar y = q.affine_value();
    Real band = 1e-9 * std::max<Real>({1, std::abs(x), std::abs(y)});
    if (std::abs(x.real() - y.real()) > band) return x.real() < y.real();
    if (std::abs(x.imag() - y.imag()) > band) return x.imag() < y.imag();
    return false;
}

MobiusMap::MobiusMap(Scalar a, Scalar b, Scalar c, Scalar d, Real tol) : a_(a), b_(b), c_(c), d_(d) {
    Real scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (!(std::abs(determinant()) > tol * scale * scale)) fail(ErrorKind::SingularMobius, "ad - bc vanishes");
}

MobiusMap MobiusMap::sending_to_zero_and_infinity(const ProjectivePoint& zero, const ProjectivePoint& pole) {
    // Row i of the matrix annihilates the corresponding point.
    return {zero.w(), -zero.z(), pole.w(), -pole.z()};
}

ProjectivePoint MobiusMap::operator()(const ProjectivePoint& p) const {
    return from_homogeneous(apply(p.homogeneous()));
}

std::pair<ProjectivePoint, ProjectivePoint> MobiusMap::fixed_points(Real parabolic_tol) const {
    Scalar tr = a_ + d_;
    Scalar disc = std::sqrt(tr * tr - Scalar{4} * determinant());
    // Stable root pairing: form the larger-modulus root first.
    Scalar big = std::abs(tr + disc) >= std::abs(tr - disc) ? (tr + disc) / Scalar{2} : (tr - disc) / Scalar{2};
    Scalar small = determinant() / big;
    if (std::abs(big - small) <= parabolic_tol * std::max(std::abs(big), std::abs(small)))
        fail(ErrorKind::ParabolicComposition, "eigenvalues of the Mobius matrix collide");

    auto eigenvector = [&](Scalar mu) {
        std::array<Scalar, 2> u{b_, mu - a_};
        std::array<Scalar, 2> v{mu - d_, c_};
        Real nu = std::abs(u[0]) + std::abs(u[1]);
        Real nv = std::abs(v[0]) + std::abs(v[1]);
        return nu >= nv ? ProjectivePoint(u[0], u[1]) : ProjectivePoint(v[0], v[1]);
    };
    return {eigenvector(big), eigenvector(small)};
}

UnorderedPair::UnorderedPair(ProjectivePoint p, ProjectivePoint q) : first_(p), second_(q) {
    if (canonical_less(second_, first_)) std::swap(first_, second_);
}

bool same_pair(const UnorderedPair& x, const UnorderedPair& y, Real tol) {
    bool straight = same_point(x.first(), y.first(), tol) && same_point(x.second(), y.second(), tol);
    bool crossed = same_point(x.first(), y.second(), tol) && same_point(x.second(), y.first(), tol);
    return straight || crossed;
}

namespace {

void require_pairwise_distinct(const std::array<ProjectivePoint, 4>& pts, Real tol) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (same_point(pts[i], pts[j], tol))
                fail(ErrorKind::DegenerateQuadruple, "points of the quadruple are not pairwise distinct");
}

}  // namespace

ProjectivePoint cross_ratio(const ProjectivePoint& a, const ProjectivePoint& b, const ProjectivePoint& c,
                            const ProjectivePoint& d, Real tol) {
    std::array<const ProjectivePoint*, 4> pts{&a, &b, &c, &d};
    int distinct = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) seen = seen || same_point(*pts[i], *pts[j], tol);
        if (!seen) ++distinct;
    }
    if (distinct < 3) fail(ErrorKind::DegenerateQuadruple, "cross-ratio needs at least three distinct points");
    return {bracket(a, c) * bracket(b, d), bracket(a, d) * bracket(b, c)};
}

MobiusMap mobius_involution(const ProjectivePoint& a, const ProjectivePoint& b, Real tol) {
    if (same_point(a, b, tol)) fail(ErrorKind::DegeneratePair, "involution needs two distinct fixed points");
    MobiusMap to_standard = MobiusMap::sending_to_zero_and_infinity(a, b);
    MobiusMap negate{Scalar{-1}, Scalar{0}, Scalar{0}, Scalar{1}};
    return to_standard.inverse() * negate * to_standard;
}

bool is_harmonic(const UnorderedPair& pair1, const UnorderedPair& pair2, Real tol) {
    const auto& a = pair1.first();
    const auto& b = pair1.second();
    const auto& c = pair2.first();
    const auto& d = pair2.second();
    require_pairwise_distinct({a, b, c, d}, kDefaultEqualityTolerance);

    Real gap = chordal_distance(cross_ratio(a, b, c, d), ProjectivePoint::affine(Scalar{-1}));
    bool harmonic = gap < tol;
#ifndef NDEBUG
    // Equivalent characterization: the involution fixing {a, b} swaps c and d.
    // Only compared away from the tolerance boundary.
    Real swap_gap = chordal_distance(mobius_involution(a, b)(c), d);
    if (gap < tol * 1e-3) assert(swap_gap < tol);
    if (gap > 1e-2) assert(swap_gap > tol);
#endif
    return harmonic;
}

UnorderedPair harmonic_pair(const UnorderedPair& pair1, const UnorderedPair& pair2) {
    require_pairwise_distinct({pair1.first(), pair1.second(), pair2.first(), pair2.second()},
                              kDefaultEqualityTolerance);
    MobiusMap composed = mobius_involution(pair1.first(), pair1.second()) *
                         mobius_involution(pair2.first(), pair2.second());
    auto [e, f] = composed.fixed_points();
    UnorderedPair result{e, f};
    assert(is_harmonic(result, pair1, 1e-7) && is_harmonic(result, pair2, 1e-7));
    return result;
}

}  // namespace orbitforge
