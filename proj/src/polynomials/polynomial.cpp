#include "orbitforge/polynomial.hpp"

#include <cassert>
#include <stdexcept>

namespace orbitforge {

namespace {

std::vector<Scalar> expand(const std::vector<Scalar>& roots) {
    // Full coefficient vector, ascending, leading 1 included.
    std::vector<Scalar> c{Scalar{1}};
    for (const Scalar& r : roots) {
        std::vector<Scalar> next(c.size() + 1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    c.pop_back();
    return c;
}

[[maybe_unused]] Scalar horner(const std::vector<Scalar>& lower, Scalar z) {
    Scalar acc = z + lower.back();
    for (std::size_t k = lower.size() - 1; k-- > 0;) acc = acc * z + lower[k];
    return acc;
}

}  // namespace

MonicPolynomial MonicPolynomial::from_roots(std::vector<Scalar> roots) {
    if (roots.empty()) fail(ErrorKind::EmptyRootList, "a monic polynomial needs at least one root");
    for (const Scalar& r : roots)
        if (!is_finite(r)) throw std::invalid_argument("non-finite root");
    auto coefficients = expand(roots);
    return MonicPolynomial(std::move(coefficients), std::move(roots));
}

MonicPolynomial MonicPolynomial::from_coefficients(std::vector<Scalar> lower_coefficients) {
    if (lower_coefficients.empty()) fail(ErrorKind::EmptyRootList, "degree must be at least one");
    for (const Scalar& c : lower_coefficients)
        if (!is_finite(c)) throw std::invalid_argument("non-finite coefficient");
    return MonicPolynomial(std::move(lower_coefficients), std::nullopt);
}

MonicPolynomial MonicPolynomial::with_extra_roots(std::span<const Scalar> extra) const {
    if (roots_) {
        std::vector<Scalar> all = *roots_;
        all.insert(all.end(), extra.begin(), extra.end());
        return from_roots(std::move(all));
    }
    std::vector<Scalar> c = coefficients_;
    c.push_back(Scalar{1});
    for (const Scalar& r : extra) {
        std::vector<Scalar> next(c.size() + 1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    c.pop_back();
    return from_coefficients(std::move(c));
}

Real MonicPolynomial::magnitude_scale(Scalar z) const {
    Real r = std::abs(z);
    Real acc = 1;
    for (std::size_t k = coefficients_.size(); k-- > 0;) acc = acc * r + std::abs(coefficients_[k]);
    return acc;
}

Scalar eval(const MonicPolynomial& p, Scalar z) {
    Scalar value = p.evaluate(z);
#ifndef NDEBUG
    if (p.has_roots()) {
        Scalar via_coefficients = horner(p.coefficients(), z);
        assert(std::abs(value - via_coefficients) <= 1e-9 * p.magnitude_scale(z));
    }
#endif
    return value;
}

Scalar derivative_eval(const MonicPolynomial& p, Scalar z) { return p.evaluate_derivative(z); }

Scalar homogeneous_eval(const HomogeneousPolynomial& p, Scalar z, Scalar w) {
    return p.base().evaluate_homogeneous(z, w);
}

MonicPolynomial parallelogram_family(Scalar lambda) {
    if (!is_finite(lambda)) throw std::invalid_argument("non-finite lambda");
    if (std::abs(lambda) < kRootCollisionTolerance)
        fail(ErrorKind::ForbiddenParameter, "lambda = 0 collapses the roots +-lambda^2");
    Scalar l2 = lambda * lambda;
    if (std::abs(l2 * l2 - Scalar{1}) < kRootCollisionTolerance)
        fail(ErrorKind::ForbiddenParameter, "lambda^4 = 1 makes roots collide");
    return MonicPolynomial::from_roots({Scalar{1}, Scalar{-1}, l2, -l2});
}

}  // namespace orbitforge
