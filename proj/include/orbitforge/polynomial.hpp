#pragma once

#include <optional>
#include <span>
#include <vector>

#include "orbitforge/error.hpp"
#include "orbitforge/scalar.hpp"

namespace orbitforge {

/// Monic complex polynomial z^n + c_{n-1} z^{n-1} + ... + c_0.
///
/// Coefficients are stored in ascending order without the leading 1. When the
/// polynomial was built from its roots they are kept and evaluation uses the
/// product form, which is better conditioned near the roots.
class MonicPolynomial {
  public:
    static MonicPolynomial from_roots(std::vector<Scalar> roots);
    static MonicPolynomial from_coefficients(std::vector<Scalar> lower_coefficients);

    int degree() const noexcept { return static_cast<int>(coefficients_.size()); }
    const std::vector<Scalar>& coefficients() const noexcept { return coefficients_; }
    const std::optional<std::vector<Scalar>>& roots() const noexcept { return roots_; }
    bool has_roots() const noexcept { return roots_.has_value(); }

    /// (z - alpha_1) ... (z - alpha_k) p(z); roots are carried over when known.
    MonicPolynomial with_extra_roots(std::span<const Scalar> extra) const;

    /// sum |c_k| |z|^k + |z|^n, the natural magnitude against which p(z) is small.
    Real magnitude_scale(Scalar z) const;

    template <class T>
    T evaluate(const T& z) const {
        if (roots_) {
            T acc = z - (*roots_)[0];
            for (std::size_t k = 1; k < roots_->size(); ++k) acc = acc * (z - (*roots_)[k]);
            return acc;
        }
        T acc = z + coefficients_.back();
        for (std::size_t k = coefficients_.size() - 1; k-- > 0;) acc = acc * z + coefficients_[k];
        return acc;
    }

    template <class T>
    T evaluate_derivative(const T& z) const {
        const std::size_t n = coefficients_.size();
        T acc = T(Scalar{static_cast<Real>(n)});
        for (std::size_t k = n - 1; k >= 1; --k) acc = acc * z + static_cast<Real>(k) * coefficients_[k];
        return acc;
    }

    /// p*(z, w) = w^n p(z / w).
    template <class T>
    T evaluate_homogeneous(const T& z, const T& w) const {
        if (roots_) {
            T acc = z - (*roots_)[0] * w;
            for (std::size_t k = 1; k < roots_->size(); ++k) acc = acc * (z - (*roots_)[k] * w);
            return acc;
        }
        // Horner in z with the k-th coefficient weighted by w^(n-k).
        T wpow = w;
        T acc = z + coefficients_.back() * w;
        for (std::size_t k = coefficients_.size() - 1; k-- > 0;) {
            wpow = wpow * w;
            acc = acc * z + coefficients_[k] * wpow;
        }
        return acc;
    }

  private:
    MonicPolynomial(std::vector<Scalar> coefficients, std::optional<std::vector<Scalar>> roots)
        : coefficients_(std::move(coefficients)), roots_(std::move(roots)) {}

    std::vector<Scalar> coefficients_;
    std::optional<std::vector<Scalar>> roots_;
};

/// Homogenization of a monic polynomial: total degree n, p*(z, 1) = p(z).
class HomogeneousPolynomial {
  public:
    explicit HomogeneousPolynomial(MonicPolynomial base) : base_(std::move(base)) {}

    const MonicPolynomial& base() const noexcept { return base_; }
    int degree() const noexcept { return base_.degree(); }

  private:
    MonicPolynomial base_;
};

inline MonicPolynomial from_roots(std::vector<Scalar> roots) { return MonicPolynomial::from_roots(std::move(roots)); }

/// p(z); product form when roots are stored, Horner otherwise.
Scalar eval(const MonicPolynomial& p, Scalar z);

/// p'(z) by Horner's scheme on the coefficients.
Scalar derivative_eval(const MonicPolynomial& p, Scalar z);

Scalar homogeneous_eval(const HomogeneousPolynomial& p, Scalar z, Scalar w);

inline constexpr Real kRootCollisionTolerance = 1e-10;

/// (z^2 - 1)(z^2 - lambda^4), roots stored as {1, -1, lambda^2, -lambda^2}.
/// Rejects lambda = 0 and lambda^4 = 1, where roots collide.
MonicPolynomial parallelogram_family(Scalar lambda);

}  // namespace orbitforge
