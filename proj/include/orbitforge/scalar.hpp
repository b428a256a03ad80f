#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace orbitforge {

// All scalar arithmetic goes through these aliases. Switching Real to an
// extended-precision type (e.g. long double) rebuilds the whole library in
// that precision.
using Real = double;
using Scalar = std::complex<Real>;

inline constexpr Real kDefaultEqualityTolerance = 1e-10;

inline bool is_finite(const Scalar& s) {
    return std::isfinite(s.real()) && std::isfinite(s.imag());
}

// Validated construction of a complex scalar; non-finite components are rejected.
inline Scalar make_scalar(Real re, Real im = 0) {
    Scalar s{re, im};
    if (!is_finite(s)) throw std::invalid_argument("complex scalar with non-finite component");
    return s;
}

// Value part of a scalar-like quantity. Overloaded for dual numbers so that
// branching decisions inside generic kernels never depend on derivative parts.
inline const Scalar& value(const Scalar& s) { return s; }

inline Real magnitude(const Scalar& s) { return std::abs(s); }

}  // namespace orbitforge
