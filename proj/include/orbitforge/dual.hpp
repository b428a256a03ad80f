#pragma once

#include "orbitforge/scalar.hpp"

namespace orbitforge {

/// First-order forward-mode dual number over the complex field:
/// v + d * eps with eps^2 = 0. All maps in the library are holomorphic, so a
/// single complex tangent yields the complex derivative.
struct Dual {
    Scalar v{};
    Scalar d{};

    Dual() = default;
    Dual(Scalar value) : v(value) {}  // NOLINT(google-explicit-constructor): constants promote implicitly
    Dual(Scalar value, Scalar tangent) : v(value), d(tangent) {}

    friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
    friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
    friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
    friend Dual operator/(const Dual& a, const Dual& b) {
        Scalar q = a.v / b.v;
        return {q, (a.d - q * b.d) / b.v};
    }
    Dual& operator+=(const Dual& o) { return *this = *this + o; }
    Dual& operator-=(const Dual& o) { return *this = *this - o; }
    Dual& operator*=(const Dual& o) { return *this = *this * o; }
    Dual& operator/=(const Dual& o) { return *this = *this / o; }
};

inline const Scalar& value(const Dual& x) { return x.v; }

}  // namespace orbitforge
