#pragma once

#include <vector>

#include "orbitforge/dual.hpp"
#include "orbitforge/iteration.hpp"
#include "orbitforge/linalg.hpp"

namespace orbitforge {

/// Local coordinate on P^1 used when differentiating. Affine: x = z / w.
/// Inverted: v = -w / z, so that [z : w] = [-1 : v] and infinity sits at v = 0.
/// The sign makes the tangent vector d/dv at infinity equal z^-2 d/dz.
enum class ChartKind { Affine, Inverted };

class ChartBasis {
  public:
    ChartBasis() = default;
    explicit ChartBasis(std::vector<ChartKind> kinds) : kinds_(std::move(kinds)) {}

    /// Inverted exactly for the coordinates within `threshold` (chordal) of infinity.
    static ChartBasis for_configuration(const Configuration& config, Real threshold = 0.5);
    static ChartBasis affine(std::size_t n) { return ChartBasis(std::vector<ChartKind>(n, ChartKind::Affine)); }

    std::size_t size() const noexcept { return kinds_.size(); }
    ChartKind operator[](std::size_t i) const { return kinds_[i]; }
    const std::vector<ChartKind>& kinds() const noexcept { return kinds_; }

    /// Chart coordinates of a configuration; throws InfiniteCoordinate when a
    /// point is the pole of its chart.
    std::vector<Scalar> coordinates(const Configuration& config) const;
    Configuration configuration(const std::vector<Scalar>& coords) const;

    template <class T>
    Homogeneous<T> lift(std::size_t i, const T& x) const {
        if (kinds_[i] == ChartKind::Affine) return {x, T(Scalar{1})};
        return {T(Scalar{-1}), x};
    }

    template <class T>
    T project(std::size_t i, const Homogeneous<T>& h) const {
        if (kinds_[i] == ChartKind::Affine) {
            if (value(h.w) == Scalar{}) fail(ErrorKind::InfiniteCoordinate, "point at the pole of the affine chart");
            return h.z / h.w;
        }
        if (value(h.z) == Scalar{}) fail(ErrorKind::InfiniteCoordinate, "point at the pole of the inverted chart");
        return -h.w / h.z;
    }

  private:
    std::vector<ChartKind> kinds_;
};

/// Jacobian of f at x where f maps std::vector<T> to std::vector<T> for
/// T in {Scalar, Dual}. Column k comes from seeding the k-th tangent.
/// Step failures are reported as NearIndeterminacy.
template <class F>
Matrix jacobian_dual(const F& f, const std::vector<Scalar>& x) {
    const std::size_t n = x.size();
    Matrix jac;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Dual> seeded(x.begin(), x.end());
        seeded[k].d = Scalar{1};
        std::vector<Dual> out;
        try {
            out = f(seeded);
        } catch (const NumericError& e) {
            fail(ErrorKind::NearIndeterminacy, std::string("map undefined at the point: ") + e.what());
        }
        if (k == 0) jac = Matrix(out.size(), n);
        for (std::size_t r = 0; r < out.size(); ++r) {
            if (!is_finite(out[r].d)) fail(ErrorKind::NearIndeterminacy, "non-finite derivative");
            jac(r, k) = out[r].d;
        }
    }
    return jac;
}

/// Central differences along the real axis, cross-checked against the
/// imaginary axis (holomorphy) to relative `agreement`.
template <class F>
Matrix jacobian_fd(const F& f, const std::vector<Scalar>& x, Real agreement = 1e-4) {
    const std::size_t n = x.size();
    Matrix jac;
    for (std::size_t k = 0; k < n; ++k) {
        const Real h = 1e-6 * std::max<Real>(1, std::abs(x[k]));
        auto probe = [&](Scalar delta) {
            std::vector<Scalar> moved = x;
            moved[k] += delta;
            try {
                return f(moved);
            } catch (const NumericError& e) {
                fail(ErrorKind::NearIndeterminacy, std::string("probe failed: ") + e.what());
            }
        };
        const auto xp = probe({h, 0}), xm = probe({-h, 0});
        const auto yp = probe({0, h}), ym = probe({0, -h});
        if (k == 0) jac = Matrix(xp.size(), n);
        for (std::size_t r = 0; r < xp.size(); ++r) {
            Scalar along_real = (xp[r] - xm[r]) / (2 * h);
            Scalar along_imag = (yp[r] - ym[r]) / Scalar{0, 2 * h};
            Real size = std::max<Real>({1, std::abs(along_real), std::abs(along_imag)});
            if (!is_finite(along_real) || std::abs(along_real - along_imag) > agreement * size)
                fail(ErrorKind::NearIndeterminacy, "finite differences disagree between real and imaginary directions");
            jac(r, k) = along_real;
        }
    }
    return jac;
}

/// An iteration map read in fixed charts, by default the same on both sides.
class ChartedMap {
  public:
    ChartedMap(IterationMap map, ChartBasis charts) : map_(std::move(map)), charts_(charts), out_charts_(charts) {}
    ChartedMap(IterationMap map, ChartBasis charts, ChartBasis out_charts)
        : map_(std::move(map)), charts_(std::move(charts)), out_charts_(std::move(out_charts)) {}

    template <class T>
    std::vector<T> operator()(const std::vector<T>& x) const {
        std::vector<Homogeneous<T>> h;
        h.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) h.push_back(charts_.lift(i, x[i]));
        auto out = map_.apply<T>(std::move(h));
        std::vector<T> y;
        y.reserve(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) y.push_back(out_charts_.project(i, out[i]));
        return y;
    }

    const IterationMap& map() const noexcept { return map_; }
    const ChartBasis& charts() const noexcept { return charts_; }

  private:
    IterationMap map_;
    ChartBasis charts_;
    ChartBasis out_charts_;
};

/// D(map) at point, with `charts` on both domain and codomain.
Matrix jacobian_dual(const IterationMap& map, const Configuration& point, const ChartBasis& charts);
Matrix jacobian_fd(const IterationMap& map, const Configuration& point, const ChartBasis& charts);

/// D(map) at point with `charts` on the domain and `out_charts` on the codomain.
Matrix jacobian_dual(const IterationMap& map, const Configuration& point, const ChartBasis& charts,
                     const ChartBasis& out_charts);
Matrix jacobian_fd(const IterationMap& map, const Configuration& point, const ChartBasis& charts,
                   const ChartBasis& out_charts);

}  // namespace orbitforge
