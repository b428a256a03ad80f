#include "orbitforge/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "orbitforge/iteration.hpp"

namespace orbitforge {

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
}

std::vector<Scalar> Matrix::column(std::size_t c) const {
    std::vector<Scalar> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void Matrix::set_column(std::size_t c, const std::vector<Scalar>& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Scalar Matrix::trace() const {
    Scalar t{};
    for (std::size_t k = 0; k < std::min(rows_, cols_); ++k) t += (*this)(k, k);
    return t;
}

Real Matrix::max_abs() const {
    Real m = 0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::DimensionMismatch, "matrix product shapes");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k)
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::DimensionMismatch, "matrix difference shapes");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
}

std::vector<Scalar> operator*(const Matrix& a, const std::vector<Scalar>& v) {
    if (a.cols_ != v.size()) fail(ErrorKind::DimensionMismatch, "matrix-vector shapes");
    std::vector<Scalar> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
}

Real vector_norm(const std::vector<Scalar>& v) {
    Real s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

std::vector<Scalar> characteristic_coefficients(const Matrix& a) {
    const std::size_t n = a.rows();
    if (n != a.cols() || n == 0) fail(ErrorKind::DimensionMismatch, "characteristic polynomial needs a square matrix");
    // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k.
    std::vector<Scalar> c(n);
    Matrix m(n, n);
    Scalar prev{1};
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix next = a * m;
        for (std::size_t d = 0; d < n; ++d) next(d, d) += prev;
        m = next;
        prev = -(a * m).trace() / static_cast<Real>(k);
        c[n - k] = prev;
    }
    return c;
}

std::vector<Scalar> eigenvalues(const Matrix& a) {
    const auto coefficients = characteristic_coefficients(a);
    const std::size_t n = coefficients.size();
    if (n == 1) return {-coefficients[0]};
    const auto p = MonicPolynomial::from_coefficients(coefficients);
    const IterationMap map(UpdateRule::EhrlichAberth, Schedule::Jacobi, p);
    std::vector<Homogeneous<Scalar>> z = default_initial_configuration(p).homogeneous();
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<Homogeneous<Scalar>> next;
        try {
            next = map.apply<Scalar>(z);
        } catch (const NumericError&) {
            break;  // two approximations met on a multiple root
        }
        Real movement = 0;
        for (std::size_t k = 0; k < n; ++k) {
            Scalar before = z[k].z / z[k].w, after = next[k].z / next[k].w;
            movement = std::max(movement, std::abs(after - before) / std::max<Real>(1, std::abs(after)));
        }
        z = std::move(next);
        if (movement < 1e-15) break;
    }
    std::vector<Scalar> out;
    out.reserve(n);
    for (const auto& h : z) out.push_back(h.z / h.w);
    return out;
}

std::vector<Scalar> eigenvector(const Matrix& a, Scalar mu, Real pivot_tol) {
    const std::size_t n = a.rows();
    Matrix m = a;
    for (std::size_t k = 0; k < n; ++k) m(k, k) -= mu;
    const Real scale = std::max<Real>(m.max_abs(), 1e-300);
    std::vector<std::size_t> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = k;

    std::size_t rank = 0;
    for (; rank < n; ++rank) {
        std::size_t pr = rank, pc = rank;
        Real best = 0;
        for (std::size_t r = rank; r < n; ++r)
            for (std::size_t c = rank; c < n; ++c)
                if (std::abs(m(r, c)) > best) {
                    best = std::abs(m(r, c));
                    pr = r;
                    pc = c;
                }
        if (best <= pivot_tol * scale) break;
        for (std::size_t c = 0; c < n; ++c) std::swap(m(rank, c), m(pr, c));
        for (std::size_t r = 0; r < n; ++r) std::swap(m(r, rank), m(r, pc));
        std::swap(col[rank], col[pc]);
        for (std::size_t r = rank + 1; r < n; ++r) {
            Scalar f = m(r, rank) / m(rank, rank);
            for (std::size_t c = rank; c < n; ++c) m(r, c) -= f * m(rank, c);
        }
    }
    if (rank == n) fail(ErrorKind::SingularMatrix, "A - mu I has full rank: mu is not an eigenvalue");

    // Free variable at position `rank` set to 1, the rest zero; back substitute.
    std::vector<Scalar> y(n);
    y[rank] = 1;
    for (std::size_t r = rank; r-- > 0;) {
        Scalar s{};
        for (std::size_t c = r + 1; c < n; ++c) s += m(r, c) * y[c];
        y[r] = -s / m(r, r);
    }
    std::vector<Scalar> x(n);
    for (std::size_t k = 0; k < n; ++k) x[col[k]] = y[k];
    Real norm = vector_norm(x);
    for (auto& v : x) v /= norm;
    return x;
}

std::vector<Scalar> solve(Matrix a, std::vector<Scalar> b) {
    const std::size_t n = a.rows();
    if (n != a.cols() || b.size() != n) fail(ErrorKind::DimensionMismatch, "solve shapes");
    const Real scale = std::max<Real>(a.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
        if (std::abs(a(p, k)) <= 1e-14 * scale) fail(ErrorKind::SingularMatrix, "singular linear system");
        for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
        std::swap(b[k], b[p]);
        for (std::size_t r = k + 1; r < n; ++r) {
            Scalar f = a(r, k) / a(k, k);
            for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
            b[r] -= f * b[k];
        }
    }
    std::vector<Scalar> x(n);
    for (std::size_t r = n; r-- > 0;) {
        Scalar s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

std::vector<Scalar> least_squares(Matrix a, std::vector<Scalar> b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n || b.size() != m) fail(ErrorKind::DimensionMismatch, "least squares shapes");
    const Real scale = std::max<Real>(a.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        Real norm = 0;
        for (std::size_t r = k; r < m; ++r) norm += std::norm(a(r, k));
        norm = std::sqrt(norm);
        if (norm <= 1e-14 * scale) fail(ErrorKind::SingularMatrix, "rank-deficient least squares");
        // Householder vector v = x + e^{i arg x_0} |x| e_0.
        Scalar phase = std::abs(a(k, k)) > 0 ? a(k, k) / std::abs(a(k, k)) : Scalar{1};
        std::vector<Scalar> v(m - k);
        for (std::size_t r = k; r < m; ++r) v[r - k] = a(r, k);
        v[0] += phase * norm;
        Real vnorm2 = 0;
        for (const auto& x : v) vnorm2 += std::norm(x);
        auto reflect = [&](auto&& get) {
            Scalar dot{};
            for (std::size_t r = k; r < m; ++r) dot += std::conj(v[r - k]) * get(r);
            Scalar f = 2.0 * dot / vnorm2;
            for (std::size_t r = k; r < m; ++r) get(r) -= f * v[r - k];
        };
        for (std::size_t c = k; c < n; ++c) reflect([&](std::size_t r) -> Scalar& { return a(r, c); });
        reflect([&](std::size_t r) -> Scalar& { return b[r]; });
    }
    std::vector<Scalar> x(n);
    for (std::size_t r = n; r-- > 0;) {
        Scalar s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix out(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Scalar> e(n);
        e[c] = 1;
        out.set_column(c, solve(a, e));
    }
    return out;
}

}  // namespace orbitforge
