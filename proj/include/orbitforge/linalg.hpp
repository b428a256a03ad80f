#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "orbitforge/error.hpp"
#include "orbitforge/scalar.hpp"

namespace orbitforge {

/// Small dense complex matrix, row major.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Scalar> column(std::size_t c) const;
    void set_column(std::size_t c, const std::vector<Scalar>& v);

    Scalar trace() const;
    Real max_abs() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend std::vector<Scalar> operator*(const Matrix& a, const std::vector<Scalar>& v);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

Real vector_norm(const std::vector<Scalar>& v);

/// Coefficients c_0..c_{n-1} of the monic characteristic polynomial
/// det(zI - A) = z^n + c_{n-1} z^{n-1} + ... + c_0 (Faddeev-LeVerrier).
std::vector<Scalar> characteristic_coefficients(const Matrix& a);

/// Eigenvalues as roots of the characteristic polynomial, found with the
/// Jacobi Ehrlich-Aberth iteration. Order follows the solver, not magnitude.
std::vector<Scalar> eigenvalues(const Matrix& a);

/// A unit null vector of A - mu I by complete-pivot elimination. Pivots below
/// pivot_tol * max|entry| count as zero. Throws SingularMatrix if the
/// eliminated matrix has full rank.
std::vector<Scalar> eigenvector(const Matrix& a, Scalar mu, Real pivot_tol = 1e-10);

/// Solves A x = b for square nonsingular A (partial pivoting).
std::vector<Scalar> solve(Matrix a, std::vector<Scalar> b);

/// Least-squares solution of min |A x - b| via Householder QR (rows >= cols).
std::vector<Scalar> least_squares(Matrix a, std::vector<Scalar> b);

Matrix inverse(const Matrix& a);

}  // namespace orbitforge
