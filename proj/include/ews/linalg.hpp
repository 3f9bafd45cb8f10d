#pragma once

// Dense complex matrices for small bipartite operators (order up to ~100).
// Row-major storage; the bipartite basis vector |i>|j> maps to row i*n + j.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ews {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  static Matrix diagonal(std::initializer_list<double> d);
  /// |v><v|
  static Matrix outer(std::span<const cplx> v);
  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<CVector> &columns,
                             std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  CVector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const cplx> v);

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;
  cplx trace() const;
  double frobenius_norm() const;
  /// max_{ij} |H_ij - conj(H_ji)|
  double hermiticity_defect() const;
  bool is_hermitian() const;
  /// (H + H^dagger) / 2
  Matrix hermitian_part() const;

  Matrix &operator+=(const Matrix &o);
  Matrix &operator-=(const Matrix &o);
  Matrix &operator*=(cplx s);

  friend bool operator==(const Matrix &, const Matrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
Matrix operator*(const Matrix &a, const Matrix &b);
Matrix operator*(Matrix a, cplx s);
Matrix operator*(cplx s, Matrix a);
CVector operator*(const Matrix &a, std::span<const cplx> v);

/// Hermiticity tolerance 1e-12 * max(1, ||H||_F).
double hermitian_tolerance(const Matrix &h);
/// Scale used by the eigenvalue sign threshold: max(1, ||H||_F).
double spectral_scale(const Matrix &h);
/// A value counts as negative when below -1e-10 * max(1, ||H||_F).
double negativity_threshold(const Matrix &h);

cplx inner(std::span<const cplx> u, std::span<const cplx> v); // <u|v>
double norm(std::span<const cplx> v);
CVector normalized(std::span<const cplx> v);
CVector kron(std::span<const cplx> a, std::span<const cplx> b);
CVector conj(std::span<const cplx> v);
/// <v|H|v>, real part.
double expectation(const Matrix &h, std::span<const cplx> v);
/// Re tr(A B) without forming the product.
double trace_product(const Matrix &a, const Matrix &b);

/// Bipartite Hermitian operator on C^m (x) C^n.
class BipartiteOperator {
public:
  BipartiteOperator() = default;
  /// Throws NotHermitian if `check_hermitian` and the matrix fails tolerance.
  BipartiteOperator(std::size_t m, std::size_t n, Matrix matrix,
                    bool check_hermitian = true);

  std::size_t dim_a() const noexcept { return m_; }
  std::size_t dim_b() const noexcept { return n_; }
  std::size_t order() const noexcept { return m_ * n_; }
  const Matrix &matrix() const noexcept { return mat_; }

  /// Block (i, j) of the m x m partition into n x n blocks.
  Matrix block(std::size_t i, std::size_t j) const;
  double trace() const { return mat_.trace().real(); }
  /// Same operator divided by its trace.
  BipartiteOperator normalized() const;

  friend bool operator==(const BipartiteOperator &,
                         const BipartiteOperator &) = default;

private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  Matrix mat_;
};

struct Spectrum {
  std::vector<double> values; ///< non-increasing
  Matrix vectors;             ///< column k pairs with values[k]
};

/// Cyclic complex Jacobi. Throws NotHermitian / NoConvergence.
Spectrum eig_hermitian(const Matrix &h);
std::vector<double> eigenvalues_hermitian(const Matrix &h);

struct Svd {
  Matrix u;                  ///< rows x k, orthonormal columns
  std::vector<double> sigma; ///< k = min(rows, cols), non-increasing
  Matrix v;                  ///< cols x k, orthonormal columns
};

/// Thin SVD built from the eigendecomposition of M^dagger M.
Svd svd(const Matrix &m);

/// Completes orthonormal columns to a square unitary (Gram-Schmidt against
/// the standard basis).
Matrix complete_unitary(const Matrix &columns);

Matrix kron(const Matrix &a, const Matrix &b);

Matrix partial_transpose(const Matrix &x, std::size_t m, std::size_t n);
BipartiteOperator partial_transpose(const BipartiteOperator &x);

/// Sum of |lambda| over eigenvalues below the negativity threshold.
double negativity(const Matrix &h);
/// sum_k sigma_k(M)
double trace_norm(const Matrix &m);

/// y majorizes x. Throws LengthMismatch.
bool majorizes(std::span<const double> y, std::span<const double> x);

/// sum_i lambda_i^down(A) * lambda_{n-i+1}^down(B); a lower bound on tr(AB).
double inner_product_lower_bound(std::span<const double> spec_a,
                                 std::span<const double> spec_b);

/// Zero-pads a bipartite operator into C^m2 (x) C^n2 (local embedding).
BipartiteOperator embed(const BipartiteOperator &x, std::size_t m2,
                        std::size_t n2);

} // namespace ews
