#include "ews/linalg.hpp"

#include "ews/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ews {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotHermitian: return "NotHermitian";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::NormViolation: return "NormViolation";
  case ErrorCode::RankTooLarge: return "RankTooLarge";
  case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorCode::BadParam: return "BadParam";
  case ErrorCode::TraceViolation: return "TraceViolation";
  case ErrorCode::BadSpectrum: return "BadSpectrum";
  case ErrorCode::BadRank: return "BadRank";
  case ErrorCode::ProductState: return "ProductState";
  case ErrorCode::OptFailed: return "OptFailed";
  case ErrorCode::NoConvergedRestart: return "NoConvergedRestart";
  case ErrorCode::NotPPT: return "NotPPT";
  case ErrorCode::FullRank: return "FullRank";
  case ErrorCode::EpsilonVanishes: return "EpsilonVanishes";
  case ErrorCode::OrthogonalityFail: return "OrthogonalityFail";
  case ErrorCode::IsPPT: return "IsPPT";
  case ErrorCode::BoostDenominatorZero: return "BoostDenominatorZero";
  case ErrorCode::UnknownSuite: return "UnknownSuite";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

void require_same_shape(const Matrix &a, const Matrix &b, const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

} // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorCode::LengthMismatch,
                "matrix entries " + std::to_string(data_.size()) +
                    " != " + std::to_string(rows * cols));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto &r : rows) {
    if (r.size() != cols_)
      throw Error(ErrorCode::LengthMismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

Matrix Matrix::outer(std::span<const cplx> v) {
  Matrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

Matrix Matrix::from_columns(const std::vector<CVector> &columns,
                            std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

CVector Matrix::column(std::size_t j) const {
  CVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, std::span<const cplx> v) {
  if (v.size() != rows_)
    throw Error(ErrorCode::LengthMismatch, "set_column");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::adjoint() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::conj() const {
  Matrix r = *this;
  for (auto &x : r.data_) x = std::conj(x);
  return r;
}

cplx Matrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto &x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double Matrix::hermiticity_defect() const {
  if (!square()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

bool Matrix::is_hermitian() const {
  return square() && hermiticity_defect() <= hermitian_tolerance(*this);
}

Matrix Matrix::hermitian_part() const {
  Matrix r = *this;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j) {
      const cplx avg = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
      r(i, j) = avg;
      r(j, i) = std::conj(avg);
    }
  return r;
}

Matrix &Matrix::operator+=(const Matrix &o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix &Matrix::operator-=(const Matrix &o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix &Matrix::operator*=(cplx s) {
  for (auto &x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

CVector operator*(const Matrix &a, std::span<const cplx> v) {
  if (a.cols() != v.size())
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  CVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double spectral_scale(const Matrix &h) {
  return std::max(1.0, h.frobenius_norm());
}
double hermitian_tolerance(const Matrix &h) { return 1e-12 * spectral_scale(h); }
double negativity_threshold(const Matrix &h) { return 1e-10 * spectral_scale(h); }

cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::LengthMismatch, "inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto &x : v) s += std::norm(x);
  return std::sqrt(s);
}

CVector normalized(std::span<const cplx> v) {
  const double nv = norm(v);
  CVector r(v.begin(), v.end());
  if (nv > 0.0)
    for (auto &x : r) x /= nv;
  return r;
}

CVector kron(std::span<const cplx> a, std::span<const cplx> b) {
  CVector r(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
  return r;
}

CVector conj(std::span<const cplx> v) {
  CVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = std::conj(v[i]);
  return r;
}

double expectation(const Matrix &h, std::span<const cplx> v) {
  return inner(v, h * v).real();
}

double trace_product(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "trace_product");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s.real();
}

// ---------------------------------------------------------------------------
// BipartiteOperator

BipartiteOperator::BipartiteOperator(std::size_t m, std::size_t n,
                                     Matrix matrix, bool check_hermitian)
    : m_(m), n_(n), mat_(std::move(matrix)) {
  if (m == 0 || n == 0)
    throw Error(ErrorCode::BadParam, "local dimensions must be positive");
  if (mat_.rows() != m * n || mat_.cols() != m * n)
    throw Error(ErrorCode::DimensionMismatch,
                "operator order " + std::to_string(mat_.rows()) + "x" +
                    std::to_string(mat_.cols()) + " != m*n = " +
                    std::to_string(m * n));
  if (check_hermitian && !mat_.is_hermitian())
    throw Error(ErrorCode::NotHermitian,
                "defect " + std::to_string(mat_.hermiticity_defect()));
}

Matrix BipartiteOperator::block(std::size_t i, std::size_t j) const {
  Matrix b(n_, n_);
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t l = 0; l < n_; ++l) b(k, l) = mat_(i * n_ + k, j * n_ + l);
  return b;
}

BipartiteOperator BipartiteOperator::normalized() const {
  const double t = trace();
  if (!(std::abs(t) > 0.0))
    throw Error(ErrorCode::TraceViolation, "cannot normalize a traceless operator");
  return BipartiteOperator(m_, n_, mat_ * cplx(1.0 / t), false);
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic Jacobi with complex rotations.

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

double off_diagonal_norm(const Matrix &a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Annihilates a(p,q) with J = D P, D = diag(1, e^{-i phi}) acting on (p,q),
// P the real Jacobi rotation of the phase-stripped block. A <- J^dagger A J.
void jacobi_rotate(Matrix &a, Matrix &v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r; // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) /
        (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx jpp = c;
  const cplx jpq = s;
  const cplx jqp = -s * std::conj(phase);
  const cplx jqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

} // namespace

Spectrum eig_hermitian(const Matrix &h) {
  if (!h.square())
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  if (!h.is_hermitian())
    throw Error(ErrorCode::NotHermitian,
                "defect " + std::to_string(h.hermiticity_defect()));
  const std::size_t n = h.rows();
  Matrix a = h.hermitian_part();
  Matrix v = Matrix::identity(n);
  const double scale = h.frobenius_norm();
  const double target = kOffDiagonalTolerance * scale;

  bool converged = scale == 0.0 || off_diagonal_norm(a) < target;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    converged = off_diagonal_norm(a) < target;
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "off-diagonal norm " + std::to_string(off_diagonal_norm(a)) +
                    " after " + std::to_string(kMaxSweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });
  Spectrum out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> eigenvalues_hermitian(const Matrix &h) {
  return eig_hermitian(h).values;
}

// ---------------------------------------------------------------------------
// SVD

namespace {

// Orthogonalizes `x` against the first `count` columns of `basis` (twice, for
// stability) and returns the residual.
CVector orthogonalize(const Matrix &basis, std::size_t count, CVector x) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j < count; ++j) {
      const CVector bj = basis.column(j);
      const cplx c = inner(bj, x);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * bj[i];
    }
  return x;
}

// Fills columns [filled, cols) of `basis` with unit vectors orthogonal to
// everything before them, drawing candidates from the standard basis.
void fill_orthonormal(Matrix &basis, std::size_t filled) {
  const std::size_t dim = basis.rows();
  std::size_t candidate = 0;
  while (filled < basis.cols()) {
    if (candidate >= dim)
      throw Error(ErrorCode::NoConvergence, "basis completion exhausted");
    CVector e(dim);
    e[candidate++] = 1.0;
    CVector r = orthogonalize(basis, filled, std::move(e));
    const double nr = norm(r);
    if (nr < 1e-6) continue;
    for (auto &x : r) x /= nr;
    basis.set_column(filled++, r);
  }
}

} // namespace

Matrix complete_unitary(const Matrix &columns) {
  Matrix u(columns.rows(), columns.rows());
  if (columns.cols() > columns.rows())
    throw Error(ErrorCode::DimensionMismatch, "more columns than rows");
  for (std::size_t j = 0; j < columns.cols(); ++j)
    u.set_column(j, columns.column(j));
  fill_orthonormal(u, columns.cols());
  return u;
}

Svd svd(const Matrix &m) {
  if (m.rows() < m.cols()) {
    Svd t = svd(m.adjoint());
    return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  const std::size_t k = m.cols();
  const Spectrum gram = eig_hermitian((m.adjoint() * m).hermitian_part());

  // sigma_k = ||M v_k|| keeps absolute accuracy near zero, unlike sqrt(lambda_k).
  std::vector<CVector> mv(k);
  std::vector<double> sig(k);
  for (std::size_t j = 0; j < k; ++j) {
    mv[j] = m * gram.vectors.column(j);
    sig[j] = norm(mv[j]);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  const double cutoff = 1e-10 * m.frobenius_norm();
  Svd out{Matrix(m.rows(), k), std::vector<double>(k), Matrix(k, k)};
  std::size_t nonzero = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    out.v.set_column(j, gram.vectors.column(src));
    out.sigma[j] = sig[src] < cutoff ? 0.0 : sig[src];
    if (out.sigma[j] > 0.0) ++nonzero;
  }
  for (std::size_t j = 0; j < nonzero; ++j) {
    CVector uj = orthogonalize(out.u, j, mv[order[j]]);
    const double nu = norm(uj);
    for (auto &x : uj) x /= nu;
    out.u.set_column(j, uj);
  }
  fill_orthonormal(out.u, nonzero);
  return out;
}

// ---------------------------------------------------------------------------

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

Matrix partial_transpose(const Matrix &x, std::size_t m, std::size_t n) {
  if (x.rows() != m * n || x.cols() != m * n)
    throw Error(ErrorCode::DimensionMismatch, "partial_transpose");
  Matrix r(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          r(i * n + k, j * n + l) = x(j * n + k, i * n + l);
  return r;
}

BipartiteOperator partial_transpose(const BipartiteOperator &x) {
  return BipartiteOperator(x.dim_a(), x.dim_b(),
                           partial_transpose(x.matrix(), x.dim_a(), x.dim_b()),
                           false);
}

double negativity(const Matrix &h) {
  const auto values = eigenvalues_hermitian(h);
  const double thr = negativity_threshold(h);
  double s = 0.0;
  for (double v : values)
    if (v < -thr) s -= v;
  return s;
}

double trace_norm(const Matrix &m) {
  const auto s = svd(m).sigma;
  return std::accumulate(s.begin(), s.end(), 0.0);
}

namespace {
std::vector<double> sorted_down(std::span<const double> v) {
  std::vector<double> r(v.begin(), v.end());
  std::sort(r.begin(), r.end(), std::greater<>());
  return r;
}
} // namespace

bool majorizes(std::span<const double> y, std::span<const double> x) {
  if (y.size() != x.size())
    throw Error(ErrorCode::LengthMismatch, "majorizes");
  constexpr double tol = 1e-9;
  const auto ys = sorted_down(y), xs = sorted_down(x);
  double sy = 0.0, sx = 0.0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    sy += ys[k];
    sx += xs[k];
    if (k + 1 < ys.size() && sx > sy + tol) return false;
  }
  return std::abs(sx - sy) <= tol;
}

double inner_product_lower_bound(std::span<const double> spec_a,
                                 std::span<const double> spec_b) {
  if (spec_a.size() != spec_b.size())
    throw Error(ErrorCode::LengthMismatch, "inner_product_lower_bound");
  const auto a = sorted_down(spec_a), b = sorted_down(spec_b);
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[n - 1 - i];
  return s;
}

BipartiteOperator embed(const BipartiteOperator &x, std::size_t m2,
                        std::size_t n2) {
  const std::size_t m = x.dim_a(), n = x.dim_b();
  if (m2 < m || n2 < n)
    throw Error(ErrorCode::DimensionMismatch, "embed target smaller than source");
  Matrix r(m2 * n2, m2 * n2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < n; ++l)
          r(i * n2 + k, j * n2 + l) = x.matrix()(i * n + k, j * n + l);
  return BipartiteOperator(m2, n2, std::move(r), false);
}

} // namespace ews
