#include "ews/states.hpp"

#include "ews/error.hpp"
#include "ews/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ews {

// ---------------------------------------------------------------------------
// Pure states

CVector PureState::vector() const {
  CVector v(m * n);
  for (std::size_t k = 0; k < schmidt.size(); ++k) {
    const CVector term = kron(basis_a.column(k), basis_b.column(k));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += schmidt[k] * term[i];
  }
  return v;
}

BipartiteOperator PureState::projector() const {
  return BipartiteOperator(m, n, Matrix::outer(vector()), false);
}

PureState pure_from_schmidt(std::span<const double> coeffs, std::size_t m,
                            std::size_t n) {
  if (coeffs.empty())
    throw Error(ErrorCode::NormViolation, "no Schmidt coefficients");
  if (coeffs.size() > std::min(m, n))
    throw Error(ErrorCode::RankTooLarge,
                std::to_string(coeffs.size()) + " coefficients exceed min(m, n)");
  double sq = 0.0;
  for (double c : coeffs) {
    if (!(c > 0.0))
      throw Error(ErrorCode::NormViolation, "Schmidt coefficients must be positive");
    sq += c * c;
  }
  if (std::abs(sq - 1.0) > 1e-9)
    throw Error(ErrorCode::NormViolation,
                "sum of squares " + std::to_string(sq) + " != 1");
  PureState s;
  s.m = m;
  s.n = n;
  s.schmidt.assign(coeffs.begin(), coeffs.end());
  std::stable_sort(s.schmidt.begin(), s.schmidt.end(), std::greater<>());
  const std::size_t d = s.schmidt.size();
  s.basis_a = Matrix(m, d);
  s.basis_b = Matrix(n, d);
  for (std::size_t k = 0; k < d; ++k) {
    s.basis_a(k, k) = 1.0;
    s.basis_b(k, k) = 1.0;
  }
  return s;
}

PureState pure_from_schmidt(std::initializer_list<double> coeffs,
                            std::size_t m, std::size_t n) {
  return pure_from_schmidt(std::span<const double>(coeffs.begin(), coeffs.size()),
                           m, n);
}

PureState schmidt_decompose(std::span<const cplx> psi, std::size_t m,
                            std::size_t n, double cutoff) {
  if (psi.size() != m * n)
    throw Error(ErrorCode::LengthMismatch, "vector length != m*n");
  // Coefficient matrix C_ij = psi[i n + j] = sum_k s_k U_ik conj(V_jk).
  Matrix c(m, n, CVector(psi.begin(), psi.end()));
  const Svd d = svd(c);
  PureState s;
  s.m = m;
  s.n = n;
  std::size_t rank = 0;
  while (rank < d.sigma.size() && d.sigma[rank] > cutoff) ++rank;
  if (rank == 0) throw Error(ErrorCode::NormViolation, "zero vector");
  double sq = 0.0;
  for (std::size_t k = 0; k < rank; ++k) sq += d.sigma[k] * d.sigma[k];
  const double scale = 1.0 / std::sqrt(sq);
  s.basis_a = Matrix(m, rank);
  s.basis_b = Matrix(n, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    s.schmidt.push_back(d.sigma[k] * scale);
    for (std::size_t i = 0; i < m; ++i) s.basis_a(i, k) = d.u(i, k);
    for (std::size_t j = 0; j < n; ++j) s.basis_b(j, k) = std::conj(d.v(j, k));
  }
  return s;
}

PureState max_entangled(std::size_t m, std::size_t n, std::size_t j) {
  if (m == 0 || m > n || j < 1 || j > n / m)
    throw Error(ErrorCode::IndexOutOfRange,
                "need 1 <= j <= floor(n/m); got j=" + std::to_string(j));
  PureState s;
  s.m = m;
  s.n = n;
  s.schmidt.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
  s.basis_a = Matrix::identity(m);
  s.basis_b = Matrix(n, m);
  for (std::size_t i = 0; i < m; ++i) s.basis_b(i + (j - 1) * m, i) = 1.0;
  return s;
}

CVector max_entangled_vector(std::size_t d, std::size_t m, std::size_t n) {
  if (d == 0 || d > std::min(m, n))
    throw Error(ErrorCode::IndexOutOfRange, "Psi_d needs 1 <= d <= min(m, n)");
  CVector v(m * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) v[i * n + i] = amp;
  return v;
}

std::vector<double> pt_spectrum_pure(const PureState &psi) {
  const auto &a = psi.schmidt;
  std::vector<double> out;
  out.reserve(psi.m * psi.n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(a[i] * a[i]);
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      out.push_back(a[i] * a[j]);
      out.push_back(-a[i] * a[j]);
    }
  }
  out.resize(psi.m * psi.n, 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// ---------------------------------------------------------------------------
// Canonical states

namespace {

constexpr std::array<std::pair<CanonicalState, std::string_view>, 12> kNames{{
    {CanonicalState::zeta1, "zeta1"},
    {CanonicalState::zeta2, "zeta2"},
    {CanonicalState::rho1, "rho1"},
    {CanonicalState::rho2, "rho2"},
    {CanonicalState::rho_b, "rho_b"},
    {CanonicalState::rho_a, "rho_a"},
    {CanonicalState::gamma, "gamma"},
    {CanonicalState::gamma_prime, "gamma_prime"},
    {CanonicalState::gamma1, "gamma1"},
    {CanonicalState::gamma2, "gamma2"},
    {CanonicalState::tiles_upb, "tiles_upb"},
    {CanonicalState::max_ball_center, "max_ball_center"},
}};

BipartiteOperator diagonal_state(std::size_t m, std::size_t n,
                                 std::vector<double> diag, bool normalize) {
  if (normalize) {
    const double t = std::accumulate(diag.begin(), diag.end(), 0.0);
    for (auto &x : diag) x /= t;
  }
  return BipartiteOperator(m, n, Matrix::diagonal(diag));
}

// Local congruence (U (x) V) X (U (x) V)^dagger followed by Gamma.
BipartiteOperator rotated_pt(const BipartiteOperator &x, const Matrix &u,
                             const Matrix &v) {
  const Matrix uv = kron(u, v);
  const Matrix y = (uv * x.matrix() * uv.adjoint()).hermitian_part();
  return partial_transpose(BipartiteOperator(x.dim_a(), x.dim_b(), y));
}

const Matrix &flip3() {
  static const Matrix v{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  return v;
}

class ParamReader {
public:
  ParamReader(const CanonicalStateId &id) : id_(id) {}

  double get(const std::string &key, double fallback) {
    used_.insert(key);
    const auto it = id_.params.find(key);
    return it == id_.params.end() ? fallback : it->second;
  }

  std::size_t count(const std::string &key, std::size_t fallback,
                    std::size_t min_value) {
    const double v = get(key, static_cast<double>(fallback));
    if (v != std::floor(v) || v < static_cast<double>(min_value))
      throw Error(ErrorCode::BadParam, key + " must be an integer >= " +
                                           std::to_string(min_value));
    return static_cast<std::size_t>(v);
  }

  void finish() const {
    for (const auto &[k, v] : id_.params)
      if (!used_.count(k))
        throw Error(ErrorCode::BadParam, "unknown parameter '" + k + "' for " +
                                             std::string(to_string(id_.name)));
  }

private:
  const CanonicalStateId &id_;
  std::set<std::string> used_;
};

void require_open_unit(double x, const char *name) {
  if (!(x > 0.0 && x < 1.0))
    throw Error(ErrorCode::BadParam, std::string(name) + " must lie in (0, 1)");
}

} // namespace

std::string_view to_string(CanonicalState s) {
  for (const auto &[k, v] : kNames)
    if (k == s) return v;
  return "?";
}

CanonicalState parse_canonical_state(std::string_view name) {
  for (const auto &[k, v] : kNames)
    if (v == name) return k;
  throw Error(ErrorCode::BadParam, "unknown state '" + std::string(name) + "'");
}

BipartiteOperator rho_b_state(double b) {
  require_open_unit(b, "b");
  Matrix r(8, 8);
  for (std::size_t i = 0; i < 8; ++i) r(i, i) = b;
  for (std::size_t i = 0; i < 3; ++i) r(i, i + 5) = r(i + 5, i) = b;
  r(4, 4) = r(7, 7) = (1.0 + b) / 2.0;
  r(4, 7) = r(7, 4) = std::sqrt(1.0 - b * b) / 2.0;
  return BipartiteOperator(2, 4, r * cplx(1.0 / (7.0 * b + 1.0)));
}

BipartiteOperator rho_a_state(double a) {
  require_open_unit(a, "a");
  Matrix r(9, 9);
  for (std::size_t i = 0; i < 9; ++i) r(i, i) = a;
  for (std::size_t i : {0, 4, 8})
    for (std::size_t j : {0, 4, 8}) r(i, j) = a;
  r(6, 6) = r(8, 8) = (a + 1.0) / 2.0;
  r(6, 8) = r(8, 6) = std::sqrt(1.0 - a * a) / 2.0;
  return BipartiteOperator(3, 3, r * cplx(1.0 / (8.0 * a + 1.0)));
}

BipartiteOperator gamma_state() {
  const Matrix g{
      {1, 0, 0, 0, 0, 0, 0, 0, -1},  {0, 2, 0, -1, 0, 0, 0, 0, 0},
      {0, 0, 1, 0, 0, 0, 1, 0, 0},   {0, -1, 0, 1, 0, 0, 0, 0, 1},
      {0, 0, 0, 0, 1, 0, 1, 0, 0},   {0, 0, 0, 0, 0, 1, 0, -1, 0},
      {0, 0, 1, 0, 1, 0, 2, 0, 0},   {0, 0, 0, 0, 0, -1, 0, 1, 0},
      {-1, 0, 0, 1, 0, 0, 0, 0, 3}};
  return BipartiteOperator(3, 3, g * cplx(1.0 / 13.0));
}

BipartiteOperator gamma_prime_state() {
  return rotated_pt(gamma_state(), Matrix::diagonal({-1.0, -1.0, 1.0}), flip3());
}

BipartiteOperator gamma1_state() {
  const Matrix shift{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  return rotated_pt(gamma_state(), shift, flip3());
}

BipartiteOperator gamma2_state() { return gamma_prime_state(); }

std::array<ProductVector, 5> tiles_upb_vectors() {
  const double r2 = 1.0 / std::sqrt(2.0);
  const CVector e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  const CVector e12{r2, -r2, 0}, e23{0, r2, -r2};
  const CVector all{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0),
                    1.0 / std::sqrt(3.0)};
  return {{{e1, e12}, {e3, e23}, {e12, e3}, {e23, e1}, {all, all}}};
}

BipartiteOperator tiles_upb_state() {
  Matrix s = Matrix::identity(9);
  for (const auto &[a, b] : tiles_upb_vectors()) s -= Matrix::outer(kron(a, b));
  return BipartiteOperator(3, 3, (s * cplx(0.25)).hermitian_part());
}

BipartiteOperator canonical_state(const CanonicalStateId &id) {
  ParamReader p(id);
  BipartiteOperator out;
  switch (id.name) {
  case CanonicalState::zeta1: {
    const std::size_t m = p.count("m", 3, 2);
    const std::size_t l = p.count("l", 1, 1);
    if (l > m * m) throw Error(ErrorCode::BadParam, "l must satisfy 1 <= l <= m^2");
    std::vector<double> d(m * m, 1.0);
    for (std::size_t i = 0; i < l; ++i) d[i] = (m + 1.0) / (m - 1.0);
    out = diagonal_state(m, m, std::move(d), true);
    break;
  }
  case CanonicalState::zeta2:
  case CanonicalState::max_ball_center: {
    const std::size_t m = p.count("m", 3, 2), n = p.count("n", 3, 2);
    std::vector<double> d(m * n, 1.0);
    if (id.name == CanonicalState::zeta2) d[0] = 3.0;
    out = diagonal_state(m, n, std::move(d), true);
    break;
  }
  case CanonicalState::rho1:
  case CanonicalState::rho2: {
    const std::size_t m = p.count("m", 3, 2), n = p.count("n", 3, 2);
    const double flag = p.get("normalized", 1.0);
    if (flag != 0.0 && flag != 1.0)
      throw Error(ErrorCode::BadParam, "normalized must be 0 or 1");
    std::vector<double> d(m * n, 1.0);
    if (id.name == CanonicalState::rho1) {
      d[0] = d[1] = std::sqrt(2.0) + 1.0;
    } else {
      d[0] = d[1] = d[2] = 2.0;
    }
    out = diagonal_state(m, n, std::move(d), flag == 1.0);
    break;
  }
  case CanonicalState::rho_b: out = rho_b_state(p.get("b", 0.9)); break;
  case CanonicalState::rho_a: out = rho_a_state(p.get("a", 0.9)); break;
  case CanonicalState::gamma: out = gamma_state(); break;
  case CanonicalState::gamma_prime: out = gamma_prime_state(); break;
  case CanonicalState::gamma1: out = gamma1_state(); break;
  case CanonicalState::gamma2: out = gamma2_state(); break;
  case CanonicalState::tiles_upb: out = tiles_upb_state(); break;
  }
  p.finish();
  return out;
}

// ---------------------------------------------------------------------------
// Predicates

namespace {
void require_unit_trace(const BipartiteOperator &rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-9)
    throw Error(ErrorCode::TraceViolation,
                "trace " + std::to_string(rho.trace()) + " != 1");
}
} // namespace

bool is_in_maximal_ball(const BipartiteOperator &rho) {
  require_unit_trace(rho);
  const double purity = trace_product(rho.matrix(), rho.matrix());
  return purity <= 1.0 / (static_cast<double>(rho.order()) - 1.0) + 1e-12;
}

bool as_2xn_test(std::span<const double> spectrum, std::size_t n) {
  if (n < 2 || spectrum.size() != 2 * n)
    throw Error(ErrorCode::BadSpectrum,
                "expected length 2n = " + std::to_string(2 * n) + ", got " +
                    std::to_string(spectrum.size()));
  std::vector<double> l(spectrum.begin(), spectrum.end());
  double total = 0.0;
  for (double x : l) {
    if (x < -1e-12) throw Error(ErrorCode::BadSpectrum, "negative eigenvalue");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error(ErrorCode::BadSpectrum, "spectrum does not sum to 1");
  std::sort(l.begin(), l.end(), std::greater<>());
  const std::size_t k = 2 * n; // 1-based lambda_k is l[k-1]
  return l[0] <= l[k - 2] + 2.0 * std::sqrt(std::max(0.0, l[k - 3] * l[k - 1])) +
                     1e-12;
}

double min_pt_eigenvalue(const BipartiteOperator &rho) {
  return eigenvalues_hermitian(partial_transpose(rho).matrix()).back();
}

bool is_ppt(const BipartiteOperator &rho, double tol) {
  return min_pt_eigenvalue(rho) >= -tol * spectral_scale(rho.matrix());
}

// ---------------------------------------------------------------------------
// Sampling

PureState random_pure_state(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return schmidt_decompose(haar_vector(rng, m * n), m, n);
}

BipartiteOperator random_density(std::size_t m, std::size_t n,
                                 std::size_t rank, std::uint64_t seed) {
  const std::size_t d = m * n;
  if (rank == 0 || rank > d)
    throw Error(ErrorCode::BadRank, "rank must lie in [1, m*n]");
  Rng rng = make_rng(seed);
  Matrix g(d, rank, complex_gaussian(rng, d * rank));
  Matrix w = (g * g.adjoint()).hermitian_part();
  w *= cplx(1.0 / w.trace().real());
  return BipartiteOperator(m, n, std::move(w));
}

std::pair<Matrix, std::size_t> kernel_projector(const Matrix &op,
                                                double rel_tol) {
  const Spectrum s = eig_hermitian(op);
  const double tol = rel_tol * op.frobenius_norm();
  Matrix p(op.rows(), op.cols());
  std::size_t rank = 0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (std::abs(s.values[k]) >= tol) continue;
    p += Matrix::outer(s.vectors.column(k));
    ++rank;
  }
  return {p.hermitian_part(), rank};
}

} // namespace ews
