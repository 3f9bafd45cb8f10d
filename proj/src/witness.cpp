#include "ews/witness.hpp"

#include "ews/error.hpp"
#include "ews/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ews {

namespace {

constexpr double kBoundTol = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Matrix pt_projector(std::span<const cplx> v, std::size_t m, std::size_t n) {
  return partial_transpose(Matrix::outer(v), m, n);
}

double condition_number(const Matrix &x) {
  const Svd s = svd(x);
  return s.sigma.back() > 0.0 ? s.sigma.front() / s.sigma.back()
                              : std::numeric_limits<double>::infinity();
}

// Index of the smallest eigenvalue; lowest index among exact ties.
std::size_t min_index(const Spectrum &s) {
  std::size_t k = 0;
  while (s.values[k] > s.values.back()) ++k;
  return k;
}

} // namespace

std::string_view to_string(WitnessClass c) {
  switch (c) {
  case WitnessClass::dew_by_construction: return "DEW-by-construction";
  case WitnessClass::ndew_certified: return "NDEW-certified";
  case WitnessClass::unclassified: return "EW-unclassified";
  }
  return "?";
}

std::string_view to_string(MirrorVerdict v) {
  switch (v) {
  case MirrorVerdict::mirror_ew: return "mirror-EW";
  case MirrorVerdict::mirror_psd: return "mirror-PSD";
  case MirrorVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Constructions

Witness w_family(const FamilyParams &p) {
  for (double x : {p.a, p.b, p.c, p.d})
    if (!(x >= 0.0 && x <= 1.0))
      throw Error(ErrorCode::BadParam, "family weights must lie in [0, 1]");
  if (std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-12)
    throw Error(ErrorCode::BadParam, "family weights must sum to 1");
  if (p.m < 2 || p.m > p.n)
    throw Error(ErrorCode::BadParam, "family needs 2 <= m <= n");
  const std::size_t m = p.m, n = p.n, mn = m * n;

  CVector omega(mn);
  omega[1] = 1.0 / std::sqrt(2.0);
  omega[n] = -1.0 / std::sqrt(2.0);
  CVector e11(mn);
  e11[0] = 1.0;

  Matrix w = (Matrix::identity(mn) - Matrix::outer(omega)) *
             cplx(p.a / static_cast<double>(mn - 1));
  w += pt_projector(max_entangled_vector(2, m, n), m, n) * cplx(p.b);
  w += Matrix::outer(e11) * cplx(p.c);
  w += pt_projector(max_entangled_vector(m, m, n), m, n) * cplx(p.d);

  Witness out;
  out.op = BipartiteOperator(m, n, w.hermitian_part());
  out.kind = WitnessClass::dew_by_construction;
  out.provenance.push_back("family(a=" + fmt(p.a) + ",b=" + fmt(p.b) +
                           ",c=" + fmt(p.c) + ",d=" + fmt(p.d) + ",m=" +
                           std::to_string(m) + ",n=" + std::to_string(n) + ")");
  return out;
}

Witness pure_pt_witness(const PureState &psi) {
  if (psi.rank() < 2)
    throw Error(ErrorCode::ProductState,
                "Schmidt rank 1: the partial transpose is positive");
  Witness out;
  out.op = partial_transpose(psi.projector());
  out.kind = WitnessClass::dew_by_construction;
  std::string coeffs;
  for (double a : psi.schmidt) coeffs += (coeffs.empty() ? "" : ",") + fmt(a);
  out.provenance.push_back("pure-pt(schmidt=" + coeffs + ")");
  return out;
}

Witness sample_dew(std::size_t m, std::size_t n, double x, std::size_t rank_p,
                   std::size_t rank_q, std::uint64_t seed) {
  if (!(x >= 0.0 && x < 1.0))
    throw Error(ErrorCode::BadParam, "mixing weight must lie in [0, 1)");
  if (rank_p == 0 || rank_q == 0 || rank_p > m * n || rank_q > m * n)
    throw Error(ErrorCode::BadParam, "ranks must lie in [1, m*n]");
  const BipartiteOperator p = random_density(m, n, rank_p, derive_seed(seed, 0));
  const BipartiteOperator q = random_density(m, n, rank_q, derive_seed(seed, 1));
  Matrix w = p.matrix() * cplx(x) +
             partial_transpose(q.matrix(), m, n) * cplx(1.0 - x);
  Witness out;
  out.op = BipartiteOperator(m, n, w.hermitian_part());
  out.kind = WitnessClass::dew_by_construction;
  out.provenance.push_back("sample-dew(x=" + fmt(x) + ",rank_p=" +
                           std::to_string(rank_p) + ",rank_q=" +
                           std::to_string(rank_q) + ",seed=" +
                           std::to_string(seed) + ")");
  return out;
}

// ---------------------------------------------------------------------------
// Spectral report

bool SpectrumReport::all_passed() const {
  return std::all_of(bounds.begin(), bounds.end(),
                     [](const BoundCheck &b) { return b.passed; });
}

const BoundCheck *SpectrumReport::find(std::string_view name) const {
  for (const auto &b : bounds)
    if (b.name == name) return &b;
  return nullptr;
}

SpectrumReport spectral_report(const BipartiteOperator &w) {
  SpectrumReport r;
  r.m = w.dim_a();
  r.n = w.dim_b();
  const std::size_t m = r.m, n = r.n, mn = m * n;
  r.lambdas = eigenvalues_hermitian(w.matrix());
  const double tr = std::accumulate(r.lambdas.begin(), r.lambdas.end(), 0.0);
  if (tr > 0.0)
    for (auto &l : r.lambdas) l /= tr;
  const auto &l = r.lambdas;
  r.lambda1 = l.front();
  r.lambda_min = l.back();
  const double neg_tol = 1e-10 * std::max(1.0, std::sqrt([&] {
                           double s = 0.0;
                           for (double x : l) s += x * x;
                           return s;
                         }()));
  for (double x : l) {
    r.fro_sq += x * x;
    if (x < 0.0) r.negativity -= x;
    if (x < -neg_tol) ++r.neg_count;
  }
  r.is_ew_candidate = r.neg_count > 0;

  const auto near = [](double a, double b) { return std::abs(a - b) <= kBoundTol; };
  const auto lower = [&](std::string name, double v, double bound) {
    r.bounds.push_back({std::move(name), v >= bound - kBoundTol, near(v, bound), v, bound});
  };
  const auto upper = [&](std::string name, double v, double bound) {
    r.bounds.push_back({std::move(name), v <= bound + kBoundTol, near(v, bound), v, bound});
  };
  const double inv = 1.0 / static_cast<double>(mn - 1);
  lower("lambda1_lower", r.lambda1, inv);
  upper("lambda1_upper", r.lambda1, 1.0);
  lower("lambda_min_lower", r.lambda_min, -0.5);
  upper("lambda_min_upper", r.lambda_min, 0.0);
  lower("fro_sq_lower", r.fro_sq, inv);
  upper("fro_sq_upper", r.fro_sq, 1.0);
  upper("neg_count", static_cast<double>(r.neg_count),
        static_cast<double>((m - 1) * (n - 1)));
  // The strict sides of the open intervals: an operator sitting on the bound
  // passes within tolerance but the check is then flagged as attained.
  if (m == 2) {
    lower("m2_l2_plus_l2n", l[1] + l[2 * n - 1], 0.0);
    double tail = 0.0;
    for (std::size_t i = 2; i < mn; ++i) tail += l[i];
    lower("m2_tail3", tail, -1.0 / (2.0 + 2.0 * std::sqrt(2.0)));
    double worst = 0.0;
    for (std::size_t k = 3; k < mn; ++k) {
      double s = 0.0;
      for (std::size_t i = k; i < mn; ++i) s += l[i];
      worst = std::min(worst, s);
    }
    lower("m2_tail_k", worst, -0.5);
  }
  if (m == n) upper("negativity_cap", r.negativity, (static_cast<double>(m) - 1.0) / 2.0);
  return r;
}

// ---------------------------------------------------------------------------
// Mirror

MirrorResult mirror(const BipartiteOperator &w, const OptOptions &opts) {
  MirrorResult r;
  try {
    r.opt = product_expectation_max(w, opts);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NoConvergedRestart) throw;
    throw Error(ErrorCode::OptFailed, e.what());
  }
  r.mu = r.opt.value;
  r.w_m = BipartiteOperator(w.dim_a(), w.dim_b(),
                            Matrix::identity(w.order()) * cplx(r.mu) - w.matrix());
  const double lmin_m = eigenvalues_hermitian(r.w_m.matrix()).back();
  const double l1 = eigenvalues_hermitian(w.matrix()).front();
  if (lmin_m >= -1e-10) {
    r.verdict = MirrorVerdict::mirror_psd;
  } else if (l1 > r.mu + 1e-9) {
    const auto bp = is_block_positive(r.w_m, opts);
    if (bp.status == BlockPositivity::yes ||
        bp.status == BlockPositivity::yes_heuristic)
      r.verdict = MirrorVerdict::mirror_ew;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Kernel-projector NDEWs

Witness ndew_from_projectors(const BipartiteOperator &sigma, const Matrix &p,
                             const Matrix &q, const NdewParams &params,
                             const OptOptions &opts) {
  const std::size_t m = sigma.dim_a(), n = sigma.dim_b(), mn = m * n;
  if (p.rows() != mn || q.rows() != mn)
    throw Error(ErrorCode::DimensionMismatch, "projector order != m*n");
  if (!(params.z > 0.0) || !(params.delta > 0.0))
    throw Error(ErrorCode::BadParam, "z and delta must be positive");

  const Matrix q_pt = partial_transpose(q, m, n);
  const Matrix base = (p * cplx(params.z) + q_pt).hermitian_part();
  OptResult r;
  try {
    r = product_expectation_min(BipartiteOperator(m, n, base), opts);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NoConvergedRestart) throw;
    throw Error(ErrorCode::EpsilonVanishes, e.what());
  }
  const double eps = r.value;
  // The best value has to be found by several independent restarts before it
  // is trusted as the infimum.
  std::size_t agreeing = 0;
  for (std::size_t i = 0; i < r.restart_values.size(); ++i)
    if (r.restart_converged[i] && r.restart_values[i] - eps <= 1e-6) ++agreeing;
  if (eps <= 1e-7)
    throw Error(ErrorCode::EpsilonVanishes,
                "product-vector infimum estimate " + fmt(eps) + " <= 1e-7");
  if (r.restarts_converged < 64 || agreeing < 4)
    throw Error(ErrorCode::EpsilonVanishes,
                "infimum estimate not reproduced: " +
                    std::to_string(r.restarts_converged) + " converged, " +
                    std::to_string(agreeing) + " agreeing");

  NdewParams used = params;
  used.epsilon_estimate = eps;
  used.delta = std::min(params.delta, eps / 2.0);
  const double denom = params.z * p.trace().real() + q_pt.trace().real() -
                       static_cast<double>(mn) * used.delta;
  Matrix w = base - Matrix::identity(mn) * cplx(used.delta);
  w *= cplx(1.0 / denom);

  Witness out;
  out.op = BipartiteOperator(m, n, w.hermitian_part());
  out.ndew = used;
  out.provenance.push_back("kernel-projector-ndew(z=" + fmt(params.z) +
                           ",delta=" + fmt(used.delta) + ",epsilon=" + fmt(eps) +
                           ",restarts=" + std::to_string(r.restarts_tried) + ")");
  const double value = trace_product(out.op.matrix(), sigma.matrix());
  if (value < -1e-9) {
    out.kind = WitnessClass::ndew_certified;
    out.detected_state = sigma;
    out.provenance.push_back("detects PPT state: tr(W sigma)=" + fmt(value));
  }
  return out;
}

Witness ndew_from_edge(const BipartiteOperator &sigma, const NdewParams &params,
                       const OptOptions &opts) {
  if (!is_ppt(sigma))
    throw Error(ErrorCode::NotPPT, "sigma is not PPT");
  const auto [p, rank_p] = kernel_projector(sigma.matrix());
  const auto [q, rank_q] = kernel_projector(partial_transpose(sigma).matrix());
  if (rank_p == 0 || rank_q == 0)
    throw Error(ErrorCode::FullRank, rank_p == 0 ? "sigma has full rank"
                                                 : "sigma^Gamma has full rank");
  return ndew_from_projectors(sigma, p, q, params, opts);
}

double kernel_pt_min_eigenvalue(const BipartiteOperator &sigma) {
  const auto [q, rank] = kernel_projector(partial_transpose(sigma).matrix());
  if (rank == 0) throw Error(ErrorCode::FullRank, "sigma^Gamma has full rank");
  const Matrix q_pt = partial_transpose(q, sigma.dim_a(), sigma.dim_b());
  return eigenvalues_hermitian(q_pt).back() / q_pt.trace().real();
}

Witness boost_witness(const Witness &w, const PureState &psi, double t) {
  if (!w.detected_state)
    throw Error(ErrorCode::BadParam, "boost needs a witness with a detected state");
  if (!(t >= 0.0)) throw Error(ErrorCode::BadParam, "t must be non-negative");
  if (psi.m != w.op.dim_a() || psi.n != w.op.dim_b())
    throw Error(ErrorCode::DimensionMismatch, "psi dimensions differ from W");
  const Matrix x = partial_transpose(psi.projector()).matrix();
  const double overlap = trace_product(x, w.detected_state->matrix());
  if (overlap > 1e-10)
    throw Error(ErrorCode::OrthogonalityFail,
                "tr(psi^Gamma rho) = " + fmt(overlap) + " > 1e-10");
  Witness out = w;
  Matrix m = x * cplx(t) + w.op.matrix();
  m *= cplx(1.0 / (1.0 + t));
  out.op = BipartiteOperator(w.op.dim_a(), w.op.dim_b(), std::move(m));
  out.provenance.push_back("boost(t=" + fmt(t) + ")");
  if (out.ndew) out.ndew->t = t;
  const double value = trace_product(out.op.matrix(), out.detected_state->matrix());
  out.kind = value < -1e-9 ? WitnessClass::ndew_certified : WitnessClass::unclassified;
  return out;
}

// ---------------------------------------------------------------------------
// Detection pipeline

LocalFilter local_filter_to_max_entangled(const PureState &psi) {
  const std::size_t d = psi.rank();
  const Matrix ua = complete_unitary(psi.basis_a);
  const Matrix ub = complete_unitary(psi.basis_b);
  std::vector<double> scale(psi.m, 1.0);
  for (std::size_t k = 0; k < d; ++k)
    scale[k] = std::sqrt(static_cast<double>(d)) * psi.schmidt[k];
  std::vector<double> inv(scale.size());
  std::transform(scale.begin(), scale.end(), inv.begin(),
                 [](double s) { return 1.0 / s; });
  LocalFilter f;
  f.d = d;
  f.a = ua * Matrix::diagonal(scale);
  f.a_inv = Matrix::diagonal(inv) * ua.adjoint();
  f.b = ub;
  f.b_inv = ub.adjoint();
  f.cond_a = condition_number(f.a);
  f.cond_b = condition_number(f.b);
  return f;
}

namespace {

struct BaseNdew {
  std::string name;
  Witness w;      ///< on its native dimensions
  CVector psi;    ///< Psi_d on native dimensions, the boost direction
};

// Base NDEW for the 2 x n branch: the rho_b-derived state sigma on 2 x 4.
BaseNdew base_for_two(const OptOptions &opts) {
  const BipartiteOperator rb = partial_transpose(rho_b_state(0.9));
  const Matrix s = kron(Matrix::diagonal({-1.0, 1.0}), Matrix::identity(4));
  const BipartiteOperator sigma(2, 4, (s * rb.matrix() * s).hermitian_part());
  return {"sigma_b(0.9)", ndew_from_edge(sigma, {}, opts),
          max_entangled_vector(2, 2, 4)};
}

BaseNdew base_for_three(std::size_t d, const OptOptions &opts) {
  if (d == 2)
    return {"gamma1", ndew_from_edge(gamma1_state(), {}, opts),
            max_entangled_vector(2, 3, 3)};
  return {"gamma2", ndew_from_edge(gamma2_state(), {}, opts),
          max_entangled_vector(3, 3, 3)};
}

} // namespace

DetectionCertificate detect_npt(const BipartiteOperator &rho,
                                const OptOptions &opts) {
  const std::size_t m = rho.dim_a(), n = rho.dim_b();
  if (m > n) throw Error(ErrorCode::BadParam, "detection expects m <= n");
  if (m * n <= 6) throw Error(ErrorCode::BadParam, "detection expects mn > 6");
  if (is_ppt(rho)) throw Error(ErrorCode::IsPPT, "state is PPT");

  DetectionCertificate c;
  const Spectrum pt = eig_hermitian(partial_transpose(rho).matrix());
  c.psi = pt.vectors.column(min_index(pt));
  c.steps.push_back("psi: lambda_min(rho^Gamma)=" + fmt(pt.values.back()));
  const PureState psi = schmidt_decompose(c.psi, m, n, 1e-8);
  c.schmidt_rank = psi.rank();
  c.steps.push_back("schmidt rank d=" + std::to_string(c.schmidt_rank));

  c.filter = local_filter_to_max_entangled(psi);
  // (A (x) B) Psi_d = psi gives (conj(A) (x) B) Psi_d^Gamma (..)^dagger = psi^Gamma.
  const Matrix f = kron(c.filter.a.conj(), c.filter.b);
  const Matrix f_inv = kron(c.filter.a_inv.conj(), c.filter.b_inv);
  c.steps.push_back("filters: cond(A)=" + fmt(c.filter.cond_a) +
                    ", cond(B)=" + fmt(c.filter.cond_b));
  const BipartiteOperator rho_f =
      BipartiteOperator(m, n, (f.adjoint() * rho.matrix() * f).hermitian_part())
          .normalized();

  BaseNdew base = m == 2 ? base_for_two(opts) : base_for_three(c.schmidt_rank, opts);
  if (base.w.kind != WitnessClass::ndew_certified)
    throw Error(ErrorCode::OptFailed, "base witness on " + base.name +
                                          " does not detect its state");
  c.base_state = base.name;
  const std::size_t bm = base.w.op.dim_a(), bn = base.w.op.dim_b();
  const BipartiteOperator w_base = embed(base.w.op, m, n);
  const BipartiteOperator sigma = embed(*base.w.detected_state, m, n);
  const BipartiteOperator psi_pt =
      embed(BipartiteOperator(bm, bn, pt_projector(base.psi, bm, bn)), m, n);
  c.steps.push_back("base NDEW on " + base.name + " embedded in " +
                    std::to_string(m) + "x" + std::to_string(n));

  c.base_expectation = trace_product(w_base.matrix(), rho_f.matrix());
  const double psi_value = trace_product(psi_pt.matrix(), rho_f.matrix());
  if (psi_value >= -1e-10)
    throw Error(ErrorCode::BoostDenominatorZero,
                "tr(Psi^Gamma rho') = " + fmt(psi_value));
  c.boost_t = 2.0 * std::abs(c.base_expectation) / std::abs(psi_value) + 1.0;
  c.steps.push_back("boost t=" + fmt(c.boost_t));

  Matrix boosted = psi_pt.matrix() * cplx(c.boost_t) + w_base.matrix();
  boosted *= cplx(1.0 / (1.0 + c.boost_t));
  Matrix pulled = (f * boosted * f.adjoint()).hermitian_part();
  pulled *= cplx(1.0 / pulled.trace().real());

  // The PPT state detected by the pulled-back witness.
  const BipartiteOperator detected =
      BipartiteOperator(
          m, n, (f_inv.adjoint() * sigma.matrix() * f_inv).hermitian_part())
          .normalized();

  c.witness.op = BipartiteOperator(m, n, std::move(pulled));
  c.witness.provenance = base.w.provenance;
  c.witness.provenance.insert(c.witness.provenance.end(), c.steps.begin(),
                              c.steps.end());
  c.witness.ndew = base.w.ndew;
  if (c.witness.ndew) c.witness.ndew->t = c.boost_t;
  if (trace_product(c.witness.op.matrix(), detected.matrix()) < -1e-9) {
    c.witness.kind = WitnessClass::ndew_certified;
    c.witness.detected_state = detected;
  }
  c.expectation = trace_product(c.witness.op.matrix(), rho.matrix());
  c.steps.push_back("tr(W rho)=" + fmt(c.expectation));
  if (!(c.expectation < -1e-9))
    throw Error(ErrorCode::OptFailed,
                "pipeline witness does not detect rho: " + fmt(c.expectation));
  return c;
}

} // namespace ews
