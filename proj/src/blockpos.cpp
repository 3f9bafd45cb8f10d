#include "ews/blockpos.hpp"

#include "ews/error.hpp"
#include "ews/parallel.hpp"
#include "ews/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ews {

namespace {

enum class Mode { min, max };

// (<a| (x) I) W (|a> (x) I)
Matrix reduce_first(const Matrix &w, std::size_t m, std::size_t n,
                    std::span<const cplx> a) {
  Matrix r(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] == cplx(0.0)) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const cplx c = std::conj(a[i]) * a[j];
      if (c == cplx(0.0)) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) r(k, l) += c * w(i * n + k, j * n + l);
    }
  }
  return r.hermitian_part();
}

// (I (x) <b|) W (I (x) |b>)
Matrix reduce_second(const Matrix &w, std::size_t m, std::size_t n,
                     std::span<const cplx> b) {
  Matrix r(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cplx bk = std::conj(b[k]);
        if (bk == cplx(0.0)) continue;
        for (std::size_t l = 0; l < n; ++l) s += bk * w(i * n + k, j * n + l) * b[l];
      }
      r(i, j) = s;
    }
  return r.hermitian_part();
}

// Extreme eigenpair; among exact ties the lowest index in solver order wins.
std::pair<double, CVector> extreme_pair(const Matrix &h, Mode mode) {
  const Spectrum s = eig_hermitian(h);
  if (mode == Mode::max) return {s.values.front(), s.vectors.column(0)};
  const double target = s.values.back();
  std::size_t k = 0;
  while (s.values[k] > target) ++k;
  return {target, s.vectors.column(k)};
}

struct RestartOutcome {
  double value = 0.0;
  CVector a, b;
  bool converged = false;
  std::vector<double> trajectory;
};

RestartOutcome run_restart(const Matrix &w, std::size_t m, std::size_t n,
                           Mode mode, const OptOptions &opts,
                           std::size_t index) {
  Rng rng = make_rng(derive_seed(opts.seed, index));
  RestartOutcome out;
  out.a = haar_vector(rng, m);
  double previous = mode == Mode::min ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    out.b = extreme_pair(reduce_first(w, m, n, out.a), mode).second;
    auto [value, a] = extreme_pair(reduce_second(w, m, n, out.b), mode);
    out.a = std::move(a);
    out.value = value;
    if (opts.record_trajectories) out.trajectory.push_back(value);
    if (std::abs(value - previous) < opts.tolerance) {
      out.converged = true;
      break;
    }
    previous = value;
  }
  // Report the objective at the returned pair itself.
  out.value = expectation(w, kron(out.a, out.b));
  return out;
}

OptResult optimize(const BipartiteOperator &w, Mode mode, const OptOptions &opts) {
  if (opts.restarts == 0)
    throw Error(ErrorCode::BadParam, "at least one restart required");
  const Matrix &mat = w.matrix();
  const std::size_t m = w.dim_a(), n = w.dim_b();
  std::vector<RestartOutcome> outcomes(opts.restarts);
  parallel_for(opts.restarts, [&](std::size_t r) {
    outcomes[r] = run_restart(mat, m, n, mode, opts, r);
  });

  OptResult res;
  res.restarts_tried = opts.restarts;
  std::size_t best = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto &o = outcomes[r];
    res.restart_values.push_back(o.value);
    res.restart_converged.push_back(o.converged);
    if (opts.record_trajectories) res.trajectories.push_back(o.trajectory);
    if (o.converged) {
      ++res.restarts_converged;
      lo = std::min(lo, o.value);
      hi = std::max(hi, o.value);
    }
    const bool better = mode == Mode::min ? o.value < outcomes[best].value
                                          : o.value > outcomes[best].value;
    if (better) best = r;
  }
  if (res.restarts_converged == 0)
    throw Error(ErrorCode::NoConvergedRestart,
                std::to_string(opts.restarts) + " restarts, none converged");
  res.value = outcomes[best].value;
  res.vec_a = outcomes[best].a;
  res.vec_b = outcomes[best].b;
  res.best_restart = best;
  res.spread = hi - lo;
  return res;
}

} // namespace

double product_expectation(const BipartiteOperator &w, std::span<const cplx> a,
                           std::span<const cplx> b) {
  if (a.size() != w.dim_a() || b.size() != w.dim_b())
    throw Error(ErrorCode::DimensionMismatch, "product vector dimensions");
  return expectation(w.matrix(), kron(a, b));
}

OptResult product_expectation_min(const BipartiteOperator &w,
                                  const OptOptions &opts) {
  return optimize(w, Mode::min, opts);
}

OptResult product_expectation_max(const BipartiteOperator &w,
                                  const OptOptions &opts) {
  return optimize(w, Mode::max, opts);
}

std::string_view to_string(BlockPositivity s) {
  switch (s) {
  case BlockPositivity::yes: return "yes";
  case BlockPositivity::yes_heuristic: return "yes-heuristic";
  case BlockPositivity::no: return "no";
  case BlockPositivity::inconclusive: return "inconclusive";
  }
  return "?";
}

BlockPositivityVerdict is_block_positive(const BipartiteOperator &w,
                                         const OptOptions &opts,
                                         bool fast_paths) {
  BlockPositivityVerdict v;
  const double scale = spectral_scale(w.matrix());
  if (fast_paths) {
    if (eigenvalues_hermitian(w.matrix()).back() >= -1e-12 * scale) {
      v.status = BlockPositivity::yes;
      v.note = "operator is positive semidefinite";
      return v;
    }
    if (eigenvalues_hermitian(partial_transpose(w).matrix()).back() >=
        -1e-12 * scale) {
      v.status = BlockPositivity::yes;
      v.note = "partial transpose is positive semidefinite";
      return v;
    }
  }
  OptResult r;
  try {
    r = product_expectation_min(w, opts);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NoConvergedRestart) throw;
    v.restarts_tried = opts.restarts;
    v.note = "no converged restart";
    return v;
  }
  v.restarts_tried = r.restarts_tried;
  v.restarts_converged = r.restarts_converged;
  v.min_value = r.value;
  v.spread = r.spread;
  if (r.value < -1e-9 * scale) {
    v.status = BlockPositivity::no;
    v.counterexample = Counterexample{r.vec_a, r.vec_b, r.value};
    v.note = "negative product-vector expectation";
  } else if (r.value >= -1e-12 * scale && r.restarts_converged >= 32 &&
             r.spread < 1e-8) {
    v.status = BlockPositivity::yes_heuristic;
    v.note = "heuristic: see-saw minimum non-negative; not a proof";
  } else {
    v.status = BlockPositivity::inconclusive;
    v.note = "restart values disagree or minimum is marginal";
  }
  return v;
}

std::optional<std::pair<CVector, CVector>>
product_vector_in_subspace(const Matrix &basis, std::size_t m, std::size_t n,
                           const OptOptions &opts) {
  if (basis.rows() != m * n)
    throw Error(ErrorCode::DimensionMismatch, "basis rows != m*n");
  Matrix h = Matrix::identity(m * n);
  for (std::size_t j = 0; j < basis.cols(); ++j)
    h -= Matrix::outer(basis.column(j));
  const OptResult r =
      product_expectation_min(BipartiteOperator(m, n, h.hermitian_part()), opts);
  if (r.value < 1e-10) return std::make_pair(r.vec_a, r.vec_b);
  return std::nullopt;
}

std::vector<PatternViolation> zero_pattern_check(const BipartiteOperator &w) {
  constexpr double zero_tol = 1e-10, violation_tol = 1e-9;
  const std::size_t m = w.dim_a(), n = w.dim_b();
  const Matrix &mat = w.matrix();
  std::vector<PatternViolation> out;

  std::set<std::pair<std::size_t, std::size_t>> reported;
  for (std::size_t k = 0; k < m; ++k) {
    if (w.block(k, k).frobenius_norm() >= zero_tol) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      const auto key = std::minmax(k, j);
      if (reported.count(key)) continue;
      const double nb = w.block(k, j).frobenius_norm();
      if (nb > violation_tol) {
        reported.insert(key);
        out.push_back({PatternViolation::Kind::zero_diagonal_block, k, j, k, nb});
      }
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    bool all_zero = true;
    for (std::size_t i = 0; i < m && all_zero; ++i)
      all_zero = std::abs(mat(i * n + k, i * n + k)) < zero_tol;
    if (!all_zero) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          s += std::norm(mat(i * n + k, j * n + l));
          if (l != k) s += std::norm(mat(i * n + l, j * n + k));
        }
        if (std::sqrt(s) > violation_tol)
          out.push_back({PatternViolation::Kind::zero_diagonal_index, i, j, k,
                         std::sqrt(s)});
      }
  }
  return out;
}

} // namespace ews
