#include "oracle.hpp"

#include "ews/blockpos.hpp"
#include "ews/error.hpp"
#include "ews/states.hpp"
#include "ews/witness.hpp"

#include <doctest.h>

using namespace ews;

namespace {

BipartiteOperator pt_projector(const CVector &v, std::size_t m, std::size_t n) {
  return BipartiteOperator(m, n, oracle::partial_transpose(Matrix::outer(v), m, n));
}

OptOptions quick(std::size_t restarts = 16, std::uint64_t seed = 3) {
  OptOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

} // namespace

TEST_CASE("product expectation extremes on closed forms") {
  const BipartiteOperator id(2, 3, Matrix::identity(6));
  CHECK(product_expectation_min(id, quick()).value == doctest::Approx(1.0));
  CHECK(product_expectation_max(id, quick()).value == doctest::Approx(1.0));

  const BipartiteOperator psi2 = pt_projector(max_entangled_vector(2, 2, 2), 2, 2);
  CHECK(std::abs(product_expectation_min(psi2, quick()).value) < 1e-10);

  for (std::size_t m : {2, 3}) {
    const BipartiteOperator w = pt_projector(max_entangled_vector(m, m, m), m, m);
    CHECK(product_expectation_max(w).value == doctest::Approx(1.0 / m).epsilon(1e-8));
  }

  const std::vector<double> d{0.3, -0.7, 1.2, 0.1, 0.0, -0.2, 0.5, 0.9, -0.4};
  const BipartiteOperator diag(3, 3, Matrix::diagonal(d));
  CHECK(product_expectation_min(diag, quick()).value == doctest::Approx(-0.7));
  CHECK(product_expectation_max(diag, quick()).value == doctest::Approx(1.2));
}

TEST_CASE("optimizer result invariants") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t m = 2 + seed % 2, n = 2 + seed % 3;
    const BipartiteOperator w(m, n, oracle::random_hermitian(m * n, 70 + seed));
    OptOptions o = quick(24, seed);
    o.record_trajectories = true;
    const OptResult r = product_expectation_min(w, o);
    const double scale = std::max(1.0, w.matrix().frobenius_norm());

    CHECK(norm(r.vec_a) == doctest::Approx(1.0));
    CHECK(norm(r.vec_b) == doctest::Approx(1.0));
    CHECK(std::abs(product_expectation(w, r.vec_a, r.vec_b) - r.value) <= 1e-10 * scale);
    for (std::size_t i = 0; i < r.restart_values.size(); ++i)
      if (r.restart_converged[i]) CHECK(r.value <= r.restart_values[i]);
    for (const auto &t : r.trajectories)
      for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k] <= t[k - 1] + 1e-12 * scale);

    const auto ev = eigenvalues_hermitian(w.matrix());
    CHECK(ev.back() <= r.value + 1e-12);
    CHECK(r.value <= ev.front() + 1e-12);

    const OptResult mx = product_expectation_max(w, o);
    for (const auto &t : mx.trajectories)
      for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k] >= t[k - 1] - 1e-12 * scale);

    // Gamma symmetry: a <-> conj(a) maps one problem onto the other.
    CHECK(std::abs(product_expectation_min(partial_transpose(w), o).value - r.value) < 1e-8);
  }
}

TEST_CASE("see-saw beats a brute-force product grid") {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 3}, {2, 4}}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const BipartiteOperator w(m, n, oracle::random_hermitian(m * n, 300 + 10 * m + n + seed));
      const double grid = oracle::grid_product_min(w.matrix(), m, n);
      CHECK(product_expectation_min(w).value <= grid + 1e-6);
    }
  }
}

TEST_CASE("PSD operators have non-negative product expectation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BipartiteOperator rho = random_density(3, 3, 2, seed);
    CHECK(product_expectation_min(rho, quick()).value >= -1e-12);
  }
}

TEST_CASE("results are independent of the worker count") {
  const BipartiteOperator w(3, 3, oracle::random_hermitian(9, 5));
  setenv("EWS_THREADS", "1", 1);
  const OptResult a = product_expectation_min(w, quick(20));
  setenv("EWS_THREADS", "4", 1);
  const OptResult b = product_expectation_min(w, quick(20));
  unsetenv("EWS_THREADS");
  CHECK(a.value == b.value);
  CHECK(a.vec_a == b.vec_a);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.restart_values == b.restart_values);
}

TEST_CASE("no converged restart is an error") {
  const BipartiteOperator w(3, 3, oracle::random_hermitian(9, 8));
  OptOptions o = quick(4);
  o.max_iterations = 1;
  CHECK_THROWS_AS(product_expectation_min(w, o), Error);
}

TEST_CASE("block positivity verdicts") {
  const auto v1 = is_block_positive(BipartiteOperator(2, 2, Matrix::identity(4) * cplx(-1.0)));
  CHECK(v1.status == BlockPositivity::no);
  REQUIRE(v1.counterexample);
  CHECK(v1.counterexample->value == doctest::Approx(-1.0));

  CHECK(is_block_positive(max_entangled(2, 2, 1).projector()).status == BlockPositivity::yes);

  const BipartiteOperator psi2_pt = pt_projector(max_entangled_vector(2, 2, 2), 2, 2);
  CHECK(is_block_positive(psi2_pt).status == BlockPositivity::yes);
  const auto heuristic = is_block_positive(psi2_pt, {}, false);
  CHECK(heuristic.status == BlockPositivity::yes_heuristic);
  CHECK(heuristic.restarts_converged >= 32);

  // Negative on |00> but positive elsewhere: found by the optimizer.
  const BipartiteOperator w(2, 2, Matrix::diagonal({-0.1, 1.0, 1.0, 1.0}));
  const auto v2 = is_block_positive(w);
  CHECK(v2.status == BlockPositivity::no);
  CHECK(v2.counterexample->value < -1e-9);
}

TEST_CASE("product vectors in subspaces") {
  Matrix span(4, 2);
  span(0, 0) = 1.0;
  span(1, 1) = 1.0;
  const auto found = product_vector_in_subspace(span, 2, 2, quick());
  REQUIRE(found);
  const CVector v = kron(found->first, found->second);
  CHECK(std::abs(v[2]) < 1e-5);
  CHECK(std::abs(v[3]) < 1e-5);

  Matrix line(4, 1);
  const CVector psi2 = max_entangled_vector(2, 2, 2);
  line.set_column(0, psi2);
  CHECK_FALSE(product_vector_in_subspace(line, 2, 2, quick()));

  // The range of the Tiles UPB state is a completely entangled subspace.
  const Spectrum s = eig_hermitian(tiles_upb_state().matrix());
  Matrix range(9, 4);
  for (std::size_t k = 0; k < 4; ++k) range.set_column(k, s.vectors.column(k));
  CHECK_FALSE(product_vector_in_subspace(range, 3, 3));
}

TEST_CASE("zero-pattern conditions") {
  CHECK(zero_pattern_check(BipartiteOperator(2, 2, Matrix(4, 4))).empty());

  for (std::uint64_t seed = 0; seed < 20; ++seed)
    CHECK(zero_pattern_check(sample_dew(3, 3, 0.3, 4, 2, seed).op).empty());

  // W_11 = 0 with W_12 = I.
  Matrix w(4, 4);
  w(0, 2) = w(1, 3) = w(2, 0) = w(3, 1) = 1.0;
  w(2, 2) = w(3, 3) = 2.0;
  const auto v = zero_pattern_check(BipartiteOperator(2, 2, w));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == PatternViolation::Kind::zero_diagonal_block);
  CHECK(v[0].block_row == 0);
  CHECK(v[0].block_col == 1);

  // Index 0 vanishes on every diagonal block but row 0 of W_12 does not.
  Matrix x = Matrix::identity(4);
  x(0, 0) = x(2, 2) = 0.0;
  x(0, 3) = x(3, 0) = 0.5;
  const auto u = zero_pattern_check(BipartiteOperator(2, 2, x));
  REQUIRE(u.size() == 1);
  CHECK(u[0].kind == PatternViolation::Kind::zero_diagonal_index);
  CHECK(u[0].index == 0);
}
