#include "oracle.hpp"

#include "ews/error.hpp"
#include "ews/linalg.hpp"
#include "ews/matrix_io.hpp"
#include "ews/parallel.hpp"
#include "ews/random.hpp"
#include "ews/states.hpp"

#include <doctest.h>

#include <atomic>
#include <numbers>

using namespace ews;

namespace {

double reconstruction_error(const Matrix &h, const Spectrum &s) {
  Matrix d(h.rows(), h.cols());
  for (std::size_t k = 0; k < s.values.size(); ++k) d(k, k) = s.values[k];
  return (s.vectors * d * s.vectors.adjoint() - h).frobenius_norm();
}

} // namespace

TEST_CASE("eig_hermitian on small closed forms") {
  const Spectrum d = eig_hermitian(Matrix::diagonal({3.0, 1.0, -2.0}));
  CHECK(d.values == std::vector<double>{3.0, 1.0, -2.0});
  CHECK(oracle::max_abs_diff(d.vectors, Matrix::identity(3)) < 1e-15);

  // diag(1, 3) is reordered, so the vectors are the swapped basis.
  const Spectrum p = eig_hermitian(Matrix::diagonal({1.0, 3.0}));
  CHECK(std::abs(p.vectors(1, 0)) == doctest::Approx(1.0));

  const auto x = eigenvalues_hermitian(Matrix{{0, 1}, {1, 0}});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(-1.0).epsilon(1e-15));

  const auto y = eigenvalues_hermitian(Matrix{{0, cplx(0, -1)}, {cplx(0, 1), 0}});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(-1.0));

  CHECK(eigenvalues_hermitian(Matrix(1, 1, {cplx(4.5)})) == std::vector<double>{4.5});
}

TEST_CASE("eig_hermitian matches characteristic polynomial roots") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix h = oracle::random_hermitian(4, seed);
    const auto roots = oracle::poly_real_roots(oracle::char_poly(h));
    const auto vals = eigenvalues_hermitian(h);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(vals[k] - roots[k]) < 1e-8);
  }
}

TEST_CASE("eig_hermitian properties on random Hermitian matrices") {
  for (std::size_t n : {2, 3, 5, 8, 9, 12, 16}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Matrix h = oracle::random_hermitian(n, 100 * n + seed);
      const Spectrum s = eig_hermitian(h);
      const double scale = std::max(1.0, h.frobenius_norm());
      CHECK(std::is_sorted(s.values.rbegin(), s.values.rend()));
      CHECK(reconstruction_error(h, s) <= 1e-9 * scale);
      CHECK(oracle::max_abs_diff(s.vectors.adjoint() * s.vectors, Matrix::identity(n)) < 1e-10);
      double tr = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const CVector v = s.vectors.column(k);
        CVector r = h * v;
        for (std::size_t i = 0; i < n; ++i) r[i] -= s.values[k] * v[i];
        CHECK(norm(r) <= 1e-9 * scale);
        tr += s.values[k];
      }
      CHECK(std::abs(tr - h.trace().real()) <= 1e-10 * scale);
      const auto ref = oracle::eigenvalues(h);
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ref[k] - s.values[k]) < 1e-9 * scale);
    }
  }
}

TEST_CASE("eig_hermitian is deterministic and handles degeneracy") {
  const Matrix h = oracle::random_hermitian(6, 77);
  CHECK(eig_hermitian(h).vectors == eig_hermitian(h).vectors);
  const Spectrum s = eig_hermitian(Matrix::identity(5) * cplx(2.0));
  for (double v : s.values) CHECK(v == 2.0);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  Matrix a{{1, 2}, {0, 1}};
  CHECK_THROWS_AS(eig_hermitian(a), Error);
  try {
    eig_hermitian(a);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("eigenvalue inequalities for Hermitian matrices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix a = oracle::random_hermitian(5, 2 * seed + 1);
    const Matrix b = oracle::random_hermitian(5, 2 * seed + 2);
    const auto la = eigenvalues_hermitian(a), lb = eigenvalues_hermitian(b);
    const auto lab = eigenvalues_hermitian(a + b);
    std::vector<double> sum(5);
    for (std::size_t i = 0; i < 5; ++i) sum[i] = la[i] + lb[i];
    CHECK(majorizes(sum, lab));

    double lhs = 0.0;
    for (std::size_t i = 0; i < 5; ++i) lhs += (la[i] - lb[i]) * (la[i] - lb[i]);
    const double fro = (b - a).frobenius_norm();
    CHECK(lhs <= fro * fro + 1e-9);

    CHECK(trace_product(a, b) >= inner_product_lower_bound(la, lb) - 1e-9);
  }
}

TEST_CASE("interlacing for principal submatrices") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 6, m = 4;
    const Matrix h = oracle::random_hermitian(n, 900 + seed);
    Matrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = h(i, j);
    const auto lh = eigenvalues_hermitian(h), la = eigenvalues_hermitian(a);
    for (std::size_t k = 0; k < m; ++k) {
      CHECK(lh[k + n - m] <= la[k] + 1e-9);
      CHECK(la[k] <= lh[k] + 1e-9);
    }
  }
}

TEST_CASE("svd") {
  Svd s = svd(Matrix::identity(2));
  CHECK(s.sigma == std::vector<double>{1.0, 1.0});
  s = svd(Matrix::diagonal({0.8, 0.6}));
  CHECK(s.sigma[0] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(s.sigma[1] == doctest::Approx(0.6).epsilon(1e-14));

  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{3, 3}, {2, 5}, {5, 2}, {4, 4}}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Matrix m = oracle::random_matrix(r, c, 31 * seed + r + 7 * c);
      const Svd d = svd(m);
      CHECK(std::is_sorted(d.sigma.rbegin(), d.sigma.rend()));
      Matrix sig(d.sigma.size(), d.sigma.size());
      for (std::size_t k = 0; k < d.sigma.size(); ++k) sig(k, k) = d.sigma[k];
      CHECK((d.u * sig * d.v.adjoint() - m).frobenius_norm() < 1e-9 * m.frobenius_norm());
      const auto ev = eigenvalues_hermitian((m.adjoint() * m).hermitian_part());
      for (std::size_t k = 0; k < d.sigma.size(); ++k)
        CHECK(std::abs(d.sigma[k] * d.sigma[k] - ev[k]) < 1e-9 * std::max(1.0, ev[0]));
    }
  }
}

TEST_CASE("svd of a rank-deficient matrix") {
  const CVector u{1.0, cplx(0, 1), 2.0};
  const CVector v{0.5, -1.0};
  Matrix m(3, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = u[i] * std::conj(v[j]);
  const Svd d = svd(m);
  CHECK(d.sigma[0] == doctest::Approx(norm(u) * norm(v)));
  CHECK(d.sigma[1] == 0.0);
  CHECK(oracle::max_abs_diff(d.u.adjoint() * d.u, Matrix::identity(2)) < 1e-12);
}

TEST_CASE("complete_unitary") {
  Matrix cols(3, 1);
  cols(0, 0) = 1.0 / std::sqrt(2.0);
  cols(2, 0) = cplx(0, 1.0 / std::sqrt(2.0));
  const Matrix u = complete_unitary(cols);
  CHECK(u.rows() == 3);
  CHECK(u.cols() == 3);
  CHECK(oracle::max_abs_diff(u.adjoint() * u, Matrix::identity(3)) < 1e-12);
  CHECK(std::abs(u(2, 0) - cols(2, 0)) < 1e-15);
}

TEST_CASE("kron") {
  CHECK(kron(Matrix::identity(2), Matrix::identity(2)) == Matrix::identity(4));
  CHECK(kron(Matrix::diagonal({1.0, 2.0}), Matrix::diagonal({3.0, 4.0})) ==
        Matrix::diagonal({3.0, 4.0, 6.0, 8.0}));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix a = oracle::random_matrix(2, 2, seed), b = oracle::random_matrix(2, 2, seed + 50),
                 c = oracle::random_matrix(2, 2, seed + 100), d = oracle::random_matrix(2, 2, seed + 150);
    CHECK(oracle::max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
    CHECK(oracle::max_abs_diff(kron(a, b), oracle::kron(a, b)) == 0.0);
  }
  const CVector x{1.0, 2.0}, y{cplx(0, 1), 3.0, 4.0};
  const CVector k = kron(x, y);
  CHECK(k.size() == 6);
  CHECK(k[4] == cplx(6.0));
}

TEST_CASE("partial transpose") {
  const Matrix a = oracle::random_matrix(2, 2, 1), b = oracle::random_matrix(3, 3, 2);
  CHECK(oracle::max_abs_diff(partial_transpose(kron(a, b), 2, 3), kron(a.transpose(), b)) < 1e-15);

  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}, {3, 4}}) {
    const Matrix h = oracle::random_hermitian(m * n, 10 * m + n);
    const Matrix g = partial_transpose(h, m, n);
    CHECK(oracle::max_abs_diff(g, oracle::partial_transpose(h, m, n)) == 0.0);
    CHECK(partial_transpose(g, m, n) == h);
    CHECK(g.trace() == h.trace());
  }

  const CVector psi2 = max_entangled_vector(2, 2, 2);
  const BipartiteOperator x = partial_transpose(BipartiteOperator(2, 2, Matrix::outer(psi2)));
  const auto ev = eigenvalues_hermitian(x.matrix());
  const std::vector<double> want{0.5, 0.5, 0.5, -0.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("negativity and trace norm") {
  CHECK(negativity(Matrix::diagonal({1.0, -0.3, -0.2})) == doctest::Approx(0.5));
  for (std::size_t m : {2, 3, 4}) {
    const Matrix x = partial_transpose(Matrix::outer(max_entangled_vector(m, m, m)), m, m);
    CHECK(negativity(x) == doctest::Approx((m - 1.0) / 2.0).epsilon(1e-12));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix h = oracle::random_hermitian(6, 400 + seed);
    CHECK(std::abs(negativity(h) - (trace_norm(h) - h.trace().real()) / 2.0) < 1e-10);
  }
  CHECK_THROWS_AS(negativity(Matrix{{1, 2}, {0, 1}}), Error);
}

TEST_CASE("majorization and pairing bound") {
  CHECK(majorizes(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}));
  CHECK_FALSE(majorizes(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}));
  CHECK_THROWS_AS(majorizes(std::vector<double>{1}, std::vector<double>{1, 0}), Error);

  CHECK(inner_product_lower_bound(std::vector<double>{1, 0}, std::vector<double>{1, 0}) == 0.0);
  CHECK_THROWS_AS(inner_product_lower_bound(std::vector<double>{1}, std::vector<double>{1, 0}), Error);
  const auto rho1 = eigenvalues_hermitian(
      canonical_state({CanonicalState::rho1, {{"normalized", 0.0}}}).matrix());
  const auto psi3 = pt_spectrum_pure(max_entangled(3, 3, 1));
  CHECK(inner_product_lower_bound(rho1, psi3) ==
        doctest::Approx((3.0 - 2.0 * std::numbers::sqrt2) / 3.0).epsilon(1e-12));
}

TEST_CASE("bipartite operator basics") {
  CHECK_THROWS_AS(BipartiteOperator(2, 2, Matrix::identity(3)), Error);
  CHECK_THROWS_AS(BipartiteOperator(2, 2, Matrix{{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                  Error);
  const BipartiteOperator x(2, 3, Matrix::identity(6) * cplx(2.0));
  CHECK(x.order() == 6);
  CHECK(x.block(1, 1) == Matrix::identity(3) * cplx(2.0));
  CHECK(x.normalized().trace() == doctest::Approx(1.0));

  const BipartiteOperator e = embed(BipartiteOperator(2, 2, Matrix::identity(4)), 3, 3);
  CHECK(e.order() == 9);
  CHECK(e.trace() == doctest::Approx(4.0));
  CHECK(e.matrix()(4, 4) == cplx(1.0));
  CHECK(e.matrix()(2, 2) == cplx(0.0));
}

TEST_CASE("operator JSON") {
  const BipartiteOperator x(2, 2, oracle::random_hermitian(4, 5));
  CHECK(operator_from_json(operator_to_json(x)) == x);
  CHECK(operator_to_json(x) == operator_to_json(operator_from_json(operator_to_json(x))));

  const auto code = [](std::string_view text) {
    try {
      operator_from_json(text);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::BadParam;
  };
  CHECK(code("{") == ErrorCode::ParseError);
  CHECK(code(R"({"m":1,"n":1})") == ErrorCode::ParseError);
  CHECK(code(R"({"m":1,"n":2,"entries":[[1,0]]})") == ErrorCode::ParseError);
  CHECK(code(R"({"m":1,"n":2,"entries":[[1,0],[1,0],[0,0],[1,0]]})") == ErrorCode::NotHermitian);
}

TEST_CASE("random sampling") {
  Rng r1 = make_rng(9), r2 = make_rng(9);
  CHECK(haar_vector(r1, 5) == haar_vector(r2, 5));
  CHECK(norm(haar_vector(r1, 7)) == doctest::Approx(1.0));
  const Matrix u = haar_unitary(r1, 6);
  CHECK(oracle::max_abs_diff(u.adjoint() * u, Matrix::identity(6)) < 1e-12);
  CHECK(derive_seed(42, 3) == (42u ^ 3u));
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_for(50, [](std::size_t i) {
      if (i % 7 == 3) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error &e) {
    CHECK(std::string(e.what()) == "3");
  }
}
