#pragma once

// Concrete bipartite states: pure states in Schmidt form, maximally entangled
// families, absolutely separable / absolutely PPT reference states, PPT edge
// states, and random sampling.

#include "ews/linalg.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace ews {

/// psi = sum_j schmidt[j] * basis_a[:, j] (x) basis_b[:, j].
struct PureState {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> schmidt; ///< non-increasing, positive, unit 2-norm
  Matrix basis_a;              ///< m x d, orthonormal columns
  Matrix basis_b;              ///< n x d, orthonormal columns

  std::size_t rank() const { return schmidt.size(); }
  CVector vector() const;
  /// |psi><psi| as an operator on C^m (x) C^n.
  BipartiteOperator projector() const;
};

/// Canonical local bases |1>..|d>. Throws NormViolation / RankTooLarge.
PureState pure_from_schmidt(std::span<const double> coeffs, std::size_t m,
                            std::size_t n);
PureState pure_from_schmidt(std::initializer_list<double> coeffs,
                            std::size_t m, std::size_t n);

/// Schmidt decomposition of a unit vector; coefficients <= `cutoff` are
/// dropped and the remainder renormalized.
PureState schmidt_decompose(std::span<const cplx> psi, std::size_t m,
                            std::size_t n, double cutoff = 1e-12);

/// Phi_j = m^{-1/2} sum_i |i, i + (j-1) m>, j is 1-based. Requires m <= n.
PureState max_entangled(std::size_t m, std::size_t n, std::size_t j);
/// Psi_d = d^{-1/2} sum_{i<d} |ii> in C^m (x) C^n.
CVector max_entangled_vector(std::size_t d, std::size_t m, std::size_t n);

/// Analytic spectrum of |psi><psi|^Gamma (length m*n, non-increasing):
/// a_j^2, +-a_i a_j for i<j, and m*n - d^2 zeros.
std::vector<double> pt_spectrum_pure(const PureState &psi);

enum class CanonicalState {
  zeta1,
  zeta2,
  rho1,
  rho2,
  rho_b,
  rho_a,
  gamma,
  gamma_prime,
  gamma1,
  gamma2,
  tiles_upb,
  max_ball_center,
};

std::string_view to_string(CanonicalState s);
/// Throws BadParam for unknown names.
CanonicalState parse_canonical_state(std::string_view name);

struct CanonicalStateId {
  CanonicalState name;
  std::map<std::string, double> params;
};

/// Parameters (defaults in brackets):
///   zeta1: m [3], l [1]            zeta2, max_ball_center: m [3], n [3]
///   rho1, rho2: m [3], n [3], normalized [1]
///   rho_b: b [0.9]   rho_a: a [0.9]   others: none
/// Output has unit trace except rho1/rho2 with normalized = 0, which keep the
/// integer-style diagonal. Throws BadParam.
BipartiteOperator canonical_state(const CanonicalStateId &id);

BipartiteOperator rho_b_state(double b);
BipartiteOperator rho_a_state(double a);
BipartiteOperator gamma_state();
BipartiteOperator gamma_prime_state();
BipartiteOperator gamma1_state();
BipartiteOperator gamma2_state();

using ProductVector = std::pair<CVector, CVector>;
/// The five real Tiles UPB product vectors in C^3 (x) C^3.
std::array<ProductVector, 5> tiles_upb_vectors();
/// (I - sum_j |a_j b_j><a_j b_j|) / 4.
BipartiteOperator tiles_upb_state();

/// tr(rho^2) <= 1/(mn - 1). Throws TraceViolation if tr(rho) != 1.
bool is_in_maximal_ball(const BipartiteOperator &rho);

/// Absolute separability test for 2 x n spectra. `spectrum` must have length
/// 2n, be non-negative and sum to 1. Throws BadSpectrum.
bool as_2xn_test(std::span<const double> spectrum, std::size_t n);

/// lambda_min(rho^Gamma) >= -tol * max(1, ||rho||_F).
bool is_ppt(const BipartiteOperator &rho, double tol = 1e-10);
double min_pt_eigenvalue(const BipartiteOperator &rho);

/// Haar-random pure state (deterministic in `seed`).
PureState random_pure_state(std::size_t m, std::size_t n, std::uint64_t seed);
/// Unit-trace Wishart density G G^dagger / tr, G of shape mn x rank.
/// Throws BadRank.
BipartiteOperator random_density(std::size_t m, std::size_t n,
                                 std::size_t rank, std::uint64_t seed);

/// Orthogonal projector onto span{eigvecs with |lambda| < tol*||op||_F}.
/// Returns the projector and its rank.
std::pair<Matrix, std::size_t> kernel_projector(const Matrix &op,
                                                double rel_tol = 1e-9);

} // namespace ews
