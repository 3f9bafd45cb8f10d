#pragma once

// Witness constructions (parametric family, pure partial transposes, random
// decomposable samples, kernel-projector NDEWs), spectral bound reports,
// mirrored witnesses and the NPT detection pipeline.

#include "ews/blockpos.hpp"
#include "ews/linalg.hpp"
#include "ews/states.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ews {

enum class WitnessClass {
  dew_by_construction,
  ndew_certified,
  unclassified,
};

std::string_view to_string(WitnessClass c);

struct NdewParams {
  double z = 1.0;
  double delta = 1.0; ///< upper cap; the value used is min(delta, eps / 2)
  double epsilon_estimate = 0.0;
  double t = 1.0;
};

struct Witness {
  BipartiteOperator op;
  WitnessClass kind = WitnessClass::unclassified;
  std::vector<std::string> provenance;
  bool normalized = true;
  /// PPT state with tr(W rho) < 0, present for certified NDEWs.
  std::optional<BipartiteOperator> detected_state;
  std::optional<NdewParams> ndew;
};

struct FamilyParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  std::size_t m = 2;
  std::size_t n = 2;
};

/// a (I - |Omega><Omega|)/(mn-1) + b Psi_2^Gamma + c |11><11| + d Psi_m^Gamma
/// with Omega = (|12> - |21>)/sqrt2. Throws BadParam.
Witness w_family(const FamilyParams &p);

/// (|psi><psi|)^Gamma. Throws ProductState for Schmidt rank 1.
Witness pure_pt_witness(const PureState &psi);

/// x P + (1 - x) Q^Gamma for unit-trace Wishart P (seed index 0) and Q
/// (seed index 1) of the given ranks. Throws BadParam.
Witness sample_dew(std::size_t m, std::size_t n, double x, std::size_t rank_p,
                   std::size_t rank_q, std::uint64_t seed);

struct BoundCheck {
  std::string name;
  bool passed = false;
  bool attained = false; ///< measured equals the bound within tolerance
  double measured = 0.0;
  double bound = 0.0;
};

struct SpectrumReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> lambdas; ///< trace-normalized, non-increasing
  double lambda1 = 0.0;
  double lambda_min = 0.0;
  double negativity = 0.0;
  double fro_sq = 0.0;
  std::size_t neg_count = 0;
  bool is_ew_candidate = false; ///< has a negative eigenvalue
  std::vector<BoundCheck> bounds;

  bool all_passed() const;
  const BoundCheck *find(std::string_view name) const;
};

/// Bounds use tolerance 1e-9. Operators with positive trace are rescaled to
/// unit trace first.
SpectrumReport spectral_report(const BipartiteOperator &w);
inline SpectrumReport spectral_report(const Witness &w) {
  return spectral_report(w.op);
}

enum class MirrorVerdict { mirror_ew, mirror_psd, inconclusive };
std::string_view to_string(MirrorVerdict v);

struct MirrorResult {
  double mu = 0.0;
  BipartiteOperator w_m; ///< mu I - W
  MirrorVerdict verdict = MirrorVerdict::inconclusive;
  OptResult opt;
};

/// Throws OptFailed if no see-saw restart converges.
MirrorResult mirror(const BipartiteOperator &w, const OptOptions &opts = {});

/// Normalized z P + Q^Gamma - delta I for given kernel projectors of sigma.
/// Throws EpsilonVanishes when the product-vector infimum is not certified
/// positive.
Witness ndew_from_projectors(const BipartiteOperator &sigma, const Matrix &p,
                             const Matrix &q, const NdewParams &params,
                             const OptOptions &opts = {});

/// P, Q from the kernels of sigma and sigma^Gamma. Throws NotPPT, FullRank,
/// EpsilonVanishes.
Witness ndew_from_edge(const BipartiteOperator &sigma,
                       const NdewParams &params = {},
                       const OptOptions &opts = {});

/// lambda_min of Q^Gamma / tr(Q^Gamma), Q the kernel projector of sigma^Gamma.
double kernel_pt_min_eigenvalue(const BipartiteOperator &sigma);

/// (t psi^Gamma + W) / (1 + t). Requires a stored detected state orthogonal
/// to psi^Gamma. Throws BadParam, OrthogonalityFail.
Witness boost_witness(const Witness &w, const PureState &psi, double t = 1.0);

struct LocalFilter {
  Matrix a;     ///< m x m
  Matrix b;     ///< n x n, unitary
  Matrix a_inv;
  Matrix b_inv;
  std::size_t d = 0;
  double cond_a = 0.0;
  double cond_b = 0.0;
};

/// (A (x) B) Psi_d = psi with A = [basis_a | completion] diag(sqrt(d) a_j, 1..)
/// and B = [basis_b | completion].
LocalFilter local_filter_to_max_entangled(const PureState &psi);

struct DetectionCertificate {
  Witness witness;
  double expectation = 0.0; ///< tr(W rho)
  CVector psi;              ///< lambda_min eigenvector of rho^Gamma
  std::size_t schmidt_rank = 0;
  LocalFilter filter;
  std::string base_state;
  double base_expectation = 0.0; ///< tr(W_base rho')
  double boost_t = 0.0;
  std::vector<std::string> steps;
};

/// Requires m <= n and mn > 6. Throws BadParam, IsPPT, BoostDenominatorZero,
/// OptFailed and errors from the base NDEW construction.
DetectionCertificate detect_npt(const BipartiteOperator &rho,
                                const OptOptions &opts = {});

} // namespace ews
