#pragma once

// Optimization of <a,b|W|a,b> over unit product vectors by alternating
// minimal/maximal eigenvector updates (see-saw) with Haar-random restarts.
// Every result here is heuristic: a converged see-saw value is an upper bound
// on the true infimum (lower bound on the supremum), never a certificate.

#include "ews/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ews {

struct OptOptions {
  std::size_t restarts = 64;
  std::uint64_t seed = 42;
  std::size_t max_iterations = 500;
  double tolerance = 1e-12; ///< absolute change of the objective
  bool record_trajectories = false;
};

struct OptResult {
  double value = 0.0;
  CVector vec_a;
  CVector vec_b;
  std::size_t best_restart = 0;
  std::size_t restarts_tried = 0;
  std::size_t restarts_converged = 0;
  double spread = 0.0; ///< max - min over converged restart values
  std::vector<double> restart_values;
  std::vector<bool> restart_converged;
  std::vector<std::vector<double>> trajectories; ///< when recorded
};

/// Throws NoConvergedRestart if no restart meets the tolerance.
OptResult product_expectation_min(const BipartiteOperator &w,
                                  const OptOptions &opts = {});
OptResult product_expectation_max(const BipartiteOperator &w,
                                  const OptOptions &opts = {});

/// <a (x) b | W | a (x) b>
double product_expectation(const BipartiteOperator &w, std::span<const cplx> a,
                           std::span<const cplx> b);

enum class BlockPositivity {
  yes,           ///< W or W^Gamma is positive semidefinite (proof)
  yes_heuristic, ///< see-saw found nothing negative; not a proof
  no,            ///< explicit product vector with negative expectation
  inconclusive,
};

std::string_view to_string(BlockPositivity s);

struct Counterexample {
  CVector vec_a;
  CVector vec_b;
  double value;
};

struct BlockPositivityVerdict {
  BlockPositivity status = BlockPositivity::inconclusive;
  std::optional<Counterexample> counterexample;
  std::size_t restarts_tried = 0;
  std::size_t restarts_converged = 0;
  double min_value = 0.0;
  double spread = 0.0;
  std::string note;
};

BlockPositivityVerdict is_block_positive(const BipartiteOperator &w,
                                         const OptOptions &opts = {},
                                         bool fast_paths = true);

/// Searches the span of the orthonormal columns of `basis` (order m*n) for a
/// product vector. Empty result means none was found (heuristic absence).
std::optional<std::pair<CVector, CVector>>
product_vector_in_subspace(const Matrix &basis, std::size_t m, std::size_t n,
                           const OptOptions &opts = {});

struct PatternViolation {
  enum class Kind {
    zero_diagonal_block, ///< W_kk = 0 but W_kj != 0
    zero_diagonal_index, ///< every W_ii has (k,k) = 0 but row/col k of W_ij != 0
  };
  Kind kind;
  std::size_t block_row;
  std::size_t block_col;
  std::size_t index; ///< k for zero_diagonal_index, block index k otherwise
  double norm;
};

/// Necessary zero-pattern conditions of block-positive operators. An empty
/// list means the pattern is consistent (not that W is block-positive).
std::vector<PatternViolation> zero_pattern_check(const BipartiteOperator &w);

} // namespace ews
