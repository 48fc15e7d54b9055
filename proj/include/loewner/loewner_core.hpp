#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

/// Left/right interpolation data. SISO: every direction is 1, kept so the
/// tangential (MIMO) case has somewhere to live.
struct TangentialData {
  std::vector<Complex> right_points;  // lambda_i
  std::vector<Complex> right_values;  // w_i
  std::vector<Complex> left_points;   // mu_j
  std::vector<Complex> left_values;   // v_j
  std::vector<Complex> right_dirs;
  std::vector<Complex> left_dirs;

  std::size_t rho() const noexcept { return right_points.size(); }
  std::size_t nu() const noexcept { return left_points.size(); }
};

enum class PartitionScheme { kAlternating, kHalfSplit };

/// Loewner matrix, shifted Loewner matrix and the data vectors.
/// Rows follow the left data, columns the right data.
struct LoewnerPencil {
  ComplexMatrix loewner;   // LL_ij = (v_i - w_j)/(mu_i - lambda_j)
  ComplexMatrix shifted;   // LLs_ij = (mu_i v_i - lambda_j w_j)/(mu_i - lambda_j)
  ComplexVector V;         // v_i
  ComplexRowVector W;      // w_j
  bool is_real = false;    // set by realify(); imaginary parts are exactly zero
  TangentialData source;
};

struct SingularValueDecay {
  std::vector<double> sv_row;  // of [LL  LLs]
  std::vector<double> sv_col;  // of [LL; LLs]
  std::vector<double> row_normalized;
  std::vector<double> col_normalized;

  /// Count of normalized values (both lists) at or above `tol`.
  int numerical_rank(double tol) const;
};

/// Real descriptor realization E x' = A x + B u, y = C x + D u.
struct ReducedModel {
  RealMatrix E;
  RealMatrix A;
  RealVector B;
  RealRowVector C;
  double D = 0.0;
  int order = 0;
  std::vector<double> singular_values;  // sv_row of the source pencil
  std::vector<std::string> warnings;
};

TangentialData partition_samples(const SampleSet& samples,
                                 PartitionScheme scheme = PartitionScheme::kAlternating);

/// Adds conj(point)/conj(value) next to every strictly complex entry that lacks
/// its partner, within the same partition. Idempotent.
TangentialData close_under_conjugation(const TangentialData& data);

/// Throws DataError naming the colliding pair when some mu_i == lambda_j.
LoewnerPencil build_pencil(const TangentialData& data);

/// Row-parallel build; reference for build_pencil.
LoewnerPencil build_pencil_serial(const TangentialData& data);

/// Maps a conjugate-closed pencil to real form with the per-pair unitary
/// [[1, -j], [1, j]]/sqrt(2) on both sides. Throws DataError if the source
/// data are not closed with conjugates adjacent, NumericalError if the result
/// is not real to 1e-9 relative to the largest entry.
LoewnerPencil realify(const LoewnerPencil& pencil);

SingularValueDecay sv_analysis(const LoewnerPencil& pencil);

/// Smallest r with sigma_{r+1}/sigma_1 < tol for both concatenations.
int select_order(const SingularValueDecay& decay, double tol = 1e-10);

struct ReduceOptions {
  /// Orders above numerical_rank(rank_tol) + rank_slack produce a warning.
  double rank_tol = 1e-13;
  int rank_slack = 0;
  /// Seed for the random regularity probe.
  std::uint64_t probe_seed = 0;
};

/// Projects a realified pencil onto its leading r singular subspaces:
/// E = -U^T LL Z, A = -U^T LLs Z, B = U^T V, C = W Z.
ReducedModel reduce(const LoewnerPencil& pencil, int order,
                    const ReduceOptions& options = {});

struct PipelineResult {
  LoewnerPencil pencil;  // realified
  SingularValueDecay decay;
  ReducedModel model;
};

/// partition -> conjugate closure -> pencil -> realify -> SVD -> reduce. Uses
/// `order` when given, otherwise select_order(decay, tol).
PipelineResult reduce_samples(const SampleSet& samples, PartitionScheme scheme,
                              std::optional<int> order, double tol = 1e-10,
                              const ReduceOptions& options = {});

/// C (sE - A)^{-1} B + D. Throws NumericalError if sE - A is singular.
Complex eval_reduced(const ReducedModel& model, Complex s);

/// Unreduced interpolant W (LLs - z LL)^{-1} V of a square regular pencil.
Complex eval_pencil(const LoewnerPencil& pencil, Complex z);

}  // namespace loewner
