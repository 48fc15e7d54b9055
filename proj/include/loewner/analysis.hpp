#pragma once

#include <optional>
#include <vector>

#include "loewner/beam_model.hpp"
#include "loewner/loewner_core.hpp"
#include "loewner/types.hpp"

namespace loewner::analysis {

/// Purely imaginary log-spaced grid j*10^(lo + k (hi - lo)/(count - 1)).
struct FrequencyGrid {
  std::vector<Complex> points;
  double lo_exp = 0.0;
  double hi_exp = 0.0;
  int count = 0;

  std::vector<double> omegas() const;
};

struct ErrorProfile {
  FrequencyGrid grid;
  std::vector<double> abs_err;
  std::vector<double> rel_err;
  // Set where the reference value vanished and rel_err holds the absolute error.
  std::vector<bool> rel_is_absolute;
  double max_rel = 0.0;
  double median_rel = 0.0;
};

struct RatioSummary {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct EigenvalueSet {
  std::vector<Complex> finite;
  int infinite = 0;
  int indeterminate = 0;
};

struct InterlaceReport {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // zero-based mode index k-1
};

struct PoleMatch {
  Complex reference;
  Complex matched;
  double rel_dist = 0.0;
};

FrequencyGrid log_grid(double lo_exp, double hi_exp, int count);

/// Evaluates `h` at every grid point; points are processed in parallel and the
/// output keeps grid order. Errors carry the offending point.
SampleSet sample(const Evaluator& h, const FrequencyGrid& grid);

/// Single-threaded reference for sample().
SampleSet sample_serial(const Evaluator& h, const FrequencyGrid& grid);

/// Errors of b relative to the reference a.
ErrorProfile error_profile(const Evaluator& reference, const Evaluator& candidate,
                           const FrequencyGrid& grid);
ErrorProfile error_profile(const SampleSet& reference, const SampleSet& candidate,
                           const FrequencyGrid& grid);

/// Pointwise ratio numerator/denominator of two error lists.
RatioSummary ratio_summary(const std::vector<double>& numerator,
                           const std::vector<double>& denominator);

double median(std::vector<double> values);

/// Eigenvalues of E^{-1} A, or of the pencil (A, E) when E is ill-conditioned.
/// Sorted by |Im|, then Im, then Re.
std::vector<Complex> reduced_poles(const ReducedModel& model);

/// Finite generalized eigenvalues of ([[A, B], [C, D]], [[E, 0], [0, 0]]).
EigenvalueSet reduced_zeros(const ReducedModel& model);

/// Finite eigenvalues of the pencil (A, E) by QZ.
EigenvalueSet pencil_eigenvalues(const RealMatrix& A, const RealMatrix& E);

void sort_spectrum(std::vector<Complex>& values);

InterlaceReport interlace_report(const beam::BeamSpectrum& spectrum);
InterlaceReport interlace_report(const std::vector<double>& alphas,
                                 const std::vector<double>& gammas);

/// Greedy nearest-neighbour pairing by |c - r|/|r|; each candidate is used at
/// most once. One entry per reference, in reference order.
std::vector<PoleMatch> match_poles(const std::vector<Complex>& reference,
                                   const std::vector<Complex>& candidates);

}  // namespace loewner::analysis
