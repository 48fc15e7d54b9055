#include "loewner/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "loewner/errors.hpp"

namespace loewner::analysis {

namespace {

constexpr double kInfiniteTol = 1e-13;

std::exception_ptr annotate(const Error& e, Complex s) {
  return make_error(e.kind(), fmt::format("at s = {}{:+}j: {}", s.real(), s.imag(), e.what()));
}

}  // namespace

std::vector<double> FrequencyGrid::omegas() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.imag());
  return out;
}

FrequencyGrid log_grid(double lo_exp, double hi_exp, int count) {
  if (!(lo_exp < hi_exp) || !std::isfinite(lo_exp) || !std::isfinite(hi_exp)) {
    throw DomainError(fmt::format("log_grid: need lo_exp < hi_exp, got [{}, {}]", lo_exp, hi_exp));
  }
  if (count < 2) throw DomainError(fmt::format("log_grid: count must be >= 2, got {}", count));
  FrequencyGrid g;
  g.lo_exp = lo_exp;
  g.hi_exp = hi_exp;
  g.count = count;
  g.points.reserve(count);
  const double step = (hi_exp - lo_exp) / (count - 1);
  for (int k = 0; k < count; ++k) {
    g.points.emplace_back(0.0, std::pow(10.0, lo_exp + k * step));
  }
  return g;
}

SampleSet sample_serial(const Evaluator& h, const FrequencyGrid& grid) {
  SampleSet out;
  out.reserve(grid.points.size());
  for (const auto& s : grid.points) {
    try {
      out.push_back({s, h(s)});
    } catch (const Error& e) {
      std::rethrow_exception(annotate(e, s));
    }
  }
  return out;
}

SampleSet sample(const Evaluator& h, const FrequencyGrid& grid) {
  const auto n = static_cast<std::ptrdiff_t>(grid.points.size());
  SampleSet out(grid.points.size());
  // Keep the failure with the lowest index so errors are deterministic.
  std::ptrdiff_t failed_at = n;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const Complex s = grid.points[k];
    try {
      out[k] = {s, h(s)};
    } catch (const Error& e) {
#pragma omp critical(loewner_sample_error)
      if (k < failed_at) {
        failed_at = k;
        failure = annotate(e, s);
      }
    } catch (...) {
#pragma omp critical(loewner_sample_error)
      if (k < failed_at) {
        failed_at = k;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ErrorProfile error_profile(const SampleSet& reference, const SampleSet& candidate,
                           const FrequencyGrid& grid) {
  if (reference.size() != grid.points.size() || candidate.size() != grid.points.size()) {
    throw DataError("error_profile: sample sets and grid differ in length");
  }
  ErrorProfile p;
  p.grid = grid;
  const std::size_t n = grid.points.size();
  p.abs_err.resize(n);
  p.rel_err.resize(n);
  p.rel_is_absolute.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = reference[k].value;
    const double err = std::abs(a - candidate[k].value);
    p.abs_err[k] = err;
    if (std::abs(a) == 0.0) {
      p.rel_err[k] = err;
      p.rel_is_absolute[k] = true;
    } else {
      p.rel_err[k] = err / std::abs(a);
    }
  }
  p.max_rel = p.rel_err.empty() ? 0.0 : *std::max_element(p.rel_err.begin(), p.rel_err.end());
  p.median_rel = median(p.rel_err);
  return p;
}

ErrorProfile error_profile(const Evaluator& reference, const Evaluator& candidate,
                           const FrequencyGrid& grid) {
  return error_profile(sample(reference, grid), sample(candidate, grid), grid);
}

RatioSummary ratio_summary(const std::vector<double>& numerator,
                           const std::vector<double>& denominator) {
  if (numerator.size() != denominator.size() || numerator.empty()) {
    throw DataError("ratio_summary: lists must be non-empty and equal in length");
  }
  std::vector<double> r(numerator.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    r[k] = denominator[k] == 0.0 ? std::numeric_limits<double>::infinity()
                                 : numerator[k] / denominator[k];
  }
  RatioSummary out;
  out.min = *std::min_element(r.begin(), r.end());
  out.max = *std::max_element(r.begin(), r.end());
  out.median = median(r);
  return out;
}

void sort_spectrum(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
    const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
    if (ia != ib) return ia < ib;
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
}

EigenvalueSet pencil_eigenvalues(const RealMatrix& A, const RealMatrix& E) {
  EigenvalueSet out;
  if (A.rows() == 0) return out;
  Eigen::GeneralizedEigenSolver<RealMatrix> ges(A, E, false);
  if (ges.info() != Eigen::Success) {
    throw NumericalError("generalized eigensolver (QZ) did not converge");
  }
  const double na = std::max(A.norm(), std::numeric_limits<double>::min());
  const double ne = std::max(E.norm(), std::numeric_limits<double>::min());
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  for (Eigen::Index k = 0; k < alphas.size(); ++k) {
    // Truncated Loewner pencils are close to singular, so alpha and beta can
    // both be tiny while their ratio is still a good eigenvalue. Only an exact
    // 0/0 is indeterminate.
    const double a = std::abs(alphas(k)) / na;
    const double b = std::abs(betas(k)) / ne;
    if (a == 0.0 && b == 0.0) {
      ++out.indeterminate;
    } else if (b <= kInfiniteTol * a) {
      ++out.infinite;
    } else {
      out.finite.push_back(alphas(k) / betas(k));
    }
  }
  sort_spectrum(out.finite);
  return out;
}

std::vector<Complex> reduced_poles(const ReducedModel& model) {
  const Eigen::PartialPivLU<RealMatrix> lu(model.E);
  std::vector<Complex> out;
  if (lu.rcond() > 1e-12) {
    const RealMatrix m = lu.solve(model.A);
    Eigen::EigenSolver<RealMatrix> es(m, false);
    if (es.info() == Eigen::Success) {
      const auto ev = es.eigenvalues();
      out.assign(ev.data(), ev.data() + ev.size());
      sort_spectrum(out);
      return out;
    }
  }
  auto set = pencil_eigenvalues(model.A, model.E);
  if (set.indeterminate > 0) {
    throw NumericalError(fmt::format(
        "reduced_poles: pencil has {} indeterminate eigenvalues (singular pencil)",
        set.indeterminate));
  }
  return set.finite;
}

EigenvalueSet reduced_zeros(const ReducedModel& model) {
  const Eigen::Index r = model.order;
  RealMatrix a = RealMatrix::Zero(r + 1, r + 1);
  RealMatrix e = RealMatrix::Zero(r + 1, r + 1);
  a.topLeftCorner(r, r) = model.A;
  a.topRightCorner(r, 1) = model.B;
  a.bottomLeftCorner(1, r) = model.C;
  a(r, r) = model.D;
  e.topLeftCorner(r, r) = model.E;
  return pencil_eigenvalues(a, e);
}

InterlaceReport interlace_report(const std::vector<double>& alphas,
                                 const std::vector<double>& gammas) {
  if (alphas.size() < 2) throw DomainError("interlace_report needs at least 2 alphas");
  InterlaceReport rep;
  const std::size_t pairs = std::min(gammas.size(), alphas.size() - 1);
  for (std::size_t k = 0; k < pairs; ++k) {
    if (!(alphas[k] < gammas[k] && gammas[k] < alphas[k + 1])) {
      rep.ok = false;
      rep.first_violation = k;
      return rep;
    }
  }
  return rep;
}

InterlaceReport interlace_report(const beam::BeamSpectrum& spectrum) {
  return interlace_report(spectrum.alphas, spectrum.gammas);
}

std::vector<PoleMatch> match_poles(const std::vector<Complex>& reference,
                                   const std::vector<Complex>& candidates) {
  std::vector<bool> used(candidates.size(), false);
  std::vector<PoleMatch> out;
  out.reserve(reference.size());
  for (const auto& ref : reference) {
    const double scale = std::abs(ref) > 0.0 ? std::abs(ref) : 1.0;
    PoleMatch m{ref, {std::numeric_limits<double>::quiet_NaN(), 0.0},
                std::numeric_limits<double>::infinity()};
    std::size_t best = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const double d = std::abs(candidates[c] - ref) / scale;
      if (d < m.rel_dist) {
        m.rel_dist = d;
        best = c;
      }
    }
    if (best < candidates.size()) {
      used[best] = true;
      m.matched = candidates[best];
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace loewner::analysis
