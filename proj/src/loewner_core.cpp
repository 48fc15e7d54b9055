#include "loewner/loewner_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

std::string fmt_complex(Complex z) { return fmt::format("{}{:+}j", z.real(), z.imag()); }

bool is_real_point(Complex z) { return z.imag() == 0.0; }

bool values_conjugate(Complex a, Complex b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - std::conj(b)) <= 1e-12 * scale;
}

Complex dir_or_one(const std::vector<Complex>& dirs, std::size_t i) {
  return i < dirs.size() ? dirs[i] : Complex{1.0, 0.0};
}

void close_partition(const std::vector<Complex>& pts, const std::vector<Complex>& vals,
                     std::vector<Complex>& out_pts, std::vector<Complex>& out_vals,
                     const char* side) {
  std::map<std::pair<double, double>, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    index[{pts[i].real(), pts[i].imag()}].push_back(i);
  }
  std::vector<bool> used(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex p = pts[i];
    const Complex v = vals[i];
    if (is_real_point(p)) {
      if (std::abs(v.imag()) > 1e-12 * std::max(std::abs(v), 1e-300)) {
        throw DataError(fmt::format("{} point {} is real but its value {} is not",
                                    side, p.real(), fmt_complex(v)));
      }
      out_pts.push_back(p);
      out_vals.push_back({v.real(), 0.0});
      continue;
    }
    out_pts.push_back(p);
    out_vals.push_back(v);
    std::optional<std::size_t> partner;
    if (auto it = index.find({p.real(), -p.imag()}); it != index.end()) {
      for (std::size_t j : it->second) {
        if (!used[j]) {
          partner = j;
          break;
        }
      }
    }
    if (partner) {
      used[*partner] = true;
      out_pts.push_back(pts[*partner]);
      out_vals.push_back(vals[*partner]);
    } else {
      out_pts.push_back(std::conj(p));
      out_vals.push_back(std::conj(v));
    }
  }
}

// Block sizes (1 for real points, 2 for adjacent conjugate pairs).
std::vector<int> conjugate_blocks(const std::vector<Complex>& pts,
                                  const std::vector<Complex>& vals, const char* side) {
  std::vector<int> blocks;
  for (std::size_t i = 0; i < pts.size();) {
    if (is_real_point(pts[i])) {
      blocks.push_back(1);
      ++i;
      continue;
    }
    if (i + 1 >= pts.size() || pts[i + 1] != std::conj(pts[i]) ||
        !values_conjugate(vals[i], vals[i + 1])) {
      throw DataError(fmt::format(
          "realify: {} data are not conjugate-closed with adjacent pairs at index {}", side,
          i));
    }
    blocks.push_back(2);
    i += 2;
  }
  return blocks;
}

void check_collisions(const TangentialData& d) {
  for (std::size_t i = 0; i < d.nu(); ++i) {
    for (std::size_t j = 0; j < d.rho(); ++j) {
      if (d.left_points[i] == d.right_points[j]) {
        throw DataError(fmt::format(
            "Loewner denominator vanishes: left point mu[{}] equals right point lambda[{}] "
            "= {}",
            i, j, fmt_complex(d.left_points[i])));
      }
    }
  }
}

void check_shapes(const TangentialData& d) {
  if (d.rho() == 0 || d.nu() == 0) throw DataError("empty interpolation data");
  if (d.right_values.size() != d.rho() || d.left_values.size() != d.nu()) {
    throw DataError("interpolation points and values differ in length");
  }
}

void fill_row(const TangentialData& d, Eigen::Index i, LoewnerPencil& out) {
  const Complex mu = d.left_points[i];
  const Complex v = d.left_values[i];
  const Complex l = dir_or_one(d.left_dirs, i);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d.rho()); ++j) {
    const Complex lambda = d.right_points[j];
    const Complex w = d.right_values[j];
    const Complex r = dir_or_one(d.right_dirs, j);
    const Complex den = mu - lambda;
    out.loewner(i, j) = (v * r - l * w) / den;
    out.shifted(i, j) = (mu * v * r - lambda * l * w) / den;
  }
}

LoewnerPencil allocate_pencil(const TangentialData& d) {
  LoewnerPencil out;
  const auto nu = static_cast<Eigen::Index>(d.nu());
  const auto rho = static_cast<Eigen::Index>(d.rho());
  out.loewner.resize(nu, rho);
  out.shifted.resize(nu, rho);
  out.V.resize(nu);
  out.W.resize(rho);
  for (Eigen::Index i = 0; i < nu; ++i) out.V(i) = d.left_values[i];
  for (Eigen::Index j = 0; j < rho; ++j) out.W(j) = d.right_values[j];
  out.source = d;
  return out;
}

// Columns: M <- M P with P = blockdiag([[1, -j], [1, j]]/sqrt(2)).
template <class Mat>
void transform_columns(Mat& m, const std::vector<int>& blocks) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Index c = 0;
  for (int b : blocks) {
    if (b == 2) {
      const auto a = m.col(c).eval();
      const auto bcol = m.col(c + 1).eval();
      m.col(c) = (a + bcol) * s;
      m.col(c + 1) = (a - bcol) * Complex{0.0, -s};
    }
    c += b;
  }
}

// Rows: M <- P^* M.
template <class Mat>
void transform_rows(Mat& m, const std::vector<int>& blocks) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Index r = 0;
  for (int b : blocks) {
    if (b == 2) {
      const auto a = m.row(r).eval();
      const auto brow = m.row(r + 1).eval();
      m.row(r) = (a + brow) * s;
      m.row(r + 1) = (a - brow) * Complex{0.0, s};
    }
    r += b;
  }
}

template <class Mat>
double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class Mat>
double max_imag(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

std::vector<double> normalized(const std::vector<double>& sv) {
  std::vector<double> out(sv.size(), 0.0);
  if (sv.empty() || sv.front() == 0.0) return out;
  for (std::size_t k = 0; k < sv.size(); ++k) out[k] = sv[k] / sv.front();
  return out;
}

}  // namespace

TangentialData partition_samples(const SampleSet& samples, PartitionScheme scheme) {
  if (samples.size() < 2) throw DataError("partition needs at least 2 samples");
  {
    std::vector<std::pair<double, double>> keys;
    keys.reserve(samples.size());
    for (const auto& s : samples) keys.emplace_back(s.s.real(), s.s.imag());
    std::sort(keys.begin(), keys.end());
    if (auto it = std::adjacent_find(keys.begin(), keys.end()); it != keys.end()) {
      throw DataError(
          fmt::format("duplicate sample point {}", fmt_complex({it->first, it->second})));
    }
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(samples[a].s.imag()) < std::abs(samples[b].s.imag());
  });

  TangentialData d;
  auto push_right = [&](const FrequencySample& s) {
    d.right_points.push_back(s.s);
    d.right_values.push_back(s.value);
    d.right_dirs.emplace_back(1.0, 0.0);
  };
  auto push_left = [&](const FrequencySample& s) {
    d.left_points.push_back(s.s);
    d.left_values.push_back(s.value);
    d.left_dirs.emplace_back(1.0, 0.0);
  };
  const std::size_t n = order.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = samples[order[k]];
    const bool right = scheme == PartitionScheme::kAlternating ? (k % 2 == 0)
                                                               : (k < (n + 1) / 2);
    right ? push_right(s) : push_left(s);
  }
  return d;
}

TangentialData close_under_conjugation(const TangentialData& data) {
  check_shapes(data);
  TangentialData out;
  close_partition(data.right_points, data.right_values, out.right_points, out.right_values,
                  "right");
  close_partition(data.left_points, data.left_values, out.left_points, out.left_values,
                  "left");
  out.right_dirs.assign(out.right_points.size(), {1.0, 0.0});
  out.left_dirs.assign(out.left_points.size(), {1.0, 0.0});
  return out;
}

LoewnerPencil build_pencil_serial(const TangentialData& data) {
  check_shapes(data);
  check_collisions(data);
  LoewnerPencil out = allocate_pencil(data);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(data.nu()); ++i) {
    fill_row(data, i, out);
  }
  return out;
}

LoewnerPencil build_pencil(const TangentialData& data) {
  check_shapes(data);
  check_collisions(data);
  LoewnerPencil out = allocate_pencil(data);
  const auto nu = static_cast<Eigen::Index>(data.nu());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < nu; ++i) {
    fill_row(data, i, out);
  }
  return out;
}

LoewnerPencil realify(const LoewnerPencil& pencil) {
  if (pencil.is_real) return pencil;
  const auto& d = pencil.source;
  const auto right_blocks = conjugate_blocks(d.right_points, d.right_values, "right");
  const auto left_blocks = conjugate_blocks(d.left_points, d.left_values, "left");

  LoewnerPencil out = pencil;
  transform_columns(out.loewner, right_blocks);
  transform_columns(out.shifted, right_blocks);
  transform_columns(out.W, right_blocks);
  transform_rows(out.loewner, left_blocks);
  transform_rows(out.shifted, left_blocks);
  transform_rows(out.V, left_blocks);

  const double scale = std::max({1.0, max_abs(out.loewner), max_abs(out.shifted),
                                 max_abs(out.V), max_abs(out.W)});
  const double residue = std::max({max_imag(out.loewner), max_imag(out.shifted),
                                   max_imag(out.V), max_imag(out.W)});
  if (residue > 1e-9 * scale) {
    throw NumericalError(fmt::format(
        "realify: transformed pencil keeps imaginary parts of {:.3e} (scale {:.3e})",
        residue, scale));
  }
  out.loewner = out.loewner.real().cast<Complex>();
  out.shifted = out.shifted.real().cast<Complex>();
  out.V = out.V.real().cast<Complex>();
  out.W = out.W.real().cast<Complex>();
  out.is_real = true;
  return out;
}

int SingularValueDecay::numerical_rank(double tol) const {
  auto count = [tol](const std::vector<double>& v) {
    return static_cast<int>(
        std::count_if(v.begin(), v.end(), [tol](double x) { return x >= tol; }));
  };
  return std::max(count(row_normalized), count(col_normalized));
}

SingularValueDecay sv_analysis(const LoewnerPencil& pencil) {
  const Eigen::Index nu = pencil.loewner.rows();
  const Eigen::Index rho = pencil.loewner.cols();
  SingularValueDecay out;
  if (pencil.is_real) {
    RealMatrix row(nu, 2 * rho);
    row << pencil.loewner.real(), pencil.shifted.real();
    RealMatrix col(2 * nu, rho);
    col << pencil.loewner.real(), pencil.shifted.real();
    out.sv_row = to_vector(Eigen::BDCSVD<RealMatrix>(row).singularValues());
    out.sv_col = to_vector(Eigen::BDCSVD<RealMatrix>(col).singularValues());
  } else {
    ComplexMatrix row(nu, 2 * rho);
    row << pencil.loewner, pencil.shifted;
    ComplexMatrix col(2 * nu, rho);
    col << pencil.loewner, pencil.shifted;
    out.sv_row = to_vector(Eigen::BDCSVD<ComplexMatrix>(row).singularValues());
    out.sv_col = to_vector(Eigen::BDCSVD<ComplexMatrix>(col).singularValues());
  }
  out.row_normalized = normalized(out.sv_row);
  out.col_normalized = normalized(out.sv_col);
  return out;
}

int select_order(const SingularValueDecay& decay, double tol) {
  const std::size_t limit = std::min(decay.row_normalized.size(), decay.col_normalized.size());
  for (std::size_t r = 1; r < limit; ++r) {
    if (decay.row_normalized[r] < tol && decay.col_normalized[r] < tol) {
      return static_cast<int>(r);
    }
  }
  return static_cast<int>(limit);
}

ReducedModel reduce(const LoewnerPencil& pencil, int order, const ReduceOptions& options) {
  if (!pencil.is_real) {
    throw DataError("reduce: pencil must be realified first (call realify)");
  }
  const Eigen::Index nu = pencil.loewner.rows();
  const Eigen::Index rho = pencil.loewner.cols();
  if (order < 1 || order > std::min(nu, rho)) {
    throw DomainError(fmt::format("reduce: order {} outside [1, {}]", order, std::min(nu, rho)));
  }
  const RealMatrix ll = pencil.loewner.real();
  const RealMatrix lls = pencil.shifted.real();

  RealMatrix row(nu, 2 * rho);
  row << ll, lls;
  RealMatrix col(2 * nu, rho);
  col << ll, lls;
  const Eigen::BDCSVD<RealMatrix> svd_row(row, Eigen::ComputeThinU);
  const Eigen::BDCSVD<RealMatrix> svd_col(col, Eigen::ComputeThinV);
  const RealMatrix U = svd_row.matrixU().leftCols(order);
  const RealMatrix Z = svd_col.matrixV().leftCols(order);

  ReducedModel model;
  model.order = order;
  model.E = -U.transpose() * ll * Z;
  model.A = -U.transpose() * lls * Z;
  model.B = U.transpose() * pencil.V.real();
  model.C = pencil.W.real() * Z;
  model.D = 0.0;
  model.singular_values = to_vector(svd_row.singularValues());

  SingularValueDecay decay;
  decay.sv_row = model.singular_values;
  decay.sv_col = to_vector(svd_col.singularValues());
  decay.row_normalized = normalized(decay.sv_row);
  decay.col_normalized = normalized(decay.sv_col);
  const int rank = decay.numerical_rank(options.rank_tol);
  if (order > rank + options.rank_slack) {
    model.warnings.push_back(fmt::format(
        "order {} exceeds numerical rank {} (normalized tolerance {:.1e})", order, rank,
        options.rank_tol));
  }

  // Regularity: det(zeta E - A) != 0 at a random probe scaled to the data.
  double scale = 1.0;
  for (const auto& z : pencil.source.right_points) scale = std::max(scale, std::abs(z));
  for (const auto& z : pencil.source.left_points) scale = std::max(scale, std::abs(z));
  std::mt19937_64 rng(options.probe_seed);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  const Complex zeta = scale * Complex{unit(rng), unit(rng)};
  const Eigen::PartialPivLU<ComplexMatrix> lu(zeta * model.E.cast<Complex>() -
                                              model.A.cast<Complex>());
  const auto diag = lu.matrixLU().diagonal();
  const bool regular = diag.allFinite() && (diag.array().abs() > 0.0).all();
  if (!regular) {
    throw NumericalError(fmt::format(
        "reduce: projected pencil of order {} is singular at probe {}; try a smaller order",
        order, fmt_complex(zeta)));
  }
  return model;
}

PipelineResult reduce_samples(const SampleSet& samples, PartitionScheme scheme,
                              std::optional<int> order, double tol,
                              const ReduceOptions& options) {
  PipelineResult out;
  out.pencil = realify(build_pencil(close_under_conjugation(partition_samples(samples, scheme))));
  out.decay = sv_analysis(out.pencil);
  const int r = order ? *order : select_order(out.decay, tol);
  out.model = reduce(out.pencil, r, options);
  return out;
}

Complex eval_reduced(const ReducedModel& model, Complex s) {
  const ComplexMatrix shifted = s * model.E.cast<Complex>() - model.A.cast<Complex>();
  const Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  const ComplexVector x = lu.solve(model.B.cast<Complex>());
  if (!x.allFinite()) {
    throw NumericalError(fmt::format("reduced model: sE - A is singular at s = {}", fmt_complex(s)));
  }
  return model.C.cast<Complex>().dot(x) + model.D;
}

Complex eval_pencil(const LoewnerPencil& pencil, Complex z) {
  if (pencil.loewner.rows() != pencil.loewner.cols()) {
    throw DataError("eval_pencil needs a square pencil");
  }
  const Eigen::PartialPivLU<ComplexMatrix> lu(pencil.shifted - z * pencil.loewner);
  const ComplexVector x = lu.solve(pencil.V);
  if (!x.allFinite()) {
    throw NumericalError(fmt::format("Loewner pencil is singular at z = {}", fmt_complex(z)));
  }
  return (pencil.W * x).value();
}

}  // namespace loewner
