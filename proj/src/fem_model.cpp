#include "loewner/fem_model.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "loewner/banded.hpp"
#include "loewner/errors.hpp"

namespace loewner::fem {

namespace {

// Dimensionless stencil shared by K and J. Rows 0..n-3 carry the centred
// fourth difference truncated at the clamped end; the last two rows carry the
// free-end substitutions.
void fill_stencil(DenseRowMajor& m, double scale) {
  const Eigen::Index n = m.rows();
  constexpr std::array<double, 5> interior{1.0, -4.0, 6.0, -4.0, 1.0};
  for (Eigen::Index i = 0; i + 2 < n; ++i) {
    for (Eigen::Index t = 0; t < 5; ++t) {
      const Eigen::Index j = i - 2 + t;
      if (j >= 0 && j < n) m(i, j) = scale * interior[t];
    }
  }
  constexpr std::array<double, 4> second_last{1.0, -4.0, 5.0, -2.0};
  for (Eigen::Index t = 0; t < 4; ++t) m(n - 2, n - 4 + t) = scale * second_last[t];
  constexpr std::array<double, 3> last{1.0, -2.0, 1.0};
  for (Eigen::Index t = 0; t < 3; ++t) m(n - 1, n - 3 + t) = scale * last[t];
}

Complex output_prefactor(Complex s, const beam::BeamParams& p) {
  const Complex den = p.stiffness() + s * p.damping_inertia();
  if (den == Complex{0.0, 0.0}) throw DomainError("H_FEM is singular at s = -E/c_d");
  return s / den;
}

}  // namespace

SecondOrderSystem assemble_second_order(int intervals, const beam::BeamParams& p) {
  if (intervals < 6) {
    throw DomainError(fmt::format("FEM needs N >= 6 intervals, got {}", intervals));
  }
  const Eigen::Index n = intervals - 1;
  const double h = p.length() / (intervals + 2);
  const double h4 = std::pow(h, 4);

  SecondOrderSystem sys;
  sys.intervals = intervals;
  sys.mesh_h = h;
  sys.mass = DenseRowMajor::Identity(n, n);
  sys.stiffness = DenseRowMajor::Zero(n, n);
  sys.damping = DenseRowMajor::Zero(n, n);
  fill_stencil(sys.stiffness, p.stiffness() / h4);
  fill_stencil(sys.damping, p.damping_inertia() / h4);

  sys.input = RealVector::Zero(n);
  sys.input(n - 2) = -1.0 / h;
  sys.input(n - 1) = 2.0 / h;

  sys.out_position = RealRowVector::Zero(n);
  sys.out_position(n - 2) = p.stiffness() * -2.0;
  sys.out_position(n - 1) = p.stiffness() * 3.0;
  sys.out_velocity = RealRowVector::Zero(n);
  sys.out_velocity(n - 2) = p.damping_inertia() * -2.0;
  sys.out_velocity(n - 1) = p.damping_inertia() * 3.0;

  sys.feedthrough = 2.0 * h * h * h;
  sys.half_bandwidth = 2;
  return sys;
}

FirstOrderSystem to_first_order(const SecondOrderSystem& sys) {
  const Eigen::Index n = sys.dim();
  FirstOrderSystem out;
  out.descriptor = DenseRowMajor::Zero(2 * n, 2 * n);
  out.descriptor.topLeftCorner(n, n).setIdentity();
  out.descriptor.bottomRightCorner(n, n) = sys.mass;

  out.state = DenseRowMajor::Zero(2 * n, 2 * n);
  out.state.topRightCorner(n, n).setIdentity();
  out.state.bottomLeftCorner(n, n) = -sys.stiffness;
  out.state.bottomRightCorner(n, n) = -sys.damping;

  out.input = RealVector::Zero(2 * n);
  out.input.tail(n) = sys.input;
  out.output.resize(2 * n);
  out.output << sys.out_position, sys.out_velocity;
  out.feedthrough = sys.feedthrough;
  return out;
}

Complex eval_H_fem(Complex s, const FirstOrderSystem& sys, const beam::BeamParams& p) {
  const Complex pre = output_prefactor(s, p);
  const ComplexMatrix shifted =
      s * sys.descriptor.cast<Complex>() - sys.state.cast<Complex>();
  const Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  const ComplexVector x = lu.solve(sys.input.cast<Complex>());
  if (!x.allFinite()) {
    throw NumericalError(
        fmt::format("H_FEM: sG - A is singular at s = {}{:+}j", s.real(), s.imag()));
  }
  return pre * (sys.output.cast<Complex>().dot(x) + sys.feedthrough);
}

Complex eval_H_fem(Complex s, const SecondOrderSystem& sys, const beam::BeamParams& p) {
  const Complex pre = output_prefactor(s, p);
  const auto n = static_cast<std::size_t>(sys.dim());
  const auto bw = static_cast<std::size_t>(sys.half_bandwidth);
  BandedMatrix<Complex> a(n, bw, bw);
  const Complex s2 = s * s;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= bw ? i - bw : 0;
    const std::size_t hi = std::min(n - 1, i + bw);
    for (std::size_t j = lo; j <= hi; ++j) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
      a.at(i, j) = s2 * sys.mass(r, c) + s * sys.damping(r, c) + sys.stiffness(r, c);
    }
  }
  std::vector<Complex> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = sys.input(static_cast<Eigen::Index>(i));
  std::vector<Complex> v;
  try {
    v = a.solve(std::move(rhs));
  } catch (const NumericalError&) {
    throw NumericalError(fmt::format("H_FEM: s^2 M + s J + K is singular at s = {}{:+}j",
                                     s.real(), s.imag()));
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    acc += (sys.out_position(r) + s * sys.out_velocity(r)) * v[i];
  }
  return pre * (acc + sys.feedthrough);
}

}  // namespace loewner::fem
