#include "loewner/beam_model.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "loewner/errors.hpp"

namespace loewner::beam {

namespace {

constexpr double kPi = std::numbers::pi;

// Scaled hyperbolic/trig factors for z = a + jb. Each returned value is the
// true function times exp(-|a|) (hyperbolic) or exp(-|b|) (trigonometric).
struct ScaledFactors {
  Complex cosh_s, sinh_s, sin_s, cos_s;
  double log_scale;  // |a| + |b|
};

ScaledFactors scaled_factors(Complex z) {
  const double a = z.real();
  const double b = z.imag();
  const double ea = std::exp(-2.0 * std::abs(a));
  const double eb = std::exp(-2.0 * std::abs(b));
  const double ch_a = 0.5 * (1.0 + ea);
  const double sh_a = std::copysign(0.5 * (1.0 - ea), a);
  const double ch_b = 0.5 * (1.0 + eb);
  const double sh_b = std::copysign(0.5 * (1.0 - eb), b);
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  return {
      {ch_a * cb, sh_a * sb},
      {sh_a * cb, ch_a * sb},
      {sa * ch_b, ca * sh_b},
      {ca * ch_b, -sa * sh_b},
      std::abs(a) + std::abs(b),
  };
}

Complex denominator_EI(Complex s, const BeamParams& p) {
  return p.stiffness() + s * p.damping_inertia();
}

// EI + s c_d I vanishes at s = -E/c_d; rounding can leave a tiny residue there,
// so the point itself is tested as well.
bool at_real_pole(Complex s, const BeamParams& p) {
  return denominator_EI(s, p) == Complex{0.0, 0.0} ||
         s == Complex{-p.youngs() / p.damping(), 0.0};
}

void require_finite(Complex h, Complex s) {
  if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
    throw NumericalError(
        fmt::format("transfer evaluation overflowed at s = {}{:+}j", s.real(), s.imag()));
  }
}

// Bisection on a sign change followed by one Newton step that is kept only if
// it stays inside the final bracket.
template <class F, class DF>
double bracketed_root(F f, DF df, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::abs(mid)) break;
  }
  double x = 0.5 * (lo + hi);
  const double d = df(x);
  if (d != 0.0) {
    const double polished = x - f(x) / d;
    if (polished >= lo && polished <= hi) x = polished;
  }
  return x;
}

}  // namespace

BeamParams::BeamParams(double length, double youngs, double inertia, double damping)
    : length_(length),
      youngs_(youngs),
      inertia_(inertia),
      damping_(damping),
      stiffness_(youngs * inertia),
      damping_inertia_(damping * inertia) {
  if (!(length > 0.0) || !(youngs > 0.0) || !(inertia > 0.0) || !(damping > 0.0)) {
    throw DomainError(fmt::format(
        "beam parameters must be strictly positive (L={}, E={}, I={}, c_d={})", length,
        youngs, inertia, damping));
  }
}

BeamParams BeamParams::from_cross_section(double length, double youngs, double base,
                                          double height, double damping) {
  return BeamParams(length, youngs, inertia_from_cross_section(base, height), damping);
}

BeamParams BeamParams::aluminum_cantilever() {
  return from_cross_section(0.7, 6.9e10, 0.07, 0.0085, 5e-4);
}

std::vector<Complex> BeamSpectrum::pole_list() const {
  std::vector<Complex> out;
  out.reserve(2 * poles.size());
  for (const auto& mu : poles) {
    out.push_back(mu);
    out.push_back(std::conj(mu));
  }
  return out;
}

std::vector<Complex> BeamSpectrum::zero_list() const {
  std::vector<Complex> out;
  out.reserve(2 * zeros.size());
  for (const auto& z : zeros) {
    out.push_back(z);
    out.push_back(std::conj(z));
  }
  return out;
}

double inertia_from_cross_section(double base, double height) {
  if (!(base > 0.0) || !(height > 0.0)) {
    throw DomainError(
        fmt::format("cross-section dimensions must be positive (b={}, h={})", base, height));
  }
  return base * height * height * height / 12.0;
}

Complex eval_m(Complex s, const BeamParams& p) {
  if (at_real_pole(s, p)) {
    throw DomainError(fmt::format("m(s) is singular at s = -E/c_d = {}", s.real()));
  }
  const Complex den = denominator_EI(s, p);
  const Complex w = -s * s / den;
  if (w == Complex{0.0, 0.0}) return {0.0, 0.0};
  // Polar form: |w|^(1/4) at a quarter of the principal argument.
  return std::polar(std::pow(std::abs(w), 0.25), std::arg(w) / 4.0);
}

Complex eval_H_with_root(Complex s, Complex m, const BeamParams& p) {
  if (s == Complex{0.0, 0.0}) return {0.0, 0.0};
  if (at_real_pole(s, p)) throw DomainError("transfer function is singular at s = -E/c_d");
  const Complex den = denominator_EI(s, p);
  const auto f = scaled_factors(p.length() * m);
  const Complex num = f.cosh_s * f.sin_s - f.sinh_s * f.cos_s;
  const Complex dd = std::exp(-f.log_scale) + f.cosh_s * f.cos_s;
  const Complex h = s * num / (den * m * m * m * dd);
  require_finite(h, s);
  return h;
}

Complex eval_H_orig(Complex s, const BeamParams& p) {
  if (s == Complex{0.0, 0.0}) return {0.0, 0.0};
  return eval_H_with_root(s, eval_m(s, p), p);
}

Complex eval_H_orig_unscaled(Complex s, const BeamParams& p) {
  if (s == Complex{0.0, 0.0}) return {0.0, 0.0};
  const Complex m = eval_m(s, p);
  const Complex z = p.length() * m;
  const Complex n = std::cosh(z) * std::sin(z) - std::sinh(z) * std::cos(z);
  const Complex d = 1.0 + std::cosh(z) * std::cos(z);
  const Complex h = s * n / (denominator_EI(s, p) * m * m * m * d);
  require_finite(h, s);
  return h;
}

std::vector<double> alpha_roots(int count, double length) {
  if (count < 1) throw DomainError("alpha_roots: count must be >= 1");
  if (!(length > 0.0)) throw DomainError("alpha_roots: length must be positive");
  // cos(x) = -sech(x); the k-th root sits in ((k-1)pi, k*pi) around (2k-1)pi/2.
  auto f = [](double x) { return std::cos(x) + 1.0 / std::cosh(x); };
  auto df = [](double x) { return -std::sin(x) - std::tanh(x) / std::cosh(x); };
  std::vector<double> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k) {
    const double x = bracketed_root(f, df, (k - 1) * kPi, k * kPi);
    out.push_back(x / length);
  }
  return out;
}

std::vector<double> gamma_roots(int count, double length) {
  if (count < 1) throw DomainError("gamma_roots: count must be >= 1");
  if (!(length > 0.0)) throw DomainError("gamma_roots: length must be positive");
  // tan(x) = tanh(x) rewritten as exp(-x)(sin x cosh x - cos x sinh x) = 0,
  // which is continuous; the k-th nonzero root lies in (k*pi, k*pi + pi/2).
  auto f = [](double x) {
    const double e = std::exp(-2.0 * x);
    return std::sin(x) * 0.5 * (1.0 + e) - std::cos(x) * 0.5 * (1.0 - e);
  };
  auto df = [&f](double x) {
    const double e = std::exp(-2.0 * x);
    return 2.0 * std::sin(x) * 0.5 * (1.0 - e) - f(x);
  };
  std::vector<double> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k) {
    const double x = bracketed_root(f, df, k * kPi, k * kPi + 0.5 * kPi);
    out.push_back(x / length);
  }
  return out;
}

Complex modal_quadratic_root(double wavenumber, const BeamParams& p) {
  const double k4 = std::pow(wavenumber, 4);
  const double b = p.damping_inertia() * k4;
  const double c = p.stiffness() * k4;
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) return {-0.5 * b, 0.5 * std::sqrt(-disc)};
  // Overdamped: both roots real; return the one closer to the origin.
  const double q = -0.5 * (b + std::sqrt(disc));
  return {c / q, 0.0};
}

BeamSpectrum spectrum(int count_pairs, const BeamParams& p) {
  if (count_pairs < 1) throw DomainError("spectrum: count_pairs must be >= 1");
  BeamSpectrum out;
  out.alphas = alpha_roots(count_pairs, p.length());
  out.gammas = gamma_roots(count_pairs, p.length());
  out.real_pole = -p.youngs() / p.damping();
  for (int k = 0; k < count_pairs; ++k) {
    const Complex mu_plus = modal_quadratic_root(out.alphas[k], p);
    const Complex mu_minus = std::conj(mu_plus);
    out.poles.push_back(mu_plus);
    // Partial fractions of (4/L) s/((s - mu_+)(s - mu_-)).
    const double gain = 4.0 / p.length();
    out.residues.push_back(gain * mu_plus / (mu_plus - mu_minus));
    out.residues_conj.push_back(gain * mu_minus / (mu_minus - mu_plus));
    out.zeros.push_back(modal_quadratic_root(out.gammas[k], p));
  }
  return out;
}

Complex eval_H_modal(Complex s, const BeamParams& p, const std::vector<double>& alphas,
                     int terms) {
  if (terms < 1) throw DomainError("eval_H_modal: terms must be >= 1");
  if (static_cast<std::size_t>(terms) > alphas.size()) {
    throw DomainError("eval_H_modal: not enough precomputed alphas");
  }
  Complex sum{0.0, 0.0};
  const Complex s2 = s * s;
  for (int k = 0; k < terms; ++k) {
    const double a4 = std::pow(alphas[k], 4);
    sum += 4.0 * s / (s2 + p.damping_inertia() * a4 * s + p.stiffness() * a4);
  }
  // Mode shapes normalized to length L give tip gain phi_k(L)^2 / L = 4/L.
  return sum / p.length();
}

Complex eval_H_modal(Complex s, const BeamParams& p, int terms) {
  if (terms < 1) throw DomainError("eval_H_modal: terms must be >= 1");
  return eval_H_modal(s, p, alpha_roots(terms, p.length()), terms);
}

}  // namespace loewner::beam
