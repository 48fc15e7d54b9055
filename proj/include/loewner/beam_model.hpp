#pragma once

#include <vector>

#include "loewner/types.hpp"

// Clamped-free Euler-Bernoulli beam with Kelvin-Voigt damping, shear-force
// input at the tip and tip velocity as output.
namespace loewner::beam {

/// Physical constants of the beam. EI and c_d*I are derived once at
/// construction so every consumer sees the same rounding.
class BeamParams {
 public:
  /// Throws DomainError unless every argument is strictly positive.
  BeamParams(double length, double youngs, double inertia, double damping);

  /// I = b*h^3/12 for a rectangular section.
  static BeamParams from_cross_section(double length, double youngs, double base,
                                       double height, double damping);

  /// 0.7 m aluminium strip, 70 mm x 8.5 mm section, c_d = 5e-4.
  static BeamParams aluminum_cantilever();

  double length() const noexcept { return length_; }
  double youngs() const noexcept { return youngs_; }
  double inertia() const noexcept { return inertia_; }
  double damping() const noexcept { return damping_; }
  double stiffness() const noexcept { return stiffness_; }  // EI
  double damping_inertia() const noexcept { return damping_inertia_; }  // c_d*I

 private:
  double length_;
  double youngs_;
  double inertia_;
  double damping_;
  double stiffness_;
  double damping_inertia_;
};

/// Analytic poles, zeros and residues of the beam transfer function.
/// Index k-1 of every list holds mode k.
struct BeamSpectrum {
  std::vector<double> alphas;
  std::vector<double> gammas;
  std::vector<Complex> poles;     // mu_{+k}, Im > 0
  std::vector<Complex> zeros;     // upper member of each zero pair
  std::vector<Complex> residues;  // r_k for mu_{+k}; r_k + r_{-k} = 4/L
  std::vector<Complex> residues_conj;  // r_{-k} for mu_{-k}
  double real_pole = 0.0;         // -E/c_d

  /// Pole pairs flattened as mu_{+1}, mu_{-1}, mu_{+2}, ...
  std::vector<Complex> pole_list() const;
  std::vector<Complex> zero_list() const;
};

double inertia_from_cross_section(double base, double height);

/// Principal fourth root of -s^2/(EI + s c_d I), argument in (-pi/4, pi/4].
Complex eval_m(Complex s, const BeamParams& p);

/// Exact irrational transfer function, evaluated with exponential scaling so
/// that it stays finite far beyond the cosh overflow threshold.
Complex eval_H_orig(Complex s, const BeamParams& p);

/// Same formula without scaling; overflows once L*|Re m| exceeds ~710.
Complex eval_H_orig_unscaled(Complex s, const BeamParams& p);

/// Transfer function for a caller-chosen fourth root `m` of
/// -s^2/(EI + s c_d I). Used to check branch independence.
Complex eval_H_with_root(Complex s, Complex m, const BeamParams& p);

/// Positive roots of 1 + cosh(x) cos(x) = 0 divided by L, ascending.
std::vector<double> alpha_roots(int count, double length);

/// Positive roots of cosh(x) sin(x) - sinh(x) cos(x) = 0 divided by L.
std::vector<double> gamma_roots(int count, double length);

BeamSpectrum spectrum(int count_pairs, const BeamParams& p);

/// Roots of s^2 + c_d I k^4 s + EI k^4 = 0; returns the member with Im >= 0.
Complex modal_quadratic_root(double wavenumber, const BeamParams& p);

/// First `terms` terms of (1/L) sum 4s/(s^2 + c_d I a_k^4 s + EI a_k^4), the
/// partial-fraction expansion of eval_H_orig.
Complex eval_H_modal(Complex s, const BeamParams& p, int terms);

/// Same partial sum using precomputed alphas (size >= terms).
Complex eval_H_modal(Complex s, const BeamParams& p, const std::vector<double>& alphas,
                     int terms);

}  // namespace loewner::beam
