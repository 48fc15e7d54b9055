#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "loewner/types.hpp"

namespace testing {

using loewner::Complex;

inline double rel_err(Complex got, Complex want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

inline double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

// Values frozen from a 50-digit mpmath evaluation of the defining formulas
// (aluminum cantilever: L = 0.7, E = 6.9e10, b = 0.07, h = 0.0085, c_d = 5e-4).
namespace frozen {
inline constexpr double kInertia = 3.5823958333333333333e-9;
inline constexpr double kEI = 247.1853125;
inline constexpr double kCdI = 1.7911979166666666667e-12;
inline constexpr double kAlphaL[5] = {1.8751040687119611664, 4.6940911329741745764,
                                      7.8547574382376125649, 10.995540734875466991,
                                      14.137168391046470581};
inline constexpr double kGammaL[5] = {3.9266023120479187782, 7.0685827456287320886,
                                      10.210176122813030545, 13.351768777754093124,
                                      16.493361431346409781};
struct HValue {
  double omega;
  double re;
  double im;
};
inline constexpr HValue kH[5] = {
    {10.0, 3.4035156462632863675e-16, 0.0046609898307150430507},
    {100.0, 7.0959729799200854579e-13, 0.21091087101105494906},
    {1000.0, 1.0763532865229824224e-13, -0.014556168924101433104},
    {1e4, 5.8441773777675364272e-12, -0.0089251253884104893434},
    {3e4, 5.2444332659409604464e-12, -0.0030751499661376199473},
};
// H(-50 + 300j)
inline constexpr double kHOffAxisRe = -0.0057337815125860815511;
inline constexpr double kHOffAxisIm = -0.016335017849494980543;
inline constexpr double kMu1Re = -4.6112951916747579981e-11;
inline constexpr double kMu1Im = 112.81478063189385148;
}  // namespace frozen

/// Strictly proper real rational function sum r_k/(s - p_k) with poles in
/// the open left half-plane; complex poles come in conjugate pairs.
struct RationalOracle {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  double feedthrough = 0.0;

  Complex operator()(Complex s) const {
    Complex h = feedthrough;
    for (std::size_t k = 0; k < poles.size(); ++k) h += residues[k] / (s - poles[k]);
    return h;
  }
  int order() const { return static_cast<int>(poles.size()); }
};

/// Random stable system of exactly `order` with well separated poles whose
/// magnitudes lie in [1, 100].
inline RationalOracle random_stable(std::mt19937_64& rng, int order) {
  std::uniform_real_distribution<double> logmag(0.0, 2.0);
  std::uniform_real_distribution<double> damping(0.05, 0.8);
  std::uniform_real_distribution<double> res(0.5, 2.0);
  std::uniform_real_distribution<double> phase(-1.0, 1.0);
  RationalOracle sys;
  auto far_enough = [&](Complex p) {
    for (const auto& q : sys.poles) {
      if (std::abs(p - q) < 0.15 * std::abs(p)) return false;
    }
    return true;
  };
  while (sys.order() < order) {
    const double mag = std::pow(10.0, logmag(rng));
    if (order - sys.order() >= 2 && phase(rng) > -0.3) {
      const double zeta = damping(rng);
      const Complex p{-zeta * mag, mag * std::sqrt(1.0 - zeta * zeta)};
      if (!far_enough(p)) continue;
      const Complex r = std::polar(res(rng) * mag, phase(rng));
      sys.poles.push_back(p);
      sys.residues.push_back(r);
      sys.poles.push_back(std::conj(p));
      sys.residues.push_back(std::conj(r));
    } else {
      const Complex p{-mag, 0.0};
      if (!far_enough(p)) continue;
      sys.poles.push_back(p);
      sys.residues.push_back(res(rng) * mag);
    }
  }
  return sys;
}

}  // namespace testing
