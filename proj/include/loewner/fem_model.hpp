#pragma once

#include "loewner/beam_model.hpp"
#include "loewner/types.hpp"

// Finite-difference semi-discretization of the damped cantilever. The beam is
// split into N+2 intervals; the clamped end removes w_0 and w_1, the free-end
// conditions eliminate w_{N+1} and w_{N+2}, leaving v = [w_2 .. w_N].
namespace loewner::fem {

struct SecondOrderSystem {
  DenseRowMajor mass;       // M (identity)
  DenseRowMajor damping;    // J = (c_d I / h^4) * stencil
  DenseRowMajor stiffness;  // K = (EI / h^4) * stencil
  RealVector input;         // f
  RealRowVector out_position;  // c1
  RealRowVector out_velocity;  // c2
  double feedthrough = 0.0;    // d = 2 h^3
  double mesh_h = 0.0;
  int intervals = 0;           // N
  int half_bandwidth = 2;      // nonzeros satisfy |i - j| <= half_bandwidth

  Eigen::Index dim() const { return stiffness.rows(); }
};

/// Descriptor form G x' = A x + B u with x = [v; v'].
struct FirstOrderSystem {
  DenseRowMajor descriptor;  // G = diag(I, M)
  DenseRowMajor state;       // A = [[0, I], [-K, -J]]
  RealVector input;          // B = [0; f]
  RealRowVector output;      // C = [c1, c2]
  double feedthrough = 0.0;  // D
};

/// Throws DomainError for N < 6.
SecondOrderSystem assemble_second_order(int intervals, const beam::BeamParams& p);

FirstOrderSystem to_first_order(const SecondOrderSystem& sys);

/// s/(EI + s c_d I) [C (sG - A)^{-1} B + D] with one dense LU per call.
Complex eval_H_fem(Complex s, const FirstOrderSystem& sys, const beam::BeamParams& p);

/// Same transfer function through the second-order form
/// s/(EI + s c_d I) [(c1 + s c2)(s^2 M + s J + K)^{-1} f + d], solved with a
/// banded LU. O(N) per call.
Complex eval_H_fem(Complex s, const SecondOrderSystem& sys, const beam::BeamParams& p);

}  // namespace loewner::fem
