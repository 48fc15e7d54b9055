#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace loewner {

using Complex = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using RealRowVector = Eigen::RowVectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVector = Eigen::RowVectorXcd;

// Row-major dense storage for assembled FEM operators.
using DenseRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Transfer-function handle: maps a complex frequency to H(s).
using Evaluator = std::function<Complex(Complex)>;

/// One frequency point and the transfer value measured there.
struct FrequencySample {
  Complex s;
  Complex value;

  bool operator==(const FrequencySample&) const = default;
};

using SampleSet = std::vector<FrequencySample>;

inline constexpr Complex kJ{0.0, 1.0};

}  // namespace loewner
