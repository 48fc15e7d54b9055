#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "loewner/errors.hpp"

namespace loewner {

/// Square band matrix in LAPACK general-band layout with room for the fill
/// produced by partial pivoting. Entry (i, j) is addressable for
/// j - ku - kl <= i <= j + kl.
template <class T>
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), data_(ld_ * n, T{}) {}

  std::size_t size() const noexcept { return n_; }

  T& at(std::size_t i, std::size_t j) { return data_[kl_ + ku_ + i - j + j * ld_]; }
  const T& at(std::size_t i, std::size_t j) const {
    return data_[kl_ + ku_ + i - j + j * ld_];
  }

  /// Gaussian elimination with row partial pivoting; destroys the matrix and
  /// returns the solution of A x = rhs. Throws NumericalError on a zero pivot.
  std::vector<T> solve(std::vector<T> rhs) {
    const std::size_t n = n_;
    const std::size_t reach = kl_ + ku_;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t last_row = std::min(n - 1, j + kl_);
      std::size_t piv = j;
      double best = std::abs(at(j, j));
      for (std::size_t i = j + 1; i <= last_row; ++i) {
        const double mag = std::abs(at(i, j));
        if (mag > best) {
          best = mag;
          piv = i;
        }
      }
      if (best == 0.0) throw NumericalError("banded solve: matrix is singular");
      const std::size_t last_col = std::min(n - 1, j + reach);
      if (piv != j) {
        for (std::size_t c = j; c <= last_col; ++c) std::swap(at(j, c), at(piv, c));
        std::swap(rhs[j], rhs[piv]);
      }
      const T pivot = at(j, j);
      for (std::size_t i = j + 1; i <= last_row; ++i) {
        const T l = at(i, j) / pivot;
        if (l == T{}) continue;
        at(i, j) = T{};
        for (std::size_t c = j + 1; c <= last_col; ++c) at(i, c) -= l * at(j, c);
        rhs[i] -= l * rhs[j];
      }
    }
    for (std::size_t ii = n; ii-- > 0;) {
      T acc = rhs[ii];
      const std::size_t last_col = std::min(n - 1, ii + reach);
      for (std::size_t c = ii + 1; c <= last_col; ++c) acc -= at(ii, c) * rhs[c];
      rhs[ii] = acc / at(ii, ii);
    }
    return rhs;
  }

 private:
  std::size_t n_, kl_, ku_, ld_;
  std::vector<T> data_;
};

}  // namespace loewner
