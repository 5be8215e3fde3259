// SPDX-License-Identifier: Apache-2.0
//
// Dense LU factorization of a simplex basis with a product-form eta file
// for column replacements.

#pragma once

#include <span>
#include <vector>

namespace cdive {

class BasisFactor {
 public:
  /// `columns[k]` is the dense k-th basis column (length m).
  /// Returns the positions k whose column turned out dependent; the
  /// factorization is unusable until they are replaced and refactored.
  std::vector<int> factor(const std::vector<std::vector<double>>& columns,
                          double singular_tol = 1e-11);

  /// Rows not reached by any pivot after a rank-deficient factor().
  const std::vector<int>& uncovered_rows() const { return uncovered_; }

  int dim() const { return m_; }
  int updates() const { return static_cast<int>(etas_.size()); }

  /// x <- B^{-1} x
  void ftran(std::span<double> x) const;
  /// y <- B^{-T} y
  void btran(std::span<double> y) const;

  /// Basis column at position p replaced; `d` is B^{-1} a_q for the old B.
  void update(int p, std::span<const double> d);

 private:
  struct Eta {
    int pos;
    std::vector<double> d;
  };

  int m_ = 0;
  // Row-major working matrix after elimination; row pivot_row_[k] holds the
  // k-th row of U, multipliers live in lower_.
  std::vector<double> u_;
  std::vector<double> lower_;
  std::vector<int> pivot_row_;
  // Rows eliminated at step k, in elimination order, for the L solves.
  std::vector<std::vector<int>> step_rows_;
  std::vector<int> uncovered_;
  std::vector<Eta> etas_;
};

}  // namespace cdive
