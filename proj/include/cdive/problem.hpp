// SPDX-License-Identifier: Apache-2.0
//
// In-memory MIP model in the canonical form
//
//   min c^T x  s.t.  A x >= b,  lb <= x <= ub,  x_j integer for j in I
//
// together with candidate points and feasibility checking.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdive {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline constexpr double kDefaultFeasTol = 1e-6;
inline constexpr double kDefaultIntTol = 1e-6;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Non-owning view of a sparse vector.
struct SparseSpan {
  std::span<const int> index;
  std::span<const double> value;

  std::size_t size() const { return index.size(); }
  bool empty() const { return index.empty(); }
};

/// Owning sparse vector, indices strictly increasing.
struct SparseVector {
  std::vector<int> index;
  std::vector<double> value;

  SparseSpan view() const { return {index, value}; }
  std::size_t size() const { return index.size(); }
  bool empty() const { return index.empty(); }
  void push(int i, double v) {
    index.push_back(i);
    value.push_back(v);
  }
};

double dot(SparseSpan a, std::span<const double> x);
double max_abs(SparseSpan a);

/// Compressed matrix that keeps row-major and column-major copies in sync.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Zero values are dropped and duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return row_index_.size(); }

  SparseSpan row(int i) const;
  SparseSpan col(int j) const;

  /// Coefficient lookup by binary search in the row; 0 if absent.
  double coeff(int i, int j) const;

  /// True iff every row-major entry appears with the same value in the
  /// column-major copy and vice versa.
  bool views_agree() const;

  std::vector<Triplet> triplets() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<int> row_index_;
  std::vector<double> row_value_;
  std::vector<std::size_t> col_start_{0};
  std::vector<int> col_index_;
  std::vector<double> col_value_;
};

/// Plain data used to construct a Problem.
struct ProblemData {
  std::string name;
  std::vector<double> objective;
  std::vector<Triplet> entries;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;
  /// Constant added to c^T x when reporting (in the minimization sense).
  double objective_offset = 0.0;
  /// Set when the source model maximized and c was negated.
  bool negated_objective = false;
};

/// Immutable MIP in >= form.
class Problem {
 public:
  Problem() = default;
  explicit Problem(ProblemData data);

  int n() const { return static_cast<int>(objective_.size()); }
  int m() const { return static_cast<int>(rhs_.size()); }

  const std::string& name() const { return name_; }
  std::span<const double> objective() const { return objective_; }
  const SparseMatrix& matrix() const { return matrix_; }
  std::span<const double> rhs() const { return rhs_; }
  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  bool is_integer(int j) const { return integer_[static_cast<std::size_t>(j)]; }
  /// Sorted indices of the integer variables.
  std::span<const int> integers() const { return int_list_; }
  const std::string& var_name(int j) const;
  const std::string& row_name(int i) const;
  double objective_offset() const { return objective_offset_; }
  bool negated_objective() const { return negated_objective_; }

  SparseSpan row(int i) const { return matrix_.row(i); }
  SparseSpan col(int j) const { return matrix_.col(j); }

  bool has_zero_objective() const;

  /// c^T x (offset not included).
  double evaluate(std::span<const double> x) const;

  /// Objective as reported to the user: offset added and the sign of a
  /// maximization model restored.
  double user_objective(double internal) const;

  ProblemData to_data() const;

  /// Copy with one extra >= row appended.
  Problem with_row(const SparseVector& row, double rhs,
                   std::string row_name) const;

 private:
  std::string name_;
  std::vector<double> objective_;
  SparseMatrix matrix_;
  std::vector<double> rhs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> integer_;
  std::vector<int> int_list_;
  std::vector<std::string> var_names_;
  std::vector<std::string> row_names_;
  double objective_offset_ = 0.0;
  bool negated_objective_ = false;
};

/// Dense convenience constructor, mostly for tests and generators.
Problem make_problem(std::vector<double> c,
                     const std::vector<std::vector<double>>& rows,
                     std::vector<double> b, std::vector<double> lb,
                     std::vector<double> ub, const std::vector<int>& ints);

/// Candidate solution with cached objective.
struct Point {
  std::vector<double> values;
  double objective = 0.0;
};

Point make_point(const Problem& p, std::vector<double> values);

/// Local bounds lb', ub' of a subproblem.
struct LocalBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static LocalBounds of(const Problem& p);
  int size() const { return static_cast<int>(lower.size()); }
  bool consistent() const;
  bool operator==(const LocalBounds&) const = default;
};

/// First invariant violation found, if any.
std::optional<std::string> validate(const Problem& p);

enum class Violation { None, Row, Bound, Integrality };

struct FeasibilityReport {
  Violation kind = Violation::None;
  int index = -1;
  double amount = 0.0;

  bool feasible() const { return kind == Violation::None; }
};

/// Throws std::invalid_argument on dimension mismatch.
FeasibilityReport check_feasible(const Problem& p, std::span<const double> x,
                                 double feas_tol = kDefaultFeasTol,
                                 double int_tol = kDefaultIntTol);

class UnboundedPseudoSolution : public std::runtime_error {
 public:
  explicit UnboundedPseudoSolution(std::vector<int> vars);
  const std::vector<int>& vars() const { return vars_; }

 private:
  std::vector<int> vars_;
};

/// Every variable at its objective-best bound. Ties (c_j = 0) take lb_j if
/// finite, else ub_j if finite, else 0. Throws UnboundedPseudoSolution when
/// the best bound of some j with c_j != 0 is infinite.
Point pseudo_solution(const Problem& p);
Point pseudo_solution(const Problem& p, const LocalBounds& bounds);

inline bool is_integral(double v, double tol = kDefaultIntTol) {
  return std::abs(v - std::round(v)) <= tol;
}

/// x - floor(x), in [0, 1).
double fractionality(double v);

}  // namespace cdive
