// SPDX-License-Identifier: Apache-2.0

#include "cdive/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cdive {

double dot(SparseSpan a, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a.value[k] * x[a.index[k]];
  return sum;
}

double max_abs(SparseSpan a) {
  double best = 0.0;
  for (double v : a.value) best = std::max(best, std::abs(v));
  return best;
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::out_of_range("matrix entry out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  // Merge duplicates, then drop exact zeros.
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

  SparseMatrix mat;
  mat.rows_ = rows;
  mat.cols_ = cols;
  mat.row_start_.assign(static_cast<std::size_t>(rows) + 1, 0);
  mat.col_start_.assign(static_cast<std::size_t>(cols) + 1, 0);
  mat.row_index_.reserve(merged.size());
  mat.row_value_.reserve(merged.size());
  for (const Triplet& t : merged) {
    ++mat.row_start_[static_cast<std::size_t>(t.row) + 1];
    ++mat.col_start_[static_cast<std::size_t>(t.col) + 1];
    mat.row_index_.push_back(t.col);
    mat.row_value_.push_back(t.value);
  }
  std::partial_sum(mat.row_start_.begin(), mat.row_start_.end(), mat.row_start_.begin());
  std::partial_sum(mat.col_start_.begin(), mat.col_start_.end(), mat.col_start_.begin());

  mat.col_index_.resize(merged.size());
  mat.col_value_.resize(merged.size());
  std::vector<std::size_t> fill(mat.col_start_.begin(), mat.col_start_.end() - 1);
  for (const Triplet& t : merged) {
    std::size_t& at = fill[static_cast<std::size_t>(t.col)];
    mat.col_index_[at] = t.row;
    mat.col_value_[at] = t.value;
    ++at;
  }
  return mat;
}

SparseSpan SparseMatrix::row(int i) const {
  const std::size_t b = row_start_[static_cast<std::size_t>(i)];
  const std::size_t e = row_start_[static_cast<std::size_t>(i) + 1];
  return {std::span<const int>(row_index_).subspan(b, e - b),
          std::span<const double>(row_value_).subspan(b, e - b)};
}

SparseSpan SparseMatrix::col(int j) const {
  const std::size_t b = col_start_[static_cast<std::size_t>(j)];
  const std::size_t e = col_start_[static_cast<std::size_t>(j) + 1];
  return {std::span<const int>(col_index_).subspan(b, e - b),
          std::span<const double>(col_value_).subspan(b, e - b)};
}

double SparseMatrix::coeff(int i, int j) const {
  SparseSpan r = row(i);
  auto it = std::lower_bound(r.index.begin(), r.index.end(), j);
  if (it == r.index.end() || *it != j) return 0.0;
  return r.value[static_cast<std::size_t>(it - r.index.begin())];
}

bool SparseMatrix::views_agree() const {
  if (row_index_.size() != col_index_.size()) return false;
  for (int j = 0; j < cols_; ++j) {
    SparseSpan c = col(j);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (coeff(c.index[k], j) != c.value[k]) return false;
    }
  }
  return true;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (int i = 0; i < rows_; ++i) {
    SparseSpan r = row(i);
    for (std::size_t k = 0; k < r.size(); ++k) out.push_back({i, r.index[k], r.value[k]});
  }
  return out;
}

Problem::Problem(ProblemData data)
    : name_(std::move(data.name)),
      objective_(std::move(data.objective)),
      rhs_(std::move(data.rhs)),
      lower_(std::move(data.lower)),
      upper_(std::move(data.upper)),
      integer_(std::move(data.integer)),
      var_names_(std::move(data.var_names)),
      row_names_(std::move(data.row_names)),
      objective_offset_(data.objective_offset),
      negated_objective_(data.negated_objective) {
  const std::size_t nv = objective_.size();
  if (lower_.size() != nv || upper_.size() != nv)
    throw std::invalid_argument("bound vectors must have length n");
  if (integer_.empty()) integer_.assign(nv, false);
  if (integer_.size() != nv) throw std::invalid_argument("integrality vector must have length n");
  matrix_ = SparseMatrix::from_triplets(static_cast<int>(rhs_.size()), static_cast<int>(nv),
                                        std::move(data.entries));
  for (int j = 0; j < static_cast<int>(nv); ++j)
    if (integer_[static_cast<std::size_t>(j)]) int_list_.push_back(j);
  if (var_names_.size() != nv) {
    var_names_.resize(nv);
    for (std::size_t j = 0; j < nv; ++j)
      if (var_names_[j].empty()) var_names_[j] = "x" + std::to_string(j);
  }
  if (row_names_.size() != rhs_.size()) {
    row_names_.resize(rhs_.size());
    for (std::size_t i = 0; i < rhs_.size(); ++i)
      if (row_names_[i].empty()) row_names_[i] = "r" + std::to_string(i);
  }
}

const std::string& Problem::var_name(int j) const {
  return var_names_[static_cast<std::size_t>(j)];
}

const std::string& Problem::row_name(int i) const {
  return row_names_[static_cast<std::size_t>(i)];
}

bool Problem::has_zero_objective() const {
  return std::all_of(objective_.begin(), objective_.end(), [](double v) { return v == 0.0; });
}

double Problem::evaluate(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) sum += objective_[j] * x[j];
  return sum;
}

double Problem::user_objective(double internal) const {
  const double v = internal + objective_offset_;
  return negated_objective_ ? -v : v;
}

ProblemData Problem::to_data() const {
  ProblemData d;
  d.name = name_;
  d.objective = objective_;
  d.entries = matrix_.triplets();
  d.rhs = rhs_;
  d.lower = lower_;
  d.upper = upper_;
  d.integer = integer_;
  d.var_names = var_names_;
  d.row_names = row_names_;
  d.objective_offset = objective_offset_;
  d.negated_objective = negated_objective_;
  return d;
}

Problem Problem::with_row(const SparseVector& row, double rhs, std::string row_name) const {
  ProblemData d = to_data();
  const int i = m();
  for (std::size_t k = 0; k < row.size(); ++k) d.entries.push_back({i, row.index[k], row.value[k]});
  d.rhs.push_back(rhs);
  d.row_names.push_back(std::move(row_name));
  return Problem(std::move(d));
}

Problem make_problem(std::vector<double> c, const std::vector<std::vector<double>>& rows,
                     std::vector<double> b, std::vector<double> lb, std::vector<double> ub,
                     const std::vector<int>& ints) {
  ProblemData d;
  const std::size_t nv = c.size();
  d.objective = std::move(c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nv) throw std::invalid_argument("dense row has wrong length");
    for (std::size_t j = 0; j < nv; ++j)
      if (rows[i][j] != 0.0)
        d.entries.push_back({static_cast<int>(i), static_cast<int>(j), rows[i][j]});
  }
  d.rhs = std::move(b);
  d.lower = std::move(lb);
  d.upper = std::move(ub);
  d.integer.assign(nv, false);
  for (int j : ints) d.integer.at(static_cast<std::size_t>(j)) = true;
  return Problem(std::move(d));
}

Point make_point(const Problem& p, std::vector<double> values) {
  Point pt;
  pt.objective = p.evaluate(values);
  pt.values = std::move(values);
  return pt;
}

LocalBounds LocalBounds::of(const Problem& p) {
  return {std::vector<double>(p.lower().begin(), p.lower().end()),
          std::vector<double>(p.upper().begin(), p.upper().end())};
}

bool LocalBounds::consistent() const {
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j]) return false;
  return true;
}

std::optional<std::string> validate(const Problem& p) {
  const int n = p.n();
  for (int j = 0; j < n; ++j) {
    const double lo = p.lower()[j];
    const double up = p.upper()[j];
    const double c = p.objective()[j];
    if (std::isnan(lo) || std::isnan(up) || !std::isfinite(c))
      return "invalid number at j=" + std::to_string(j);
    if (lo == kInf || up == -kInf) return "infinite bound on wrong side at j=" + std::to_string(j);
    if (lo > up) return "crossed bounds at j=" + std::to_string(j);
    if (p.is_integer(j)) {
      if ((std::isfinite(lo) && lo != std::ceil(lo)) || (std::isfinite(up) && up != std::floor(up)))
        return "non-integral bound on integer variable at j=" + std::to_string(j);
    }
  }
  for (int i = 0; i < p.m(); ++i) {
    if (std::isnan(p.rhs()[i]) || p.rhs()[i] == kInf)
      return "invalid right-hand side at i=" + std::to_string(i);
    for (double v : p.row(i).value)
      if (!std::isfinite(v)) return "non-finite coefficient in row " + std::to_string(i);
  }
  if (!p.matrix().views_agree()) return "row and column views disagree";
  return std::nullopt;
}

FeasibilityReport check_feasible(const Problem& p, std::span<const double> x, double feas_tol,
                                 double int_tol) {
  if (static_cast<int>(x.size()) != p.n())
    throw std::invalid_argument("point has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(p.n()));
  for (int j = 0; j < p.n(); ++j) {
    const double below = p.lower()[j] - x[j];
    const double above = x[j] - p.upper()[j];
    if (below > feas_tol) return {Violation::Bound, j, below};
    if (above > feas_tol) return {Violation::Bound, j, above};
  }
  for (int i = 0; i < p.m(); ++i) {
    SparseSpan r = p.row(i);
    const double scale = std::max(1.0, max_abs(r));
    const double slack = dot(r, x) - p.rhs()[i];
    if (slack < -feas_tol * scale) return {Violation::Row, i, -slack};
  }
  for (int j : p.integers()) {
    const double dist = std::abs(x[j] - std::round(x[j]));
    if (dist > int_tol) return {Violation::Integrality, j, dist};
  }
  return {};
}

namespace {
std::string describe_vars(const std::vector<int>& vars) {
  std::ostringstream os;
  os << "unbounded pseudo solution at j=";
  for (std::size_t k = 0; k < vars.size(); ++k) os << (k ? "," : "") << vars[k];
  return os.str();
}
}  // namespace

UnboundedPseudoSolution::UnboundedPseudoSolution(std::vector<int> vars)
    : std::runtime_error(describe_vars(vars)), vars_(std::move(vars)) {}

Point pseudo_solution(const Problem& p, const LocalBounds& bounds) {
  std::vector<double> x(static_cast<std::size_t>(p.n()), 0.0);
  std::vector<int> unbounded;
  for (int j = 0; j < p.n(); ++j) {
    const double c = p.objective()[j];
    const double lo = bounds.lower[static_cast<std::size_t>(j)];
    const double up = bounds.upper[static_cast<std::size_t>(j)];
    double v;
    if (c < 0.0)
      v = up;
    else if (c > 0.0)
      v = lo;
    else
      v = std::isfinite(lo) ? lo : (std::isfinite(up) ? up : 0.0);
    if (!std::isfinite(v)) unbounded.push_back(j);
    x[static_cast<std::size_t>(j)] = v;
  }
  if (!unbounded.empty()) throw UnboundedPseudoSolution(std::move(unbounded));
  return make_point(p, std::move(x));
}

Point pseudo_solution(const Problem& p) { return pseudo_solution(p, LocalBounds::of(p)); }

double fractionality(double v) { return v - std::floor(v); }

}  // namespace cdive
