// SPDX-License-Identifier: Apache-2.0
//
// MPS reader (fixed and free format) and normalization into >= form.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdive/problem.hpp"

namespace cdive {

class MpsError : public std::runtime_error {
 public:
  MpsError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

enum class RowSense { Less, Equal, Greater };

struct RawRow {
  std::string name;
  RowSense sense = RowSense::Greater;
  double rhs = 0.0;
  std::optional<double> range;
};

struct RawColumn {
  std::string name;
  bool integer = false;
  double lower = 0.0;
  double upper = kInf;
  /// Coefficients as (row index, value); the objective row is kept apart.
  std::vector<std::pair<int, double>> entries;
  double cost = 0.0;
};

/// Transcription of an MPS file.
struct RawProblem {
  std::string name;
  bool maximize = false;
  std::string objective_name;
  /// RHS given on the objective row; the objective constant is its negation.
  double objective_rhs = 0.0;
  std::vector<RawRow> rows;
  std::vector<RawColumn> columns;
  bool free_format = false;
};

RawProblem parse_mps(std::string_view text);
RawProblem parse_mps_file(const std::string& path);

/// Maximization is turned into minimization, <= rows are negated, equality
/// and ranged rows become two >= rows, integer bounds are rounded inwards.
/// Throws MpsError (line 0) on crossed bounds.
Problem normalize(const RawProblem& raw);

/// Raw view of an already normalized problem (every row is a >= row).
RawProblem to_raw(const Problem& p);

/// Free-format MPS of a normalized problem.
void write_mps(std::ostream& os, const Problem& p);
std::string write_mps(const Problem& p);

}  // namespace cdive
