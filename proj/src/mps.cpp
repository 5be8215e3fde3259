// SPDX-License-Identifier: Apache-2.0

#include "cdive/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace cdive {

MpsError::MpsError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

namespace {

enum class Section { None, Name, Rows, Columns, Rhs, Ranges, Bounds, ObjSense, End };

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Fixed MPS fields as 0-based [begin, end) column ranges.
constexpr std::pair<std::size_t, std::size_t> kFixedFields[] = {
    {1, 3}, {4, 12}, {14, 22}, {24, 36}, {39, 47}, {49, 61}};

// Fields of a line read at fixed positions, or nullopt when the line does
// not respect the fixed layout.
std::optional<std::vector<std::string>> fixed_fields(std::string_view line) {
  std::size_t len = line.size();
  while (len > 0 && std::isspace(static_cast<unsigned char>(line[len - 1]))) --len;
  line = line.substr(0, len);
  if (line.size() > 61) return std::nullopt;
  std::vector<bool> in_field(line.size(), false);
  for (auto [b, e] : kFixedFields)
    for (std::size_t c = b; c < std::min(e, line.size()); ++c) in_field[c] = true;
  for (std::size_t c = 0; c < line.size(); ++c)
    if (!in_field[c] && !std::isspace(static_cast<unsigned char>(line[c]))) return std::nullopt;
  std::vector<std::string> out;
  for (auto [b, e] : kFixedFields) {
    if (b >= line.size()) break;
    out.push_back(trim(line.substr(b, std::min(e, line.size()) - b)));
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  // A field that is blank in the middle means the line uses omitted fields,
  // which only free format allows.
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].empty()) return std::nullopt;
  return out;
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::string upper(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

class Parser {
 public:
  RawProblem run(std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no_;
      handle_line(line);
      if (section_ == Section::End) break;
      pos = nl + 1;
    }
    if (section_ != Section::End && !saw_any_) throw MpsError(line_no_, "empty input");
    raw_.free_format = free_;
    return std::move(raw_);
  }

 private:
  void handle_line(std::string_view line) {
    if (line.empty() || line[0] == '*') return;
    if (trim(line).empty()) return;
    saw_any_ = true;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      header(line);
      return;
    }
    std::vector<std::string> tokens = split_ws(line);
    if (section_ == Section::Columns && is_marker(tokens)) return;
    // The sense line is a single word wherever it sits.
    if (section_ == Section::ObjSense) {
      data(tokens);
      return;
    }
    std::vector<std::string> fields;
    if (!free_) {
      auto fixed = fixed_fields(line);
      if (fixed && fixed_numbers_ok(*fixed)) {
        fields = std::move(*fixed);
        // Field 1 is unused outside ROWS and BOUNDS.
        if (!fields.empty() && fields.front().empty()) fields.erase(fields.begin());
      } else {
        free_ = true;
      }
    }
    if (free_) fields = std::move(tokens);
    data(fields);
  }

  // Numeric columns of the current section must parse in fixed mode.
  bool fixed_numbers_ok(const std::vector<std::string>& f) const {
    auto numeric_at = [&](std::size_t k) { return k >= f.size() || to_number(f[k]).has_value(); };
    switch (section_) {
      case Section::Columns:
      case Section::Rhs:
      case Section::Ranges:
        return numeric_at(3) && numeric_at(5) && f.size() >= 4;
      case Section::Bounds: {
        if (f.empty()) return false;
        const std::string t = upper(f[0]);
        if (t == "FR" || t == "MI" || t == "PL") return f.size() >= 3;
        if (t == "BV" && f.size() == 3) return true;
        return f.size() >= 4 && numeric_at(3);
      }
      case Section::Rows:
        return f.size() == 2;
      default:
        return true;
    }
  }

  void header(std::string_view line) {
    std::vector<std::string> tok = split_ws(line);
    const std::string key = upper(tok[0]);
    if (key == "NAME") {
      section_ = Section::Name;
      if (tok.size() > 1) raw_.name = trim(line.substr(line.find(tok[0]) + tok[0].size()));
    } else if (key == "ROWS") {
      section_ = Section::Rows;
    } else if (key == "COLUMNS") {
      section_ = Section::Columns;
    } else if (key == "RHS") {
      section_ = Section::Rhs;
    } else if (key == "RANGES") {
      section_ = Section::Ranges;
    } else if (key == "BOUNDS") {
      section_ = Section::Bounds;
    } else if (key == "OBJSENSE") {
      section_ = Section::ObjSense;
      if (tok.size() > 1) objsense(tok[1]);
    } else if (key == "ENDATA") {
      section_ = Section::End;
    } else {
      throw MpsError(line_no_, "unknown section '" + tok[0] + "'");
    }
  }

  void objsense(const std::string& word) {
    const std::string w = upper(word);
    if (w == "MAX" || w == "MAXIMIZE")
      raw_.maximize = true;
    else if (w == "MIN" || w == "MINIMIZE")
      raw_.maximize = false;
    else
      throw MpsError(line_no_, "unknown objective sense '" + word + "'");
  }

  bool is_marker(const std::vector<std::string>& tokens) {
    if (tokens.size() < 3 || tokens[1] != "'MARKER'") return false;
    const std::string kind = tokens[2];
    if (kind == "'INTORG'")
      in_int_ = true;
    else if (kind == "'INTEND'")
      in_int_ = false;
    else
      throw MpsError(line_no_, "unknown marker " + kind);
    return true;
  }

  void data(const std::vector<std::string>& f) {
    switch (section_) {
      case Section::Rows:
        row_record(f);
        break;
      case Section::Columns:
        column_record(f);
        break;
      case Section::Rhs:
        rhs_record(f, false);
        break;
      case Section::Ranges:
        rhs_record(f, true);
        break;
      case Section::Bounds:
        bound_record(f);
        break;
      case Section::ObjSense:
        if (f.empty()) throw MpsError(line_no_, "missing objective sense");
        objsense(f[0]);
        break;
      case Section::Name:
        if (raw_.name.empty() && !f.empty()) raw_.name = f[0];
        break;
      default:
        throw MpsError(line_no_, "data line outside of a section");
    }
  }

  void row_record(const std::vector<std::string>& f) {
    if (f.size() != 2) throw MpsError(line_no_, "ROWS record needs a type and a name");
    const std::string type = upper(f[0]);
    const std::string& name = f[1];
    if (row_index_.count(name) || name == raw_.objective_name || dropped_rows_.count(name))
      throw MpsError(line_no_, "duplicate row name '" + name + "'");
    if (type == "N") {
      if (raw_.objective_name.empty())
        raw_.objective_name = name;
      else
        dropped_rows_.insert({name, 0});
      return;
    }
    RawRow row;
    row.name = name;
    if (type == "L")
      row.sense = RowSense::Less;
    else if (type == "G")
      row.sense = RowSense::Greater;
    else if (type == "E")
      row.sense = RowSense::Equal;
    else
      throw MpsError(line_no_, "unknown row type '" + f[0] + "'");
    row_index_[name] = static_cast<int>(raw_.rows.size());
    raw_.rows.push_back(std::move(row));
  }

  double number(const std::string& s) const {
    auto v = to_number(s);
    if (!v) throw MpsError(line_no_, "expected a number, got '" + s + "'");
    return *v;
  }

  void column_record(const std::vector<std::string>& f) {
    if (f.size() != 3 && f.size() != 5)
      throw MpsError(line_no_, "COLUMNS record needs 3 or 5 fields");
    const std::string& name = f[0];
    if (raw_.columns.empty() || raw_.columns.back().name != name) {
      if (col_index_.count(name)) throw MpsError(line_no_, "duplicate column name '" + name + "'");
      col_index_[name] = static_cast<int>(raw_.columns.size());
      RawColumn col;
      col.name = name;
      col.integer = in_int_;
      raw_.columns.push_back(std::move(col));
    }
    RawColumn& col = raw_.columns.back();
    for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
      const std::string& row = f[k];
      const double v = number(f[k + 1]);
      if (row == raw_.objective_name) {
        col.cost += v;
      } else if (dropped_rows_.count(row)) {
        continue;
      } else {
        auto it = row_index_.find(row);
        if (it == row_index_.end()) throw MpsError(line_no_, "unknown row '" + row + "'");
        col.entries.emplace_back(it->second, v);
      }
    }
  }

  void rhs_record(const std::vector<std::string>& f, bool ranges) {
    // The set name may be omitted in free format.
    std::size_t first = (f.size() % 2 == 1) ? 1 : 0;
    if (f.size() < 2 || f.size() > 5) throw MpsError(line_no_, "malformed RHS/RANGES record");
    for (std::size_t k = first; k + 1 < f.size(); k += 2) {
      const std::string& row = f[k];
      const double v = number(f[k + 1]);
      if (row == raw_.objective_name) {
        if (ranges) throw MpsError(line_no_, "range on objective row");
        raw_.objective_rhs = v;
        continue;
      }
      if (dropped_rows_.count(row)) continue;
      auto it = row_index_.find(row);
      if (it == row_index_.end()) throw MpsError(line_no_, "unknown row '" + row + "'");
      RawRow& r = raw_.rows[static_cast<std::size_t>(it->second)];
      if (ranges)
        r.range = v;
      else
        r.rhs = v;
    }
  }

  int column(const std::string& name) const {
    auto it = col_index_.find(name);
    if (it == col_index_.end()) throw MpsError(line_no_, "unknown column '" + name + "'");
    return it->second;
  }

  void bound_record(const std::vector<std::string>& f) {
    if (f.size() < 2) throw MpsError(line_no_, "malformed BOUNDS record");
    const std::string type = upper(f[0]);
    static const char* kKnown[] = {"UP", "LO", "FX", "FR", "MI", "PL", "BV", "LI", "UI"};
    if (std::find(std::begin(kKnown), std::end(kKnown), type) == std::end(kKnown))
      throw MpsError(line_no_, "unknown bound type '" + f[0] + "'");
    const bool no_value = type == "FR" || type == "MI" || type == "PL";
    std::string col_name;
    std::optional<double> value;
    if (no_value) {
      col_name = f.back();
    } else if (type == "BV") {
      if (f.size() == 4) {
        col_name = f[2];
        value = number(f[3]);
      } else if (f.size() == 3 && col_index_.count(f[1]) && to_number(f[2])) {
        col_name = f[1];
      } else {
        col_name = f.back();
      }
    } else {
      if (f.size() == 4) {
        col_name = f[2];
      } else if (f.size() == 3) {
        col_name = f[1];
      } else {
        throw MpsError(line_no_, "bound type " + type + " needs a value");
      }
      value = number(f.back());
    }
    RawColumn& col = raw_.columns[static_cast<std::size_t>(column(col_name))];
    auto& explicit_lb = lb_set_[col_name];
    if (type == "UP") {
      col.upper = *value;
      if (*value < 0.0 && col.lower == 0.0 && !explicit_lb) col.lower = -kInf;
    } else if (type == "LO") {
      col.lower = *value;
      explicit_lb = true;
    } else if (type == "FX") {
      col.lower = *value;
      col.upper = *value;
      explicit_lb = true;
    } else if (type == "FR") {
      col.lower = -kInf;
      col.upper = kInf;
    } else if (type == "MI") {
      col.lower = -kInf;
    } else if (type == "PL") {
      col.upper = kInf;
    } else if (type == "BV") {
      col.integer = true;
      col.lower = 0.0;
      col.upper = 1.0;
    } else if (type == "LI") {
      col.integer = true;
      col.lower = *value;
      explicit_lb = true;
    } else if (type == "UI") {
      col.integer = true;
      col.upper = *value;
      if (*value < 0.0 && col.lower == 0.0 && !explicit_lb) col.lower = -kInf;
    }
  }

  RawProblem raw_;
  Section section_ = Section::None;
  bool free_ = false;
  bool in_int_ = false;
  bool saw_any_ = false;
  int line_no_ = 0;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> dropped_rows_;
  std::unordered_map<std::string, int> col_index_;
  std::unordered_map<std::string, bool> lb_set_;
};

}  // namespace

RawProblem parse_mps(std::string_view text) { return Parser().run(text); }

RawProblem parse_mps_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MpsError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RawProblem raw = parse_mps(ss.str());
  if (raw.name.empty()) raw.name = path;
  return raw;
}

Problem normalize(const RawProblem& raw) {
  ProblemData d;
  d.name = raw.name;
  const double sign = raw.maximize ? -1.0 : 1.0;
  d.negated_objective = raw.maximize;
  // Objective constant is minus the RHS of the objective row.
  d.objective_offset = sign * -raw.objective_rhs;

  std::vector<std::vector<std::pair<int, double>>> row_entries(raw.rows.size());
  for (std::size_t j = 0; j < raw.columns.size(); ++j) {
    const RawColumn& col = raw.columns[j];
    for (auto [i, v] : col.entries)
      row_entries[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(j), v);
    double lo = col.lower;
    double up = col.upper;
    if (col.integer) {
      if (std::isfinite(lo)) lo = std::ceil(lo - 1e-9);
      if (std::isfinite(up)) up = std::floor(up + 1e-9);
    }
    if (lo > up) throw MpsError(0, "infeasible bounds for column '" + col.name + "'");
    d.objective.push_back(sign * col.cost);
    d.lower.push_back(lo);
    d.upper.push_back(up);
    d.integer.push_back(col.integer);
    d.var_names.push_back(col.name);
  }

  auto add_row = [&](std::size_t src, double factor, double rhs, std::string name) {
    const int i = static_cast<int>(d.rhs.size());
    for (auto [j, v] : row_entries[src]) d.entries.push_back({i, j, factor * v});
    d.rhs.push_back(rhs);
    d.row_names.push_back(std::move(name));
  };

  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const RawRow& r = raw.rows[i];
    double lo = -kInf;
    double up = kInf;
    switch (r.sense) {
      case RowSense::Greater:
        lo = r.rhs;
        if (r.range) up = r.rhs + std::abs(*r.range);
        break;
      case RowSense::Less:
        up = r.rhs;
        if (r.range) lo = r.rhs - std::abs(*r.range);
        break;
      case RowSense::Equal:
        lo = up = r.rhs;
        if (r.range && *r.range > 0) up = r.rhs + *r.range;
        if (r.range && *r.range < 0) lo = r.rhs + *r.range;
        break;
    }
    const bool two = std::isfinite(lo) && std::isfinite(up);
    if (std::isfinite(lo)) add_row(i, 1.0, lo, r.name);
    if (std::isfinite(up)) add_row(i, -1.0, -up, two ? r.name + "_neg" : r.name);
  }
  return Problem(std::move(d));
}

RawProblem to_raw(const Problem& p) {
  RawProblem raw;
  raw.name = p.name();
  raw.maximize = p.negated_objective();
  const double sign = raw.maximize ? -1.0 : 1.0;
  raw.objective_name = "obj";
  raw.objective_rhs = -sign * p.objective_offset();
  for (int i = 0; i < p.m(); ++i) raw.rows.push_back({p.row_name(i), RowSense::Greater, p.rhs()[i], {}});
  for (int j = 0; j < p.n(); ++j) {
    RawColumn col;
    col.name = p.var_name(j);
    col.integer = p.is_integer(j);
    col.lower = p.lower()[j];
    col.upper = p.upper()[j];
    col.cost = sign * p.objective()[j];
    SparseSpan c = p.col(j);
    for (std::size_t k = 0; k < c.size(); ++k) col.entries.emplace_back(c.index[k], c.value[k]);
    raw.columns.push_back(std::move(col));
  }
  return raw;
}

namespace {
std::string mps_name(const std::string& s) {
  std::string out = s;
  std::replace_if(out.begin(), out.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }, '_');
  return out.empty() ? "_" : out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_mps(std::ostream& os, const Problem& p) {
  os << "NAME " << mps_name(p.name().empty() ? "problem" : p.name()) << "\n";
  os << "ROWS\n N obj\n";
  for (int i = 0; i < p.m(); ++i) os << " G " << mps_name(p.row_name(i)) << "\n";
  os << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < p.n(); ++j) {
    if (p.is_integer(j) != in_int) {
      os << " M" << marker++ << " 'MARKER' " << (p.is_integer(j) ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = p.is_integer(j);
    }
    const std::string name = mps_name(p.var_name(j));
    bool wrote = false;
    if (p.objective()[j] != 0.0) {
      os << " " << name << " obj " << num(p.objective()[j]) << "\n";
      wrote = true;
    }
    SparseSpan c = p.col(j);
    for (std::size_t k = 0; k < c.size(); ++k) {
      os << " " << name << " " << mps_name(p.row_name(c.index[k])) << " " << num(c.value[k]) << "\n";
      wrote = true;
    }
    if (!wrote) os << " " << name << " obj 0\n";
  }
  if (in_int) os << " M" << marker++ << " 'MARKER' 'INTEND'\n";
  os << "RHS\n";
  if (p.objective_offset() != 0.0) os << " RHS obj " << num(-p.objective_offset()) << "\n";
  for (int i = 0; i < p.m(); ++i)
    if (p.rhs()[i] != 0.0) os << " RHS " << mps_name(p.row_name(i)) << " " << num(p.rhs()[i]) << "\n";
  os << "BOUNDS\n";
  for (int j = 0; j < p.n(); ++j) {
    const std::string name = mps_name(p.var_name(j));
    const double lo = p.lower()[j];
    const double up = p.upper()[j];
    if (lo == up) {
      os << " FX BND " << name << " " << num(lo) << "\n";
      continue;
    }
    if (lo == -kInf && up == kInf) {
      os << " FR BND " << name << "\n";
      continue;
    }
    if (lo == -kInf)
      os << " MI BND " << name << "\n";
    else if (lo != 0.0 || up < 0.0)
      os << " LO BND " << name << " " << num(lo) << "\n";
    if (up != kInf) os << " UP BND " << name << " " << num(up) << "\n";
  }
  os << "ENDATA\n";
}

std::string write_mps(const Problem& p) {
  std::ostringstream os;
  write_mps(os, p);
  return os.str();
}

}  // namespace cdive
