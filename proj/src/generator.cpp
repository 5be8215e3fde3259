// SPDX-License-Identifier: Apache-2.0

#include "cdive/generator.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "cdive/mps.hpp"

namespace cdive {

namespace {

int nonzero_int(std::mt19937_64& rng, int max_abs) {
  std::uniform_int_distribution<int> mag(1, max_abs);
  std::bernoulli_distribution neg(0.5);
  const int v = mag(rng);
  return neg(rng) ? -v : v;
}

}  // namespace

Problem random_binary_mip(const BinaryMipOptions& opts, std::mt19937_64& rng, const std::string& name) {
  ProblemData d;
  d.name = name;
  const int n = opts.n;
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution nz(opts.density);
  std::uniform_int_distribution<int> obj(-opts.obj_max, opts.obj_max);
  std::uniform_int_distribution<int> slack(0, opts.slack_max);
  std::vector<double> planted(static_cast<std::size_t>(n));
  for (auto& v : planted) v = coin(rng) ? 1.0 : 0.0;
  for (int j = 0; j < n; ++j) {
    d.objective.push_back(opts.obj_max > 0 ? obj(rng) : 0.0);
    d.lower.push_back(0.0);
    d.upper.push_back(1.0);
    d.integer.push_back(true);
  }
  std::uniform_int_distribution<int> pick(0, std::max(0, n - 1));
  for (int i = 0; i < opts.m; ++i) {
    double act = 0.0;
    double row_min = 0.0;
    int count = 0;
    for (int j = 0; j < n; ++j) {
      if (!nz(rng)) continue;
      const int a = nonzero_int(rng, opts.coef_max);
      d.entries.push_back({i, j, static_cast<double>(a)});
      act += a * planted[static_cast<std::size_t>(j)];
      row_min += std::min(0, a);
      ++count;
    }
    if (count == 0 && n > 0) {
      const int j = pick(rng);
      const int a = nonzero_int(rng, opts.coef_max);
      d.entries.push_back({i, j, static_cast<double>(a)});
      act += a * planted[static_cast<std::size_t>(j)];
      row_min += std::min(0, a);
    }
    double rhs = act - slack(rng);
    if (!opts.planted) rhs = act + slack(rng) - opts.slack_max / 2;
    d.rhs.push_back(std::max(rhs, row_min));
  }
  return Problem(std::move(d));
}

Problem random_infeasible_lp(const InfeasibleLpOptions& opts, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dn(1, opts.max_n);
  std::uniform_int_distribution<int> dm(1, opts.max_m);
  std::uniform_int_distribution<int> coef(-opts.coef_max, opts.coef_max);
  std::uniform_int_distribution<int> bnd(-5, 5);
  std::uniform_int_distribution<int> width(0, 6);
  std::bernoulli_distribution inf_bound(opts.infinite_bound);
  std::bernoulli_distribution by_rows(0.7);
  const int n = dn(rng);
  const int m = std::max(dm(rng), 2);
  ProblemData d;
  d.name = "infeasible";
  for (int j = 0; j < n; ++j) {
    d.objective.push_back(coef(rng));
    const double lo = bnd(rng);
    d.lower.push_back(inf_bound(rng) ? -kInf : lo);
    d.upper.push_back(inf_bound(rng) ? kInf : lo + width(rng));
    d.integer.push_back(false);
  }
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> rhs(static_cast<std::size_t>(m));
  for (int i = 0; i + 1 < m; ++i) {
    for (auto& v : rows[static_cast<std::size_t>(i)]) v = coef(rng);
    rhs[static_cast<std::size_t>(i)] = coef(rng);
  }
  auto& last = rows[static_cast<std::size_t>(m - 1)];
  std::uniform_int_distribution<int> gap(1, 4);
  if (by_rows(rng)) {
    // Last row is minus a nonnegative combination of the others.
    std::uniform_int_distribution<int> mult(0, 3);
    double yb = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
      const int y = mult(rng);
      for (int j = 0; j < n; ++j) last[static_cast<std::size_t>(j)] -= y * rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      yb += y * rhs[static_cast<std::size_t>(i)];
    }
    rhs[static_cast<std::size_t>(m - 1)] = -yb + gap(rng);
  } else {
    // Last row exceeds its own maximum activity over finite bounds.
    double maxact = 0.0;
    for (int j = 0; j < n; ++j) {
      double a = coef(rng);
      const double b = a > 0 ? d.upper[static_cast<std::size_t>(j)] : d.lower[static_cast<std::size_t>(j)];
      if (!std::isfinite(b)) a = 0.0;
      last[static_cast<std::size_t>(j)] = a;
      maxact += a == 0.0 ? 0.0 : a * b;
    }
    rhs[static_cast<std::size_t>(m - 1)] = maxact + gap(rng);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (a != 0.0) d.entries.push_back({i, j, a});
    }
  d.rhs = rhs;
  return Problem(std::move(d));
}

std::vector<Problem> experiment_suite(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Problem> out;
  std::uniform_int_distribution<int> dn(30, 80);
  for (int k = 0; k < count; ++k) {
    BinaryMipOptions o;
    o.n = dn(rng);
    o.m = std::max(10, o.n / 2);
    o.density = 0.25;
    o.coef_max = 9;
    o.obj_max = 10;
    o.slack_max = 4;
    out.push_back(random_binary_mip(o, rng, "gen" + std::to_string(k)));
  }
  return out;
}

std::vector<std::string> write_suite(const std::vector<Problem>& suite, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const Problem& p : suite) {
    const std::string path = (std::filesystem::path(dir) / (p.name() + ".mps")).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_mps(out, p);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace cdive
