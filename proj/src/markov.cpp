#include "hmlam/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "hmlam/error.hpp"

namespace hmlam {

RealMatrix to_real(const IntMatrix& m) {
  RealMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = static_cast<double>(m(i, j));
  return r;
}

const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::full: return "full";
    case Degeneracy::arc_plus: return "arc+";
    case Degeneracy::arc_minus: return "arc-";
    case Degeneracy::point: return "point";
  }
  return "?";
}

Degeneracy parse_degeneracy(const std::string& s) {
  if (s == "full") return Degeneracy::full;
  if (s == "arc+") return Degeneracy::arc_plus;
  if (s == "arc-") return Degeneracy::arc_minus;
  if (s == "point") return Degeneracy::point;
  throw ValidationError("unknown 4-gon degeneracy '" + s + "'");
}

namespace {

void check_table(const CrossingTable& table) {
  if (table.counts.size() != table.n || table.orientation.size() != table.n * table.n) {
    throw ValidationError("crossing table dimensions are inconsistent");
  }
  for (std::size_t i = 0; i < table.n; ++i) {
    for (std::size_t j = 0; j < table.n; ++j) {
      if (table.counts(i, j) < 0) {
        throw ValidationError("negative crossing count at (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
      }
    }
  }
}

}  // namespace

MarkovCheck verify_markov(std::span<const Rect4Gon> rects, const CrossingTable& table) {
  check_table(table);
  if (rects.size() != table.n) {
    throw ValidationError("crossing table is " + std::to_string(table.n) + "x" + std::to_string(table.n) +
                          " but the family has " + std::to_string(rects.size()) + " 4-gons");
  }
  std::set<std::string> ids;
  for (const Rect4Gon& r : rects) {
    if (!ids.insert(r.id).second) throw ValidationError("duplicate 4-gon id '" + r.id + "'");
  }
  MarkovCheck res;
  for (std::size_t i = 0; i < table.n; ++i) {
    for (std::size_t j = 0; j < table.n; ++j) {
      if (table.counts(i, j) > 1) res.violations.push_back({i, j, table.counts(i, j)});
    }
  }
  res.ok = res.violations.empty();
  return res;
}

IncidenceA build_matrix_A(std::span<const Rect4Gon> rects, const CrossingTable& table) {
  const MarkovCheck check = verify_markov(rects, table);
  if (!check.ok) throw ValidationError("crossing table is not Markov; refusing to build A");
  IncidenceA a{IntMatrix(table.n)};
  for (std::size_t i = 0; i < table.n; ++i)
    for (std::size_t j = 0; j < table.n; ++j) a.m(i, j) = table.counts(i, j) >= 1 ? 1 : 0;
  return a;
}

IncidenceB build_matrix_B(const CrossingTable& table) {
  check_table(table);
  return IncidenceB{table.counts};
}

std::string to_string(const SymbolWord& w) {
  std::string out;
  for (int s : w) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s + 1);
  }
  return out;
}

bool is_admissible(const IncidenceA& a, const SymbolWord& w) {
  const auto n = static_cast<int>(a.m.size());
  for (int s : w) {
    if (s < 0 || s >= n) return false;
  }
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    if (a.m(static_cast<std::size_t>(w[k]), static_cast<std::size_t>(w[k + 1])) != 1) return false;
  }
  return true;
}

SymbolWord shift(const SymbolWord& w) {
  if (w.size() < 2) throw ValidationError("shift needs a word of length at least 2");
  return SymbolWord(w.begin() + 1, w.end());
}

IntMatrix matrix_power(const IntMatrix& a, int k) {
  if (k < 0) throw ValidationError("negative matrix power");
  const std::size_t n = a.size();
  IntMatrix result(n);
  for (std::size_t i = 0; i < n; ++i) result(i, i) = 1;
  for (int step = 0; step < k; ++step) {
    IntMatrix next(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (result(i, l) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          std::int64_t prod = 0;
          if (__builtin_mul_overflow(result(i, l), a(l, j), &prod) ||
              __builtin_add_overflow(next(i, j), prod, &next(i, j))) {
            throw BudgetError("integer overflow in matrix power");
          }
        }
      }
    }
    result = std::move(next);
  }
  return result;
}

std::uint64_t window_count(const IntMatrix& a, int m) {
  if (m < 1) throw ValidationError("window length must be at least 1");
  if (m == 1) return a.size();
  const IntMatrix p = matrix_power(a, m - 1);
  std::uint64_t total = 0;
  for (std::int64_t v : p.data()) {
    if (__builtin_add_overflow(total, static_cast<std::uint64_t>(v), &total)) {
      throw BudgetError("window count overflows 64 bits");
    }
  }
  return total;
}

AdmissibleWords admissible_words(const IncidenceA& a, int m, std::size_t list_budget) {
  AdmissibleWords res;
  res.count = window_count(a.m, m);
  if (res.count > list_budget) return res;
  const std::size_t n = a.m.size();
  SymbolWord cur;
  std::function<void()> extend = [&] {
    if (static_cast<int>(cur.size()) == m) {
      res.words.push_back(cur);
      return;
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (!cur.empty() && a.m(static_cast<std::size_t>(cur.back()), s) != 1) continue;
      cur.push_back(static_cast<int>(s));
      extend();
      cur.pop_back();
    }
  };
  extend();
  res.listed = true;
  return res;
}

namespace {

void validate_nonnegative(const RealMatrix& m) {
  if (m.size() == 0) throw ValidationError("perron: empty matrix");
  bool any = false;
  for (double v : m.data()) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("perron: matrix must be finite and nonnegative");
    any = any || v > 0.0;
  }
  if (!any) throw ValidationError("perron: matrix is all zero");
}

std::vector<double> multiply(const RealMatrix& m, const std::vector<double>& y) {
  const std::size_t n = m.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * y[j];
    out[i] = s;
  }
  return out;
}

// kappa = sum(My) for sum(y) = 1; residual = max |My - kappa y|.
std::pair<double, double> rayleigh(const RealMatrix& m, const std::vector<double>& y) {
  const auto my = multiply(m, y);
  const double kappa = std::accumulate(my.begin(), my.end(), 0.0);
  double res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) res = std::max(res, std::abs(my[i] - kappa * y[i]));
  return {kappa, res};
}

void normalize_sum(std::vector<double>& y) {
  const double s = std::accumulate(y.begin(), y.end(), 0.0);
  for (double& v : y) v /= s;
}

struct PowerResult {
  std::vector<double> y;
  double kappa = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Power iteration from `start` (the uniform vector when empty).
PowerResult power_iterate(const RealMatrix& m, double tol, int max_iter, std::vector<double> start = {}) {
  const std::size_t n = m.size();
  PowerResult r;
  r.y = start.empty() ? std::vector<double>(n, 1.0 / static_cast<double>(n)) : std::move(start);
  for (int it = 0; it <= max_iter; ++it) {
    const auto my = multiply(m, r.y);
    r.kappa = std::accumulate(my.begin(), my.end(), 0.0);
    r.residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) r.residual = std::max(r.residual, std::abs(my[i] - r.kappa * r.y[i]));
    r.iterations = it;
    if (r.residual <= tol) {
      r.converged = true;
      return r;
    }
    // Shift by the identity so periodic (imprimitive) blocks still converge.
    for (std::size_t i = 0; i < n; ++i) r.y[i] = my[i] + r.y[i];
    normalize_sum(r.y);
  }
  return r;
}

// Strongly connected components in reverse topological order (Tarjan).
std::vector<std::vector<std::size_t>> strong_components(const RealMatrix& m) {
  const std::size_t n = m.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (m(v, w) <= 0.0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return comps;
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve(RealMatrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) < 1e-300) throw NumericError("singular system in Perron block solve");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a(c, k) * x[k];
    x[c] = s / a(c, c);
  }
  return x;
}

RealMatrix submatrix(const RealMatrix& m, const std::vector<std::size_t>& idx) {
  RealMatrix s(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = m(idx[i], idx[j]);
  return s;
}

// Nonnegative eigenvector for the spectral radius of a reducible matrix:
// Perron vector on a basic class C that no other basic class reaches,
// extended to the classes upstream of C by a nonsingular linear solve.
std::vector<double> block_perron(const RealMatrix& m, double tol, int max_iter) {
  const std::size_t n = m.size();
  const auto comps = strong_components(m);
  std::vector<double> rho(comps.size(), 0.0);
  std::vector<std::vector<double>> vecs(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const RealMatrix s = submatrix(m, comps[c]);
    if (comps[c].size() == 1) {
      rho[c] = s(0, 0);
      vecs[c] = {1.0};
      continue;
    }
    const PowerResult r = power_iterate(s, tol * 1e-2, max_iter);
    rho[c] = r.kappa;
    vecs[c] = r.y;
  }
  const double kappa = *std::max_element(rho.begin(), rho.end());
  const double tie = 1e-12 * std::max(1.0, kappa);

  // reach[u][v]: v reachable from u along positive entries (including u).
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::size_t> todo{u};
    reach[u][u] = true;
    while (!todo.empty()) {
      const std::size_t v = todo.back();
      todo.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (m(v, w) > 0.0 && !reach[u][w]) {
          reach[u][w] = true;
          todo.push_back(w);
        }
      }
    }
  }
  std::optional<std::size_t> chosen;
  for (std::size_t c = 0; c < comps.size() && !chosen; ++c) {
    if (kappa - rho[c] > tie) continue;
    bool upstream_basic = false;
    for (std::size_t d = 0; d < comps.size(); ++d) {
      if (d == c || kappa - rho[d] > tie) continue;
      if (reach[comps[d][0]][comps[c][0]]) upstream_basic = true;
    }
    if (!upstream_basic) chosen = c;
  }
  if (!chosen) throw NumericError("no distinguished class found in Perron block construction");
  const auto& cls = comps[*chosen];
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < cls.size(); ++i) y[cls[i]] = vecs[*chosen][i];

  std::vector<std::size_t> upstream;
  for (std::size_t u = 0; u < n; ++u) {
    if (std::find(cls.begin(), cls.end(), u) == cls.end() && reach[u][cls[0]]) upstream.push_back(u);
  }
  if (!upstream.empty()) {
    RealMatrix lhs(upstream.size());
    std::vector<double> rhs(upstream.size(), 0.0);
    for (std::size_t i = 0; i < upstream.size(); ++i) {
      for (std::size_t j = 0; j < upstream.size(); ++j) {
        lhs(i, j) = (i == j ? kappa : 0.0) - m(upstream[i], upstream[j]);
      }
      for (std::size_t c : cls) rhs[i] += m(upstream[i], c) * y[c];
    }
    const auto x = solve(lhs, rhs);
    for (std::size_t i = 0; i < upstream.size(); ++i) y[upstream[i]] = std::max(0.0, x[i]);
  }
  normalize_sum(y);
  return y;
}

bool all_positive(const std::vector<double>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; });
}

}  // namespace

PerronData perron(const RealMatrix& m, double tol, int max_iter) {
  validate_nonnegative(m);
  PerronData out;
  PowerResult r = power_iterate(m, tol, max_iter);
  out.iterations = r.iterations;
  if (r.converged) {
    out.method = "power";
    // Entries that decayed to the residual scale belong to non-dominant
    // classes. Zero them and iterate again: a zero pattern that M preserves
    // stays exactly zero, any other is refilled.
    const double top = *std::max_element(r.y.begin(), r.y.end());
    std::vector<double> snapped = r.y;
    bool changed = false;
    for (double& v : snapped) {
      if (v > 0.0 && v <= 1e3 * tol * top) {
        v = 0.0;
        changed = true;
      }
    }
    if (changed) {
      normalize_sum(snapped);
      PowerResult again = power_iterate(m, tol, max_iter, std::move(snapped));
      if (again.converged) {
        out.iterations += again.iterations;
        r = std::move(again);
      }
    }
  } else {
    std::vector<double> y = block_perron(m, tol, max_iter);
    const auto [k, res] = rayleigh(m, y);
    if (res < r.residual) {
      r.y = std::move(y);
      r.kappa = k;
      r.residual = res;
      out.method = "block";
    } else {
      out.method = "power";
    }
    r.converged = r.residual <= tol;
  }
  out.kappa = r.kappa;
  out.vector = std::move(r.y);
  out.residual = r.residual;
  out.converged = r.converged;
  out.full_support = all_positive(out.vector);
  return out;
}

double entropy(const IntMatrix& a, double tol) {
  const PerronData p = perron(to_real(a), tol);
  return p.kappa < 1.0 ? 0.0 : std::log(p.kappa);
}

double entropy(const IncidenceA& a, double tol) { return entropy(a.m, tol); }

InvariantMeasures invariant_measures(const IncidenceB& b, double tol, int max_iter) {
  const RealMatrix m = to_real(b.m);
  const PerronData plus = perron(m, tol, max_iter);
  const PerronData minus = perron(m.transpose(), tol, max_iter);
  InvariantMeasures out;
  out.mu_plus = plus.vector;
  out.mu_minus = minus.vector;
  out.kappa = plus.kappa;
  out.kappa_gap = std::abs(plus.kappa - minus.kappa);
  out.residual_plus = plus.residual;
  out.residual_minus = minus.residual;
  out.converged = plus.converged && minus.converged;
  out.full_support_plus = plus.full_support;
  out.full_support_minus = minus.full_support;
  return out;
}

CodingReport coding_consistency(const IncidenceA& a, int depth, std::uint64_t enumeration_budget) {
  if (depth < 2) throw ValidationError("coding depth must be at least 2");
  CodingReport rep;
  rep.depth = depth;
  rep.matrix_count = window_count(a.m, depth);
  const std::size_t n = a.m.size();
  for (std::size_t s = 0; s < n; ++s) {
    bool any = false;
    for (std::size_t t = 0; t < n; ++t) any = any || a.m(s, t) == 1;
    if (!any) rep.dead_ends.push_back(static_cast<int>(s));
  }
  // Depth-first enumeration of admissible windows.
  std::vector<std::size_t> stack;
  std::function<void(std::size_t, int)> walk = [&](std::size_t last, int len) {
    if (len == depth) {
      if (++rep.enumerated > enumeration_budget) {
        throw BudgetError("coding enumeration exceeded " + std::to_string(enumeration_budget) + " words");
      }
      if (std::find(rep.dead_ends.begin(), rep.dead_ends.end(), static_cast<int>(last)) != rep.dead_ends.end()) {
        ++rep.non_extendable;
      }
      return;
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (a.m(last, t) == 1) walk(t, len + 1);
    }
  };
  for (std::size_t s = 0; s < n; ++s) walk(s, 1);
  rep.counts_match = rep.enumerated == rep.matrix_count;
  rep.ok = rep.counts_match && rep.dead_ends.empty();
  return rep;
}

}  // namespace hmlam
