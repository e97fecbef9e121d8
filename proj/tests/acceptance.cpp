// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmlam/cli.hpp"
#include "hmlam/error.hpp"
#include "hmlam/hyperbolic.hpp"
#include "hmlam/lamination.hpp"
#include "hmlam/markov.hpp"
#include "hmlam/scene.hpp"
#include "support/oracles.hpp"

using namespace hmlam;
namespace fs = std::filesystem;

namespace {

const std::string kScenes = std::string(HMLAM_SOURCE_DIR) + "/scenes/";
const std::string kGolden = std::string(HMLAM_SOURCE_DIR) + "/tests/golden/";

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Isometry random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  while (true) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a * d - b * c > 0.1) return Isometry(a, b, c, d);
  }
}

HPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(-5.0, 5.0), ly(-2.0, 2.0);
  return HPoint(x(rng), std::exp(ly(rng)));
}

Outcome kernel_invariance() {
  std::mt19937_64 rng(1);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const Isometry m = random_isometry(rng);
    const HPoint p = random_point(rng), q = random_point(rng);
    worst = std::max(worst, std::fabs(hyperbolic_distance(p, q) -
                                      hyperbolic_distance(apply_isometry(m, p), apply_isometry(m, q))));
  }
  return {worst <= 1e-9, "10000 samples, max |d(p,q) - d(mp,mq)| = " + fmt("%.2e", worst)};
}

Outcome axis_correctness() {
  std::mt19937_64 rng(2);
  const Tolerance tol;
  double fix = 0, equi = 0, quad = 0;
  int n = 0;
  while (n < 1000) {
    const Isometry m = random_isometry(rng);
    if (classify_isometry(m) != IsometryClass::hyperbolic || std::fabs(m.trace()) < 2.01) continue;
    ++n;
    const Geodesic ax = axis(m);
    fix = std::max({fix, circular_distance(boundary_action(m, ax.a()).angle(), ax.a().angle()),
                    circular_distance(boundary_action(m, ax.b()).angle(), ax.b().angle())});
    const Isometry g = random_isometry(rng);
    const Geodesic moved = apply_isometry(g, ax);
    const Geodesic conj = axis(g * m * g.inverse());
    equi = std::max({equi, circular_distance(moved.a().angle(), conj.a().angle()),
                     circular_distance(moved.b().angle(), conj.b().angle())});
    if (std::fabs(m.c()) > 1e-3) {
      const auto fp = oracle::quadratic_fixed_points(m.a(), m.b(), m.c(), m.d());
      quad = std::max({quad, static_cast<double>(oracle::circ_dist(ax.a().angle(), oracle::cayley_angle(fp.repelling))),
                       static_cast<double>(oracle::circ_dist(ax.b().angle(), oracle::cayley_angle(fp.attracting)))});
    }
  }
  const bool ok = fix <= tol.theta && equi <= tol.theta && quad <= tol.theta;
  return {ok, "1000 matrices, fixed-point defect " + fmt("%.2e", fix) + ", equivariance " + fmt("%.2e", equi) +
                  ", quadratic oracle " + fmt("%.2e", quad)};
}

Outcome golden_mean() {
  std::vector<Rect4Gon> rects(2);
  rects[0].id = "R1";
  rects[1].id = "R2";
  CrossingTable t(2);
  t.counts = IntMatrix{{1, 1}, {1, 0}};
  const IncidenceA a = build_matrix_A(rects, t);
  const double h = entropy(a);
  const double herr = std::fabs(h - std::log((1 + std::sqrt(5.0)) / 2));
  const PerronData p = perron(to_real(a.m));
  bool counts_ok = true, brute_ok = true;
  // Independent entry sum of A^(m-1) by repeated 2x2 multiplication.
  std::uint64_t m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  const std::vector<std::vector<int>> rows{{1, 1}, {1, 0}};
  for (int m = 1; m <= 14; ++m) {
    const std::uint64_t expect = m00 + m01 + m10 + m11;
    const AdmissibleWords w = admissible_words(a, m);
    counts_ok = counts_ok && w.count == expect && w.listed && w.words.size() == expect;
    if (m <= 10) brute_ok = brute_ok && oracle::brute_force_words(rows, m).size() == expect;
    const std::uint64_t n00 = m00 + m01, n01 = m00, n10 = m10 + m11, n11 = m10;
    m00 = n00, m01 = n01, m10 = n10, m11 = n11;
  }
  const bool ok = herr <= 1e-9 && p.residual <= 1e-12 && counts_ok && brute_ok;
  return {ok, "entropy error " + fmt("%.2e", herr) + ", Perron residual " + fmt("%.2e", p.residual) +
                  ", counts m<=14 " + (counts_ok ? "exact" : "WRONG") + ", brute force m<=10 " +
                  (brute_ok ? "agrees" : "DISAGREES")};
}

bool irreducible(const IntMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = m(i, j) > 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i][j] = r[i][j] || (r[i][k] && r[k][j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!r[i][j]) return false;
  return true;
}

Outcome measure_duality() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  double gap = 0, res = 0;
  int reducible_built = 0, reducible_flagged = 0, irreducible_seen = 0, irreducible_full = 0, unconverged = 0;
  for (int k = 0; k < 100; ++k) {
    IntMatrix b;
    bool built_reducible = false;
    if (k % 3 == 2) {
      // Block upper triangular [[P, X], [0, Q]] with rho(P) > rho(Q): the right
      // Perron vector vanishes on the Q block.
      std::uniform_int_distribution<std::size_t> dp(1, 4), dq(1, 4);
      const std::size_t np = dp(rng), nq = std::min<std::size_t>(dq(rng), 2 * np - 1);
      b = IntMatrix(np + nq);
      std::uniform_int_distribution<int> big(2, 4), small(0, 1), any(0, 3);
      for (std::size_t i = 0; i < np + nq; ++i)
        for (std::size_t j = 0; j < np + nq; ++j) {
          if (i < np && j < np) b(i, j) = big(rng);
          else if (i < np) b(i, j) = any(rng);
          else if (j >= np) b(i, j) = small(rng);
        }
      built_reducible = true;
    } else {
      const std::size_t n = dim(rng);
      std::uniform_int_distribution<int> e(0, 3);
      b = IntMatrix(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = e(rng);
      if (std::all_of(b.data().begin(), b.data().end(), [](auto v) { return v == 0; })) b(0, 0) = 1;
    }
    const InvariantMeasures mu = invariant_measures(IncidenceB{b});
    if (!mu.converged) ++unconverged;
    gap = std::max(gap, mu.kappa_gap);
    res = std::max({res, mu.residual_plus, mu.residual_minus});
    if (built_reducible) {
      ++reducible_built;
      if (!mu.full_support_plus) ++reducible_flagged;
    } else if (irreducible(b)) {
      ++irreducible_seen;
      if (mu.full_support_plus && mu.full_support_minus) ++irreducible_full;
    }
  }
  const bool ok = unconverged == 0 && gap <= 1e-9 && res <= 1e-9 && reducible_flagged == reducible_built &&
                  irreducible_full == irreducible_seen;
  return {ok, "100 matrices, kappa gap " + fmt("%.2e", gap) + ", max residual " + fmt("%.2e", res) + ", reducible " +
                  std::to_string(reducible_flagged) + "/" + std::to_string(reducible_built) +
                  " flagged not-full-support, irreducible " + std::to_string(irreducible_full) + "/" +
                  std::to_string(irreducible_seen) + " full support"};
}

Outcome lamination_oracle() {
  const SurfaceMap map = *load_scene(kScenes + "schottky_ab.json").map;
  LaminationParams params;
  params.horizon = 24;
  params.ball = 3;
  const LaminationApprox plus = extract_limit_leaves(sign_family(map, Sign::negative, params), params);
  const LaminationApprox minus = extract_limit_leaves(sign_family(map, Sign::positive, params), params);
  const Leaf* leaf = nullptr;
  for (const Leaf& l : plus.leaves) {
    if (l.source.juncture == 0 && l.source.conjugator.empty()) leaf = &l;
  }
  if (!leaf) return {false, "no leaf for the chain axis(a b^n)"};
  const long double p = std::pow(3.0L, 50), q = std::pow(3.0L, -50);
  const oracle::Mat m = oracle::Mat{3, 0, 0, 1.0L / 3} * oracle::Mat{(p + q) / 2, (q - p) / 2, (q - p) / 2, (p + q) / 2};
  const auto fp = oracle::quadratic_fixed_points(m.a, m.b, m.c, m.d);
  const double err = std::max(static_cast<double>(oracle::circ_dist(leaf->geodesic.a().angle(), oracle::cayley_angle(fp.repelling))),
                              static_cast<double>(oracle::circ_dist(leaf->geodesic.b().angle(), oracle::cayley_angle(fp.attracting))));
  const std::size_t crossings = crossing_audit(plus).size() + crossing_audit(minus).size();
  return {err <= 1e-6 && crossings == 0, "endpoint error " + fmt("%.2e", err) + " vs n=50 oracle, " +
                                             std::to_string(plus.leaves.size() + minus.leaves.size()) + " leaves, " +
                                             std::to_string(crossings) + " crossing pair(s)"};
}

Outcome escape_dichotomy() {
  const SurfaceMap inner = *load_scene(kScenes + "inner_ab.json").map;
  bool inner_ok = true;
  for (std::size_t j = 0; j < inner.junctures.size(); ++j) {
    inner_ok = inner_ok && escape_test(inner, j, 20).verdict == EscapeVerdict::escaping;
  }
  const SurfaceMap twist = *load_scene(kScenes + "schottky_ab.json").map;
  const EscapeReport r = escape_test(twist, 0, 20);
  double err = 0;
  bool monotone = true;
  for (std::size_t n = 0; n < r.steps.size(); ++n) {
    const long double expect = oracle::translation_from_trace(oracle::trace_a_bn(static_cast<int>(n)));
    err = std::max(err, static_cast<double>(std::fabs(r.steps[n].translation_length - expect)));
    if (n > 0) monotone = monotone && r.steps[n].translation_length > r.steps[n - 1].translation_length;
  }
  const bool ok = inner_ok && r.verdict == EscapeVerdict::non_escaping && monotone && err <= 1e-9;
  return {ok, std::string("inner scene ") + (inner_ok ? "escaping" : "NOT escaping") + ", w = a " +
                  to_string(r.verdict) + (monotone ? ", monotone" : ", NOT monotone") + ", length error " +
                  fmt("%.2e", err)};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hmlam-accept-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

Outcome rendering() {
  TempDir tmp;
  struct Job {
    std::vector<std::string> args;
    std::string golden;
  };
  const std::string out = (tmp.path / "x.svg").string();
  const std::vector<Job> jobs{
      {{"render", kScenes + "schottky_ab.json", "--out", out}, "schottky_ab_render.svg"},
      {{"render", kScenes + "inner_ab.json", "--out", out}, "inner_ab_render.svg"},
      {{"render", kScenes + "identity_ab.json", "--out", out}, "identity_ab_render.svg"},
      {{"limit-set", kScenes + "schottky_ab.json", "--depth", "6", "--out", out}, "schottky_ab_limits_d6.svg"}};
  std::size_t arcs = 0, identical = 0;
  long double worst = 0;
  for (const Job& j : jobs) {
    std::ostringstream o, e;
    if (run_command(j.args, o, e) != kExitOk) return {false, "render failed: " + e.str()};
    const std::string svg = oracle::read_file(out);
    const oracle::SvgParse parsed = oracle::parse_svg(svg);
    for (const auto& a : parsed.arcs) worst = std::max(worst, oracle::orthogonality_defect(a));
    arcs += parsed.arcs.size();
    if (svg == oracle::read_file(kGolden + j.golden)) ++identical;
  }
  const bool ok = worst <= 1e-9L && identical == jobs.size();
  return {ok, std::to_string(arcs) + " arcs, max ||C|^2 - r^2 - 1| = " + fmt("%.2e", static_cast<double>(worst)) +
                  ", golden files identical " + std::to_string(identical) + "/" + std::to_string(jobs.size())};
}

Outcome cli_contract() {
  TempDir tmp;
  fs::copy_file(kScenes + "schottky_ab.json", tmp.path / "schottky_ab.json");
  fs::copy_file(kScenes + "golden.json", tmp.path / "golden.json");
  const std::string cd = "cd '" + tmp.path.string() + "' && '" + std::string(HMLAM_CLI_PATH) + "' ";
  auto sh = [&](const std::string& args) {
    const int status = std::system((cd + args + " > out.txt 2> err.txt").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  std::vector<std::string> failures;
  if (sh("limit-set schottky_ab.json --depth 6 --out limits.svg") != 0) failures.push_back("limit-set exit");
  const std::string svg = oracle::read_file((tmp.path / "limits.svg").string());
  if (svg.find("<svg") == std::string::npos || oracle::parse_svg(svg).points == 0) failures.push_back("limits.svg");
  if (sh("markov verify golden.json") != 0) failures.push_back("markov verify exit");
  if (oracle::read_file((tmp.path / "out.txt").string()).find("Markov family: OK") == std::string::npos) {
    failures.push_back("markov verify message");
  }
  if (sh("laminate missing.json") != 1) failures.push_back("laminate missing exit");
  if (oracle::read_file((tmp.path / "err.txt").string()).find("file not found") == std::string::npos) {
    failures.push_back("file-not-found message");
  }
  std::string detail = "limit-set -> 0 + SVG, markov verify -> 0 + OK, laminate missing.json -> 1 + message";
  if (!failures.empty()) {
    detail = "failed:";
    for (const auto& f : failures) detail += " " + f + ";";
  }
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "hyperbolic kernel invariance", 5.0, kernel_invariance},
      {2, "axis correctness", 2.0, axis_correctness},
      {3, "golden-mean suite", 1.0, golden_mean},
      {4, "measure duality", 10.0, measure_duality},
      {5, "lamination convergence oracle", 10.0, lamination_oracle},
      {6, "escape dichotomy", 2.0, escape_dichotomy},
      {7, "rendering orthogonality", 1.0, rendering},
      {8, "CLI contract", 30.0, cli_contract},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d: %s  %s (%s; %.3f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                o.detail.c_str(), secs, c.budget_s);
  }
  std::printf("%s: %d of %zu criteria passed\n", failed == 0 ? "ACCEPTED" : "REJECTED",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
