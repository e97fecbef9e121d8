#include "hmlam/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "hmlam/error.hpp"
#include "hmlam/report.hpp"
#include "hmlam/scene.hpp"
#include "hmlam/svg.hpp"

namespace hmlam {

namespace {

struct Options {
  std::string scene;
  double tol = 1e-6;
  int horizon = 12;
  int ball = 3;
  double eps_theta = 1e-9;
  double eps_trace = 1e-9;
  std::string json;
  std::string out;
  int depth = 4;
  double rho = 1.5;
  int length = 5;
  std::optional<int> juncture;
  bool families = false;
  double base_x = 0.0;
  double base_y = 1.0;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string deg(double rad) { return fmt("%.6f", rad * 180.0 / kPi); }

std::string geodesic_text(const Geodesic& g) {
  return deg(g.a().angle()) + " deg " + (g.oriented() ? "->" : "--") + " " + deg(g.b().angle()) + " deg";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ValidationError("failed while writing '" + path + "'");
}

void write_json(const Options& o, const Json& j) {
  if (!o.json.empty()) write_file(o.json, j.dump(2) + "\n");
}

Tolerance tolerance(const Options& o) { return Tolerance{o.eps_theta, o.eps_trace}; }

LaminationParams lamination_params(const Options& o) {
  if (o.horizon < 0) throw ValidationError("--horizon must be nonnegative");
  if (o.ball < 0) throw ValidationError("--ball must be nonnegative");
  if (!(o.tol > 0)) throw ValidationError("--tol must be positive");
  LaminationParams p;
  p.horizon = o.horizon;
  p.ball = o.ball;
  p.tol = o.tol;
  p.eps = tolerance(o);
  return p;
}

Scene load(const Options& o) { return load_scene(o.scene, tolerance(o)); }

const SurfaceMap& need_map(const Scene& s) {
  if (!s.map) throw ValidationError("scene has no 'group' block");
  return *s.map;
}

const MarkovBlock& need_markov(const Scene& s) {
  if (!s.markov) throw ValidationError("scene has no 'markov' block");
  return *s.markov;
}

void print_header(std::ostream& out, const Scene& s) {
  out << "scene: " << (s.name.empty() ? "(unnamed)" : s.name);
  if (s.map) out << " (" << s.map->group.rank() << " generators, " << s.map->junctures.size() << " junctures)";
  if (s.markov) out << " (" << s.markov->rects.size() << " 4-gons)";
  out << "\n";
}

void print_matrix(std::ostream& out, const IntMatrix& m, const std::string& indent) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << indent << "[";
    for (std::size_t j = 0; j < m.size(); ++j) out << (j ? " " : "") << m(i, j);
    out << "]\n";
  }
}

void print_vector(std::ostream& out, const std::vector<double>& v) {
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << fmt("%.12f", v[i]);
  out << ")";
}

int cmd_limit_set(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const SurfaceMap& map = need_map(scene);
  if (o.depth < 0) throw ValidationError("--depth must be nonnegative");
  const HPoint base(o.base_x, o.base_y);
  const auto ball = enumerate_ball(map.group, o.depth);
  const LimitSetSample sample = limit_set_sample(map.group, base, o.depth, tolerance(o));
  print_header(out, scene);
  out << "ball of radius " << o.depth << ": " << ball.size() << " words\n";
  out << "orbit points: " << sample.orbit.size() << ", fixed points: " << sample.fixed_points.size() << "\n";
  out << "closest approach to the boundary (1 - |p|) by word length:\n";
  double best = 1.0;
  std::size_t idx = 0;
  Json levels = Json::array();
  for (int len = 0; len <= o.depth; ++len) {
    for (; idx < ball.size() && static_cast<int>(ball[idx].word.size()) == len; ++idx) {
      best = std::min(best, 1.0 - std::abs(sample.orbit[idx]));
    }
    out << "  <= " << len << ": " << fmt("%.12e", best) << "\n";
    levels.push_back(Json{{"length", len}, {"min_boundary_gap", best}});
  }
  if (!o.out.empty()) {
    std::vector<std::complex<double>> fixed;
    for (const IdealPoint& p : sample.fixed_points) fixed.push_back(p.disk());
    write_file(o.out, render_svg({make_layer("orbit", sample.orbit), make_layer("fixed points", fixed)}));
    out << "wrote " << o.out << "\n";
  }
  Json j = to_json(sample);
  j["depth"] = o.depth;
  j["base"] = Json::array({o.base_x, o.base_y});
  j["min_boundary_gap"] = std::move(levels);
  write_json(o, j);
  return kExitOk;
}

void print_lamination(std::ostream& out, const std::string& title, const LaminationApprox& lam,
                      std::span<const std::string> names) {
  out << title << ": " << lam.leaves.size() << " leaves (" << lam.skipped.size() << " chains skipped, "
      << lam.excluded_as_junctures << " limits excluded as junctures)\n";
  for (std::size_t i = 0; i < lam.leaves.size(); ++i) {
    const Leaf& l = lam.leaves[i];
    out << "  leaf " << i << ": " << geodesic_text(l.geodesic) << "  [juncture " << l.source.juncture
        << ", conjugator " << l.source.conjugator.to_string(names) << ", residue " << l.source.residue
        << ", last n " << l.last_iterate << ", final gap "
        << fmt("%.3e", l.certificate.empty() ? 0.0 : l.certificate.back()) << "]\n";
  }
}

int cmd_laminate(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const SurfaceMap& map = need_map(scene);
  const LaminationParams p = lamination_params(o);
  const auto& names = map.group.names();
  const GeodesicFamily neg = sign_family(map, Sign::negative, p);
  const GeodesicFamily pos = sign_family(map, Sign::positive, p);
  const LaminationApprox plus = extract_limit_leaves(neg, p);
  const LaminationApprox minus = extract_limit_leaves(pos, p);
  const auto vplus = crossing_audit(plus, p.eps.theta);
  const auto vminus = crossing_audit(minus, p.eps.theta);
  print_header(out, scene);
  out << "horizon [-" << p.horizon << ", " << p.horizon << "], ball " << p.ball << ", tol " << fmt("%g", p.tol)
      << "\n";
  out << "X- family: " << neg.entries.size() << " geodesics; X+ family: " << pos.entries.size() << " geodesics\n";
  if (neg.degenerate + pos.degenerate > 0) {
    out << "  (" << neg.degenerate + pos.degenerate << " lifts shorter than eps-theta left out)\n";
  }
  print_lamination(out, "Lambda+", plus, names);
  print_lamination(out, "Lambda-", minus, names);
  out << "crossing audit: Lambda+ " << vplus.size() << " violation(s), Lambda- " << vminus.size()
      << " violation(s)\n";
  for (const auto& v : vplus) out << "  Lambda+ leaves " << v.first << " and " << v.second << " cross\n";
  for (const auto& v : vminus) out << "  Lambda- leaves " << v.first << " and " << v.second << " cross\n";
  if (!o.out.empty()) {
    std::vector<RenderLayer> layers;
    if (o.families) {
      layers.push_back(make_layer("X-", neg));
      layers.push_back(make_layer("X+", pos));
    }
    layers.push_back(make_layer("Lambda+", plus));
    layers.push_back(make_layer("Lambda-", minus));
    write_file(o.out, render_svg(layers, {}, p.eps.theta));
    out << "wrote " << o.out << "\n";
  }
  Json vp = Json::array();
  for (const auto& v : vplus) vp.push_back(to_json(v));
  Json vm = Json::array();
  for (const auto& v : vminus) vm.push_back(to_json(v));
  write_json(o, Json{{"negative_family", to_json(neg, names)},
                     {"positive_family", to_json(pos, names)},
                     {"lambda_plus", to_json(plus, names)},
                     {"lambda_minus", to_json(minus, names)},
                     {"violations_plus", std::move(vp)},
                     {"violations_minus", std::move(vm)}});
  return kExitOk;
}

int cmd_escape(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const SurfaceMap& map = need_map(scene);
  const LaminationParams p = lamination_params(o);
  if (o.horizon < 3) throw ValidationError("escape test needs --horizon >= 3");
  if (!(o.rho > 1.0)) throw ValidationError("--rho must exceed 1");
  if (map.junctures.empty()) throw ValidationError("scene declares no junctures");
  std::vector<std::size_t> which;
  if (o.juncture) {
    if (*o.juncture < 0 || static_cast<std::size_t>(*o.juncture) >= map.junctures.size()) {
      throw ValidationError("--juncture out of range");
    }
    which.push_back(static_cast<std::size_t>(*o.juncture));
  } else {
    for (std::size_t j = 0; j < map.junctures.size(); ++j) which.push_back(j);
  }
  print_header(out, scene);
  Json reports = Json::array();
  for (std::size_t j : which) {
    const EscapeReport r = escape_test(map, j, o.horizon, o.rho, p);
    const JunctureSpec& spec = map.junctures[j];
    out << "juncture " << j << " (end " << spec.end << ", sign " << to_string(spec.sign) << ", word "
        << spec.word.to_string(map.group.names()) << "): " << to_string(r.verdict) << "\n";
    for (const EscapeStep& s : r.steps) {
      out << "  n " << s.iterate << ": length " << fmt("%.12f", s.translation_length) << ", word length "
          << s.word_length << "\n";
    }
    reports.push_back(to_json(r));
  }
  write_json(o, Json{{"reports", std::move(reports)}});
  return kExitOk;
}

int cmd_axioms(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const SurfaceMap& map = need_map(scene);
  const LaminationParams p = lamination_params(o);
  const AxiomReport r = axiom_report(map, p);
  print_header(out, scene);
  out << "horizon [-" << p.horizon << ", " << p.horizon << "], ball " << p.ball << ", tol " << fmt("%g", p.tol)
      << "\n";
  out << "families: X- " << r.negative_family_size << ", X+ " << r.positive_family_size << "; leaves: Lambda+ "
      << r.lambda_plus.leaves.size() << ", Lambda- " << r.lambda_minus.leaves.size() << "; meager points "
      << r.meager.points.size() << "\n";
  for (const AxiomCheck& c : r.checks) {
    out << "  axiom " << c.axiom << ": " << to_string(c.status) << " (" << c.detail << ")\n";
  }
  for (const std::string& f : r.flags) out << "  flag: " << f << "\n";
  out << "caveat: " << r.caveat << "\n";
  write_json(o, to_json(r, map.group.names()));
  return kExitOk;
}

int cmd_markov_verify(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const MarkovBlock& mb = need_markov(scene);
  const MarkovCheck c = verify_markov(mb.rects, mb.table);
  print_header(out, scene);
  Json j{{"check", to_json(c)}};
  if (c.ok) {
    const IncidenceA a = build_matrix_A(mb.rects, mb.table);
    out << "Markov family: OK\n";
    out << "transition matrix A:\n";
    print_matrix(out, a.m, "  ");
    j["A"] = to_json(a.m);
  } else {
    out << "Markov family: NOT Markov (" << c.violations.size() << " violation(s))\n";
    for (const MarkovViolation& v : c.violations) {
      out << "  (" << v.i + 1 << "," << v.j + 1 << "): " << v.count << " components\n";
    }
  }
  write_json(o, j);
  return c.ok ? kExitOk : kExitValidation;
}

int cmd_markov_entropy(const Options& o, std::ostream& out, bool depth_given) {
  const Scene scene = load(o);
  const MarkovBlock& mb = need_markov(scene);
  const IncidenceA a = build_matrix_A(mb.rects, mb.table);
  const int depth = depth_given ? o.depth : 8;
  const RealMatrix real = to_real(a.m);
  bool any = std::any_of(real.data().begin(), real.data().end(), [](double v) { return v > 0; });
  print_header(out, scene);
  Json j{{"A", to_json(a.m)}};
  int code = kExitOk;
  if (!any) {
    out << "entropy: 0 (empty subshift)\n";
    j["entropy"] = 0.0;
  } else {
    const PerronData pd = perron(real);
    const double h = pd.kappa < 1.0 ? 0.0 : std::log(pd.kappa);
    out << "kappa: " << fmt("%.12f", pd.kappa) << "\n";
    out << "entropy: " << fmt("%.12f", h) << "\n";
    out << "Perron residual: " << fmt("%.3e", pd.residual) << (pd.converged ? "" : " (NOT converged)") << "\n";
    j["perron"] = to_json(pd);
    j["entropy"] = h;
    if (!pd.converged) code = kExitBudget;
  }
  const CodingReport cr = coding_consistency(a, depth);
  out << "coding at depth " << depth << ": " << cr.enumerated << " admissible words, matrix count "
      << cr.matrix_count << (cr.counts_match ? " (match)" : " (MISMATCH)") << "\n";
  for (int d : cr.dead_ends) out << "  dead-end symbol " << d + 1 << "\n";
  j["coding"] = to_json(cr);
  write_json(o, j);
  return code;
}

int cmd_markov_measure(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const MarkovBlock& mb = need_markov(scene);
  const IncidenceB b = build_matrix_B(mb.table);
  const InvariantMeasures m = invariant_measures(b);
  print_header(out, scene);
  out << "count matrix B:\n";
  print_matrix(out, b.m, "  ");
  out << "kappa: " << fmt("%.12f", m.kappa) << " (gap to B^T " << fmt("%.3e", m.kappa_gap) << ")\n";
  out << "mu+: ";
  print_vector(out, m.mu_plus);
  out << " residual " << fmt("%.3e", m.residual_plus) << (m.full_support_plus ? "" : ", not full support") << "\n";
  out << "mu-: ";
  print_vector(out, m.mu_minus);
  out << " residual " << fmt("%.3e", m.residual_minus) << (m.full_support_minus ? "" : ", not full support")
      << "\n";
  if (!m.converged) out << "Perron iteration did NOT converge\n";
  write_json(o, Json{{"B", to_json(b.m)}, {"measures", to_json(m)}});
  return m.converged ? kExitOk : kExitBudget;
}

int cmd_markov_words(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  const MarkovBlock& mb = need_markov(scene);
  const IncidenceA a = build_matrix_A(mb.rects, mb.table);
  if (o.length < 1) throw ValidationError("--length must be at least 1");
  const AdmissibleWords w = admissible_words(a, o.length);
  print_header(out, scene);
  out << "admissible words of length " << o.length << ": " << w.count << "\n";
  if (w.listed) {
    for (const SymbolWord& s : w.words) out << "  " << to_string(s) << "\n";
  } else {
    out << "  (list omitted: count exceeds the listing budget " << kDefaultWordListBudget << ")\n";
  }
  write_json(o, to_json(w));
  return kExitOk;
}

int cmd_render(const Options& o, std::ostream& out) {
  const Scene scene = load(o);
  if (o.out.empty()) throw ValidationError("render needs --out <file.svg>");
  std::vector<RenderLayer> layers;
  std::size_t leaves = 0;
  std::size_t points = 0;
  if (scene.map) {
    const LaminationParams p = lamination_params(o);
    const AxiomReport r = axiom_report(*scene.map, p);
    if (o.families) {
      layers.push_back(make_layer("X-", sign_family(*scene.map, Sign::negative, p)));
      layers.push_back(make_layer("X+", sign_family(*scene.map, Sign::positive, p)));
    }
    layers.push_back(make_layer("Lambda+", r.lambda_plus));
    layers.push_back(make_layer("Lambda-", r.lambda_minus));
    layers.push_back(make_layer("K", r.meager));
    leaves = r.lambda_plus.leaves.size() + r.lambda_minus.leaves.size();
    points = r.meager.points.size();
  }
  if (scene.markov) {
    std::vector<std::complex<double>> corners;
    for (const Rect4Gon& rect : scene.markov->rects) {
      if (rect.anchor) corners.insert(corners.end(), rect.anchor->begin(), rect.anchor->end());
    }
    if (!corners.empty()) layers.push_back(make_layer("4-gon corners", corners));
  }
  write_file(o.out, render_svg(layers, {}, o.eps_theta));
  print_header(out, scene);
  out << "rendered " << layers.size() << " layer(s): " << leaves << " leaves, " << points << " meager points\n";
  out << "wrote " << o.out << "\n";
  write_json(o, Json{{"svg", o.out}, {"layers", layers.size()}, {"leaves", leaves}, {"points", points}});
  return kExitOk;
}

void add_scene(CLI::App* app, Options& o) {
  app->add_option("scene", o.scene, "Scene JSON file")->required();
  app->add_option("--json", o.json, "Write the machine-readable report to this path");
  app->add_option("--eps-theta", o.eps_theta, "Ideal-point equality tolerance (radians)")->capture_default_str();
  app->add_option("--eps-trace", o.eps_trace, "Trace classification tolerance")->capture_default_str();
}

void add_lamination(CLI::App* app, Options& o) {
  app->add_option("--tol", o.tol, "Endpoint-gap threshold for accepting a chain")->capture_default_str();
  app->add_option("--horizon", o.horizon, "Iterates n in [-H, H]")->capture_default_str();
  app->add_option("--ball", o.ball, "Conjugator words of length <= k")->capture_default_str();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Approximate laminations and Markov coding for endperiodic surface maps", "hmlam"};
  app.require_subcommand(1);

  auto* limit = app.add_subcommand("limit-set", "Sample the orbit and word fixed points of the group");
  add_scene(limit, o);
  limit->add_option("--depth", o.depth, "Word length bound")->capture_default_str();
  limit->add_option("--out", o.out, "Write an SVG picture");
  limit->add_option("--base-x", o.base_x, "Base point x")->capture_default_str();
  limit->add_option("--base-y", o.base_y, "Base point y (> 0)")->capture_default_str();

  auto* laminate = app.add_subcommand("laminate", "Extract limit leaves of both juncture families");
  add_scene(laminate, o);
  add_lamination(laminate, o);
  laminate->add_option("--out", o.out, "Write an SVG picture of the leaves");
  laminate->add_flag("--families", o.families, "Also draw the juncture families");

  auto* escape = app.add_subcommand("escape", "Translation-length escape test for each juncture");
  add_scene(escape, o);
  add_lamination(escape, o);
  escape->add_option("--rho", o.rho, "Growth ratio threshold")->capture_default_str();
  escape->add_option("--juncture", o.juncture, "Only this juncture (0-based)");

  auto* axioms = app.add_subcommand("axioms", "Finite-scale diagnostics for axioms I-VI");
  add_scene(axioms, o);
  add_lamination(axioms, o);

  auto* render = app.add_subcommand("render", "Render laminations and meager points to SVG");
  add_scene(render, o);
  add_lamination(render, o);
  render->add_option("--out", o.out, "Output SVG path")->required();
  render->add_flag("--families", o.families, "Also draw the juncture families");

  auto* markov = app.add_subcommand("markov", "Markov family tools");
  markov->require_subcommand(1);
  auto* mverify = markov->add_subcommand("verify", "Check the Markov property and print A");
  add_scene(mverify, o);
  auto* mentropy = markov->add_subcommand("entropy", "Topological entropy and coding consistency");
  add_scene(mentropy, o);
  auto* depth_opt = mentropy->add_option("--depth", o.depth, "Coding depth (default 8)");
  auto* mmeasure = markov->add_subcommand("measure", "Projectively invariant measures of B");
  add_scene(mmeasure, o);
  auto* mwords = markov->add_subcommand("words", "Admissible words of a given length");
  add_scene(mwords, o);
  mwords->add_option("--length", o.length, "Word length")->capture_default_str();

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' && !app.get_subcommand_no_throw(args.front())) {
    err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
    return kExitValidation;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (*limit) return cmd_limit_set(o, out);
    if (*laminate) return cmd_laminate(o, out);
    if (*escape) return cmd_escape(o, out);
    if (*axioms) return cmd_axioms(o, out);
    if (*render) return cmd_render(o, out);
    if (*mverify) return cmd_markov_verify(o, out);
    if (*mentropy) return cmd_markov_entropy(o, out, depth_opt->count() > 0);
    if (*mmeasure) return cmd_markov_measure(o, out);
    if (*mwords) return cmd_markov_words(o, out);
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotHyperbolicError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace hmlam
