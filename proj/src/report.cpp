#include "hmlam/report.hpp"

namespace hmlam {

namespace {

Json real_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_pair(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

Json to_json(const IdealPoint& p) {
  Json j{{"angle", p.angle()}};
  if (p.is_infinity()) {
    j["real"] = "inf";
  } else {
    j["real"] = real_or_null(p.real());
  }
  return j;
}

Json to_json(const Geodesic& g) {
  return Json{{"a", to_json(g.a())}, {"b", to_json(g.b())}, {"oriented", g.oriented()}};
}

Json to_json(const Isometry& m) {
  return Json::array({Json::array({m.a(), m.b()}), Json::array({m.c(), m.d()})});
}

Json to_json(const LimitSetSample& s) {
  Json orbit = Json::array();
  for (const auto& z : s.orbit) orbit.push_back(complex_pair(z));
  Json fixed = Json::array();
  for (const IdealPoint& p : s.fixed_points) fixed.push_back(to_json(p));
  return Json{{"orbit", std::move(orbit)}, {"fixed_points", std::move(fixed)}};
}

Json to_json(const Provenance& p, std::span<const std::string> names) {
  return Json{{"juncture", p.juncture},
              {"period", p.period},
              {"iterate", p.iterate},
              {"conjugator", p.conjugator.to_string(names)},
              {"lift", to_json(p.lift)}};
}

Json to_json(const GeodesicFamily& f, std::span<const std::string> names) {
  Json entries = Json::array();
  for (const FamilyEntry& e : f.entries) {
    Json prov = Json::array();
    for (const Provenance& p : e.provenance) prov.push_back(to_json(p, names));
    entries.push_back(Json{{"geodesic", to_json(e.geodesic)}, {"provenance", std::move(prov)}});
  }
  return Json{{"juncture_sign", to_string(f.juncture_sign)},
              {"entries", std::move(entries)},
              {"degenerate", f.degenerate}};
}

Json to_json(const ChainKey& k, std::span<const std::string> names) {
  return Json{{"juncture", k.juncture}, {"conjugator", k.conjugator.to_string(names)}, {"residue", k.residue}};
}

Json to_json(const LaminationApprox& lam, std::span<const std::string> names) {
  Json leaves = Json::array();
  for (const Leaf& l : lam.leaves) {
    leaves.push_back(Json{{"geodesic", to_json(l.geodesic)},
                          {"source", to_json(l.source, names)},
                          {"certificate", l.certificate},
                          {"last_iterate", l.last_iterate},
                          {"merged_chains", l.merged_chains}});
  }
  Json skipped = Json::array();
  for (const SkippedChain& s : lam.skipped) skipped.push_back(Json{{"key", to_json(s.key, names)}, {"reason", s.reason}});
  return Json{{"lamination_sign", to_string(lam.lamination_sign)},
              {"leaves", std::move(leaves)},
              {"skipped", std::move(skipped)},
              {"excluded_as_junctures", lam.excluded_as_junctures}};
}

Json to_json(const CrossingViolation& v) {
  return Json{{"first", v.first}, {"second", v.second}, {"g1", to_json(v.g1)}, {"g2", to_json(v.g2)}};
}

Json to_json(const MeagerInvariantSet& s) {
  Json pts = Json::array();
  for (const MeagerPoint& p : s.points) {
    pts.push_back(Json{{"plus_leaf", p.plus_leaf},
                       {"minus_leaf", p.minus_leaf},
                       {"point", Json::array({p.point.x(), p.point.y()})},
                       {"disk", complex_pair(p.disk)}});
  }
  return Json{{"points", std::move(pts)},
              {"plus_without_crossing", s.plus_without_crossing},
              {"minus_without_crossing", s.minus_without_crossing}};
}

Json to_json(const EscapeReport& r) {
  Json steps = Json::array();
  for (const EscapeStep& s : r.steps) {
    steps.push_back(Json{{"iterate", s.iterate}, {"translation_length", s.translation_length},
                         {"word_length", s.word_length}});
  }
  return Json{{"juncture", r.juncture},
              {"growth_ratio", r.growth_ratio},
              {"steps", std::move(steps)},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const AxiomReport& r, std::span<const std::string> names) {
  Json params{{"horizon", r.params.horizon},
              {"ball", r.params.ball},
              {"tol", r.params.tol},
              {"eps_theta", r.params.eps.theta},
              {"eps_trace", r.params.eps.trace}};
  Json vp = Json::array();
  for (const auto& v : r.violations_plus) vp.push_back(to_json(v));
  Json vm = Json::array();
  for (const auto& v : r.violations_minus) vm.push_back(to_json(v));
  Json checks = Json::array();
  for (const AxiomCheck& c : r.checks) {
    checks.push_back(Json{{"axiom", c.axiom}, {"status", to_string(c.status)}, {"detail", c.detail}});
  }
  return Json{{"params", std::move(params)},
              {"negative_family_size", r.negative_family_size},
              {"positive_family_size", r.positive_family_size},
              {"lambda_plus", to_json(r.lambda_plus, names)},
              {"lambda_minus", to_json(r.lambda_minus, names)},
              {"violations_plus", std::move(vp)},
              {"violations_minus", std::move(vm)},
              {"meager", to_json(r.meager)},
              {"coverage_plus", r.coverage_plus},
              {"coverage_minus", r.coverage_minus},
              {"checks", std::move(checks)},
              {"flags", r.flags},
              {"caveat", r.caveat}};
}

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const MarkovCheck& c) {
  Json v = Json::array();
  for (const MarkovViolation& m : c.violations) v.push_back(Json{{"i", m.i + 1}, {"j", m.j + 1}, {"count", m.count}});
  return Json{{"ok", c.ok}, {"violations", std::move(v)}};
}

Json to_json(const PerronData& p) {
  return Json{{"kappa", p.kappa},          {"vector", p.vector},
              {"residual", p.residual},    {"converged", p.converged},
              {"iterations", p.iterations}, {"full_support", p.full_support},
              {"method", p.method}};
}

Json to_json(const InvariantMeasures& m) {
  return Json{{"mu_plus", m.mu_plus},
              {"mu_minus", m.mu_minus},
              {"kappa", m.kappa},
              {"kappa_gap", m.kappa_gap},
              {"residual_plus", m.residual_plus},
              {"residual_minus", m.residual_minus},
              {"converged", m.converged},
              {"full_support_plus", m.full_support_plus},
              {"full_support_minus", m.full_support_minus}};
}

Json to_json(const AdmissibleWords& w) {
  Json words = Json::array();
  for (const SymbolWord& s : w.words) {
    Json one = Json::array();
    for (int x : s) one.push_back(x + 1);
    words.push_back(std::move(one));
  }
  return Json{{"count", w.count}, {"listed", w.listed}, {"words", std::move(words)}};
}

Json to_json(const CodingReport& r) {
  Json dead = Json::array();
  for (int d : r.dead_ends) dead.push_back(d + 1);
  return Json{{"depth", r.depth},
              {"enumerated", r.enumerated},
              {"matrix_count", r.matrix_count},
              {"counts_match", r.counts_match},
              {"dead_ends", std::move(dead)},
              {"non_extendable", r.non_extendable},
              {"ok", r.ok}};
}

}  // namespace hmlam
