#include "hmlam/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "geodesic_index.hpp"
#include "hmlam/error.hpp"

namespace hmlam {

const char* to_string(Sign s) { return s == Sign::negative ? "-" : "+"; }

Sign opposite(Sign s) { return s == Sign::negative ? Sign::positive : Sign::negative; }

const char* to_string(EscapeVerdict v) {
  switch (v) {
    case EscapeVerdict::escaping: return "escaping";
    case EscapeVerdict::non_escaping: return "non-escaping";
    case EscapeVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(AxiomStatus s) {
  switch (s) {
    case AxiomStatus::pass: return "pass";
    case AxiomStatus::fail: return "fail";
    case AxiomStatus::flag: return "flag";
    case AxiomStatus::unchecked: return "unchecked";
  }
  return "?";
}

bool operator<(const ChainKey& x, const ChainKey& y) {
  if (x.juncture != y.juncture) return x.juncture < y.juncture;
  if (x.conjugator != y.conjugator) return x.conjugator < y.conjugator;
  return x.residue < y.residue;
}

namespace {

// Signed angle difference to - from, in (-pi, pi].
double signed_delta(double from, double to) {
  double d = std::fmod(to - from, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

double endpoint_gap(const Geodesic& g, const Geodesic& h) {
  return std::max(circular_distance(g.a().angle(), h.a().angle()),
                  circular_distance(g.b().angle(), h.b().angle()));
}

// Direction in which a juncture's iterates accumulate on the opposite lamination.
int chain_direction(Sign juncture_sign) { return juncture_sign == Sign::negative ? 1 : -1; }

struct ChainResult {
  std::optional<Geodesic> limit;
  std::vector<double> certificate;
  int last_iterate = 0;
  std::string reason;
};

// Geometric-tail extrapolation of one endpoint angle.
double extrapolate(double prev2, double prev, double last) {
  const double d_prev = signed_delta(prev2, prev);
  const double d_last = signed_delta(prev, last);
  if (d_prev != 0.0) {
    const double r = d_last / d_prev;
    if (r > 0.0 && r < 1.0) return last + d_last * r / (1.0 - r);
  }
  return last;
}

ChainResult certify_chain(const std::vector<std::pair<int, Geodesic>>& chain, const LaminationParams& params) {
  ChainResult res;
  if (chain.size() < 5) {
    res.reason = "chain too short (needs at least 5 consecutive iterates)";
    return res;
  }
  std::vector<double> gaps(chain.size(), 0.0);
  bool stationary = true;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    gaps[i] = endpoint_gap(chain[i - 1].second, chain[i].second);
    if (gaps[i] >= params.eps.theta) stationary = false;
  }
  if (stationary) {
    res.reason = "stationary chain (juncture fixed up to conjugacy)";
    return res;
  }
  std::optional<std::size_t> hit;
  bool went_below = false;
  for (std::size_t i = 4; i < chain.size(); ++i) {
    if (gaps[i] < params.tol) went_below = true;
    if (gaps[i] < params.tol && gaps[i - 3] > gaps[i - 2] && gaps[i - 2] > gaps[i - 1] &&
        gaps[i - 1] > gaps[i]) {
      hit = i;
      break;
    }
  }
  if (!hit) {
    res.reason = went_below ? "endpoint gaps not monotone (oscillating chain)"
                            : "endpoint gaps did not fall below tolerance within the horizon";
    return res;
  }
  std::size_t last = *hit;
  while (last + 1 < chain.size() && gaps[last + 1] < gaps[last]) ++last;

  const Geodesic& g0 = chain[last - 2].second;
  const Geodesic& g1 = chain[last - 1].second;
  const Geodesic& g2 = chain[last].second;
  const double a = extrapolate(g0.a().angle(), g1.a().angle(), g2.a().angle());
  const double b = extrapolate(g0.b().angle(), g1.b().angle(), g2.b().angle());
  try {
    res.limit = Geodesic(IdealPoint::from_angle(a), IdealPoint::from_angle(b), false, params.eps.theta);
  } catch (const ValidationError&) {
    res.reason = "chain collapsed to a single boundary point";
    return res;
  }
  res.certificate.assign(gaps.begin() + 1, gaps.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  res.last_iterate = chain[last].first;
  return res;
}

}  // namespace

GeodesicFamily juncture_orbit(const SurfaceMap& map, std::size_t juncture, int n_min, int n_max, int k,
                              const LaminationParams& params) {
  if (juncture >= map.junctures.size()) throw ValidationError("juncture index out of range");
  if (n_min > n_max) throw ValidationError("empty iterate range");
  const JunctureSpec& j = map.junctures[juncture];
  if (j.word.empty()) throw ValidationError("juncture " + j.end + " has an empty word");

  // phi^n(w) for every n in range, built outward from n = 0.
  std::map<int, Word> words;
  Word w = j.word;
  if (n_min <= 0 && 0 <= n_max) words.emplace(0, w);
  for (int n = 1; n <= std::max(n_max, 0); ++n) {
    w = apply_automorphism(map.phi, w, 1, params.max_letters);
    if (n >= n_min && n <= n_max) words.emplace(n, w);
  }
  w = j.word;
  for (int n = -1; n >= std::min(n_min, 0); --n) {
    w = apply_automorphism(map.phi, w, -1, params.max_letters);
    if (n >= n_min && n <= n_max) words.emplace(n, w);
  }

  const auto ball = enumerate_ball(map.group, k, params.max_ball_words);
  GeodesicFamily fam;
  fam.juncture_sign = j.sign;
  detail::GeodesicIndex index(params.eps.theta);
  for (const auto& [n, word] : words) {
    const Isometry m = evaluate_word(map.group, word);
    if (classify_isometry(m, params.eps) != IsometryClass::hyperbolic) {
      throw NotHyperbolicError("juncture " + j.end + " iterate " + std::to_string(n) +
                               " evaluates to a non-hyperbolic element");
    }
    std::optional<Geodesic> ax;
    try {
      ax = axis(m, params.eps);
    } catch (const ValidationError&) {
      // Both fixed points within eps.theta: too short to resolve.
      fam.degenerate += ball.size();
      continue;
    }
    for (const BallElement& g : ball) {
      std::optional<Geodesic> image;
      try {
        image = apply_isometry(g.isometry, *ax);
      } catch (const ValidationError&) {
        ++fam.degenerate;
        continue;
      }
      const Geodesic& lift = *image;
      Provenance tag{juncture, j.period, n, g.word, lift};
      if (const auto hit = index.find(lift)) {
        fam.entries[*hit].provenance.push_back(std::move(tag));
      } else {
        index.insert(lift);
        fam.entries.push_back({lift, {std::move(tag)}});
      }
    }
  }
  return fam;
}

GeodesicFamily sign_family(const SurfaceMap& map, Sign juncture_sign, const LaminationParams& params) {
  GeodesicFamily fam;
  fam.juncture_sign = juncture_sign;
  detail::GeodesicIndex index(params.eps.theta);
  for (std::size_t j = 0; j < map.junctures.size(); ++j) {
    if (map.junctures[j].sign != juncture_sign) continue;
    const GeodesicFamily part = juncture_orbit(map, j, -params.horizon, params.horizon, params.ball, params);
    fam.degenerate += part.degenerate;
    for (const FamilyEntry& e : part.entries) {
      if (const auto hit = index.find(e.geodesic)) {
        auto& prov = fam.entries[*hit].provenance;
        prov.insert(prov.end(), e.provenance.begin(), e.provenance.end());
      } else {
        index.insert(e.geodesic);
        fam.entries.push_back(e);
      }
    }
  }
  return fam;
}

EscapeVerdict classify_lengths(const std::vector<double>& lengths, double growth_ratio) {
  if (lengths.size() < 2 || !(lengths.front() > 0.0)) return EscapeVerdict::inconclusive;
  const double l0 = lengths.front();
  const bool bounded = std::all_of(lengths.begin(), lengths.end(), [&](double l) {
    return l <= growth_ratio * l0 && l >= l0 / growth_ratio;
  });
  if (bounded) return EscapeVerdict::escaping;
  const std::size_t n = lengths.size() - 1;
  if (lengths.back() / l0 > growth_ratio) {
    bool monotone = true;
    for (std::size_t i = n - n / 2; i < n; ++i) monotone = monotone && lengths[i + 1] > lengths[i];
    if (monotone) return EscapeVerdict::non_escaping;
  }
  return EscapeVerdict::inconclusive;
}

EscapeReport escape_test(const SurfaceMap& map, std::size_t juncture, int horizon, double growth_ratio,
                         const LaminationParams& params) {
  if (juncture >= map.junctures.size()) throw ValidationError("juncture index out of range");
  if (horizon < 3) throw ValidationError("escape horizon must be at least 3");
  const JunctureSpec& j = map.junctures[juncture];
  const int dir = chain_direction(j.sign);
  EscapeReport rep;
  rep.juncture = juncture;
  rep.growth_ratio = growth_ratio;
  std::vector<double> lengths;
  Word w = j.word;
  for (int step = 0; step <= horizon; ++step) {
    if (step > 0) w = apply_automorphism(map.phi, w, dir, params.max_letters);
    const Isometry m = evaluate_word(map.group, w);
    double len = 0.0;
    if (classify_isometry(m, params.eps) == IsometryClass::hyperbolic) len = translation_length(m, params.eps);
    rep.steps.push_back({dir * step, len, w.size()});
    lengths.push_back(len);
  }
  rep.verdict = classify_lengths(lengths, growth_ratio);
  return rep;
}

LaminationApprox extract_limit_leaves(const GeodesicFamily& family, const LaminationParams& params) {
  const int dir = chain_direction(family.juncture_sign);
  // Chains in key order, iterates ordered by distance from 0 in the chain direction.
  struct ChainData {
    int period = 1;
    std::map<int, Geodesic> iterates;
  };
  std::map<ChainKey, ChainData> chains;
  for (const FamilyEntry& e : family.entries) {
    for (const Provenance& p : e.provenance) {
      const int steps = dir * p.iterate;
      if (steps < 0) continue;
      const int period = std::max(p.period, 1);
      ChainData& data = chains[ChainKey{p.juncture, p.conjugator, steps % period}];
      data.period = period;
      data.iterates.emplace(steps, p.lift);
    }
  }

  LaminationApprox lam;
  lam.lamination_sign = opposite(family.juncture_sign);
  detail::GeodesicIndex leaf_index(params.eps.theta);
  std::map<ChainKey, std::size_t> chain_leaf;
  for (const auto& [key, data] : chains) {
    std::vector<std::pair<int, Geodesic>> chain;
    int expect = key.residue;
    for (const auto& [steps, g] : data.iterates) {
      if (steps != expect) break;
      chain.emplace_back(dir * steps, g);
      expect += data.period;
    }
    ChainResult r = certify_chain(chain, params);
    if (!r.limit) {
      lam.skipped.push_back({key, r.reason});
      continue;
    }
    if (const auto hit = leaf_index.find(*r.limit)) {
      ++lam.leaves[*hit].merged_chains;
      chain_leaf[key] = *hit;
      continue;
    }
    chain_leaf[key] = leaf_index.insert(*r.limit);
    lam.leaves.push_back({*r.limit, key, std::move(r.certificate), r.last_iterate, 1});
  }

  // Drop limits that coincide with a juncture lift not belonging to a chain
  // that converges to them.
  detail::GeodesicIndex family_index(params.eps.theta);
  for (const FamilyEntry& e : family.entries) family_index.insert(e.geodesic);
  std::vector<Leaf> kept;
  for (std::size_t li = 0; li < lam.leaves.size(); ++li) {
    bool in_family = false;
    for (std::size_t fi : family_index.find_all(lam.leaves[li].geodesic)) {
      bool resolved = false;
      for (const Provenance& p : family.entries[fi].provenance) {
        const int steps = dir * p.iterate;
        if (steps < 0) continue;
        const auto it = chain_leaf.find(ChainKey{p.juncture, p.conjugator, steps % std::max(p.period, 1)});
        if (it != chain_leaf.end() && it->second == li) {
          resolved = true;
          break;
        }
      }
      if (!resolved) {
        in_family = true;
        break;
      }
    }
    if (in_family) {
      ++lam.excluded_as_junctures;
    } else {
      kept.push_back(std::move(lam.leaves[li]));
    }
  }
  lam.leaves = std::move(kept);
  return lam;
}

std::vector<CrossingViolation> crossing_audit(const std::vector<Geodesic>& leaves, double eps) {
  std::vector<CrossingViolation> out;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      if (geodesic_relation(leaves[i], leaves[j], eps) == GeodesicRelation::cross) {
        out.push_back({i, j, leaves[i], leaves[j]});
      }
    }
  }
  return out;
}

std::vector<CrossingViolation> crossing_audit(const LaminationApprox& lam, double eps) {
  std::vector<Geodesic> leaves;
  leaves.reserve(lam.leaves.size());
  for (const Leaf& l : lam.leaves) leaves.push_back(l.geodesic);
  return crossing_audit(leaves, eps);
}

MeagerInvariantSet transversal_intersections(const LaminationApprox& plus, const LaminationApprox& minus,
                                             double eps) {
  MeagerInvariantSet set;
  std::vector<bool> minus_hit(minus.leaves.size(), false);
  for (std::size_t i = 0; i < plus.leaves.size(); ++i) {
    bool hit = false;
    for (std::size_t j = 0; j < minus.leaves.size(); ++j) {
      const Geodesic& gp = plus.leaves[i].geodesic;
      const Geodesic& gm = minus.leaves[j].geodesic;
      if (geodesic_relation(gp, gm, eps) != GeodesicRelation::cross) continue;
      const HPoint p = geodesic_intersection(gp, gm, eps);
      set.points.push_back({i, j, p, to_disk(p)});
      hit = true;
      minus_hit[j] = true;
    }
    if (!hit) set.plus_without_crossing.push_back(i);
  }
  for (std::size_t j = 0; j < minus.leaves.size(); ++j) {
    if (!minus_hit[j]) set.minus_without_crossing.push_back(j);
  }
  return set;
}

namespace {

// Pairs (lamination-or-family geodesic, opposite family geodesic) that coincide;
// transverse families must have none.
std::size_t coincidences(const std::vector<Geodesic>& lhs, const GeodesicFamily& rhs, double eps) {
  detail::GeodesicIndex index(eps);
  for (const FamilyEntry& e : rhs.entries) index.insert(e.geodesic);
  std::size_t n = 0;
  for (const Geodesic& g : lhs) n += index.find(g) ? 1 : 0;
  return n;
}

std::string fraction_text(std::size_t num, std::size_t den) {
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace

AxiomReport axiom_report(const SurfaceMap& map, const LaminationParams& params) {
  AxiomReport rep;
  rep.params = params;
  const double eps = params.eps.theta;
  const GeodesicFamily neg = sign_family(map, Sign::negative, params);
  const GeodesicFamily pos = sign_family(map, Sign::positive, params);
  rep.negative_family_size = neg.entries.size();
  rep.positive_family_size = pos.entries.size();
  rep.lambda_plus = extract_limit_leaves(neg, params);
  rep.lambda_minus = extract_limit_leaves(pos, params);
  rep.violations_plus = crossing_audit(rep.lambda_plus, eps);
  rep.violations_minus = crossing_audit(rep.lambda_minus, eps);
  rep.meager = transversal_intersections(rep.lambda_plus, rep.lambda_minus, eps);

  const std::size_t np = rep.lambda_plus.leaves.size();
  const std::size_t nm = rep.lambda_minus.leaves.size();
  if (np > 0) rep.coverage_plus = 1.0 - static_cast<double>(rep.meager.plus_without_crossing.size()) / np;
  if (nm > 0) rep.coverage_minus = 1.0 - static_cast<double>(rep.meager.minus_without_crossing.size()) / nm;

  const bool empty = np == 0 && nm == 0;
  if (empty) rep.flags.push_back("not endperiodic-like: no limit leaves at this horizon");

  // I: leaves of one lamination never cross.
  {
    AxiomCheck c{"I", AxiomStatus::unchecked, "no leaves"};
    if (!empty) {
      const std::size_t v = rep.violations_plus.size() + rep.violations_minus.size();
      c.status = v == 0 ? AxiomStatus::pass : AxiomStatus::fail;
      c.detail = std::to_string(v) + " crossing pair(s) within a lamination";
    }
    rep.checks.push_back(c);
  }
  rep.checks.push_back({"II", AxiomStatus::unchecked, "strong closedness is not testable on finite data"});
  // III: every leaf meets an opposite leaf; geodesics meet at most once.
  {
    AxiomCheck c{"III", AxiomStatus::unchecked, "no leaves"};
    if (np > 0 && nm > 0) {
      const bool full = rep.meager.plus_without_crossing.empty() && rep.meager.minus_without_crossing.empty();
      c.status = full ? AxiomStatus::pass : AxiomStatus::flag;
      c.detail = "coverage Lambda+ " + fraction_text(np - rep.meager.plus_without_crossing.size(), np) +
                 ", Lambda- " + fraction_text(nm - rep.meager.minus_without_crossing.size(), nm);
    } else if (!empty) {
      c.status = AxiomStatus::flag;
      c.detail = "only one lamination has leaves at this horizon";
    }
    rep.checks.push_back(c);
  }
  rep.checks.push_back({"IV", AxiomStatus::unchecked, "end behaviour of leaves is not computed"});
  rep.checks.push_back({"V", AxiomStatus::unchecked, "invariance under h needs the boundary extension of h"});
  // VI(1): Lambda+- together with X-+ never coincides with a curve of X+-.
  {
    std::vector<Geodesic> gamma_plus, gamma_minus;
    for (const Leaf& l : rep.lambda_plus.leaves) gamma_plus.push_back(l.geodesic);
    for (const FamilyEntry& e : neg.entries) gamma_plus.push_back(e.geodesic);
    for (const Leaf& l : rep.lambda_minus.leaves) gamma_minus.push_back(l.geodesic);
    for (const FamilyEntry& e : pos.entries) gamma_minus.push_back(e.geodesic);
    const std::size_t bad = (pos.entries.empty() ? 0 : coincidences(gamma_plus, pos, eps)) +
                            (neg.entries.empty() ? 0 : coincidences(gamma_minus, neg, eps));
    AxiomCheck c{"VI.1", bad == 0 ? AxiomStatus::pass : AxiomStatus::flag,
                 std::to_string(bad) + " coincidence(s) between transverse families"};
    if (neg.entries.empty() || pos.entries.empty()) {
      c.status = AxiomStatus::unchecked;
      c.detail = "needs junctures of both signs";
    }
    rep.checks.push_back(c);
  }
  // VI(2): junctures accumulate on the leaves; every emitted leaf is a certified limit.
  {
    AxiomCheck c{"VI.2", AxiomStatus::unchecked, "no leaves"};
    if (!empty) {
      c.status = AxiomStatus::pass;
      c.detail = std::to_string(np + nm) + " leaves with convergence certificates, " +
                 std::to_string(rep.lambda_plus.excluded_as_junctures + rep.lambda_minus.excluded_as_junctures) +
                 " limit(s) excluded as junctures";
    }
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace hmlam
