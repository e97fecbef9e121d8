#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "hmlam/group.hpp"
#include "hmlam/hyperbolic.hpp"

namespace hmlam {

enum class Sign { negative, positive };

const char* to_string(Sign s);
Sign opposite(Sign s);

// A juncture of an end: the conjugacy class of one component (as a word)
// together with the period of the end.
struct JunctureSpec {
  std::string end;
  Sign sign = Sign::negative;
  Word word;
  int period = 1;
};

// An endperiodic map presented on the fundamental group: the deck group,
// the induced automorphism and the chosen junctures.
struct SurfaceMap {
  FuchsianGroup group;
  FreeAutomorphism phi;
  std::vector<JunctureSpec> junctures;
};

struct LaminationParams {
  int horizon = 12;    // iterates n in [-horizon, horizon]
  int ball = 3;        // conjugator words of length <= ball
  double tol = 1e-6;   // endpoint-gap threshold for accepting a chain
  Tolerance eps;
  std::size_t max_letters = kDefaultMaxLetters;
  std::size_t max_ball_words = kDefaultMaxBallWords;
};

struct Provenance {
  std::size_t juncture = 0;
  int period = 1;
  int iterate = 0;
  Word conjugator;
  // The lift as computed for this tag (the entry keeps the first one).
  Geodesic lift;
};

struct FamilyEntry {
  Geodesic geodesic;
  // Every (juncture, iterate, conjugator) that produced this geodesic; the
  // first one is the primary tag.
  std::vector<Provenance> provenance;
};

// Lifts of iterated junctures of one sign (X- for negative junctures).
struct GeodesicFamily {
  Sign juncture_sign = Sign::negative;
  std::vector<FamilyEntry> entries;
  // Lifts whose endpoints are closer than eps.theta; they cannot be
  // represented as geodesics and are left out.
  std::size_t degenerate = 0;
};

// A provenance chain: fixed juncture and conjugator, iterates in one residue
// class modulo the juncture period.
struct ChainKey {
  std::size_t juncture = 0;
  Word conjugator;
  int residue = 0;

  friend bool operator<(const ChainKey& x, const ChainKey& y);
  friend bool operator==(const ChainKey&, const ChainKey&) = default;
};

struct Leaf {
  Geodesic geodesic;
  ChainKey source;
  // Successive endpoint gaps of the chain up to the accepted iterate.
  std::vector<double> certificate;
  int last_iterate = 0;
  std::size_t merged_chains = 1;
};

struct SkippedChain {
  ChainKey key;
  std::string reason;
};

// Finite approximation of Lambda+ (built from X-) or Lambda- (from X+).
struct LaminationApprox {
  Sign lamination_sign = Sign::positive;
  std::vector<Leaf> leaves;
  std::vector<SkippedChain> skipped;
  std::size_t excluded_as_junctures = 0;
};

enum class EscapeVerdict { escaping, non_escaping, inconclusive };

const char* to_string(EscapeVerdict v);

struct EscapeStep {
  int iterate = 0;
  double translation_length = 0.0;
  std::size_t word_length = 0;
};

struct EscapeReport {
  std::size_t juncture = 0;
  double growth_ratio = 1.5;
  std::vector<EscapeStep> steps;
  EscapeVerdict verdict = EscapeVerdict::inconclusive;
};

struct CrossingViolation {
  std::size_t first = 0;
  std::size_t second = 0;
  Geodesic g1;
  Geodesic g2;
};

struct MeagerPoint {
  std::size_t plus_leaf = 0;
  std::size_t minus_leaf = 0;
  HPoint point;
  std::complex<double> disk;
};

// Transverse intersections of Lambda+ and Lambda- leaves.
struct MeagerInvariantSet {
  std::vector<MeagerPoint> points;
  std::vector<std::size_t> plus_without_crossing;
  std::vector<std::size_t> minus_without_crossing;
};

enum class AxiomStatus { pass, fail, flag, unchecked };

const char* to_string(AxiomStatus s);

struct AxiomCheck {
  std::string axiom;
  AxiomStatus status = AxiomStatus::unchecked;
  std::string detail;
};

struct AxiomReport {
  LaminationParams params;
  std::size_t negative_family_size = 0;
  std::size_t positive_family_size = 0;
  LaminationApprox lambda_plus;
  LaminationApprox lambda_minus;
  std::vector<CrossingViolation> violations_plus;
  std::vector<CrossingViolation> violations_minus;
  MeagerInvariantSet meager;
  double coverage_plus = 0.0;   // fraction of Lambda+ leaves crossing some Lambda- leaf
  double coverage_minus = 0.0;
  std::vector<AxiomCheck> checks;
  std::vector<std::string> flags;
  std::string caveat = "finite-approximation evidence only";
};

// Axes of g * phi^n(w) * g^-1 for n in [n_min, n_max] and |g| <= k,
// deduplicated under eps.theta. Throws NotHyperbolicError if an iterate
// evaluates to a non-hyperbolic element.
GeodesicFamily juncture_orbit(const SurfaceMap& map, std::size_t juncture, int n_min, int n_max,
                              int k, const LaminationParams& params = {});

// Union of juncture_orbit over all junctures of one sign at the configured horizon.
GeodesicFamily sign_family(const SurfaceMap& map, Sign juncture_sign, const LaminationParams& params);

// Escape verdict from a sequence of translation lengths l_0..l_N.
EscapeVerdict classify_lengths(const std::vector<double>& lengths, double growth_ratio);

// Iterates the juncture N times in its own direction (forward for negative
// junctures, backward for positive ones) and classifies length growth.
EscapeReport escape_test(const SurfaceMap& map, std::size_t juncture, int horizon,
                         double growth_ratio = 1.5, const LaminationParams& params = {});

// Certifies Cauchy convergence of each provenance chain and emits the limit
// geodesics. Negative-juncture chains run forward in n, positive ones backward.
LaminationApprox extract_limit_leaves(const GeodesicFamily& family, const LaminationParams& params = {});

std::vector<CrossingViolation> crossing_audit(const LaminationApprox& lam, double eps = 1e-9);
std::vector<CrossingViolation> crossing_audit(const std::vector<Geodesic>& leaves, double eps = 1e-9);

MeagerInvariantSet transversal_intersections(const LaminationApprox& plus, const LaminationApprox& minus,
                                             double eps = 1e-9);

AxiomReport axiom_report(const SurfaceMap& map, const LaminationParams& params = {});

}  // namespace hmlam
