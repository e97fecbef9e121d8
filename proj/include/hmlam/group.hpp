#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hmlam/hyperbolic.hpp"

namespace hmlam {

// One letter of a free-group word: generator index and exponent sign.
struct Letter {
  int gen = 0;
  bool inverse = false;

  Letter inv() const { return {gen, !inverse}; }
  bool cancels(const Letter& o) const { return gen == o.gen && inverse != o.inverse; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

// Shortlex-friendly letter rank: a < a^-1 < b < b^-1 < ...
inline int letter_rank(const Letter& l) { return 2 * l.gen + (l.inverse ? 1 : 0); }

// A freely reduced word. Constructed only through free_reduce or the word
// operations below, so adjacent x x^-1 pairs never occur.
class Word {
 public:
  Word() = default;

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;
  // Reduced concatenation.
  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;
  // Shortlex order.
  friend bool operator<(const Word& lhs, const Word& rhs);

  // Appends one letter, cancelling against the tail.
  void push(const Letter& l);

  // "a b^-1 c", with names indexed by generator. Empty word renders as "1".
  std::string to_string(std::span<const std::string> names) const;

 private:
  friend Word free_reduce(std::span<const Letter> letters, int rank);
  std::vector<Letter> letters_;
};

// Throws ValidationError for a generator index outside [0, rank).
Word free_reduce(std::span<const Letter> letters, int rank);

// Parses whitespace-separated generator names, each optionally followed by
// "^-1" or "^1". "1" and the blank string denote the empty word.
Word parse_word(const std::string& text, std::span<const std::string> names);

class FuchsianGroup {
 public:
  // Generators must be hyperbolic; names must be distinct and nonempty.
  FuchsianGroup(std::vector<std::string> names, std::vector<Isometry> generators,
                const Tolerance& tol = {});

  int rank() const { return static_cast<int>(generators_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Isometry>& generators() const { return generators_; }
  const Isometry& letter(const Letter& l) const {
    return l.inverse ? inverses_[l.gen] : generators_[l.gen];
  }

 private:
  std::vector<std::string> names_;
  std::vector<Isometry> generators_;
  std::vector<Isometry> inverses_;
};

Isometry evaluate_word(const FuchsianGroup& group, const Word& w);

inline constexpr std::size_t kDefaultMaxLetters = 1'000'000;

// An automorphism of the free group, given by the images of the generators
// under the map and under its inverse.
class FreeAutomorphism {
 public:
  FreeAutomorphism() = default;
  FreeAutomorphism(std::vector<Word> forward, std::vector<Word> inverse);

  static FreeAutomorphism identity(int rank);

  int rank() const { return static_cast<int>(forward_.size()); }
  const std::vector<Word>& forward() const { return forward_; }
  const std::vector<Word>& inverse() const { return inverse_; }

 private:
  std::vector<Word> forward_;
  std::vector<Word> inverse_;
};

// n-fold substitution (n < 0 uses the inverse substitution), reduced after
// each pass. Throws BudgetError once a word exceeds max_letters.
Word apply_automorphism(const FreeAutomorphism& phi, const Word& w, int n,
                        std::size_t max_letters = kDefaultMaxLetters);

struct AutomorphismReport {
  bool ok = true;
  // Generators x where inverse(forward(x)) != x.
  std::vector<int> failing_inverse_after_forward;
  // Generators x where forward(inverse(x)) != x.
  std::vector<int> failing_forward_after_inverse;
};

AutomorphismReport verify_automorphism(const FreeAutomorphism& phi);

struct BallElement {
  Word word;
  Isometry isometry;
};

inline constexpr std::size_t kDefaultMaxBallWords = 2'000'000;

// Number of reduced words of length <= k in a free group of the given rank.
std::size_t ball_size(int rank, int k);

// All reduced words of length <= k in shortlex order, with their values.
// Throws BudgetError if the ball would exceed max_words.
std::vector<BallElement> enumerate_ball(const FuchsianGroup& group, int k,
                                        std::size_t max_words = kDefaultMaxBallWords);

struct LimitSetSample {
  std::vector<std::complex<double>> orbit;  // disk coordinates of w.base
  std::vector<IdealPoint> fixed_points;     // repelling and attracting points
};

// Orbit of `base` under the length-<=k ball plus boundary fixed points of
// every hyperbolic element in it.
LimitSetSample limit_set_sample(const FuchsianGroup& group, const HPoint& base, int k,
                                const Tolerance& tol = {},
                                std::size_t max_words = kDefaultMaxBallWords);

}  // namespace hmlam
