#include "hmlam/group.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hmlam/error.hpp"

namespace hmlam {

Word Word::inverse() const {
  Word r;
  r.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.letters_.push_back(it->inv());
  return r;
}

void Word::push(const Letter& l) {
  if (!letters_.empty() && letters_.back().cancels(l)) {
    letters_.pop_back();
  } else {
    letters_.push_back(l);
  }
}

Word operator*(const Word& lhs, const Word& rhs) {
  Word r = lhs;
  for (const Letter& l : rhs.letters_) r.push(l);
  return r;
}

bool operator<(const Word& lhs, const Word& rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  return std::lexicographical_compare(
      lhs.letters_.begin(), lhs.letters_.end(), rhs.letters_.begin(), rhs.letters_.end(),
      [](const Letter& x, const Letter& y) { return letter_rank(x) < letter_rank(y); });
}

std::string Word::to_string(std::span<const std::string> names) const {
  if (letters_.empty()) return "1";
  std::string out;
  for (const Letter& l : letters_) {
    if (!out.empty()) out += ' ';
    out += names[l.gen];
    if (l.inverse) out += "^-1";
  }
  return out;
}

Word free_reduce(std::span<const Letter> letters, int rank) {
  Word w;
  for (const Letter& l : letters) {
    if (l.gen < 0 || l.gen >= rank) {
      throw ValidationError("unknown generator index " + std::to_string(l.gen));
    }
    w.push(l);
  }
  return w;
}

Word parse_word(const std::string& text, std::span<const std::string> names) {
  std::istringstream in(text);
  std::vector<Letter> letters;
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    bool inv = false;
    std::string name = tok;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      const std::string exp = tok.substr(caret + 1);
      name = tok.substr(0, caret);
      if (exp == "-1") {
        inv = true;
      } else if (exp != "1") {
        throw ValidationError("unsupported exponent '" + exp + "' in word '" + text + "'");
      }
    }
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ValidationError("unknown generator '" + name + "' in word '" + text + "'");
    letters.push_back({static_cast<int>(it - names.begin()), inv});
  }
  return free_reduce(letters, static_cast<int>(names.size()));
}

FuchsianGroup::FuchsianGroup(std::vector<std::string> names, std::vector<Isometry> generators,
                             const Tolerance& tol)
    : names_(std::move(names)), generators_(std::move(generators)) {
  if (generators_.empty()) throw ValidationError("group needs at least one generator");
  if (names_.size() != generators_.size()) throw ValidationError("generator name count mismatch");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw ValidationError("generator name must be nonempty");
    if (!seen.insert(names_[i]).second) throw ValidationError("duplicate generator name '" + names_[i] + "'");
    if (classify_isometry(generators_[i], tol) != IsometryClass::hyperbolic) {
      throw ValidationError("generator " + names_[i] + " is not hyperbolic");
    }
    inverses_.push_back(generators_[i].inverse());
  }
}

Isometry evaluate_word(const FuchsianGroup& group, const Word& w) {
  Isometry m;
  for (const Letter& l : w.letters()) {
    if (l.gen < 0 || l.gen >= group.rank()) throw ValidationError("word uses a generator outside the group");
    m = m * group.letter(l);
  }
  return m;
}

FreeAutomorphism::FreeAutomorphism(std::vector<Word> forward, std::vector<Word> inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  if (forward_.size() != inverse_.size()) {
    throw ValidationError("forward and inverse substitutions have different sizes");
  }
  const int r = rank();
  for (const auto* table : {&forward_, &inverse_}) {
    for (const Word& w : *table) {
      for (const Letter& l : w.letters()) {
        if (l.gen < 0 || l.gen >= r) throw ValidationError("substitution uses an unknown generator");
      }
    }
  }
}

FreeAutomorphism FreeAutomorphism::identity(int rank) {
  std::vector<Word> images;
  for (int g = 0; g < rank; ++g) {
    const Letter l{g, false};
    images.push_back(free_reduce(std::span(&l, 1), rank));
  }
  return FreeAutomorphism(images, images);
}

namespace {

Word substitute(const std::vector<Word>& images, const std::vector<Word>& inverse_images,
                const Word& w, std::size_t max_letters) {
  Word out;
  for (const Letter& l : w.letters()) {
    const Word& img = l.inverse ? inverse_images[l.gen] : images[l.gen];
    for (const Letter& x : img.letters()) out.push(x);
    if (out.size() > max_letters) {
      throw BudgetError("word length exceeded the budget of " + std::to_string(max_letters) + " letters");
    }
  }
  return out;
}

}  // namespace

Word apply_automorphism(const FreeAutomorphism& phi, const Word& w, int n, std::size_t max_letters) {
  if (n == 0) return w;
  const auto& table = n > 0 ? phi.forward() : phi.inverse();
  std::vector<Word> inv_images;
  inv_images.reserve(table.size());
  for (const Word& img : table) inv_images.push_back(img.inverse());
  Word cur = w;
  for (int i = 0; i < std::abs(n); ++i) cur = substitute(table, inv_images, cur, max_letters);
  return cur;
}

AutomorphismReport verify_automorphism(const FreeAutomorphism& phi) {
  AutomorphismReport rep;
  for (int g = 0; g < phi.rank(); ++g) {
    const Letter l{g, false};
    const Word x = free_reduce(std::span(&l, 1), phi.rank());
    if (apply_automorphism(phi, apply_automorphism(phi, x, 1), -1) != x) {
      rep.failing_inverse_after_forward.push_back(g);
    }
    if (apply_automorphism(phi, apply_automorphism(phi, x, -1), 1) != x) {
      rep.failing_forward_after_inverse.push_back(g);
    }
  }
  rep.ok = rep.failing_inverse_after_forward.empty() && rep.failing_forward_after_inverse.empty();
  return rep;
}

std::size_t ball_size(int rank, int k) {
  if (k < 0) return 0;
  std::size_t total = 1;
  std::size_t layer = 2 * static_cast<std::size_t>(rank);
  for (int len = 1; len <= k; ++len) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

std::vector<BallElement> enumerate_ball(const FuchsianGroup& group, int k, std::size_t max_words) {
  if (k < 0) throw ValidationError("ball radius must be nonnegative");
  // Bound check in floating point to avoid overflow for huge k.
  double expected = 1.0, layer = 2.0 * group.rank();
  for (int len = 1; len <= k && expected <= static_cast<double>(max_words); ++len) {
    expected += layer;
    layer *= 2.0 * group.rank() - 1.0;
  }
  if (expected > static_cast<double>(max_words)) {
    throw BudgetError("ball of radius " + std::to_string(k) + " exceeds the budget of " +
                      std::to_string(max_words) + " words");
  }
  std::vector<BallElement> out;
  out.reserve(static_cast<std::size_t>(expected));
  out.push_back({Word{}, Isometry{}});
  std::size_t layer_begin = 0;
  for (int len = 1; len <= k; ++len) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (int g = 0; g < group.rank(); ++g) {
        for (bool inv : {false, true}) {
          const Letter l{g, inv};
          const Word& parent = out[i].word;
          if (!parent.empty() && parent.letters().back().cancels(l)) continue;
          Word w = parent;
          w.push(l);
          Isometry m = out[i].isometry * group.letter(l);
          out.push_back({std::move(w), m});
        }
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

LimitSetSample limit_set_sample(const FuchsianGroup& group, const HPoint& base, int k,
                                const Tolerance& tol, std::size_t max_words) {
  LimitSetSample s;
  for (const BallElement& e : enumerate_ball(group, k, max_words)) {
    s.orbit.push_back(to_disk(apply_isometry(e.isometry, base)));
    if (classify_isometry(e.isometry, tol) == IsometryClass::hyperbolic) {
      const Geodesic ax = axis(e.isometry, tol);
      s.fixed_points.push_back(ax.a());
      s.fixed_points.push_back(ax.b());
    }
  }
  return s;
}

}  // namespace hmlam
