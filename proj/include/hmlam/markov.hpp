#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmlam {

// Dense row-major square matrix.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), v_(n * n, fill) {}
  SquareMatrix(std::initializer_list<std::initializer_list<T>> rows) : n_(rows.size()) {
    v_.reserve(n_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw std::invalid_argument("SquareMatrix: ragged initializer");
      v_.insert(v_.end(), r.begin(), r.end());
    }
  }

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  const std::vector<T>& data() const { return v_; }

  SquareMatrix transpose() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> v_;
};

using IntMatrix = SquareMatrix<std::int64_t>;
using RealMatrix = SquareMatrix<double>;

RealMatrix to_real(const IntMatrix& m);

enum class Degeneracy { full, arc_plus, arc_minus, point };

const char* to_string(Degeneracy d);
// Accepts "full", "arc+", "arc-", "point".
Degeneracy parse_degeneracy(const std::string& s);

struct Rect4Gon {
  std::string id;
  Degeneracy degeneracy = Degeneracy::full;
  std::optional<std::array<std::complex<double>, 4>> anchor;  // disk corners, for rendering
};

// Number of components of h(R_i) ∩ R_j for every ordered pair, plus an
// uninterpreted orientation tag for single crossings.
struct CrossingTable {
  std::size_t n = 0;
  IntMatrix counts;
  std::vector<std::string> orientation;  // row-major, empty when untagged

  explicit CrossingTable(std::size_t size = 0) : n(size), counts(size), orientation(size * size) {}
};

struct MarkovViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t count = 0;
};

struct MarkovCheck {
  bool ok = true;
  std::vector<MarkovViolation> violations;
};

// Ok iff every positive count equals 1. Throws ValidationError on dimension
// mismatch, duplicate rectangle ids, or negative counts.
MarkovCheck verify_markov(std::span<const Rect4Gon> rects, const CrossingTable& table);

// 0/1 transition matrix of a verified Markov family.
struct IncidenceA {
  IntMatrix m;
};

// Component-count matrix of a pre-Markov family.
struct IncidenceB {
  IntMatrix m;
};

// Refuses (ValidationError) unless verify_markov passes.
IncidenceA build_matrix_A(std::span<const Rect4Gon> rects, const CrossingTable& table);
IncidenceB build_matrix_B(const CrossingTable& table);

// Finite window of a symbol sequence; symbols are 0-based internally and
// printed 1-based.
using SymbolWord = std::vector<int>;

std::string to_string(const SymbolWord& w);
bool is_admissible(const IncidenceA& a, const SymbolWord& w);

// Drops the first symbol. Throws ValidationError for words shorter than 2.
SymbolWord shift(const SymbolWord& w);

struct AdmissibleWords {
  std::uint64_t count = 0;
  bool listed = false;
  std::vector<SymbolWord> words;  // lexicographic, only when listed
};

inline constexpr std::size_t kDefaultWordListBudget = 100'000;

// Number of admissible length-m windows (the entry sum of A^(m-1)); the
// list is produced only when the count fits the budget. Throws BudgetError
// if the count overflows 64 bits.
AdmissibleWords admissible_words(const IncidenceA& a, int m, std::size_t list_budget = kDefaultWordListBudget);

// Entry sum of A^(m-1) in exact integer arithmetic (n for m = 1).
std::uint64_t window_count(const IntMatrix& a, int m);

IntMatrix matrix_power(const IntMatrix& a, int k);

struct PerronData {
  double kappa = 0.0;
  std::vector<double> vector;  // nonnegative, sums to 1
  double residual = 0.0;       // max |M y - kappa y|
  bool converged = false;
  int iterations = 0;
  bool full_support = false;
  std::string method;  // "power" or "block"
};

inline constexpr double kPerronTol = 1e-12;
inline constexpr int kPerronMaxIter = 100'000;

// Dominant nonnegative eigenpair by power iteration (on M + I) from the
// uniform vector, falling back to a block-triangular construction for
// reducible matrices where plain iteration stalls. Throws ValidationError
// for negative entries or the zero matrix.
PerronData perron(const RealMatrix& m, double tol = kPerronTol, int max_iter = kPerronMaxIter);

// log kappa of A; 0 when the subshift is empty (kappa < 1).
double entropy(const IncidenceA& a, double tol = kPerronTol);
double entropy(const IntMatrix& a, double tol = kPerronTol);

struct InvariantMeasures {
  std::vector<double> mu_plus;   // right Perron vector of B
  std::vector<double> mu_minus;  // right Perron vector of B^T
  double kappa = 0.0;
  double kappa_gap = 0.0;  // |kappa(B) - kappa(B^T)|
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  bool converged = false;
  bool full_support_plus = false;
  bool full_support_minus = false;
};

InvariantMeasures invariant_measures(const IncidenceB& b, double tol = kPerronTol, int max_iter = kPerronMaxIter);

struct CodingReport {
  int depth = 0;
  std::uint64_t enumerated = 0;     // brute-force count of admissible depth-words
  std::uint64_t matrix_count = 0;   // entry sum of A^(depth-1)
  bool counts_match = false;
  std::vector<int> dead_ends;       // symbols whose row of A is zero
  std::uint64_t non_extendable = 0; // admissible depth-words with a dead-end last symbol
  bool ok = false;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

CodingReport coding_consistency(const IncidenceA& a, int depth,
                                std::uint64_t enumeration_budget = kDefaultEnumerationBudget);

}  // namespace hmlam
