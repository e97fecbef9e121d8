#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hmlam/error.hpp"
#include "hmlam/markov.hpp"
#include "support/oracles.hpp"

using namespace hmlam;

namespace {

const double kGolden = (1 + std::sqrt(5.0)) / 2;

std::vector<Rect4Gon> rects(std::size_t n) {
  std::vector<Rect4Gon> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].id = "R" + std::to_string(i + 1);
  return out;
}

CrossingTable table(const IntMatrix& counts) {
  CrossingTable t(counts.size());
  t.counts = counts;
  return t;
}

IncidenceA golden_a() { return build_matrix_A(rects(2), table(IntMatrix{{1, 1}, {1, 0}})); }

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int max_entry, double zero_prob) {
  std::uniform_int_distribution<int> entry(1, max_entry);
  std::bernoulli_distribution zero(zero_prob);
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = zero(rng) ? 0 : entry(rng);
  return m;
}

// Perron root of a positive matrix by power iteration in 50-digit decimal arithmetic.
double perron_root_mp(const IntMatrix& m) {
  using mp = boost::multiprecision::cpp_dec_float_50;
  const std::size_t n = m.size();
  std::vector<mp> y(n, mp(1) / n), z(n);
  mp kappa = 0;
  for (int it = 0; it < 2000; ++it) {
    mp sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = 0;
      for (std::size_t j = 0; j < n; ++j) z[i] += mp(m(i, j)) * y[j];
      sum += z[i];
    }
    kappa = sum;  // y sums to one
    for (std::size_t i = 0; i < n; ++i) y[i] = z[i] / sum;
  }
  return kappa.convert_to<double>();
}

std::vector<std::vector<int>> as_rows(const IntMatrix& m) {
  std::vector<std::vector<int>> rows(m.size(), std::vector<int>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) rows[i][j] = static_cast<int>(m(i, j));
  return rows;
}

}  // namespace

TEST_SUITE("markov") {
  TEST_CASE("Markov verification") {
    CHECK(verify_markov(rects(2), table(IntMatrix{{1, 1}, {1, 0}})).ok);
    const MarkovCheck bad = verify_markov(rects(2), table(IntMatrix{{2, 1}, {1, 0}}));
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0].i == 0);
    CHECK(bad.violations[0].j == 0);
    CHECK(bad.violations[0].count == 2);
    CHECK(verify_markov(rects(0), CrossingTable(0)).ok);

    CHECK_THROWS_AS(verify_markov(rects(3), table(IntMatrix{{1, 1}, {1, 0}})), ValidationError);
    auto dup = rects(2);
    dup[1].id = "R1";
    CHECK_THROWS_AS(verify_markov(dup, table(IntMatrix{{1, 1}, {1, 0}})), ValidationError);
    CHECK_THROWS_AS(verify_markov(rects(2), table(IntMatrix{{1, -1}, {1, 0}})), ValidationError);
  }

  TEST_CASE("incidence matrices") {
    CHECK(golden_a().m == IntMatrix{{1, 1}, {1, 0}});
    CHECK(build_matrix_A(rects(2), table(IntMatrix(2))).m == IntMatrix(2));
    CHECK(build_matrix_A(rects(3), table(IntMatrix(3, 1))).m == IntMatrix(3, 1));
    CHECK_THROWS_AS(build_matrix_A(rects(2), table(IntMatrix{{2, 1}, {1, 0}})), ValidationError);

    CHECK(build_matrix_B(table(IntMatrix{{2, 1}, {1, 0}})).m == IntMatrix{{2, 1}, {1, 0}});
    CHECK(build_matrix_B(table(IntMatrix{{1, 0}, {0, 1}})).m == IntMatrix{{1, 0}, {0, 1}});
    const IntMatrix markov{{1, 1}, {1, 0}};
    CHECK(build_matrix_B(table(markov)).m == build_matrix_A(rects(2), table(markov)).m);
  }

  TEST_CASE("degeneracy names") {
    for (Degeneracy d : {Degeneracy::full, Degeneracy::arc_plus, Degeneracy::arc_minus, Degeneracy::point}) {
      CHECK(parse_degeneracy(to_string(d)) == d);
    }
    CHECK_THROWS_AS(parse_degeneracy("half"), ValidationError);
  }

  TEST_CASE("admissible words") {
    const AdmissibleWords w3 = admissible_words(golden_a(), 3);
    CHECK(w3.count == 5);
    REQUIRE(w3.listed);
    std::vector<std::string> text;
    for (const auto& w : w3.words) text.push_back(to_string(w));
    CHECK(text == std::vector<std::string>{"1 1 1", "1 1 2", "1 2 1", "2 1 1", "2 1 2"});
    CHECK(admissible_words(golden_a(), 1).count == 2);
    const IncidenceA id = build_matrix_A(rects(2), table(IntMatrix{{1, 0}, {0, 1}}));
    CHECK(admissible_words(id, 4).count == 2);
    const AdmissibleWords big = admissible_words(golden_a(), 30, 10);
    CHECK_FALSE(big.listed);
    CHECK(big.words.empty());
    CHECK(big.count == 2178309);
    CHECK_THROWS_AS(admissible_words(golden_a(), 0), ValidationError);
  }

  TEST_CASE("window counts against brute-force enumeration") {
    const IntMatrix g{{1, 1}, {1, 0}};
    // Fibonacci: F(m + 2).
    std::uint64_t f1 = 1, f2 = 2;
    for (int m = 1; m <= 14; ++m) {
      CHECK(window_count(g, m) == f2);
      if (m <= 10) CHECK(oracle::brute_force_words(as_rows(g), m).size() == f2);
      const std::uint64_t next = f1 + f2;
      f1 = f2;
      f2 = next;
    }
    std::mt19937_64 rng(21);
    for (int k = 0; k < 30; ++k) {
      std::uniform_int_distribution<std::size_t> dim(1, 4);
      const IntMatrix a = random_matrix(rng, dim(rng), 1, 0.4);
      for (int m = 1; m <= 6; ++m) CHECK(window_count(a, m) == oracle::brute_force_words(as_rows(a), m).size());
    }
    CHECK_THROWS_AS(window_count(IntMatrix(2, 1), 70), BudgetError);
  }

  TEST_CASE("shift") {
    CHECK(shift({0, 1, 0}) == SymbolWord{1, 0});
    SymbolWord w{0, 0, 1, 0, 1};
    for (int k = 0; k < 4; ++k) w = shift(w);
    CHECK(w.size() == 1);
    CHECK_THROWS_AS(shift({0}), ValidationError);
    for (const SymbolWord& x : admissible_words(golden_a(), 6).words) CHECK(is_admissible(golden_a(), shift(x)));
    CHECK_FALSE(is_admissible(golden_a(), {1, 1}));
  }

  TEST_CASE("Perron data of the golden-mean matrix") {
    const PerronData p = perron(to_real(IntMatrix{{1, 1}, {1, 0}}));
    CHECK(p.converged);
    CHECK(std::fabs(p.kappa - kGolden) <= 1e-12);
    // x^2 - x - 1 vanishes at kappa.
    CHECK(std::fabs(p.kappa * p.kappa - p.kappa - 1) <= 1e-11);
    CHECK(p.residual <= 1e-12);
    CHECK(p.vector[0] / p.vector[1] == doctest::Approx(kGolden).epsilon(1e-10));
    CHECK(std::fabs(p.vector[0] + p.vector[1] - 1) < 1e-14);
    CHECK(p.full_support);
  }

  TEST_CASE("Perron data of identity and reducible matrices") {
    const PerronData id = perron(to_real(IntMatrix{{1, 0}, {0, 1}}));
    CHECK(id.kappa == doctest::Approx(1.0));
    CHECK(id.vector[0] == doctest::Approx(0.5));

    const PerronData red = perron(to_real(IntMatrix{{2, 0}, {0, 1}}));
    CHECK(red.converged);
    CHECK(red.kappa == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(red.vector[0] == doctest::Approx(1.0));
    CHECK(red.vector[1] == 0.0);
    CHECK_FALSE(red.full_support);

    // Dominant upper-left block; the lower block's entries must come out exactly zero.
    const IntMatrix tri{{4, 4, 3, 3, 2, 1, 1}, {3, 4, 2, 2, 3, 3, 1}, {3, 3, 2, 3, 3, 0, 0}, {2, 2, 3, 2, 0, 0, 0},
                        {0, 0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 1, 0, 1}, {0, 0, 0, 0, 0, 1, 1}};
    const PerronData t = perron(to_real(tri));
    CHECK(t.converged);
    CHECK(t.residual <= 1e-12);
    for (std::size_t i = 4; i < 7; ++i) CHECK(t.vector[i] == 0.0);
    CHECK_FALSE(t.full_support);

    CHECK_THROWS_AS(perron(to_real(IntMatrix(2))), ValidationError);
    CHECK_THROWS_AS(perron(to_real(IntMatrix{{1, -1}, {0, 1}})), ValidationError);
  }

  TEST_CASE("entropy") {
    CHECK(entropy(golden_a()) == doctest::Approx(std::log(kGolden)).epsilon(1e-12));
    CHECK(std::fabs(entropy(golden_a()) - 0.4812118251) < 1e-10);
    CHECK(entropy(IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}) == doctest::Approx(0.0));
    const IntMatrix block{{1, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    CHECK(entropy(block) == doctest::Approx(std::log(kGolden)).epsilon(1e-10));
    // Nilpotent: empty subshift.
    CHECK(entropy(IntMatrix{{0, 1}, {0, 0}}) == 0.0);
  }

  TEST_CASE("entropy of a power scales by the exponent") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
      std::uniform_int_distribution<std::size_t> dim(2, 5);
      IntMatrix a = random_matrix(rng, dim(rng), 1, 0.3);
      const double h = entropy(a);
      for (int p : {2, 3}) CHECK(entropy(matrix_power(a, p)) == doctest::Approx(p * h).epsilon(1e-8));
    }
  }

  TEST_CASE("Perron root against a multiprecision power iteration") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 15; ++k) {
      std::uniform_int_distribution<std::size_t> dim(2, 6);
      const IntMatrix m = random_matrix(rng, dim(rng), 5, 0.0);
      CHECK(perron(to_real(m)).kappa == doctest::Approx(perron_root_mp(m)).epsilon(1e-11));
    }
  }

  TEST_CASE("Perron root is monotone in the entries and transpose invariant") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 40; ++k) {
      std::uniform_int_distribution<std::size_t> dim(1, 8);
      const IntMatrix m = random_matrix(rng, dim(rng), 4, 0.5);
      if (std::all_of(m.data().begin(), m.data().end(), [](auto v) { return v == 0; })) continue;
      IntMatrix bigger = m;
      bigger(0, 0) += 1;
      const PerronData p = perron(to_real(m));
      CHECK(p.kappa <= perron(to_real(bigger)).kappa + 1e-9);
      CHECK(p.kappa == doctest::Approx(perron(to_real(m.transpose())).kappa).epsilon(1e-9));
      CHECK(p.residual <= 1e-9);
      for (double v : p.vector) CHECK(v >= 0.0);
    }
  }

  TEST_CASE("invariant measures") {
    const InvariantMeasures g = invariant_measures(IncidenceB{IntMatrix{{1, 1}, {1, 0}}});
    CHECK(g.converged);
    CHECK(g.kappa == doctest::Approx(kGolden).epsilon(1e-12));
    CHECK(g.mu_plus[0] / g.mu_plus[1] == doctest::Approx(kGolden).epsilon(1e-10));
    CHECK(g.mu_minus[0] / g.mu_minus[1] == doctest::Approx(kGolden).epsilon(1e-10));

    const InvariantMeasures sym = invariant_measures(IncidenceB{IntMatrix{{2, 1, 0}, {1, 1, 3}, {0, 3, 1}}});
    for (std::size_t i = 0; i < 3; ++i) CHECK(sym.mu_plus[i] == doctest::Approx(sym.mu_minus[i]).epsilon(1e-10));

    const InvariantMeasures red = invariant_measures(IncidenceB{IntMatrix{{2, 0}, {0, 1}}});
    CHECK(red.mu_plus[1] == 0.0);
    CHECK_FALSE(red.full_support_plus);
    CHECK(red.kappa_gap <= 1e-9);

    const InvariantMeasures pre = invariant_measures(IncidenceB{IntMatrix{{2, 1}, {1, 0}}});
    CHECK(pre.kappa == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-12));
  }

  TEST_CASE("measure duality on random matrices") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 50; ++k) {
      std::uniform_int_distribution<std::size_t> dim(1, 8);
      const IntMatrix b = random_matrix(rng, dim(rng), 3, 0.4);
      if (std::all_of(b.data().begin(), b.data().end(), [](auto v) { return v == 0; })) continue;
      const InvariantMeasures mu = invariant_measures(IncidenceB{b});
      CHECK(mu.converged);
      CHECK(mu.kappa_gap <= 1e-9);
      CHECK(mu.residual_plus <= 1e-9);
      CHECK(mu.residual_minus <= 1e-9);
      CHECK(std::accumulate(mu.mu_plus.begin(), mu.mu_plus.end(), 0.0) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("coding consistency") {
    const CodingReport g = coding_consistency(golden_a(), 5);
    CHECK(g.ok);
    CHECK(g.enumerated == 13);
    CHECK(g.matrix_count == 13);
    CHECK(g.counts_match);

    const IncidenceA dead = build_matrix_A(rects(2), table(IntMatrix{{1, 1}, {0, 0}}));
    const CodingReport d = coding_consistency(dead, 4);
    CHECK_FALSE(d.ok);
    REQUIRE(d.dead_ends.size() == 1);
    CHECK(d.dead_ends[0] == 1);
    CHECK(d.non_extendable > 0);

    const IncidenceA perm = build_matrix_A(rects(3), table(IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
    for (int depth = 2; depth <= 7; ++depth) {
      const CodingReport p = coding_consistency(perm, depth);
      CHECK(p.ok);
      CHECK(p.enumerated == 3);
    }
    CHECK_THROWS_AS(coding_consistency(golden_a(), 1), ValidationError);
    CHECK_THROWS_AS(coding_consistency(build_matrix_A(rects(3), table(IntMatrix(3, 1))), 30, 1000), BudgetError);
  }
}
