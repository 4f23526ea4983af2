#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <random>

#include "random_elements.hpp"
#include "rht/gca.hpp"

using namespace rht::gca;
using rht::linalg::Rational;
using testing_support::random_poly;

namespace {

GeneratorSet b2_three_stage3() {
  GeneratorSet g;
  for (int i = 1; i <= 3; ++i) g.add("x" + std::to_string(i), 2, 2);
  for (int j = 1; j <= 5; ++j) g.add("v3_" + std::to_string(j), 3, 3);
  return g;
}

// Counts monomials of degree n by brute force over all exponent vectors
// (even generators up to n / deg, odd ones 0 or 1).
std::size_t brute_force_count(const GeneratorSet& g, int n) {
  std::size_t count = 0;
  std::vector<int> e(g.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int deg) {
    if (deg > n) return;
    if (i == g.size()) {
      if (deg == n) ++count;
      return;
    }
    const int cap = g.is_odd(i) ? 1 : n / g[i].degree;
    for (int k = 0; k <= cap; ++k) rec(i + 1, deg + k * g[i].degree);
  };
  rec(0, 0);
  return count;
}

GeneratorSet random_generators(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5), deg(2, 5);
  GeneratorSet g;
  const int n = count(rng);
  std::vector<int> degs;
  for (int i = 0; i < n; ++i) degs.push_back(deg(rng));
  std::sort(degs.begin(), degs.end());
  for (int i = 0; i < n; ++i) g.add("g" + std::to_string(i), degs[i], degs[i]);
  return g;
}

// Sign of sorting a word of distinct odd generator indices, by explicit
// adjacent transpositions.
int bubble_sign(std::vector<std::size_t> word) {
  int sign = 1;
  for (std::size_t pass = 0; pass < word.size(); ++pass)
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
      if (word[i] > word[i + 1]) {
        std::swap(word[i], word[i + 1]);
        sign = -sign;
      }
  return sign;
}

}  // namespace

TEST_CASE("generator set rules") {
  GeneratorSet g;
  CHECK(g.add("x", 2, 2) == 0);
  CHECK_THROWS(g.add("x", 3, 3));
  CHECK_THROWS(g.add("y", 1, 1));
  CHECK(g.find("x") == 0u);
  CHECK_FALSE(g.find("z").has_value());
}

TEST_CASE("basis examples") {
  GeneratorSet any = b2_three_stage3();
  const auto b0 = basis(any, 0);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0].is_one());

  GeneratorSet two;
  two.add("x1", 2, 2);
  two.add("x2", 2, 2);
  const auto b4 = basis(two, 4);
  REQUIRE(b4.size() == 3);
  CHECK(to_string(b4[0], two) == "x1^2");
  CHECK(to_string(b4[1], two) == "x1*x2");
  CHECK(to_string(b4[2], two) == "x2^2");

  const auto b5 = basis(any, 5);
  CHECK(b5.size() == 15);
  CHECK(brute_force_count(any, 5) == 15);
  for (const auto& m : b5.monomials()) CHECK(m.length() == 2);
}

TEST_CASE("basis sizes match brute force on random generator sets") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 150; ++t) {
    const auto g = random_generators(rng);
    for (int n = 0; n <= 12; ++n) CHECK(basis(g, n).size() == brute_force_count(g, n));
  }
}

TEST_CASE("basis guard") {
  const auto g = b2_three_stage3();
  CHECK_THROWS_AS(basis(g, 12, 10), BasisTooLarge);
}

TEST_CASE("multiplication and signs") {
  GeneratorSet g;
  g.add("x", 2, 2);
  g.add("u", 3, 3);
  g.add("w", 3, 3);
  const Poly x = generator_poly(g, 0), u = generator_poly(g, 1), w = generator_poly(g, 2);
  CHECK(mul(g, u, u).is_zero());
  CHECK(mul(g, u, w) == -mul(g, w, u));
  CHECK(mul(g, x, u) == mul(g, u, x));
  CHECK(to_string(mul(g, w, u), g) == "-u*w");
  CHECK(to_string(mul(g, x, x) * Rational(1, 2), g) == "1/2*x^2");
  CHECK(to_string(x * Rational(1, 2), g) == "1/2*x");
  CHECK(to_string(Poly(4), g) == "0");
}

TEST_CASE("Koszul sign against bubble sort") {
  GeneratorSet g;
  for (int i = 0; i < 6; ++i) g.add("e" + std::to_string(i), 3, 3);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int t = 0; t < 500; ++t) {
    std::vector<int> ea(6), eb(6);
    for (int i = 0; i < 6; ++i) {
      ea[i] = bit(rng);
      eb[i] = bit(rng);
    }
    const auto r = multiply(g, Monomial(ea), Monomial(eb));
    bool overlap = false;
    std::vector<std::size_t> word;
    for (std::size_t i = 0; i < 6; ++i) {
      overlap = overlap || (ea[i] && eb[i]);
      if (ea[i]) word.push_back(i);
    }
    for (std::size_t i = 0; i < 6; ++i)
      if (eb[i]) word.push_back(i);
    if (overlap) {
      CHECK_FALSE(r.has_value());
    } else {
      REQUIRE(r.has_value());
      CHECK(r->sign == bubble_sign(word));
    }
  }
}

TEST_CASE("algebra laws on random elements") {
  const auto g = b2_three_stage3();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> deg(2, 6);
  for (int t = 0; t < 300; ++t) {
    const int p = deg(rng), q = deg(rng), r = deg(rng);
    const Poly a = random_poly(rng, g, p), b = random_poly(rng, g, q), c = random_poly(rng, g, r);
    CHECK(mul(g, mul(g, a, b), c) == mul(g, a, mul(g, b, c)));
    CHECK(mul(g, a, b) == mul(g, b, a) * Rational(testing_support::sign_of(p, q)));
    const Poly b2 = random_poly(rng, g, q);
    CHECK(mul(g, a, b + b2) == mul(g, a, b) + mul(g, a, b2));
    CHECK(mul(g, a, Poly::one()) == a);
  }
}

TEST_CASE("Leibniz rule through polynomials and matrices") {
  auto g = b2_three_stage3();
  std::mt19937_64 rng(23);
  // An arbitrary derivation: d² = 0 is not needed for the Leibniz rule.
  Derivation d;
  for (std::size_t i = 0; i < g.size(); ++i) d.set(g, i, random_poly(rng, g, g[i].degree + 1, 3));
  std::uniform_int_distribution<int> deg(2, 6);
  for (int t = 0; t < 300; ++t) {
    const int p = deg(rng), q = deg(rng);
    const Poly a = random_poly(rng, g, p), b = random_poly(rng, g, q);
    const Poly lhs = d.apply(g, mul(g, a, b));
    const Poly rhs = mul(g, d.apply(g, a), b) +
                     mul(g, a, d.apply(g, b)) * Rational(p % 2 == 0 ? 1 : -1);
    CHECK(lhs == rhs);
  }
  const auto mats = extend_derivation(g, d, 7);
  for (int n = 0; n <= 7; ++n) {
    const auto src = basis(g, n), dst = basis(g, n + 1);
    REQUIRE(mats[n].rows() == dst.size());
    REQUIRE(mats[n].cols() == src.size());
    for (int t = 0; t < 10; ++t) {
      const Poly a = random_poly(rng, g, n);
      CHECK(dst.poly(g, mats[n].apply(src.coordinates(a))) == d.apply(g, a));
    }
  }
}

TEST_CASE("zero derivation gives zero matrices") {
  const auto g = b2_three_stage3();
  for (const auto& m : extend_derivation(g, Derivation{}, 8)) CHECK(m.is_zero());
}

TEST_CASE("derivation degree checks") {
  GeneratorSet g;
  g.add("x", 2, 2);
  g.add("v", 5, 5);
  Derivation d;
  CHECK_THROWS_AS(d.set(g, 1, Poly::monomial(g, Monomial::generator(0, 2))), DegreeMismatch);
  Poly p(4);
  CHECK_THROWS_AS(p.add_term(g, Monomial::generator(0, 3), 1), DegreeMismatch);
}

TEST_CASE("d squared passes on a model and fails on a constructed counterexample") {
  GeneratorSet g;
  g.add("x", 2, 2);
  g.add("v", 5, 5);
  Derivation d;
  d.set(g, 1, Poly::monomial(g, Monomial::generator(0, 3)));
  CHECK(check_d_squared(g, d, 10).passed);
  CHECK(d.is_minimal());

  GeneratorSet h;
  h.add("x", 2, 2);
  h.add("a", 3, 3);
  h.add("b", 4, 4);
  Derivation e;
  e.set(h, 1, Poly::monomial(h, Monomial::generator(0, 2)));
  e.set(h, 2, Poly::monomial(h, Monomial({1, 1})));
  const auto r = check_d_squared(h, e, 6);
  CHECK_FALSE(r.passed);
  CHECK(r.generator == "b");
  CHECK(r.witness.find("x^3") != std::string::npos);
  CHECK(r.failing_degree == 4);

  Derivation lin;
  lin.set(h, 0, generator_poly(h, 1));
  CHECK_FALSE(lin.is_minimal());
}

TEST_CASE("decomposables") {
  const auto g = b2_three_stage3();
  CHECK(decomposable_subspace(g, 2).dim() == 0);
  CHECK(decomposable_subspace(g, 3).dim() == 0);
  CHECK(decomposable_subspace(g, 4).dim() == 6);
  CHECK(decomposable_subspace(g, 5).dim() == 15);

  GeneratorSet h;
  h.add("x", 2, 2);
  h.add("u", 4, 4);
  const auto dec = decomposable_subspace(h, 4);
  CHECK(basis(h, 4).size() - dec.dim() == 1);
}
