#pragma once

// Random homogeneous elements of a free graded-commutative algebra.

#include <random>

#include "rht/gca.hpp"

namespace testing_support {

inline rht::gca::Poly random_poly(std::mt19937_64& rng, const rht::gca::GeneratorSet& gens,
                                  int degree, int max_terms = 4) {
  const auto b = rht::gca::basis(gens, degree);
  rht::gca::Poly p(degree);
  if (b.size() == 0) return p;
  std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), terms(1, max_terms);
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    rht::linalg::Rational c(num(rng), den(rng));
    c.canonicalize();
    p.add_term(gens, b[pick(rng)], c);
  }
  return p;
}

inline int sign_of(int a, int b) { return (a % 2 != 0 && b % 2 != 0) ? -1 : 1; }

}  // namespace testing_support
