#pragma once

// Free graded-commutative algebras Λ(V) on generators of degree >= 2.
//
// Even generators are polynomial, odd generators are exterior. Monomials are
// written in generator order g_0^{e_0} g_1^{e_1} ...; products carry the Koszul
// sign obtained by counting inversions between odd factors.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rht/linalg.hpp"

namespace rht::gca {

using linalg::Rational;

inline constexpr std::size_t kDefaultGuard = 200000;

class BasisTooLarge : public std::runtime_error {
 public:
  BasisTooLarge(int degree, std::size_t guard);
  int degree() const { return degree_; }
  std::size_t guard() const { return guard_; }

 private:
  int degree_;
  std::size_t guard_;
};

class DegreeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Generator {
  std::string name;
  int degree = 2;
  int stage = 2;  // stage of creation (the k of the model stage that added it)
};

class GeneratorSet {
 public:
  /// Returns the index of the new generator. Throws on duplicate names or
  /// degree < 2.
  std::size_t add(std::string name, int degree, int stage);

  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const Generator& operator[](std::size_t i) const { return gens_[i]; }
  const std::vector<Generator>& all() const { return gens_; }
  std::optional<std::size_t> find(const std::string& name) const;

  bool is_odd(std::size_t i) const { return gens_[i].degree % 2 != 0; }
  std::size_t count_in_degree(int degree) const;
  int max_degree() const;

 private:
  std::vector<Generator> gens_;
};

/// Exponent vector aligned with a GeneratorSet, trailing zeros trimmed so a
/// monomial stays valid when the generator set grows.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents);
  static Monomial generator(std::size_t index, int power = 1);

  const std::vector<int>& exponents() const { return exps_; }
  int exponent(std::size_t i) const { return i < exps_.size() ? exps_[i] : 0; }
  bool is_one() const { return exps_.empty(); }
  /// Sum of exponents: 0 for 1, 1 for a lone generator.
  int length() const;
  int degree(const GeneratorSet& gens) const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::vector<int> exps_;
};

std::string to_string(const Monomial& m, const GeneratorSet& gens);

struct SignedMonomial {
  int sign = 1;
  Monomial monomial;
};

/// a * b with its Koszul sign, or nothing when an odd generator repeats.
std::optional<SignedMonomial> multiply(const GeneratorSet& gens, const Monomial& a,
                                       const Monomial& b);

/// Homogeneous element of Λ(V): no zero coefficients are stored.
class Poly {
 public:
  explicit Poly(int degree = 0) : degree_(degree) {}
  static Poly monomial(const GeneratorSet& gens, const Monomial& m, const Rational& coeff = 1);
  static Poly one() { return monomial(GeneratorSet{}, Monomial{}); }

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  Rational coefficient(const Monomial& m) const;

  /// Adds c*m; the monomial's degree must match.
  void add_term(const GeneratorSet& gens, const Monomial& m, const Rational& c);

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void check_degree(int other) const;
  int degree_;
  std::map<Monomial, Rational> terms_;
};

Poly mul(const GeneratorSet& gens, const Poly& a, const Poly& b);
Poly generator_poly(const GeneratorSet& gens, std::size_t index);
std::string to_string(const Poly& p, const GeneratorSet& gens);

/// A degree +1 derivation, given by its values on generators.
class Derivation {
 public:
  Derivation() = default;

  void set(const GeneratorSet& gens, std::size_t generator, Poly image);
  /// Image of a generator; the zero polynomial of the right degree if unset.
  Poly image(const GeneratorSet& gens, std::size_t generator) const;
  std::size_t size() const { return images_.size(); }

  /// Every image lies in Λ^{>=2}V.
  bool is_minimal() const;

  Poly apply(const GeneratorSet& gens, const Monomial& m) const;
  Poly apply(const GeneratorSet& gens, const Poly& p) const;

 private:
  std::vector<std::optional<Poly>> images_;
};

/// Degree-graded monomial basis with a reverse lookup.
class GradedBasis {
 public:
  GradedBasis() = default;
  GradedBasis(int degree, std::vector<Monomial> monomials);

  int degree() const { return degree_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const Monomial& operator[](std::size_t i) const { return monomials_[i]; }
  std::optional<std::size_t> index_of(const Monomial& m) const;

  linalg::QVector coordinates(const Poly& p) const;
  Poly poly(const GeneratorSet& gens, const linalg::QVector& coords) const;

 private:
  int degree_ = 0;
  std::vector<Monomial> monomials_;
  std::map<Monomial, std::size_t> index_;
};

/// All monomials of total degree n, largest exponent of the earliest generator
/// first (so x1^2, x1 x2, x2^2). Throws BasisTooLarge past `guard` monomials.
GradedBasis basis(const GeneratorSet& gens, int n, std::size_t guard = kDefaultGuard);

/// Matrix of D: span(basis(n)) -> span(basis(n+1)) in the deterministic bases.
linalg::SparseMatrix derivation_matrix(const GeneratorSet& gens, const Derivation& d,
                                       const GradedBasis& source, const GradedBasis& target);

/// One matrix per degree 0..max_degree; checks every image has degree
/// |g| + 1 first (DegreeMismatch otherwise).
std::vector<linalg::SparseMatrix> extend_derivation(const GeneratorSet& gens, const Derivation& d,
                                                    int max_degree,
                                                    std::size_t guard = kDefaultGuard);

void check_degrees(const GeneratorSet& gens, const Derivation& d);

struct DSquaredReport {
  bool passed = true;
  std::string generator;   // offending generator, if any
  std::string witness;     // d(d g), formatted
  int failing_degree = -1; // first degree where the matrix composite is nonzero
};

/// D∘D = 0: on every generator via Poly evaluation, and on the per-degree
/// matrices up to max_degree.
DSquaredReport check_d_squared(const GeneratorSet& gens, const Derivation& d, int max_degree,
                               std::size_t guard = kDefaultGuard);

/// Span of products of two positive-degree monomials inside degree n.
linalg::Subspace decomposable_subspace(const GeneratorSet& gens, int n,
                                       std::size_t guard = kDefaultGuard);

}  // namespace rht::gca
