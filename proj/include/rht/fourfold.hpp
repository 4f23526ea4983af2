#pragma once

// Closed oriented simply connected four-manifolds through their intersection
// forms: validation, rank/signature, the real (here rational) cohomology
// algebra, the closed-form homotopy ranks, and rational classification.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rht/linalg.hpp"

namespace rht::fourfold {

using linalg::QMatrix;
using linalg::QVector;
using linalg::Rational;

class FormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSymmetric : public FormError {
 public:
  using FormError::FormError;
};

class NotUnimodular : public FormError {
 public:
  using FormError::FormError;
};

class NotIntegral : public FormError {
 public:
  using FormError::FormError;
};

struct Split {
  std::size_t plus = 0;
  std::size_t minus = 0;
  std::size_t b2() const { return plus + minus; }
  long signature() const { return static_cast<long>(plus) - static_cast<long>(minus); }
  friend bool operator==(const Split&, const Split&) = default;
};

class IntersectionForm {
 public:
  const QMatrix& matrix() const { return matrix_; }
  const std::string& name() const { return name_; }
  std::size_t b2() const { return matrix_.rows(); }
  std::size_t b2_plus() const { return split_.plus; }
  std::size_t b2_minus() const { return split_.minus; }
  long signature() const { return split_.signature(); }
  const Split& split() const { return split_; }

  friend IntersectionForm make_form(const QMatrix& matrix, std::string name);

 private:
  QMatrix matrix_;
  Split split_;
  std::string name_;
};

/// Validates symmetry, integrality and |det| = 1 (the 0x0 form is S^4 and
/// skips the determinant check), then reads the split off a congruence
/// diagonalization.
IntersectionForm make_form(const QMatrix& matrix, std::string name = {});
IntersectionForm make_form(const std::vector<std::vector<long long>>& rows, std::string name = {});

/// diag(+1 x plus, -1 x minus).
IntersectionForm diagonal_form(Split split);
IntersectionForm hyperbolic_form();
IntersectionForm e8_form();

/// Finite-dimensional graded-commutative algebra with zero differential.
/// Basis elements carry a degree; products are structure constants.
class CohomologyAlgebra {
 public:
  CohomologyAlgebra() = default;

  std::size_t add_basis(std::string name, int degree);
  /// e_i * e_j = value; the graded-commutative partner is filled in as well.
  void set_product(std::size_t i, std::size_t j, const QVector& value);

  std::size_t dim() const { return names_.size(); }
  std::size_t dim(int degree) const;
  int degree(std::size_t i) const { return degrees_[i]; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::vector<std::size_t> basis_in_degree(int degree) const;
  int top_degree() const;

  QVector unit() const;
  QVector basis_vector(std::size_t i) const;
  QVector zero() const { return QVector(dim()); }
  const QVector& product(std::size_t i, std::size_t j) const;
  QVector multiply(const QVector& a, const QVector& b) const;

  /// Restriction of a vector to the basis elements of one degree.
  QVector component(const QVector& v, int degree) const;
  QVector embed(const QVector& component, int degree) const;

  /// Returns a description of the first failure, or nothing if the table is
  /// associative, graded commutative, degree-compatible and unital.
  std::optional<std::string> check_structure() const;

  const Split& split() const { return split_; }
  void set_split(Split s) { split_ = s; }

 private:
  std::vector<std::string> names_;
  std::vector<int> degrees_;
  std::vector<std::vector<QVector>> table_;
  Split split_;
};

/// 1, x_1..x_b2 (degree 2), V (degree 4) with x_i^2 = +V (i <= b2+),
/// x_i^2 = -V otherwise, x_i x_j = 0. For b2 = 0 the basis is {1, x} with
/// deg x = 4.
CohomologyAlgebra cohomology_algebra(Split split);
CohomologyAlgebra cohomology_algebra(const IntersectionForm& form);

/// Pairing on degree 2: coefficient of the top class in a*b.
QMatrix degree_two_pairing(const CohomologyAlgebra& a);

/// Degree -> rank of pi_degree. For finite_tail tables every unlisted degree
/// is zero; otherwise unlisted degrees are unknown.
struct RankTable {
  std::map<int, long long> entries;
  bool finite_tail = false;
  int max_degree = kUnbounded;  // degrees above this are outside the table

  static constexpr int kUnbounded = 1 << 20;

  std::optional<long long> at(int degree) const;
  friend bool operator==(const RankTable&, const RankTable&) = default;
};

RankTable closed_form_ranks(std::size_t b2, int max_degree = RankTable::kUnbounded);

long long hypersurface_b2(long long d);
long long complete_intersection_euler(const std::vector<long long>& degrees);
long long complete_intersection_b2(const std::vector<long long>& degrees);

bool rationally_equivalent(const IntersectionForm& a, const IntersectionForm& b);
/// (p, q) with the form rationally equivalent to p CP^2 # q (-CP^2).
Split canonical_connected_sum(const IntersectionForm& form);

struct CatalogEntry {
  std::string name;
  std::size_t b2 = 0;
  std::optional<Split> split;
};

CatalogEntry hypersurface_example(long long d);
CatalogEntry complete_intersection_example(const std::vector<long long>& degrees);
CatalogEntry k3_example();
CatalogEntry connected_sum_example(Split split);

}  // namespace rht::fourfold
