#pragma once

// Exact linear algebra over Q.
//
// Everything here works with GMP rationals; there is no floating point on any
// path. Pivoting always takes the first nonzero entry in column order, so every
// echelon form, kernel basis and complement is reproducible bit-for-bit.
//
// Two elimination routes exist: a dense reference (QMatrix) and a sparse one
// (SparseMatrix) used for the cochain differentials. Because the reduced row
// echelon form is unique, both routes must return identical results.

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rht::linalg {

using Rational = mpq_class;
using QVector = std::vector<Rational>;

class NotSymmetric : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotContained : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major rational matrix. Either dimension may be zero.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<std::vector<long long>>& rows);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);
  static QMatrix diagonal(const QVector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  QVector row(std::size_t r) const;
  QMatrix transpose() const;
  bool is_symmetric() const;
  bool is_zero() const;

  QVector apply(const QVector& v) const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::string to_string(const QMatrix& m);

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// Row-wise sparse rational matrix; each row is sorted by column with no
/// explicit zeros.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;

  const SparseRow& row(std::size_t r) const { return rows_data_[r]; }
  /// Appends to row r. Columns for a given row must arrive in increasing order.
  void push(std::size_t r, std::size_t c, const Rational& value);
  void set_row(std::size_t r, SparseRow row);

  QMatrix dense() const;
  static SparseMatrix from_dense(const QMatrix& m);
  SparseMatrix transpose() const;
  QVector apply(const QVector& v) const;
  SparseMatrix operator*(const SparseMatrix& rhs) const;
  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseRow> rows_data_;
};

/// Subspace of Q^ambient_dim, stored as the nonzero rows of its reduced row
/// echelon form (pivots strictly increasing).
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}

  static Subspace full(std::size_t ambient_dim);
  static Subspace span(std::size_t ambient_dim, const std::vector<QVector>& vectors);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<QVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const QVector& v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v against basis(); v must lie in the subspace.
  QVector coordinates(const QVector& v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) = default;

 private:
  friend Subspace subspace_from_rref(std::size_t, std::vector<QVector>, std::vector<std::size_t>);
  std::size_t ambient_dim_ = 0;
  std::vector<QVector> basis_;
  std::vector<std::size_t> pivots_;
};

struct Rref {
  QMatrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

Rref rref(const QMatrix& m);
std::size_t rank(const QMatrix& m);
Subspace kernel_basis(const QMatrix& m);
Subspace image_basis(const QMatrix& m);

/// Sparse route. `reduced` holds only the nonzero rows of the RREF.
struct SparseRref {
  std::size_t cols = 0;
  std::vector<SparseRow> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

SparseRref rref(const SparseMatrix& m);
std::size_t rank(const SparseMatrix& m);
Subspace kernel_basis(const SparseMatrix& m);
/// Column space of m as a subspace of Q^rows.
Subspace image_basis(const SparseMatrix& m);

/// A complement of `sub` inside `within`, built from the basis vectors of
/// `within` that are not hit by the pivots of `sub` in within-coordinates.
/// Throws NotContained when sub is not a subspace of within.
Subspace complement_in(const Subspace& sub, const Subspace& within);

struct CongruenceDiagonalization {
  QMatrix transform;  // P, invertible
  QVector diagonal;   // d, with P^T S P = diag(d)
};

/// Symmetric Gaussian elimination: finds invertible P with P^T S P diagonal.
CongruenceDiagonalization congruence_diagonalize(const QMatrix& symmetric);

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

Inertia inertia(const QMatrix& symmetric);

Rational determinant(const QMatrix& m);

}  // namespace rht::linalg
