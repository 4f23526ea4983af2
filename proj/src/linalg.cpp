#include "rht/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rht::linalg {

// ---------------------------------------------------------------------------
// QMatrix

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("QMatrix: entry count does not match dimensions");
  }
  for (auto& e : data_) e.canonicalize();
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("QMatrix: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Rational(static_cast<long>(rows[i][j]));
  }
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionMismatch("QMatrix: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QMatrix QMatrix::diagonal(const QVector& d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

QVector QMatrix::row(std::size_t r) const {
  return QVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool QMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& e) { return sgn(e) == 0; });
}

QVector QMatrix::apply(const QVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("QMatrix::apply: vector length");
  QVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn((*this)(i, j)) != 0 && sgn(v[j]) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("QMatrix product: inner dimensions");
  QMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (sgn(b(k, j)) != 0) c(i, j) += aik * b(k, j);
    }
  return c;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string to_string(const QMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// SparseMatrix

namespace {

// row += factor * other, both sorted by column.
void axpy(SparseRow& row, const Rational& factor, const SparseRow& other) {
  SparseRow out;
  out.reserve(row.size() + other.size());
  auto a = row.begin();
  auto b = other.begin();
  while (a != row.end() || b != other.end()) {
    if (b == other.end() || (a != row.end() && a->first < b->first)) {
      out.push_back(std::move(*a));
      ++a;
    } else if (a == row.end() || b->first < a->first) {
      out.emplace_back(b->first, factor * b->second);
      ++b;
    } else {
      Rational v = a->second + factor * b->second;
      if (sgn(v) != 0) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  row.swap(out);
}

void scale(SparseRow& row, const Rational& factor) {
  for (auto& [c, v] : row) v *= factor;
}

SparseRow to_sparse(const QVector& v) {
  SparseRow row;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) row.emplace_back(i, v[i]);
  return row;
}

QVector to_dense(const SparseRow& row, std::size_t n) {
  QVector v(n);
  for (const auto& [c, val] : row) v[c] = val;
  return v;
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), rows_data_(rows) {}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_data_) n += r.size();
  return n;
}

void SparseMatrix::push(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows_ || c >= cols_) throw DimensionMismatch("SparseMatrix::push: out of range");
  if (sgn(value) == 0) return;
  auto& row = rows_data_[r];
  if (!row.empty() && row.back().first >= c) {
    throw std::logic_error("SparseMatrix::push: columns must increase within a row");
  }
  row.emplace_back(c, value);
}

void SparseMatrix::set_row(std::size_t r, SparseRow row) {
  if (r >= rows_) throw DimensionMismatch("SparseMatrix::set_row: out of range");
  rows_data_[r] = std::move(row);
}

QMatrix SparseMatrix::dense() const {
  QMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [c, v] : rows_data_[i]) m(i, c) = v;
  return m;
}

SparseMatrix SparseMatrix::from_dense(const QMatrix& m) {
  SparseMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s.push(i, j, m(i, j));
  return s;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [c, v] : rows_data_[i]) t.rows_data_[c].emplace_back(i, v);
  return t;
}

QVector SparseMatrix::apply(const QVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("SparseMatrix::apply: vector length");
  QVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [c, val] : rows_data_[i])
      if (sgn(v[c]) != 0) out[i] += val * v[c];
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionMismatch("SparseMatrix product: inner dimensions");
  SparseMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    SparseRow acc;
    for (const auto& [k, v] : rows_data_[i]) axpy(acc, v, rhs.rows_data_[k]);
    out.rows_data_[i] = std::move(acc);
  }
  return out;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(rows_data_.begin(), rows_data_.end(),
                     [](const SparseRow& r) { return r.empty(); });
}

// ---------------------------------------------------------------------------
// Dense elimination (reference route)

Rref rref(const QMatrix& m) {
  Rref out{m, {}};
  QMatrix& r = out.reduced;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < r.cols() && lead < r.rows(); ++c) {
    std::size_t p = lead;
    while (p < r.rows() && sgn(r(p, c)) == 0) ++p;
    if (p == r.rows()) continue;
    if (p != lead)
      for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(p, j), r(lead, j));
    const Rational inv = 1 / r(lead, c);
    for (std::size_t j = c; j < r.cols(); ++j) r(lead, j) *= inv;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead || sgn(r(i, c)) == 0) continue;
      const Rational f = r(i, c);
      for (std::size_t j = c; j < r.cols(); ++j)
        if (sgn(r(lead, j)) != 0) r(i, j) -= f * r(lead, j);
    }
    out.pivots.push_back(c);
    ++lead;
  }
  return out;
}

std::size_t rank(const QMatrix& m) { return rref(m).rank(); }

Subspace subspace_from_rref(std::size_t ambient, std::vector<QVector> rows,
                            std::vector<std::size_t> pivots) {
  Subspace s(ambient);
  s.basis_ = std::move(rows);
  s.pivots_ = std::move(pivots);
  return s;
}

Subspace kernel_basis(const QMatrix& m) {
  const Rref r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<QVector> vectors;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < r.rank(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
    vectors.push_back(std::move(v));
  }
  return Subspace::span(m.cols(), vectors);
}

Subspace image_basis(const QMatrix& m) {
  const Rref r = rref(m.transpose());
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < r.rank(); ++i) rows.push_back(r.reduced.row(i));
  return subspace_from_rref(m.rows(), std::move(rows), r.pivots);
}

// ---------------------------------------------------------------------------
// Sparse elimination

SparseRref rref(const SparseMatrix& m) {
  SparseRref out;
  out.cols = m.cols();
  std::vector<SparseRow> rows;
  std::vector<long> slot_of_col(m.cols(), -1);

  for (std::size_t i = 0; i < m.rows(); ++i) {
    SparseRow r = m.row(i);
    while (!r.empty()) {
      const long slot = slot_of_col[r.front().first];
      if (slot < 0) break;
      const Rational f = -r.front().second;
      axpy(r, f, rows[static_cast<std::size_t>(slot)]);
    }
    if (r.empty()) continue;
    scale(r, 1 / r.front().second);
    slot_of_col[r.front().first] = static_cast<long>(rows.size());
    rows.push_back(std::move(r));
  }

  // Back substitution, largest pivot first; rows already processed are fully
  // reduced, so subtracting them never reintroduces another pivot column.
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].front().first > rows[b].front().first;
  });
  for (std::size_t s : order) {
    SparseRow& r = rows[s];
    std::size_t pos = 1;
    while (pos < r.size()) {
      const long other = slot_of_col[r[pos].first];
      if (other < 0) {
        ++pos;
        continue;
      }
      const Rational f = -r[pos].second;
      axpy(r, f, rows[static_cast<std::size_t>(other)]);
    }
  }

  std::reverse(order.begin(), order.end());
  for (std::size_t s : order) {
    out.pivots.push_back(rows[s].front().first);
    out.reduced.push_back(std::move(rows[s]));
  }
  return out;
}

std::size_t rank(const SparseMatrix& m) {
  // Rank only needs the forward pass.
  std::vector<SparseRow> rows;
  std::vector<long> slot_of_col(m.cols(), -1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    SparseRow r = m.row(i);
    while (!r.empty()) {
      const long slot = slot_of_col[r.front().first];
      if (slot < 0) break;
      const Rational f = -r.front().second;
      axpy(r, f, rows[static_cast<std::size_t>(slot)]);
    }
    if (r.empty()) continue;
    scale(r, 1 / r.front().second);
    slot_of_col[r.front().first] = static_cast<long>(rows.size());
    rows.push_back(std::move(r));
  }
  return rows.size();
}

Subspace kernel_basis(const SparseMatrix& m) {
  const SparseRref r = rref(m);
  std::vector<long> free_index(m.cols(), -1);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<SparseRow> vectors;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    free_index[c] = static_cast<long>(vectors.size());
    vectors.push_back({});
  }
  for (std::size_t i = 0; i < r.rank(); ++i) {
    for (std::size_t k = 1; k < r.reduced[i].size(); ++k) {
      const auto& [c, v] = r.reduced[i][k];
      vectors[static_cast<std::size_t>(free_index[c])].emplace_back(r.pivots[i], -v);
    }
  }
  SparseMatrix stacked(vectors.size(), m.cols());
  for (std::size_t c = 0, j = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    auto& v = vectors[j];
    v.emplace_back(c, Rational(1));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    stacked.set_row(j, std::move(v));
    ++j;
  }
  const SparseRref k = rref(stacked);
  std::vector<QVector> rows;
  for (const auto& row : k.reduced) rows.push_back(to_dense(row, m.cols()));
  return subspace_from_rref(m.cols(), std::move(rows), k.pivots);
}

Subspace image_basis(const SparseMatrix& m) {
  const SparseRref r = rref(m.transpose());
  std::vector<QVector> rows;
  for (const auto& row : r.reduced) rows.push_back(to_dense(row, m.rows()));
  return subspace_from_rref(m.rows(), std::move(rows), r.pivots);
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::full(std::size_t ambient_dim) {
  std::vector<QVector> rows;
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    QVector v(ambient_dim);
    v[i] = 1;
    rows.push_back(std::move(v));
    pivots.push_back(i);
  }
  return subspace_from_rref(ambient_dim, std::move(rows), std::move(pivots));
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<QVector>& vectors) {
  SparseMatrix m(vectors.size(), ambient_dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim) throw DimensionMismatch("Subspace::span: vector length");
    m.set_row(i, to_sparse(vectors[i]));
  }
  const SparseRref r = rref(m);
  std::vector<QVector> rows;
  for (const auto& row : r.reduced) rows.push_back(to_dense(row, ambient_dim));
  return subspace_from_rref(ambient_dim, std::move(rows), r.pivots);
}

bool Subspace::contains(const QVector& v) const {
  if (v.size() != ambient_dim_) throw DimensionMismatch("Subspace::contains: vector length");
  QVector r = v;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Rational f = r[pivots_[i]];
    if (sgn(f) == 0) continue;
    for (std::size_t j = pivots_[i]; j < ambient_dim_; ++j)
      if (sgn(basis_[i][j]) != 0) r[j] -= f * basis_[i][j];
  }
  return std::all_of(r.begin(), r.end(), [](const Rational& e) { return sgn(e) == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_dim_ != ambient_dim_) return false;
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [this](const QVector& v) { return contains(v); });
}

QVector Subspace::coordinates(const QVector& v) const {
  if (!contains(v)) throw NotContained("Subspace::coordinates: vector not in subspace");
  QVector c(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = v[pivots_[i]];
  return c;
}

Subspace complement_in(const Subspace& sub, const Subspace& within) {
  if (sub.ambient_dim() != within.ambient_dim()) {
    throw DimensionMismatch("complement_in: ambient dimensions differ");
  }
  std::vector<QVector> coords;
  coords.reserve(sub.dim());
  for (const auto& v : sub.basis()) {
    if (!within.contains(v)) throw NotContained("complement_in: sub is not contained in within");
    coords.push_back(within.coordinates(v));
  }
  const Subspace in_coords = Subspace::span(within.dim(), coords);
  std::vector<bool> taken(within.dim(), false);
  for (auto p : in_coords.pivots()) taken[p] = true;
  std::vector<QVector> picked;
  for (std::size_t j = 0; j < within.dim(); ++j)
    if (!taken[j]) picked.push_back(within.basis()[j]);
  return Subspace::span(within.ambient_dim(), picked);
}

// ---------------------------------------------------------------------------
// Symmetric forms

CongruenceDiagonalization congruence_diagonalize(const QMatrix& symmetric) {
  if (!symmetric.is_symmetric()) throw NotSymmetric("congruence_diagonalize: matrix is not symmetric");
  const std::size_t n = symmetric.rows();
  QMatrix s = symmetric;
  QMatrix p = QMatrix::identity(n);

  auto swap_index = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < n; ++k) std::swap(s(a, k), s(b, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(s(k, a), s(k, b));
    for (std::size_t k = 0; k < n; ++k) std::swap(p(k, a), p(k, b));
  };
  // index a += factor * index b, applied as a congruence.
  auto add_index = [&](std::size_t a, std::size_t b, const Rational& factor) {
    for (std::size_t k = 0; k < n; ++k) s(a, k) += factor * s(b, k);
    for (std::size_t k = 0; k < n; ++k) s(k, a) += factor * s(k, b);
    for (std::size_t k = 0; k < n; ++k) p(k, a) += factor * p(k, b);
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(s(i, i)) == 0) {
      std::size_t j = i + 1;
      while (j < n && sgn(s(j, j)) == 0) ++j;
      if (j < n) {
        swap_index(i, j);
      } else {
        j = i + 1;
        while (j < n && sgn(s(i, j)) == 0) ++j;
        if (j == n) continue;
        // s(j,j) == 0 here, so the new diagonal entry is 2 s(i,j).
        add_index(i, j, Rational(1));
      }
    }
    const Rational pivot = s(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sgn(s(j, i)) == 0) continue;
      add_index(j, i, -s(j, i) / pivot);
    }
  }

  QVector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = s(i, i);
  return {std::move(p), std::move(d)};
}

Inertia inertia(const QMatrix& symmetric) {
  Inertia out;
  for (const auto& v : congruence_diagonalize(symmetric).diagonal) {
    if (sgn(v) > 0)
      ++out.positive;
    else if (sgn(v) < 0)
      ++out.negative;
    else
      ++out.zero;
  }
  return out;
}

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant: matrix is not square");
  QMatrix a = m;
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a(i, c)) == 0) continue;
      const Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

}  // namespace rht::linalg
