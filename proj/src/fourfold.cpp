#include "rht/fourfold.hpp"

#include <algorithm>
#include <limits>

namespace rht::fourfold {

// ---------------------------------------------------------------------------
// Intersection forms

IntersectionForm make_form(const QMatrix& matrix, std::string name) {
  if (matrix.rows() != matrix.cols()) throw NotSymmetric("intersection form must be square");
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      if (matrix(i, j).get_den() != 1) throw NotIntegral("intersection form must be integral");
  if (!matrix.is_symmetric()) throw NotSymmetric("intersection form must be symmetric");
  if (matrix.rows() > 0) {
    const Rational det = linalg::determinant(matrix);
    if (abs(det) != 1) {
      throw NotUnimodular("intersection form must be unimodular, det = " + det.get_str());
    }
  }
  const linalg::Inertia in = linalg::inertia(matrix);
  IntersectionForm f;
  f.matrix_ = matrix;
  f.split_ = {in.positive, in.negative};
  f.name_ = std::move(name);
  return f;
}

IntersectionForm make_form(const std::vector<std::vector<long long>>& rows, std::string name) {
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw NotSymmetric("intersection form must be square");
  return make_form(QMatrix::from_rows(rows), std::move(name));
}

IntersectionForm diagonal_form(Split split) {
  QVector d;
  for (std::size_t i = 0; i < split.plus; ++i) d.emplace_back(1);
  for (std::size_t i = 0; i < split.minus; ++i) d.emplace_back(-1);
  return make_form(QMatrix::diagonal(d), std::to_string(split.plus) + "CP2#" +
                                             std::to_string(split.minus) + "-CP2");
}

IntersectionForm hyperbolic_form() { return make_form({{0, 1}, {1, 0}}, "H"); }

IntersectionForm e8_form() {
  // Cartan matrix of E8: chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
  std::vector<std::vector<long long>> m(8, std::vector<long long>(8, 0));
  for (int i = 0; i < 8; ++i) m[i][i] = 2;
  const int edges[][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
  for (const auto& e : edges) m[e[0]][e[1]] = m[e[1]][e[0]] = -1;
  return make_form(m, "E8");
}

// ---------------------------------------------------------------------------
// Cohomology algebra

std::size_t CohomologyAlgebra::add_basis(std::string name, int degree) {
  names_.push_back(std::move(name));
  degrees_.push_back(degree);
  const std::size_t n = names_.size();
  for (auto& row : table_) {
    for (auto& v : row) v.resize(n);
    row.emplace_back(n);
  }
  table_.emplace_back(n, QVector(n));
  return n - 1;
}

void CohomologyAlgebra::set_product(std::size_t i, std::size_t j, const QVector& value) {
  if (value.size() != dim()) throw linalg::DimensionMismatch("set_product: vector length");
  table_[i][j] = value;
  QVector swapped = value;
  if ((degrees_[i] * degrees_[j]) % 2 != 0)
    for (auto& e : swapped) e = -e;
  table_[j][i] = std::move(swapped);
}

std::size_t CohomologyAlgebra::dim(int degree) const {
  return static_cast<std::size_t>(std::count(degrees_.begin(), degrees_.end(), degree));
}

std::vector<std::size_t> CohomologyAlgebra::basis_in_degree(int degree) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (degrees_[i] == degree) out.push_back(i);
  return out;
}

int CohomologyAlgebra::top_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

QVector CohomologyAlgebra::unit() const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (degrees_[i] == 0) return basis_vector(i);
  throw std::logic_error("cohomology algebra has no degree-0 element");
}

QVector CohomologyAlgebra::basis_vector(std::size_t i) const {
  QVector v(dim());
  v.at(i) = 1;
  return v;
}

const QVector& CohomologyAlgebra::product(std::size_t i, std::size_t j) const {
  return table_.at(i).at(j);
}

QVector CohomologyAlgebra::multiply(const QVector& a, const QVector& b) const {
  if (a.size() != dim() || b.size() != dim()) throw linalg::DimensionMismatch("multiply: length");
  QVector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (sgn(b[j]) == 0) continue;
      const Rational c = a[i] * b[j];
      const QVector& p = table_[i][j];
      for (std::size_t k = 0; k < dim(); ++k)
        if (sgn(p[k]) != 0) out[k] += c * p[k];
    }
  }
  return out;
}

QVector CohomologyAlgebra::component(const QVector& v, int degree) const {
  QVector out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (degrees_[i] == degree) out.push_back(v.at(i));
  return out;
}

QVector CohomologyAlgebra::embed(const QVector& component, int degree) const {
  const auto idx = basis_in_degree(degree);
  if (component.size() != idx.size()) throw linalg::DimensionMismatch("embed: component length");
  QVector out(dim());
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = component[k];
  return out;
}

std::optional<std::string> CohomologyAlgebra::check_structure() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const QVector& p = table_[i][j];
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(p[k]) != 0 && degrees_[k] != degrees_[i] + degrees_[j])
          return "product " + names_[i] + "*" + names_[j] + " leaves its degree";
      QVector q = table_[j][i];
      if ((degrees_[i] * degrees_[j]) % 2 != 0)
        for (auto& e : q) e = -e;
      if (p != q) return "product " + names_[i] + "*" + names_[j] + " is not graded commutative";
    }
  }
  const QVector one = unit();
  for (std::size_t i = 0; i < n; ++i)
    if (multiply(one, basis_vector(i)) != basis_vector(i)) return "unit fails on " + names_[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const QVector l = multiply(table_[i][j], basis_vector(k));
        const QVector r = multiply(basis_vector(i), table_[j][k]);
        if (l != r) return "associativity fails on " + names_[i] + "," + names_[j] + "," + names_[k];
      }
  return std::nullopt;
}

CohomologyAlgebra cohomology_algebra(Split split) {
  CohomologyAlgebra a;
  a.set_split(split);
  const std::size_t b2 = split.b2();
  const std::size_t one = a.add_basis("1", 0);
  if (b2 == 0) {
    const std::size_t x = a.add_basis("x", 4);
    a.set_product(one, one, a.basis_vector(one));
    a.set_product(one, x, a.basis_vector(x));
    return a;
  }
  std::vector<std::size_t> xs;
  for (std::size_t i = 0; i < b2; ++i) xs.push_back(a.add_basis("x" + std::to_string(i + 1), 2));
  const std::size_t top = a.add_basis("V", 4);
  for (std::size_t i = 0; i < a.dim(); ++i) a.set_product(one, i, a.basis_vector(i));
  for (std::size_t i = 0; i < b2; ++i) {
    QVector sq = a.basis_vector(top);
    if (i >= split.plus) sq[top] = -1;
    a.set_product(xs[i], xs[i], sq);
  }
  return a;
}

CohomologyAlgebra cohomology_algebra(const IntersectionForm& form) {
  return cohomology_algebra(form.split());
}

QMatrix degree_two_pairing(const CohomologyAlgebra& a) {
  const auto twos = a.basis_in_degree(2);
  const auto fours = a.basis_in_degree(4);
  QMatrix m(twos.size(), twos.size());
  if (fours.size() != 1) return m;
  for (std::size_t i = 0; i < twos.size(); ++i)
    for (std::size_t j = 0; j < twos.size(); ++j) m(i, j) = a.product(twos[i], twos[j])[fours[0]];
  return m;
}

// ---------------------------------------------------------------------------
// Ranks

std::optional<long long> RankTable::at(int degree) const {
  if (degree > max_degree) return std::nullopt;
  auto it = entries.find(degree);
  if (it != entries.end()) return it->second;
  if (finite_tail) return 0;
  return std::nullopt;
}

RankTable closed_form_ranks(std::size_t b2, int max_degree) {
  RankTable t;
  t.max_degree = max_degree;
  const long long b = static_cast<long long>(b2);
  switch (b2) {
    case 0:
      t.entries = {{4, 1}, {7, 1}};
      t.finite_tail = true;
      break;
    case 1:
      t.entries = {{2, 1}, {5, 1}};
      t.finite_tail = true;
      break;
    case 2:
      t.entries = {{2, 2}, {3, 2}};
      t.finite_tail = true;
      break;
    default:
      t.entries = {{2, b}, {3, b * (b + 1) / 2 - 1}, {4, b * (b * b - 4) / 3}};
      if (b2 == 3) t.entries[5] = 10;
      break;
  }
  std::erase_if(t.entries, [max_degree](const auto& e) { return e.first > max_degree; });
  return t;
}

long long hypersurface_b2(long long d) {
  if (d < 1) throw std::invalid_argument("hypersurface degree must be positive");
  return d * (6 - 4 * d + d * d) - 2;
}

long long complete_intersection_euler(const std::vector<long long>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("complete intersection needs at least one degree");
  for (long long d : degrees)
    if (d < 1) throw std::invalid_argument("complete intersection degrees must be positive");
  const mpz_class n = static_cast<long>(degrees.size());
  mpz_class sum = 0, sum_sq = 0, pairs = 0, prod = 1;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const mpz_class di = static_cast<long>(degrees[i]);
    sum += di;
    sum_sq += di * di;
    prod *= di;
    for (std::size_t j = i + 1; j < degrees.size(); ++j) pairs += di * static_cast<long>(degrees[j]);
  }
  const mpz_class choose = (n + 3) * (n + 2) / 2;
  const mpz_class e = (choose - (n + 3) * sum + sum_sq + pairs) * prod;
  if (!e.fits_slong_p()) throw std::overflow_error("complete intersection Euler number overflows");
  return e.get_si();
}

long long complete_intersection_b2(const std::vector<long long>& degrees) {
  return complete_intersection_euler(degrees) - 2;
}

// ---------------------------------------------------------------------------
// Classification

bool rationally_equivalent(const IntersectionForm& a, const IntersectionForm& b) {
  return a.b2() == b.b2() && a.signature() == b.signature();
}

Split canonical_connected_sum(const IntersectionForm& form) { return form.split(); }

// ---------------------------------------------------------------------------
// Catalog

CatalogEntry hypersurface_example(long long d) {
  return {"S_" + std::to_string(d), static_cast<std::size_t>(hypersurface_b2(d)), std::nullopt};
}

CatalogEntry complete_intersection_example(const std::vector<long long>& degrees) {
  const long long b2 = complete_intersection_b2(degrees);
  if (b2 < 0) throw std::invalid_argument("complete intersection has negative b2");
  std::string name = "S(";
  for (std::size_t i = 0; i < degrees.size(); ++i)
    name += (i ? "," : "") + std::to_string(degrees[i]);
  name += ")";
  return {name, static_cast<std::size_t>(b2), std::nullopt};
}

CatalogEntry k3_example() { return {"K3", 22, Split{3, 19}}; }

CatalogEntry connected_sum_example(Split split) {
  return {std::to_string(split.plus) + "CP2#" + std::to_string(split.minus) + "-CP2", split.b2(),
          split};
}

}  // namespace rht::fourfold
