#include "rht/gca.hpp"

#include <algorithm>
#include <sstream>

namespace rht::gca {

BasisTooLarge::BasisTooLarge(int degree, std::size_t guard)
    : std::runtime_error("basis in degree " + std::to_string(degree) + " exceeds the guard of " +
                         std::to_string(guard) + " monomials"),
      degree_(degree),
      guard_(guard) {}

// ---------------------------------------------------------------------------
// GeneratorSet

std::size_t GeneratorSet::add(std::string name, int degree, int stage) {
  if (degree < 2) throw std::invalid_argument("generator '" + name + "' has degree < 2");
  if (find(name)) throw std::invalid_argument("duplicate generator name '" + name + "'");
  gens_.push_back({std::move(name), degree, stage});
  return gens_.size() - 1;
}

std::optional<std::size_t> GeneratorSet::find(const std::string& name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

std::size_t GeneratorSet::count_in_degree(int degree) const {
  return static_cast<std::size_t>(std::count_if(
      gens_.begin(), gens_.end(), [degree](const Generator& g) { return g.degree == degree; }));
}

int GeneratorSet::max_degree() const {
  int m = 0;
  for (const auto& g : gens_) m = std::max(m, g.degree);
  return m;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
  while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
}

Monomial Monomial::generator(std::size_t index, int power) {
  std::vector<int> e(index + 1, 0);
  e[index] = power;
  return Monomial(std::move(e));
}

int Monomial::length() const {
  int n = 0;
  for (int e : exps_) n += e;
  return n;
}

int Monomial::degree(const GeneratorSet& gens) const {
  if (exps_.size() > gens.size()) throw std::out_of_range("monomial uses an unknown generator");
  int d = 0;
  for (std::size_t i = 0; i < exps_.size(); ++i) d += exps_[i] * gens[i].degree;
  return d;
}

std::string to_string(const Monomial& m, const GeneratorSet& gens) {
  if (m.is_one()) return "1";
  std::string out;
  for (std::size_t i = 0; i < m.exponents().size(); ++i) {
    const int e = m.exponents()[i];
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += gens[i].name;
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

std::optional<SignedMonomial> multiply(const GeneratorSet& gens, const Monomial& a,
                                       const Monomial& b) {
  const auto& ea = a.exponents();
  const auto& eb = b.exponents();
  const std::size_t n = std::max(ea.size(), eb.size());
  if (n > gens.size()) throw std::out_of_range("monomial uses an unknown generator");

  // odd_after[i]: odd generators of a with index >= i.
  std::vector<int> odd_after(n + 1, 0);
  for (std::size_t i = n; i-- > 0;)
    odd_after[i] = odd_after[i + 1] + ((gens.is_odd(i) && a.exponent(i) > 0) ? 1 : 0);

  std::vector<int> e(n, 0);
  int inversions = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = a.exponent(i) + b.exponent(i);
    if (gens.is_odd(i)) {
      if (e[i] > 1) return std::nullopt;
      if (b.exponent(i) > 0) inversions += odd_after[i + 1];
    }
  }
  return SignedMonomial{inversions % 2 == 0 ? 1 : -1, Monomial(std::move(e))};
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::monomial(const GeneratorSet& gens, const Monomial& m, const Rational& coeff) {
  Poly p(m.degree(gens));
  if (sgn(coeff) != 0) p.terms_.emplace(m, coeff);
  return p;
}

Rational Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::check_degree(int other) const {
  if (other != degree_) {
    throw DegreeMismatch("inhomogeneous combination: degree " + std::to_string(degree_) +
                         " with degree " + std::to_string(other));
  }
}

void Poly::add_term(const GeneratorSet& gens, const Monomial& m, const Rational& c) {
  check_degree(m.degree(gens));
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& other) {
  check_degree(other.degree_);
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  check_degree(other.degree_);
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, -c);
    if (!inserted) {
      it->second -= c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly mul(const GeneratorSet& gens, const Poly& a, const Poly& b) {
  Poly out(a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      auto prod = multiply(gens, ma, mb);
      if (!prod) continue;
      Rational c = ca * cb;
      if (prod->sign < 0) c = -c;
      out.add_term(gens, prod->monomial, c);
    }
  }
  return out;
}

Poly generator_poly(const GeneratorSet& gens, std::size_t index) {
  return Poly::monomial(gens, Monomial::generator(index));
}

std::string to_string(const Poly& p, const GeneratorSet& gens) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = sgn(c) < 0;
    const Rational mag = abs(c);
    if (out.empty()) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    if (m.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + '*';
      out += to_string(m, gens);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derivation

void Derivation::set(const GeneratorSet& gens, std::size_t generator, Poly image) {
  if (generator >= gens.size()) throw std::out_of_range("derivation: unknown generator");
  if (image.degree() != gens[generator].degree + 1) {
    throw DegreeMismatch("d(" + gens[generator].name + ") must have degree " +
                         std::to_string(gens[generator].degree + 1) + ", got " +
                         std::to_string(image.degree()));
  }
  if (images_.size() <= generator) images_.resize(generator + 1);
  images_[generator] = std::move(image);
}

Poly Derivation::image(const GeneratorSet& gens, std::size_t generator) const {
  if (generator < images_.size() && images_[generator]) return *images_[generator];
  return Poly(gens[generator].degree + 1);
}

bool Derivation::is_minimal() const {
  for (const auto& img : images_) {
    if (!img) continue;
    for (const auto& [m, c] : img->terms())
      if (m.length() < 2) return false;
  }
  return true;
}

Poly Derivation::apply(const GeneratorSet& gens, const Monomial& m) const {
  Poly result(m.degree(gens) + 1);
  const auto& e = m.exponents();
  std::vector<int> prefix;
  int prefix_degree = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) {
      prefix.push_back(0);
      continue;
    }
    if (i < images_.size() && images_[i] && !images_[i]->is_zero()) {
      // m = prefix * g_i * rest; the derivative of each of the e[i] copies of
      // an even g_i gives the same term.
      std::vector<int> rest(e.begin(), e.end());
      for (std::size_t j = 0; j < i; ++j) rest[j] = 0;
      rest[i] -= 1;
      Poly term = mul(gens, Poly::monomial(gens, Monomial(prefix)), *images_[i]);
      term = mul(gens, term, Poly::monomial(gens, Monomial(rest)));
      Rational factor = e[i];
      if (prefix_degree % 2 != 0) factor = -factor;
      result += term * factor;
    }
    prefix.push_back(e[i]);
    prefix_degree += e[i] * gens[i].degree;
  }
  return result;
}

Poly Derivation::apply(const GeneratorSet& gens, const Poly& p) const {
  Poly result(p.degree() + 1);
  for (const auto& [m, c] : p.terms()) result += apply(gens, m) * c;
  return result;
}

// ---------------------------------------------------------------------------
// Bases and matrices

GradedBasis::GradedBasis(int degree, std::vector<Monomial> monomials)
    : degree_(degree), monomials_(std::move(monomials)) {
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
}

std::optional<std::size_t> GradedBasis::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

linalg::QVector GradedBasis::coordinates(const Poly& p) const {
  if (p.degree() != degree_) throw DegreeMismatch("coordinates: degree does not match basis");
  linalg::QVector v(monomials_.size());
  for (const auto& [m, c] : p.terms()) {
    auto idx = index_of(m);
    if (!idx) throw std::logic_error("coordinates: monomial missing from basis");
    v[*idx] = c;
  }
  return v;
}

Poly GradedBasis::poly(const GeneratorSet& gens, const linalg::QVector& coords) const {
  if (coords.size() != monomials_.size()) throw linalg::DimensionMismatch("poly: coordinate length");
  Poly p(degree_);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (sgn(coords[i]) != 0) p.add_term(gens, monomials_[i], coords[i]);
  return p;
}

namespace {

void enumerate(const GeneratorSet& gens, std::size_t index, int remaining, std::vector<int>& exps,
               std::vector<Monomial>& out, int degree, std::size_t guard) {
  if (remaining == 0) {
    out.emplace_back(exps);
    if (out.size() > guard) throw BasisTooLarge(degree, guard);
    return;
  }
  if (index == gens.size()) return;
  const int d = gens[index].degree;
  int max_e = remaining / d;
  if (gens.is_odd(index)) max_e = std::min(max_e, 1);
  for (int e = max_e; e >= 0; --e) {
    exps[index] = e;
    enumerate(gens, index + 1, remaining - e * d, exps, out, degree, guard);
  }
  exps[index] = 0;
}

}  // namespace

GradedBasis basis(const GeneratorSet& gens, int n, std::size_t guard) {
  if (n < 0) throw std::invalid_argument("basis: negative degree");
  std::vector<Monomial> out;
  std::vector<int> exps(gens.size(), 0);
  enumerate(gens, 0, n, exps, out, n, guard);
  return GradedBasis(n, std::move(out));
}

void check_degrees(const GeneratorSet& gens, const Derivation& d) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Poly img = d.image(gens, i);
    if (img.degree() != gens[i].degree + 1) {
      throw DegreeMismatch("d(" + gens[i].name + ") has the wrong degree");
    }
    for (const auto& [m, c] : img.terms())
      if (m.degree(gens) != gens[i].degree + 1)
        throw DegreeMismatch("d(" + gens[i].name + ") has a term of the wrong degree");
  }
}

linalg::SparseMatrix derivation_matrix(const GeneratorSet& gens, const Derivation& d,
                                       const GradedBasis& source, const GradedBasis& target) {
  if (target.degree() != source.degree() + 1) {
    throw DegreeMismatch("derivation_matrix: target degree must be source degree + 1");
  }
  std::vector<linalg::SparseRow> rows(target.size());
  for (std::size_t j = 0; j < source.size(); ++j) {
    const Poly img = d.apply(gens, source[j]);
    for (const auto& [m, c] : img.terms()) {
      auto row = target.index_of(m);
      if (!row) throw std::logic_error("derivation_matrix: image outside the target basis");
      rows[*row].emplace_back(j, c);
    }
  }
  linalg::SparseMatrix out(target.size(), source.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.set_row(i, std::move(rows[i]));
  return out;
}

std::vector<linalg::SparseMatrix> extend_derivation(const GeneratorSet& gens, const Derivation& d,
                                                    int max_degree, std::size_t guard) {
  check_degrees(gens, d);
  std::vector<linalg::SparseMatrix> out;
  GradedBasis src = basis(gens, 0, guard);
  for (int n = 0; n <= max_degree; ++n) {
    GradedBasis dst = basis(gens, n + 1, guard);
    out.push_back(derivation_matrix(gens, d, src, dst));
    src = std::move(dst);
  }
  return out;
}

DSquaredReport check_d_squared(const GeneratorSet& gens, const Derivation& d, int max_degree,
                               std::size_t guard) {
  DSquaredReport report;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Poly dd = d.apply(gens, d.image(gens, i));
    if (!dd.is_zero()) {
      report.passed = false;
      report.generator = gens[i].name;
      report.witness = "d(d" + gens[i].name + ") = " + to_string(dd, gens);
      break;
    }
  }
  const auto mats = extend_derivation(gens, d, max_degree + 1, guard);
  for (int n = 0; n <= max_degree; ++n) {
    if (!(mats[static_cast<std::size_t>(n) + 1] * mats[static_cast<std::size_t>(n)]).is_zero()) {
      report.passed = false;
      report.failing_degree = n;
      break;
    }
  }
  return report;
}

linalg::Subspace decomposable_subspace(const GeneratorSet& gens, int n, std::size_t guard) {
  const GradedBasis target = basis(gens, n, guard);
  std::vector<bool> hit(target.size(), false);
  for (int p = 2; 2 * p <= n; ++p) {
    const GradedBasis left = basis(gens, p, guard);
    const GradedBasis right = basis(gens, n - p, guard);
    for (const auto& a : left.monomials()) {
      for (const auto& b : right.monomials()) {
        auto prod = multiply(gens, a, b);
        if (!prod) continue;
        auto idx = target.index_of(prod->monomial);
        if (!idx) throw std::logic_error("decomposable_subspace: product outside basis");
        hit[*idx] = true;
      }
    }
  }
  std::vector<linalg::QVector> vectors;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) continue;
    linalg::QVector v(target.size());
    v[i] = 1;
    vectors.push_back(std::move(v));
  }
  return linalg::Subspace::span(target.size(), vectors);
}

}  // namespace rht::gca
