#include "rht/sullivan.hpp"

#include <algorithm>

namespace rht::sullivan {

using gca::GradedBasis;
using gca::Monomial;
using linalg::SparseMatrix;
using linalg::Subspace;

// ---------------------------------------------------------------------------
// QuasiMorphism

void QuasiMorphism::set(std::size_t generator, QVector image) {
  if (images_.size() <= generator) images_.resize(generator + 1);
  images_[generator] = std::move(image);
}

QVector QuasiMorphism::apply(const GeneratorSet& gens, const CohomologyAlgebra& a,
                             const Monomial& m) const {
  QVector out = a.unit();
  const auto& e = m.exponents();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (i >= images_.size()) throw std::logic_error("quasi-morphism: generator without image");
    for (int p = 0; p < e[i]; ++p) out = a.multiply(out, images_[i]);
    (void)gens;
  }
  return out;
}

QVector QuasiMorphism::apply(const GeneratorSet& gens, const CohomologyAlgebra& a,
                             const Poly& p) const {
  QVector out = a.zero();
  for (const auto& [m, c] : p.terms()) {
    const QVector v = apply(gens, a, m);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (sgn(v[i]) != 0) out[i] += c * v[i];
  }
  return out;
}

namespace {

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& e) { return sgn(e) == 0; });
}

// Bases and differential matrices of one stage, computed on demand.
class CochainComplex {
 public:
  CochainComplex(const MinimalModelStage& stage, std::size_t guard)
      : stage_(stage), guard_(guard) {}

  const GradedBasis& basis(int n) {
    auto it = bases_.find(n);
    if (it != bases_.end()) return it->second;
    GradedBasis b = n < 0 ? GradedBasis(n, {}) : gca::basis(stage_.gens, n, guard_);
    return bases_.emplace(n, std::move(b)).first->second;
  }

  // d_n : basis(n) -> basis(n+1)
  const SparseMatrix& differential(int n) {
    auto it = diffs_.find(n);
    if (it != diffs_.end()) return it->second;
    const GradedBasis& src = basis(n);
    const GradedBasis& dst = basis(n + 1);
    SparseMatrix m = n < 0 ? SparseMatrix(dst.size(), 0)
                           : gca::derivation_matrix(stage_.gens, stage_.diff, src, dst);
    return diffs_.emplace(n, std::move(m)).first->second;
  }

  StageCohomology cohomology(int n) {
    StageCohomology h;
    h.basis = basis(n);
    h.cocycles = linalg::kernel_basis(differential(n));
    h.coboundaries = n <= 0 ? Subspace(h.basis.size()) : linalg::image_basis(differential(n - 1));
    const Subspace reps = linalg::complement_in(h.coboundaries, h.cocycles);
    h.dim = reps.dim();
    for (const auto& v : reps.basis()) h.cocycle_reps.push_back(h.basis.poly(stage_.gens, v));
    return h;
  }

 private:
  const MinimalModelStage& stage_;
  std::size_t guard_;
  std::map<int, GradedBasis> bases_;
  std::map<int, SparseMatrix> diffs_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Stages

MinimalModelStage init_stage(const CohomologyAlgebra& a) {
  if (a.dim(0) != 1) throw NotSimplyConnected("target algebra is not connected (dim H^0 != 1)");
  if (a.dim(1) != 0) throw NotSimplyConnected("target algebra has H^1 != 0");
  MinimalModelStage s;
  s.k = 2;
  for (std::size_t i : a.basis_in_degree(2)) {
    const std::size_t g = s.gens.add(a.name(i), 2, 2);
    s.qm.set(g, a.basis_vector(i));
  }
  return s;
}

StageCohomology stage_cohomology(const MinimalModelStage& stage, int n, std::size_t guard) {
  CochainComplex c(stage, guard);
  return c.cohomology(n);
}

linalg::QMatrix induced_map(const MinimalModelStage& stage, const CohomologyAlgebra& a,
                            const std::vector<Poly>& reps, int n) {
  linalg::QMatrix m(a.dim(n), reps.size());
  for (std::size_t j = 0; j < reps.size(); ++j) {
    const QVector col = a.component(stage.qm.apply(stage.gens, a, reps[j]), n);
    for (std::size_t i = 0; i < col.size(); ++i) m(i, j) = col[i];
  }
  return m;
}

Extension extend_stage(const MinimalModelStage& stage, const CohomologyAlgebra& a,
                       const BuildOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int k = stage.k;
  const int deg = k + 1;
  CochainComplex complex(stage, options.guard);

  Extension ext{stage, {}};
  MinimalModelStage& next = ext.stage;
  StageReport& report = ext.report;
  report.k = deg;

  // u-generators: complement of the image of H^{k+1}(stage) in A^{k+1}.
  if (a.dim(deg) > 0) {
    const StageCohomology h = complex.cohomology(deg);
    const Subspace image = linalg::image_basis(induced_map(stage, a, h.cocycle_reps, deg));
    const Subspace ys = linalg::complement_in(image, Subspace::full(a.dim(deg)));
    std::size_t i = 0;
    for (const auto& y : ys.basis()) {
      const std::size_t g =
          next.gens.add("u" + std::to_string(deg) + "_" + std::to_string(++i), deg, deg);
      next.diff.set(next.gens, g, Poly(deg + 1));
      next.qm.set(g, a.embed(y, deg));
    }
    report.new_cocycle_generators = ys.dim();
  }

  // v-generators: kernel of H^{k+2}(stage) -> A^{k+2}.
  const StageCohomology h = complex.cohomology(deg + 1);
  if (!h.cocycle_reps.empty()) {
    const linalg::QMatrix m = induced_map(stage, a, h.cocycle_reps, deg + 1);
    std::vector<QVector> kernel = linalg::kernel_basis(m).basis();
    if (options.reverse_kernel_order) std::reverse(kernel.begin(), kernel.end());
    std::size_t j = 0;
    for (const auto& coeffs : kernel) {
      Poly z(deg + 1);
      for (std::size_t r = 0; r < coeffs.size(); ++r)
        if (sgn(coeffs[r]) != 0) z += h.cocycle_reps[r] * coeffs[r];
      if (!is_zero(stage.qm.apply(stage.gens, a, z))) {
        throw std::logic_error("kernel cocycle does not map to zero in the target algebra");
      }
      const std::size_t g =
          next.gens.add("v" + std::to_string(deg) + "_" + std::to_string(++j), deg, deg);
      next.diff.set(next.gens, g, std::move(z));
      next.qm.set(g, a.zero());
    }
    report.new_kernel_generators = kernel.size();
  }

  for (int n = deg; n <= deg + 2; ++n) report.basis_sizes[n] = complex.basis(n).size();
  next.k = deg;
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return ext;
}

RankTable generator_ranks(const MinimalModelStage& stage) {
  RankTable t;
  t.max_degree = stage.k;
  for (int r = 2; r <= stage.k; ++r)
    t.entries[r] = static_cast<long long>(stage.gens.count_in_degree(r));
  return t;
}

GuardExceeded::GuardExceeded(const gca::BasisTooLarge& cause, RankTable partial,
                             int last_completed)
    : gca::BasisTooLarge(cause), partial_(std::move(partial)), last_completed_(last_completed) {}

BuildResult build(const CohomologyAlgebra& a, const BuildOptions& options) {
  if (options.max_degree < 2) throw std::invalid_argument("build: max degree must be at least 2");
  BuildResult result{init_stage(a), {}, {}};
  while (result.stage.k < options.max_degree) {
    try {
      Extension ext = extend_stage(result.stage, a, options);
      result.stage = std::move(ext.stage);
      result.reports.push_back(std::move(ext.report));
    } catch (const gca::BasisTooLarge& e) {
      throw GuardExceeded(e, generator_ranks(result.stage), result.stage.k);
    }
  }
  result.ranks = generator_ranks(result.stage);

  // rk pi_r = dim of indecomposables in degree r, computed independently.
  for (int r = 2; r <= options.max_degree; ++r) {
    std::size_t codim = 0;
    try {
      const std::size_t total = gca::basis(result.stage.gens, r, options.guard).size();
      codim = total - gca::decomposable_subspace(result.stage.gens, r, options.guard).dim();
    } catch (const gca::BasisTooLarge& e) {
      throw GuardExceeded(e, result.ranks, result.stage.k);
    }
    if (static_cast<long long>(codim) != result.ranks.entries[r]) {
      throw std::logic_error("generator count in degree " + std::to_string(r) +
                             " disagrees with the indecomposable dimension");
    }
  }
  return result;
}

MinimalModelStage truncate(const MinimalModelStage& stage, int k) {
  MinimalModelStage out;
  out.k = k;
  for (std::size_t i = 0; i < stage.gens.size(); ++i) {
    const auto& g = stage.gens[i];
    if (g.degree > k) break;
    const std::size_t idx = out.gens.add(g.name, g.degree, g.stage);
    out.diff.set(out.gens, idx, stage.diff.image(stage.gens, i));
    out.qm.set(idx, stage.qm.image(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

VerificationReport verify_stage(const MinimalModelStage& stage, const CohomologyAlgebra& a,
                                std::size_t guard) {
  VerificationReport report;
  const auto& gens = stage.gens;

  {
    CheckResult c{"d_squared", true, {}};
    const auto r = gca::check_d_squared(gens, stage.diff, stage.k, guard);
    if (!r.passed) {
      c.passed = false;
      c.witness = r.witness.empty() ? "matrix composite nonzero from degree " +
                                          std::to_string(r.failing_degree)
                                    : r.witness;
    }
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{"minimality", true, {}};
    for (std::size_t i = 0; i < gens.size() && c.passed; ++i) {
      const Poly img = stage.diff.image(gens, i);
      for (const auto& [m, coeff] : img.terms()) {
        if (m.length() < 2) {
          c.passed = false;
          c.witness = "d" + gens[i].name + " = " + gca::to_string(img, gens) +
                      " has the linear term " + gca::to_string(m, gens);
          break;
        }
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{"chain_map", true, {}};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!is_zero(stage.qm.apply(gens, a, stage.diff.image(gens, i)))) {
        c.passed = false;
        c.witness = "m(d" + gens[i].name + ") != 0";
        break;
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{"quasi_isomorphism", true, {}};
    CochainComplex complex(stage, guard);
    for (int i = 0; i <= stage.k && c.passed; ++i) {
      try {
        const StageCohomology h = complex.cohomology(i);
        if (h.dim != a.dim(i)) {
          c.passed = false;
          c.witness = "dim H^" + std::to_string(i) + " = " + std::to_string(h.dim) +
                      ", target has " + std::to_string(a.dim(i));
        } else if (linalg::rank(induced_map(stage, a, h.cocycle_reps, i)) != h.dim) {
          c.passed = false;
          c.witness = "induced map on H^" + std::to_string(i) + " is not bijective";
        }
      } catch (const linalg::NotContained&) {
        // Only possible when d^2 != 0.
        c.passed = false;
        c.witness = "coboundaries in degree " + std::to_string(i) + " are not cocycles";
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{"indecomposables", true, {}};
    for (int r = 2; r <= stage.k; ++r) {
      const std::size_t total = gca::basis(gens, r, guard).size();
      const std::size_t codim = total - gca::decomposable_subspace(gens, r, guard).dim();
      if (codim != gens.count_in_degree(r)) {
        c.passed = false;
        c.witness = "degree " + std::to_string(r) + ": " + std::to_string(gens.count_in_degree(r)) +
                    " generators vs indecomposable dimension " + std::to_string(codim);
        break;
      }
    }
    report.checks.push_back(std::move(c));
  }

  return report;
}

// ---------------------------------------------------------------------------
// Fixtures

namespace fixtures {

MinimalModelStage corrupt_differential(MinimalModelStage stage) {
  for (std::size_t i = stage.gens.size(); i-- > 0;) {
    const int target = stage.gens[i].degree + 1;
    const GradedBasis b = gca::basis(stage.gens, target);
    for (const auto& m : b.monomials()) {
      if (m.length() < 2) continue;
      if (stage.diff.apply(stage.gens, m).is_zero()) continue;
      Poly img = stage.diff.image(stage.gens, i);
      img.add_term(stage.gens, m, Rational(1));
      stage.diff.set(stage.gens, i, std::move(img));
      return stage;
    }
  }
  throw std::logic_error("corrupt_differential: no generator admits a non-closed term");
}

MinimalModelStage inject_linear_term(MinimalModelStage stage) {
  for (std::size_t i = 0; i < stage.gens.size(); ++i) {
    for (std::size_t j = 0; j < stage.gens.size(); ++j) {
      if (stage.gens[j].degree != stage.gens[i].degree + 1) continue;
      Poly img = stage.diff.image(stage.gens, i);
      img.add_term(stage.gens, Monomial::generator(j), Rational(1));
      stage.diff.set(stage.gens, i, std::move(img));
      return stage;
    }
  }
  throw std::logic_error("inject_linear_term: no pair of generators in consecutive degrees");
}

}  // namespace fixtures

}  // namespace rht::sullivan
