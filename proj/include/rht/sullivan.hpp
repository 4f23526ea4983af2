#pragma once

// Minimal Sullivan model of a zero-differential cohomology algebra, built one
// degree at a time.
//
// Stage k holds generators of degree <= k together with a multiplicative map
// m_k into the target algebra A that is an isomorphism on H^{<=k} and injective
// on H^{k+1}. Extending to stage k+1 adds, in degree k+1,
//   u-generators: du = 0, m(u) = y, for a complement {y} of Im H^{k+1}(m_k)
//                 inside A^{k+1};
//   v-generators: dv = z, m(v) = 0, for cocycles {z} representing a basis of
//                 Ker(H^{k+2}(m_k) : H^{k+2}(stage) -> A^{k+2}).
// Since A has zero differential, m(z) must vanish exactly; the engine checks
// this instead of solving m(z) = d w.
//
// The number of degree-r generators is rk pi_r.

#include <chrono>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rht/fourfold.hpp"
#include "rht/gca.hpp"
#include "rht/linalg.hpp"

namespace rht::sullivan {

using fourfold::CohomologyAlgebra;
using fourfold::RankTable;
using gca::Derivation;
using gca::GeneratorSet;
using gca::Poly;
using linalg::QVector;
using linalg::Rational;

class NotSimplyConnected : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Degree-preserving multiplicative map into A, given on generators.
class QuasiMorphism {
 public:
  void set(std::size_t generator, QVector image);
  const QVector& image(std::size_t generator) const { return images_.at(generator); }
  std::size_t size() const { return images_.size(); }

  QVector apply(const GeneratorSet& gens, const CohomologyAlgebra& a, const gca::Monomial& m) const;
  QVector apply(const GeneratorSet& gens, const CohomologyAlgebra& a, const Poly& p) const;

 private:
  std::vector<QVector> images_;
};

struct MinimalModelStage {
  GeneratorSet gens;
  Derivation diff;
  QuasiMorphism qm;
  int k = 2;
};

struct StageReport {
  int k = 0;  // degree of the generators added
  std::size_t new_cocycle_generators = 0;
  std::size_t new_kernel_generators = 0;
  std::map<int, std::size_t> basis_sizes;
  double elapsed_ms = 0.0;
};

struct BuildOptions {
  int max_degree = 5;
  std::size_t guard = gca::kDefaultGuard;
  /// Test hook: take the kernel basis in reverse order. Changes the
  /// differentials, never the ranks.
  bool reverse_kernel_order = false;
};

struct StageCohomology {
  std::size_t dim = 0;
  std::vector<Poly> cocycle_reps;
  linalg::Subspace cocycles;
  linalg::Subspace coboundaries;
  gca::GradedBasis basis;
};

MinimalModelStage init_stage(const CohomologyAlgebra& a);

/// H^n of the stage: cocycles modulo coboundaries, with representatives
/// spanning an echelon complement of the coboundaries.
StageCohomology stage_cohomology(const MinimalModelStage& stage, int n,
                                 std::size_t guard = gca::kDefaultGuard);

/// Matrix (dim A^n x #reps) of the map induced by qm on cocycle representatives.
linalg::QMatrix induced_map(const MinimalModelStage& stage, const CohomologyAlgebra& a,
                            const std::vector<Poly>& reps, int n);

struct Extension {
  MinimalModelStage stage;
  StageReport report;
};

Extension extend_stage(const MinimalModelStage& stage, const CohomologyAlgebra& a,
                       const BuildOptions& options = {});

/// Raised when a basis exceeds the guard; carries the ranks of every
/// completed stage.
class GuardExceeded : public gca::BasisTooLarge {
 public:
  GuardExceeded(const gca::BasisTooLarge& cause, RankTable partial, int last_completed);
  const RankTable& partial() const { return partial_; }
  int last_completed_stage() const { return last_completed_; }

 private:
  RankTable partial_;
  int last_completed_;
};

struct BuildResult {
  MinimalModelStage stage;
  RankTable ranks;
  std::vector<StageReport> reports;
};

BuildResult build(const CohomologyAlgebra& a, const BuildOptions& options = {});

/// Generator count per degree 2..k as a table (zeros included).
RankTable generator_ranks(const MinimalModelStage& stage);

/// The stage restricted to generators of degree <= k.
MinimalModelStage truncate(const MinimalModelStage& stage, int k);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult* first_failure() const;
};

/// d^2 = 0, minimality, qm is a chain map, H^i(stage) ~= H^i(A) for i <= k via
/// qm, and generator counts equal codimensions of decomposables.
VerificationReport verify_stage(const MinimalModelStage& stage, const CohomologyAlgebra& a,
                                std::size_t guard = gca::kDefaultGuard);

/// Deliberately broken stages for exercising the checks.
namespace fixtures {

/// Adds a non-closed monomial to the differential of the highest generator
/// that admits one, breaking d^2 = 0.
MinimalModelStage corrupt_differential(MinimalModelStage stage);

/// Adds a lone generator (a linear term) to some differential.
MinimalModelStage inject_linear_term(MinimalModelStage stage);

}  // namespace fixtures

}  // namespace rht::sullivan
