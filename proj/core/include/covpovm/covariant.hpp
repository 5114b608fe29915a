#pragma once

#include <functional>
#include <string>
#include <vector>

#include "covpovm/repdec.hpp"

namespace covpovm {

/// Seed operators {A_i}: one Hermitian d x d matrix per orbit of the outcome
/// space. Together with the representation they determine the full covariant
/// POVM through P(i, g) = (1/|G|) U_g A_i U_g^dag, so all analysis happens on
/// the seeds rather than on |I| * |G| elements.
struct SeedBlock {
  RepPtr rep;
  std::vector<Matrix> seeds;
  std::vector<std::string> labels;  // orbit labels; defaults to "0", "1", ...

  int dim() const { return rep ? rep->dim : 0; }
  int count() const { return static_cast<int>(seeds.size()); }
};

/// Validates dimensions and Hermiticity (within tol * (1 + norm)) and fills in
/// default labels. Positivity is deliberately not enforced here: membership
/// checks report it, and split endpoints sit exactly on the boundary.
SeedBlock make_seed_block(RepPtr rep, std::vector<Matrix> seeds,
                          std::vector<std::string> labels = {},
                          double tol = kDefaultTol);

/// sum_i twirl(A_i). Equals the identity exactly when the seed block is
/// normalized; its deviation from 1 is the completeness defect of the POVM.
Matrix normalization_map(const SeedBlock& seeds);

struct PositivityEntry {
  int seed = 0;
  double min_eigenvalue = 0.0;
  bool ok = false;
};

struct NormalizationResidual {
  int mu = 0, k = 0, l = 0;
  double residual = 0.0;  // |sum_i Tr[T^mu_kl A_i] - d_mu delta_kl|
};

/// Total check result: every positivity verdict and every (mu, k, l)
/// normalization residual is listed, not just the first failure.
struct MembershipReport {
  std::vector<PositivityEntry> positivity;
  std::vector<NormalizationResidual> normalization_residuals;
  bool positive = false;
  bool normalized = false;
  bool member = false;
  double max_residual = 0.0;
  double tol = 0.0;
};

/// Membership of the seed block in the convex set of normalized covariant
/// POVM seeds: positivity within -tol * (1 + ||A_i||) per seed and trace
/// normalization within tol * dim per intertwiner. Never throws on
/// violations; the report carries them all.
MembershipReport check_membership(const SeedBlock& seeds,
                                  const IsotypicDecomposition& dec,
                                  double tol = kDefaultTol);

/// A synthesized covariant POVM over the outcome space I x G. Elements are
/// generated on demand from the (positivity-clipped) seeds; materialize()
/// refuses tables larger than `cap` complex entries so huge groups must be
/// streamed.
class CovariantPovm {
 public:
  CovariantPovm(SeedBlock seeds);

  const SeedBlock& seed_block() const { return seeds_; }
  int orbit_count() const { return seeds_.count(); }
  int group_order() const { return seeds_.rep->order(); }
  int dim() const { return seeds_.dim(); }
  std::size_t element_count() const;

  Matrix element(int i, int g) const;

  /// Visits every element in deterministic (i, g) lexicographic order.
  void for_each_element(
      const std::function<void(int i, int g, const Matrix&)>& fn) const;

  /// elements[i][g]; throws std::length_error above the cap.
  std::vector<std::vector<Matrix>> materialize(
      std::size_t cap = kElementCap) const;

 private:
  SeedBlock seeds_;
};

/// Checks approximate positivity, clips tiny negative seed eigenvalues to
/// zero, and verifies completeness ||sum_{i,g} P(i,g) - 1|| <= tol * dim.
/// Throws Error{NotNormalized} when either positivity or completeness fails
/// beyond tolerance.
CovariantPovm synthesize(const SeedBlock& seeds, double tol = kDefaultTol);

struct OutcomeProbabilities {
  std::vector<std::vector<double>> p;  // p[i][g] = Tr[rho P(i, g)]
  double total = 0.0;                  // sums to 1 for a normalized POVM
};

/// Born-rule outcome table. Throws Error{InvalidState} unless rho is
/// Hermitian, positive semidefinite and unit-trace within tol.
OutcomeProbabilities outcome_probabilities(const CovariantPovm& povm,
                                           const Matrix& state,
                                           double tol = kDefaultTol);

}  // namespace covpovm
