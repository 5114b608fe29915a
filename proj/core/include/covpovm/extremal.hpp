#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "covpovm/covariant.hpp"

namespace covpovm {

/// One linear normalization constraint over a family of Hermitian blocks:
/// sum_b Tr[coeffs[b] * block_b] = rhs. For plain covariant seed blocks the
/// coefficients of constraint (mu, k, l) are the intertwiner T^mu_{kl}
/// repeated over every orbit; in the stability-group setting they are the
/// partial-traced compressions acting on the multiplicity spaces. Both
/// convex sets are cut out by constraints of this one shape, which is why the
/// extremality machinery below works unchanged on either.
struct LinearConstraint {
  int mu = 0, k = 0, l = 0;  // provenance indices, carried into reports
  double rhs = 0.0;
  std::vector<Matrix> coeffs;  // one per block
};

using ConstraintSet = std::vector<LinearConstraint>;

/// The constraint set cutting out normalized covariant seed blocks:
/// one entry per (mu, k, l) with rhs d_mu delta_{kl}.
ConstraintSet normalization_constraints(const IsotypicDecomposition& dec,
                                        int num_seeds);

/// Generic membership check for Hermitian blocks against a constraint set;
/// residual_scale multiplies tol for the normalization residual bound
/// (pass the ambient Hilbert dimension).
MembershipReport check_block_membership(const std::vector<Matrix>& blocks,
                                        const ConstraintSet& constraints,
                                        double tol = kDefaultTol,
                                        double residual_scale = 1.0);

/// Factorization A_b = X_b^dag X_b per block, with X_b of full row rank r_b =
/// rank(A_b). Ranks come from eigenvalues > tol * lambda_max (clipping the
/// tiny negatives membership tolerates); rows are ordered by descending
/// eigenvalue and eigenvector phases are fixed so the factorization is
/// deterministic.
struct SeedFactorization {
  std::vector<Matrix> factors;  // X_b: r_b x d
  std::vector<int> ranks;

  int total_rank() const;
  int total_rank_square() const;  // sum_b r_b^2
};

SeedFactorization factor_blocks(const std::vector<Matrix>& blocks,
                                double tol = kRankRelTol);
SeedFactorization factor_seeds(const SeedBlock& seeds,
                               double tol = kRankRelTol);

/// Constraint coefficients compressed onto the factor ranges: entry (mu,k,l),
/// block b holds the r_b x r_b matrix X_b coeffs[b] X_b^dag. A normalized
/// point is extremal in its convex set iff these entries span the full
/// block-operator space sum_b B(C^{r_b}).
struct ProjectedConstraintSet {
  struct Entry {
    int mu = 0, k = 0, l = 0;
    std::vector<Matrix> blocks;  // r_b x r_b per block
  };
  std::vector<Entry> entries;
  std::vector<int> ranks;

  int full_dim() const;  // sum_b r_b^2
};

ProjectedConstraintSet project_constraints(const SeedFactorization& fact,
                                           const ConstraintSet& constraints);

/// Covariant-seed specialization of project_constraints.
ProjectedConstraintSet build_f_operators(const SeedFactorization& fact,
                                         const IsotypicDecomposition& dec);

struct SpanResult {
  int span_dim = 0;
  int full_dim = 0;
  bool is_extremal = false;  // span_dim == full_dim
};

/// Rank of the stacked vectorized projected constraints under the global
/// rank semantics (kRankRelTol relative to the largest singular value).
SpanResult spanning_test(const ProjectedConstraintSet& fset,
                         double rank_tol = kRankRelTol);

/// A nonzero Hermitian block family Q HS-orthogonal to every projected
/// constraint — the direction along which the point can be perturbed both
/// ways — or nullopt when the point is extremal. Unit Hilbert-Schmidt norm,
/// sign fixed by making the leading entry's real part positive, so repeated
/// runs return the same witness.
std::optional<std::vector<Matrix>> find_perturbation(
    const ProjectedConstraintSet& fset, double rank_tol = kRankRelTol);

/// Endpoints of the maximal segment {A_b + t X_b^dag Q_b X_b} inside the
/// positive cone, together with the convex weights that reconstruct A.
struct BlockSplit {
  std::vector<Matrix> plus;
  std::vector<Matrix> minus;
  double t_plus = 0.0;
  double t_minus = 0.0;
  double weight_plus = 0.0;   // A = weight_plus * plus + weight_minus * minus
  double weight_minus = 0.0;
};

/// Validates the witness (Hermitian, nonzero, residuals within
/// kWitnessTol * ||Q|| — Error{NotAWitness} otherwise) and walks to the
/// positivity boundary in both directions. Both endpoints have strictly
/// smaller total rank than A, which is what makes recursive splitting
/// terminate.
BlockSplit split_blocks(const std::vector<Matrix>& blocks,
                        const SeedFactorization& fact,
                        const ProjectedConstraintSet& fset,
                        const std::vector<Matrix>& witness,
                        double tol = kDefaultTol);

/// Seed-block wrapper around split_blocks.
struct ConvexSplit {
  SeedBlock a_plus;
  SeedBlock a_minus;
  double t_plus = 0.0;
  double t_minus = 0.0;
  double weight_plus = 0.0;
  double weight_minus = 0.0;
};

ConvexSplit convex_split(const SeedBlock& seeds, const SeedFactorization& fact,
                         const ProjectedConstraintSet& fset,
                         const std::vector<Matrix>& witness,
                         double tol = kDefaultTol);

/// Necessary condition: extremal points satisfy sum_b rank(A_b)^2 <= number
/// of constraints (= sum_mu m_mu^2 for covariant seed blocks).
struct RankBound {
  int lhs = 0;
  int rhs = 0;
  bool satisfied = false;
};

RankBound rank_bound_check(const SeedFactorization& fact,
                           const IsotypicDecomposition& dec);
RankBound rank_bound_check_blocks(const SeedFactorization& fact,
                                  const ConstraintSet& constraints);

/// Independent extremality decision that never touches the factorization or
/// the projected constraints: parametrize all Hermitian deviations supported
/// on the supports of the blocks, impose the raw linear constraints as a real
/// system, and test whether the point is the unique solution there. Extremal
/// iff unique. Slower than spanning_test; used to cross-check it.
bool support_constrained_uniqueness(const std::vector<Matrix>& blocks,
                                    const ConstraintSet& constraints,
                                    double rank_tol = kRankRelTol);
bool extremality_oracle(const SeedBlock& seeds,
                        const IsotypicDecomposition& dec,
                        double rank_tol = kRankRelTol);

/// One-call summary: factorization ranks, spanning verdict, rank bound, and
/// (for non-extremal points) a witness together with its push-forward
/// P_b = X_b^dag Q_b X_b on the original space.
struct ExtremalityReport {
  bool is_extremal = false;
  int span_dim = 0;
  int full_dim = 0;  // sum r_b^2; also the rank-bound lhs
  int rank_bound_rhs = 0;
  bool rank_bound_satisfied = false;
  std::vector<int> ranks;
  std::optional<std::vector<Matrix>> witness;
  std::optional<std::vector<Matrix>> witness_perturbation;
  double witness_residual = 0.0;  // max |Tr[F Q]| left by the witness
};

ExtremalityReport analyze_blocks(const std::vector<Matrix>& blocks,
                                 const ConstraintSet& constraints,
                                 double rank_tol = kRankRelTol);
ExtremalityReport analyze_extremality(const SeedBlock& seeds,
                                      const IsotypicDecomposition& dec,
                                      double rank_tol = kRankRelTol);

/// Binary split tree over block families: internal nodes carry the segment
/// endpoints of one witness direction, leaves are extremal. Weights are
/// relative to the root, so the leaves reconstruct it as
/// sum_leaf weight * blocks.
struct SplitNode {
  std::vector<Matrix> blocks;
  double weight = 1.0;
  bool extremal = false;
  double t_plus = 0.0;
  double t_minus = 0.0;
  std::unique_ptr<SplitNode> plus;
  std::unique_ptr<SplitNode> minus;
};

/// Depth-first decomposition into extremal points. Total block rank strictly
/// decreases along every edge, bounding the depth by sum_b rank(A_b).
SplitNode decompose_into_extremals(const std::vector<Matrix>& blocks,
                                   const ConstraintSet& constraints,
                                   double rank_tol = kRankRelTol);
SplitNode extremal_decomposition(const SeedBlock& seeds,
                                 const IsotypicDecomposition& dec,
                                 double rank_tol = kRankRelTol);

/// Leaves in depth-first (plus before minus) order.
std::vector<const SplitNode*> extremal_leaves(const SplitNode& root);

}  // namespace covpovm
