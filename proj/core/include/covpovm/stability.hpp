#pragma once

#include <cstdint>
#include <vector>

#include "covpovm/extremal.hpp"

namespace covpovm {

/// Isotypic data of the representation restricted to one stability subgroup.
/// In the aligned basis the carrier space splits as
/// H = ⊕_nu H_nu ⊗ C^{m_nu}, and a seed commuting with the subgroup is
/// block-diagonal with one m_nu x m_nu multiplicity-space matrix per class.
struct RestrictionDecomposition {
  Subgroup subgroup;
  RepPtr subgroup_rep;  // over subgroup_as_group(subgroup)
  IsotypicDecomposition dec;

  int class_count() const { return dec.class_count(); }
  int irrep_dim(int nu) const { return dec.components[nu].irrep_dim; }
  int multiplicity(int nu) const { return dec.components[nu].multiplicity; }
};

RestrictionDecomposition restrict_and_decompose(const RepPtr& rep,
                                                const Subgroup& sub,
                                                double tol = kDefaultTol,
                                                std::uint64_t probe_seed = 0);

/// Joint bookkeeping for one stability subgroup per orbit. The flattened
/// index omega enumerates (orbit, restriction class) pairs orbit-major; the
/// reduced convex set lives on Hermitian blocks indexed by omega.
struct StabilitySetup {
  RepPtr rep;
  std::vector<RestrictionDecomposition> restrictions;  // one per orbit

  struct OmegaIndex {
    int orbit = 0;
    int nu = 0;  // class within that orbit's restriction
  };
  std::vector<OmegaIndex> omega;

  int omega_count() const { return static_cast<int>(omega.size()); }
  int block_dim(int w) const;   // multiplicity m of omega[w]
  int copy_dim(int w) const;    // irrep dimension d_nu of omega[w]
};

StabilitySetup make_stability_setup(RepPtr rep,
                                    std::vector<Subgroup> subgroups,
                                    double tol = kDefaultTol,
                                    std::uint64_t probe_seed = 0);

/// One Hermitian block per omega; the full-space seed it encodes is
/// A_i = ⊕_nu 1_{d_nu} ⊗ A_{i,nu} in the aligned restriction basis.
struct MultiplicityBlockSeed {
  std::vector<Matrix> blocks;
};

struct BlockProjection {
  std::vector<Matrix> blocks;  // per class of the restriction
  double commutation_residual = 0.0;  // ||A - twirl_{G_i}(A)||_F
};

/// Extracts the multiplicity blocks of a seed. `strict` throws
/// Error{NotInvariant} when the seed fails to commute with the subgroup
/// beyond tol * (1 + ||A||); otherwise the seed is twirled over the subgroup
/// first and the residual reported.
BlockProjection project_seed_to_blocks(const Matrix& seed,
                                       const RestrictionDecomposition& restriction,
                                       double tol = kDefaultTol,
                                       bool strict = true);

/// All orbits at once, concatenated in omega order.
MultiplicityBlockSeed project_seeds(const std::vector<Matrix>& seeds,
                                    const StabilitySetup& setup,
                                    double tol = kDefaultTol,
                                    bool strict = true);

std::vector<Matrix> reconstruct_full_seeds(const MultiplicityBlockSeed& seeds,
                                           const StabilitySetup& setup);

/// Normalization constraints on the multiplicity blocks. The coefficient of
/// block omega = (i, nu) in constraint (mu, k, l) is the partial trace over
/// the irrep factor H_nu of the compression of T^mu_{kl} to that component,
/// so that sum_w Tr[S_w A_w] = sum_i Tr[T^mu_{kl} A_i] identically. This is
/// formally the same constraint shape as for unrestricted seeds, which lets
/// the extremal machinery run unchanged on the reduced blocks.
ConstraintSet build_s_blocks(const StabilitySetup& setup,
                             const IsotypicDecomposition& full_dec);

/// Membership in the reduced convex set (residual scale = ambient dim).
MembershipReport stability_membership(const MultiplicityBlockSeed& seeds,
                                      const ConstraintSet& s_blocks,
                                      int ambient_dim,
                                      double tol = kDefaultTol);

/// Extremality in the reduced convex set; agrees with extremality of the
/// reconstructed seeds in the unrestricted set when the stabilizers are
/// trivial, and is the correct notion when they are not.
ExtremalityReport stability_extremality(const MultiplicityBlockSeed& seeds,
                                        const ConstraintSet& s_blocks,
                                        double rank_tol = kRankRelTol);

/// Covariant POVM with discrete outcome space ∪_i G/G_i: element (i, x) is
/// (|G_i|/|G|) U_{r_x} A_i U_{r_x}^dag for any representative r_x of coset x.
/// Representative independence is exact because A_i commutes with G_i.
struct QuotientPovm {
  std::vector<CosetSpace> cosets;              // one per orbit
  std::vector<std::vector<Matrix>> elements;   // elements[i][x]

  std::vector<Matrix> flattened() const;  // (i, x) lexicographic
};

/// Reconstructs the seeds, verifies subgroup invariance
/// (Error{NotInvariant}) and completeness within tol * dim
/// (Error{NotNormalized}), and assembles the quotient-space elements using
/// the supplied coset representatives.
QuotientPovm synthesize_quotient_povm(const MultiplicityBlockSeed& seeds,
                                      const StabilitySetup& setup,
                                      const std::vector<CosetSpace>& cosets,
                                      double tol = kDefaultTol);

}  // namespace covpovm
