#pragma once

#include <cstdint>
#include <vector>

#include "covpovm/rep.hpp"

namespace covpovm {

/// Group average (1/|G|) sum_g U_g X U_g^dag. The result commutes with every
/// U_g (the cocycle phases cancel, so this holds for projective reps too).
/// Terms are accumulated by fixed pairwise tree reduction, so the output is
/// bit-identical regardless of the COVPOVM_THREADS worker count.
Matrix twirl(const ProjectiveRep& rep, const Matrix& x);

/// Same average over an explicit subset of elements, normalized by the subset
/// size. Used to twirl seeds over stability subgroups.
Matrix twirl_over(const ProjectiveRep& rep, const std::vector<int>& elements,
                  const Matrix& x);

/// Hilbert-Schmidt-orthonormal basis of the commutant
/// {O : O U_g = U_g O for all g}, obtained by null-space extraction of the
/// stacked commutator system. Its size equals sum_mu m_mu^2.
std::vector<Matrix> commutant_basis(const ProjectiveRep& rep,
                                    double tol = kDefaultTol);

/// One isotypic component: all multiplicity copies of a single irreducible
/// class, in a basis where the copies carry numerically identical restricted
/// representation matrices.
struct IsotypicComponent {
  int label = 0;         // class id; deterministic given the probe seed
  int irrep_dim = 0;     // d_mu
  int multiplicity = 0;  // m_mu

  /// dim x (irrep_dim * multiplicity) isometry. Multiplicity block k occupies
  /// columns [k * irrep_dim, (k+1) * irrep_dim).
  Matrix basis;

  Matrix block_basis(int k) const;
};

struct IsotypicDecomposition {
  RepPtr rep;
  std::vector<IsotypicComponent> components;

  /// intertwiners[mu][k * m_mu + l] is the invariant partial isometry with
  /// support on multiplicity block l and range on block k of class mu;
  /// the diagonal entries are the block projectors. They satisfy
  /// T_{kl} T_{pq} = delta_{lp} T_{kq} and T_{kl}^dag = T_{lk}, and any O in
  /// the commutant expands as sum_{mu,k,l} Tr[T_{lk} O] / d_mu * T_{kl}.
  std::vector<std::vector<Matrix>> intertwiners;

  const Matrix& intertwiner(int mu, int k, int l) const;
  int dim() const;
  int class_count() const { return static_cast<int>(components.size()); }
  int commutant_dim() const;  // sum over classes of multiplicity^2
};

/// Splits the carrier space into isotypic components and constructs the
/// intertwiners. A random Hermitian probe is twirled; its eigenspaces refine
/// the invariant blocks; blocks are grouped into equivalence classes by
/// character inner products and aligned by declaring the first block of each
/// class canonical and rotating the others with twirled cross-block maps.
/// Deterministic given probe_seed. If a probe fails to separate blocks the
/// seed is advanced and the decomposition retried a bounded number of times
/// before Error{DegenerateProbe} is thrown.
IsotypicDecomposition decompose(RepPtr rep, double tol = kDefaultTol,
                                std::uint64_t probe_seed = 0);

struct ReconstructionReport {
  int trials = 0;
  double max_residual = 0.0;
  bool ok = false;
};

/// Self-check: draws `trials` random Hermitian probes, twirls each, and
/// compares against the expansion through the intertwiner trace formula.
/// Throws Error{ReconstructionFailure} if the worst residual exceeds
/// tol * dim.
ReconstructionReport verify_reconstruction(const IsotypicDecomposition& dec,
                                           int trials,
                                           double tol = kDefaultTol,
                                           std::uint64_t seed = 1);

}  // namespace covpovm
