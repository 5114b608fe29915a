#pragma once

#include <vector>

#include "covpovm/group.hpp"
#include "covpovm/types.hpp"

namespace covpovm {

/// Unitary, generally projective, representation: U_g U_h = omega(g,h) U_{gh}
/// with |omega(g,h)| = 1. Ordinary representations are the special case
/// omega = 1. Immutable after construction; share via RepPtr.
struct ProjectiveRep {
  GroupPtr group;
  int dim = 0;
  std::vector<Matrix> matrices;  // indexed by group element
  Matrix cocycle;                // |G| x |G|; cocycle(g, h) = omega(g, h)

  const Matrix& matrix(int g) const { return matrices[g]; }
  Complex omega(int g, int h) const { return cocycle(g, h); }
  int order() const { return group->order; }
};

using RepPtr = std::shared_ptr<const ProjectiveRep>;

/// Validates unitarity of every matrix (residual <= tol * dim), extracts the
/// cocycle as omega(g,h) = Tr[U_{gh}^dag U_g U_h] / dim, and verifies both
/// |omega| = 1 and U_g U_h = omega(g,h) U_{gh} within tol * dim. Throws
/// Error{NotUnitary, NotProjectiveRep} naming the offending element or pair.
RepPtr validate_rep(GroupPtr group, std::vector<Matrix> matrices,
                    double tol = kDefaultTol);

/// Left regular representation by permutation matrices (ordinary, cocycle 1).
RepPtr regular_rep(const GroupPtr& group);

/// Restriction of a representation to a subgroup, re-indexed over
/// subgroup_as_group(sub). The restricted cocycle is inherited.
RepPtr restrict_rep(const RepPtr& rep, const Subgroup& sub,
                    double tol = kDefaultTol);

}  // namespace covpovm
