#include "covpovm/rep.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "covpovm/error.hpp"

namespace covpovm {

RepPtr validate_rep(GroupPtr group, std::vector<Matrix> matrices, double tol) {
  if (!group) throw std::invalid_argument("representation needs a group");
  const int n = group->order;
  if (static_cast<int>(matrices.size()) != n)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(n) + " matrices, got " +
                    std::to_string(matrices.size()));
  const int d = static_cast<int>(matrices[0].rows());
  if (d < 1)
    throw Error(ErrorCode::DimensionMismatch, "matrices must be nonempty");

  auto rep = std::make_shared<ProjectiveRep>();
  rep->group = std::move(group);
  rep->dim = d;
  rep->matrices = std::move(matrices);

  const Matrix eye = Matrix::Identity(d, d);
  const double unitary_bound = tol * d;
  for (int g = 0; g < n; ++g) {
    const Matrix& u = rep->matrices[g];
    if (u.rows() != d || u.cols() != d)
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix for element #" + std::to_string(g) +
                      " is not " + std::to_string(d) + "x" + std::to_string(d));
    const double residual = (u.adjoint() * u - eye).norm();
    if (residual > unitary_bound)
      throw Error(ErrorCode::NotUnitary,
                  "element #" + std::to_string(g) + " has unitarity residual " +
                      std::to_string(residual));
  }

  // The cocycle is fixed by the matrices themselves: if U_g U_h is
  // proportional to U_{gh}, the proportionality constant is the normalized
  // overlap below, and the residual check certifies both the proportionality
  // and |omega| = 1.
  rep->cocycle = Matrix(n, n);
  const double rel_bound = tol * d;
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      const Matrix product = rep->matrices[g] * rep->matrices[h];
      const Matrix& target = rep->matrices[rep->group->op(g, h)];
      const Complex omega = (target.adjoint() * product).trace() / double(d);
      const double modulus_defect = std::abs(std::abs(omega) - 1.0);
      const double residual = (product - omega * target).norm();
      if (modulus_defect > rel_bound || residual > rel_bound)
        throw Error(ErrorCode::NotProjectiveRep,
                    "pair (#" + std::to_string(g) + ", #" + std::to_string(h) +
                        ") violates the projective relation (residual " +
                        std::to_string(residual) + ", |omega|-1 = " +
                        std::to_string(modulus_defect) + ")");
      rep->cocycle(g, h) = omega;
    }
  }
  return rep;
}

RepPtr regular_rep(const GroupPtr& group) {
  const int n = group->order;
  std::vector<Matrix> matrices(n, Matrix::Zero(n, n));
  // Left translation permutes the group itself: U_g |h> = |gh>.
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) matrices[g](group->op(g, h), h) = 1.0;
  return validate_rep(group, std::move(matrices));
}

RepPtr restrict_rep(const RepPtr& rep, const Subgroup& sub, double tol) {
  if (!rep) throw std::invalid_argument("restrict_rep needs a representation");
  if (sub.parent->order != rep->group->order)
    throw Error(ErrorCode::DimensionMismatch,
                "subgroup belongs to a different group");
  GroupPtr small = subgroup_as_group(sub);
  std::vector<Matrix> matrices;
  matrices.reserve(sub.members.size());
  for (int m : sub.members) matrices.push_back(rep->matrices[m]);
  return validate_rep(std::move(small), std::move(matrices), tol);
}

}  // namespace covpovm
