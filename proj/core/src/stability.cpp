#include "covpovm/stability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "covpovm/error.hpp"
#include "internal.hpp"

namespace covpovm {

RestrictionDecomposition restrict_and_decompose(const RepPtr& rep,
                                                const Subgroup& sub,
                                                double tol,
                                                std::uint64_t probe_seed) {
  RestrictionDecomposition restriction;
  restriction.subgroup = sub;
  restriction.subgroup_rep = restrict_rep(rep, sub, tol);
  restriction.dec = decompose(restriction.subgroup_rep, tol, probe_seed);
  return restriction;
}

int StabilitySetup::block_dim(int w) const {
  const auto& o = omega[w];
  return restrictions[o.orbit].multiplicity(o.nu);
}

int StabilitySetup::copy_dim(int w) const {
  const auto& o = omega[w];
  return restrictions[o.orbit].irrep_dim(o.nu);
}

StabilitySetup make_stability_setup(RepPtr rep,
                                    std::vector<Subgroup> subgroups,
                                    double tol, std::uint64_t probe_seed) {
  if (!rep) throw std::invalid_argument("stability setup needs a rep");
  if (subgroups.empty())
    throw std::invalid_argument("stability setup needs one subgroup per orbit");
  StabilitySetup setup;
  setup.rep = rep;
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    setup.restrictions.push_back(
        restrict_and_decompose(rep, subgroups[i], tol, probe_seed));
    const int classes = setup.restrictions.back().class_count();
    for (int nu = 0; nu < classes; ++nu)
      setup.omega.push_back({static_cast<int>(i), nu});
  }
  return setup;
}

BlockProjection project_seed_to_blocks(const Matrix& seed,
                                       const RestrictionDecomposition& restriction,
                                       double tol, bool strict) {
  const auto& rep = *restriction.subgroup_rep;
  if (seed.rows() != rep.dim || seed.cols() != rep.dim)
    throw Error(ErrorCode::DimensionMismatch,
                "seed is not " + std::to_string(rep.dim) + "x" +
                    std::to_string(rep.dim));
  const Matrix averaged = twirl(rep, seed);
  BlockProjection projection;
  projection.commutation_residual = (seed - averaged).norm();
  if (strict &&
      projection.commutation_residual > tol * (1.0 + seed.norm()))
    throw Error(ErrorCode::NotInvariant,
                "seed fails to commute with its stability subgroup "
                "(twirl residual " +
                    std::to_string(projection.commutation_residual) + ")");

  // The averaged seed lies in the restriction's commutant, so in the aligned
  // basis it is 1_{d_nu} ⊗ A_nu per class; the multiplicity matrix is read
  // off through the intertwiner trace formula.
  for (int nu = 0; nu < restriction.class_count(); ++nu) {
    const auto& comp = restriction.dec.components[nu];
    Matrix block(comp.multiplicity, comp.multiplicity);
    for (int k = 0; k < comp.multiplicity; ++k)
      for (int l = 0; l < comp.multiplicity; ++l)
        block(k, l) = (restriction.dec.intertwiner(nu, l, k) * averaged)
                          .trace() /
                      static_cast<double>(comp.irrep_dim);
    projection.blocks.push_back(detail::hermitian_part(block));
  }
  return projection;
}

MultiplicityBlockSeed project_seeds(const std::vector<Matrix>& seeds,
                                    const StabilitySetup& setup,
                                    double tol, bool strict) {
  if (seeds.size() != setup.restrictions.size())
    throw Error(ErrorCode::DimensionMismatch,
                "seed count does not match the stability setup");
  MultiplicityBlockSeed out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    BlockProjection projection =
        project_seed_to_blocks(seeds[i], setup.restrictions[i], tol, strict);
    for (auto& block : projection.blocks)
      out.blocks.push_back(std::move(block));
  }
  return out;
}

std::vector<Matrix> reconstruct_full_seeds(const MultiplicityBlockSeed& seeds,
                                           const StabilitySetup& setup) {
  if (static_cast<int>(seeds.blocks.size()) != setup.omega_count())
    throw Error(ErrorCode::DimensionMismatch,
                "block count does not match the omega index");
  const int d = setup.rep->dim;
  std::vector<Matrix> full(setup.restrictions.size(), Matrix::Zero(d, d));
  for (int w = 0; w < setup.omega_count(); ++w) {
    const auto& o = setup.omega[w];
    const auto& dec = setup.restrictions[o.orbit].dec;
    const auto& comp = dec.components[o.nu];
    const Matrix& block = seeds.blocks[w];
    if (block.rows() != comp.multiplicity || block.cols() != comp.multiplicity)
      throw Error(ErrorCode::DimensionMismatch,
                  "block " + std::to_string(w) + " is not " +
                      std::to_string(comp.multiplicity) + "x" +
                      std::to_string(comp.multiplicity));
    for (int k = 0; k < comp.multiplicity; ++k)
      for (int l = 0; l < comp.multiplicity; ++l)
        full[o.orbit] += block(k, l) * dec.intertwiner(o.nu, k, l);
  }
  return full;
}

ConstraintSet build_s_blocks(const StabilitySetup& setup,
                             const IsotypicDecomposition& full_dec) {
  if (full_dec.dim() != setup.rep->dim)
    throw Error(ErrorCode::DimensionMismatch,
                "full decomposition does not match the stability setup");
  ConstraintSet constraints;
  for (int mu = 0; mu < full_dec.class_count(); ++mu) {
    const auto& comp = full_dec.components[mu];
    for (int k = 0; k < comp.multiplicity; ++k) {
      for (int l = 0; l < comp.multiplicity; ++l) {
        LinearConstraint c;
        c.mu = mu;
        c.k = k;
        c.l = l;
        c.rhs = k == l ? static_cast<double>(comp.irrep_dim) : 0.0;
        const Matrix& t = full_dec.intertwiner(mu, k, l);
        for (int w = 0; w < setup.omega_count(); ++w) {
          const auto& o = setup.omega[w];
          const auto& rcomp =
              setup.restrictions[o.orbit].dec.components[o.nu];
          // Compression of T to the component, partial-traced over the
          // irrep factor: S(k', l') = sum_a <k' a| B^dag T B |l' a>.
          const Matrix compressed =
              rcomp.basis.adjoint() * t * rcomp.basis;
          Matrix s = Matrix::Zero(rcomp.multiplicity, rcomp.multiplicity);
          for (int kp = 0; kp < rcomp.multiplicity; ++kp)
            for (int lp = 0; lp < rcomp.multiplicity; ++lp)
              for (int a = 0; a < rcomp.irrep_dim; ++a)
                s(kp, lp) += compressed(kp * rcomp.irrep_dim + a,
                                        lp * rcomp.irrep_dim + a);
          c.coeffs.push_back(std::move(s));
        }
        constraints.push_back(std::move(c));
      }
    }
  }
  return constraints;
}

MembershipReport stability_membership(const MultiplicityBlockSeed& seeds,
                                      const ConstraintSet& s_blocks,
                                      int ambient_dim, double tol) {
  return check_block_membership(seeds.blocks, s_blocks, tol, ambient_dim);
}

ExtremalityReport stability_extremality(const MultiplicityBlockSeed& seeds,
                                        const ConstraintSet& s_blocks,
                                        double rank_tol) {
  return analyze_blocks(seeds.blocks, s_blocks, rank_tol);
}

std::vector<Matrix> QuotientPovm::flattened() const {
  std::vector<Matrix> flat;
  for (const auto& orbit : elements)
    for (const Matrix& element : orbit) flat.push_back(element);
  return flat;
}

QuotientPovm synthesize_quotient_povm(const MultiplicityBlockSeed& seeds,
                                      const StabilitySetup& setup,
                                      const std::vector<CosetSpace>& cosets,
                                      double tol) {
  if (cosets.size() != setup.restrictions.size())
    throw Error(ErrorCode::DimensionMismatch,
                "coset space count does not match the orbit count");
  const int d = setup.rep->dim;
  const int n = setup.rep->order();
  const std::vector<Matrix> full = reconstruct_full_seeds(seeds, setup);

  QuotientPovm povm;
  povm.cosets = cosets;
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < full.size(); ++i) {
    const Subgroup& stabilizer = setup.restrictions[i].subgroup;
    if (cosets[i].subgroup.members != stabilizer.members)
      throw Error(ErrorCode::DimensionMismatch,
                  "coset space " + std::to_string(i) +
                      " was built from a different subgroup");
    // Invariance makes the element independent of which representative the
    // coset space carries; verify rather than assume.
    double worst = 0.0;
    for (int h : stabilizer.members) {
      const Matrix& u = setup.rep->matrices[h];
      worst = std::max(worst, (u * full[i] - full[i] * u).norm());
    }
    if (worst > tol * (1.0 + full[i].norm()))
      throw Error(ErrorCode::NotInvariant,
                  "reconstructed seed " + std::to_string(i) +
                      " fails invariance (residual " + std::to_string(worst) +
                      ")");

    const double weight =
        static_cast<double>(stabilizer.size()) / static_cast<double>(n);
    std::vector<Matrix> orbit;
    orbit.reserve(cosets[i].count());
    for (int x = 0; x < cosets[i].count(); ++x) {
      const Matrix& u = setup.rep->matrices[cosets[i].representatives[x]];
      orbit.push_back(weight * (u * full[i] * u.adjoint()));
      total += orbit.back();
    }
    povm.elements.push_back(std::move(orbit));
  }

  const double defect = (total - Matrix::Identity(d, d)).norm();
  if (defect > tol * d)
    throw Error(ErrorCode::NotNormalized,
                "quotient completeness defect " + std::to_string(defect) +
                    " exceeds " + std::to_string(tol * d));
  return povm;
}

}  // namespace covpovm
