#include "covpovm/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "covpovm/error.hpp"
#include "internal.hpp"

namespace covpovm {

namespace {

/// Stacks one row per constraint entry: the concatenated vectorizations of
/// its per-block matrices, transposed per block so that the plain
/// matrix-vector product realizes the trace pairing,
/// row_e . vec(Q) = sum_b Tr[F_{e,b} Q_b]. A vector annihilated by this
/// matrix therefore devectorizes directly to a family trace-orthogonal to
/// every entry. Per-block transposition permutes columns, so ranks (and with
/// them the spanning verdict) are unaffected.
Matrix stack_entries(const ProjectedConstraintSet& fset) {
  const int full = fset.full_dim();
  Matrix stacked(static_cast<int>(fset.entries.size()), full);
  for (std::size_t e = 0; e < fset.entries.size(); ++e) {
    int offset = 0;
    for (std::size_t b = 0; b < fset.ranks.size(); ++b) {
      const int r = fset.ranks[b];
      if (r == 0) continue;
      stacked.row(static_cast<int>(e)).segment(offset, r * r) =
          detail::vec(fset.entries[e].blocks[b].transpose()).transpose();
      offset += r * r;
    }
  }
  return stacked;
}

double family_norm(const std::vector<Matrix>& blocks) {
  double sq = 0.0;
  for (const Matrix& b : blocks) sq += b.squaredNorm();
  return std::sqrt(sq);
}

/// Largest |Tr[F_e Q]| over all projected constraint entries.
double witness_residual(const ProjectedConstraintSet& fset,
                        const std::vector<Matrix>& witness) {
  double worst = 0.0;
  for (const auto& entry : fset.entries) {
    Complex overlap = 0.0;
    for (std::size_t b = 0; b < entry.blocks.size(); ++b)
      if (entry.blocks[b].size() > 0 && witness[b].size() > 0)
        overlap += (entry.blocks[b] * witness[b]).trace();
    worst = std::max(worst, std::abs(overlap));
  }
  return worst;
}

/// Flips the family's overall sign so the leading entry (first entry within
/// a factor 2 of the global maximum, scanning blocks then rows then columns)
/// has positive real part, with the imaginary part breaking exact ties.
void fix_witness_sign(std::vector<Matrix>& witness) {
  double peak = 0.0;
  for (const Matrix& w : witness)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        peak = std::max(peak, std::abs(w(i, j)));
  if (peak <= 0.0) return;
  for (const Matrix& w : witness) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (std::abs(w(i, j)) < 0.5 * peak) continue;
        const Complex lead = w(i, j);
        const bool flip = lead.real() < -1e-12 * peak ||
                          (std::abs(lead.real()) <= 1e-12 * peak &&
                           lead.imag() < 0.0);
        if (flip)
          for (Matrix& m : witness) m = -m;
        return;
      }
    }
  }
}

}  // namespace

ConstraintSet normalization_constraints(const IsotypicDecomposition& dec,
                                        int num_seeds) {
  if (num_seeds < 1)
    throw std::invalid_argument("constraint set needs at least one seed");
  ConstraintSet constraints;
  for (int mu = 0; mu < dec.class_count(); ++mu) {
    const auto& comp = dec.components[mu];
    for (int k = 0; k < comp.multiplicity; ++k) {
      for (int l = 0; l < comp.multiplicity; ++l) {
        LinearConstraint c;
        c.mu = mu;
        c.k = k;
        c.l = l;
        c.rhs = k == l ? static_cast<double>(comp.irrep_dim) : 0.0;
        c.coeffs.assign(num_seeds, dec.intertwiner(mu, k, l));
        constraints.push_back(std::move(c));
      }
    }
  }
  return constraints;
}

MembershipReport check_block_membership(const std::vector<Matrix>& blocks,
                                        const ConstraintSet& constraints,
                                        double tol, double residual_scale) {
  MembershipReport report;
  report.tol = tol;
  report.positive = true;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(blocks[b]);
    PositivityEntry entry;
    entry.seed = static_cast<int>(b);
    entry.min_eigenvalue = es.eigenvalues()(0);
    entry.ok = entry.min_eigenvalue >= -tol * (1.0 + blocks[b].norm());
    report.positive = report.positive && entry.ok;
    report.positivity.push_back(entry);
  }

  const double bound = tol * residual_scale;
  report.normalized = true;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != blocks.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "constraint (" + std::to_string(c.mu) + "," +
                      std::to_string(c.k) + "," + std::to_string(c.l) +
                      ") covers " + std::to_string(c.coeffs.size()) +
                      " blocks, expected " + std::to_string(blocks.size()));
    Complex total = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      total += (c.coeffs[b] * blocks[b]).trace();
    NormalizationResidual res;
    res.mu = c.mu;
    res.k = c.k;
    res.l = c.l;
    res.residual = std::abs(total - c.rhs);
    report.max_residual = std::max(report.max_residual, res.residual);
    report.normalized = report.normalized && res.residual <= bound;
    report.normalization_residuals.push_back(res);
  }
  report.member = report.positive && report.normalized;
  return report;
}

int SeedFactorization::total_rank() const {
  int total = 0;
  for (int r : ranks) total += r;
  return total;
}

int SeedFactorization::total_rank_square() const {
  int total = 0;
  for (int r : ranks) total += r * r;
  return total;
}

SeedFactorization factor_blocks(const std::vector<Matrix>& blocks,
                                double tol) {
  // The rank cutoff is relative to the largest eigenvalue across the whole
  // family, not per block: a block that is pure floating-point junk has junk
  // as its own top eigenvalue, so a per-block relative threshold would keep
  // it and report spurious rank.
  std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> solved;
  solved.reserve(blocks.size());
  double family_top = 0.0;
  for (const Matrix& a : blocks) {
    solved.emplace_back(a);
    if (a.rows() > 0)
      family_top = std::max(family_top,
                            solved.back().eigenvalues()(a.rows() - 1));
  }
  const double cutoff = tol * family_top;

  SeedFactorization fact;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int d = static_cast<int>(blocks[b].rows());
    const auto& es = solved[b];
    // Eigenvalues ascending; keep the significant ones in descending order
    // so the leading factor row always carries the dominant direction.
    std::vector<int> kept;
    for (int j = d - 1; j >= 0; --j)
      if (es.eigenvalues()(j) > cutoff && es.eigenvalues()(j) > 0.0)
        kept.push_back(j);
    Matrix x(static_cast<int>(kept.size()), d);
    for (std::size_t row = 0; row < kept.size(); ++row) {
      Vector v = es.eigenvectors().col(kept[row]);
      // Phase convention: largest-magnitude entry real positive.
      Eigen::Index lead = 0;
      double best = -1.0;
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > best) {
          best = std::abs(v(i));
          lead = i;
        }
      if (best > 0) v *= std::conj(v(lead) / best);
      x.row(static_cast<int>(row)) =
          std::sqrt(es.eigenvalues()(kept[row])) * v.adjoint();
    }
    fact.ranks.push_back(static_cast<int>(kept.size()));
    fact.factors.push_back(std::move(x));
  }
  return fact;
}

SeedFactorization factor_seeds(const SeedBlock& seeds, double tol) {
  return factor_blocks(seeds.seeds, tol);
}

int ProjectedConstraintSet::full_dim() const {
  int total = 0;
  for (int r : ranks) total += r * r;
  return total;
}

ProjectedConstraintSet project_constraints(const SeedFactorization& fact,
                                           const ConstraintSet& constraints) {
  ProjectedConstraintSet fset;
  fset.ranks = fact.ranks;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != fact.factors.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "constraint block count does not match the factorization");
    ProjectedConstraintSet::Entry entry;
    entry.mu = c.mu;
    entry.k = c.k;
    entry.l = c.l;
    entry.blocks.reserve(fact.factors.size());
    for (std::size_t b = 0; b < fact.factors.size(); ++b)
      entry.blocks.push_back(fact.factors[b] * c.coeffs[b] *
                             fact.factors[b].adjoint());
    fset.entries.push_back(std::move(entry));
  }
  return fset;
}

ProjectedConstraintSet build_f_operators(const SeedFactorization& fact,
                                         const IsotypicDecomposition& dec) {
  return project_constraints(
      fact,
      normalization_constraints(dec, static_cast<int>(fact.factors.size())));
}

SpanResult spanning_test(const ProjectedConstraintSet& fset, double rank_tol) {
  SpanResult result;
  result.full_dim = fset.full_dim();
  if (result.full_dim == 0 || fset.entries.empty()) {
    result.span_dim = 0;
    result.is_extremal = result.full_dim == 0;
    return result;
  }
  const Matrix stacked = stack_entries(fset);
  Eigen::JacobiSVD<Matrix> svd(stacked);
  result.span_dim = detail::numerical_rank(
      svd.singularValues(), static_cast<int>(stacked.rows()),
      static_cast<int>(stacked.cols()), rank_tol);
  result.is_extremal = result.span_dim == result.full_dim;
  return result;
}

std::optional<std::vector<Matrix>> find_perturbation(
    const ProjectedConstraintSet& fset, double rank_tol) {
  const int full = fset.full_dim();
  if (full == 0 || fset.entries.empty()) return std::nullopt;
  const Matrix stacked = stack_entries(fset);
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const int rank = detail::numerical_rank(
      svd.singularValues(), static_cast<int>(stacked.rows()),
      static_cast<int>(stacked.cols()), rank_tol);
  if (rank >= full) return std::nullopt;

  // The least-excited right-singular direction lies (numerically) in the
  // orthogonal complement of the row span; devectorize it per block.
  const Vector null_vec = svd.matrixV().col(full - 1);
  std::vector<Matrix> raw(fset.ranks.size());
  int offset = 0;
  for (std::size_t b = 0; b < fset.ranks.size(); ++b) {
    const int r = fset.ranks[b];
    raw[b] = detail::unvec(null_vec.segment(offset, r * r), r, r);
    offset += r * r;
  }

  // The entry family is closed under adjoints (swapping k and l), so both the
  // Hermitian and anti-Hermitian parts of a null direction are null; keep the
  // larger to guarantee a nonzero Hermitian witness.
  std::vector<Matrix> herm(raw.size()), anti(raw.size());
  double herm_norm = 0.0, anti_norm = 0.0;
  for (std::size_t b = 0; b < raw.size(); ++b) {
    herm[b] = detail::hermitian_part(raw[b]);
    anti[b] = (raw[b] - raw[b].adjoint()) / Complex(0.0, 2.0);
    herm_norm += herm[b].squaredNorm();
    anti_norm += anti[b].squaredNorm();
  }
  std::vector<Matrix>& witness = herm_norm >= anti_norm ? herm : anti;
  const double norm = family_norm(witness);
  if (norm <= 0.0) return std::nullopt;
  for (Matrix& w : witness) w /= norm;
  fix_witness_sign(witness);
  return witness;
}

BlockSplit split_blocks(const std::vector<Matrix>& blocks,
                        const SeedFactorization& fact,
                        const ProjectedConstraintSet& fset,
                        const std::vector<Matrix>& witness, double tol) {
  if (witness.size() != fact.ranks.size())
    throw Error(ErrorCode::NotAWitness,
                "witness covers " + std::to_string(witness.size()) +
                    " blocks, expected " + std::to_string(fact.ranks.size()));
  const double norm = family_norm(witness);
  if (norm <= 0.0)
    throw Error(ErrorCode::NotAWitness, "witness is identically zero");
  double herm_defect = 0.0;
  for (std::size_t b = 0; b < witness.size(); ++b) {
    if (witness[b].rows() != fact.ranks[b] ||
        witness[b].cols() != fact.ranks[b])
      throw Error(ErrorCode::NotAWitness,
                  "witness block " + std::to_string(b) + " is not " +
                      std::to_string(fact.ranks[b]) + "x" +
                      std::to_string(fact.ranks[b]));
    herm_defect = std::max(herm_defect,
                           (witness[b] - witness[b].adjoint()).norm());
  }
  if (herm_defect > kWitnessTol * norm)
    throw Error(ErrorCode::NotAWitness,
                "witness is not Hermitian (defect " +
                    std::to_string(herm_defect) + ")");
  const double residual = witness_residual(fset, witness);
  double coeff_scale = 1.0;
  for (const auto& entry : fset.entries)
    coeff_scale = std::max(coeff_scale, family_norm(entry.blocks));
  if (residual > std::max(tol, kWitnessTol) * norm * coeff_scale)
    throw Error(ErrorCode::NotAWitness,
                "witness leaves constraint residual " +
                    std::to_string(residual));

  // Positivity of A_b + t X_b^dag Q_b X_b is positivity of 1 + t Q_b on the
  // factor range, so the segment ends where 1 + t lambda first hits zero.
  double lambda_min = 0.0, lambda_max = 0.0, lambda_peak = 0.0;
  for (std::size_t b = 0; b < witness.size(); ++b) {
    if (witness[b].size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(witness[b]);
    lambda_min = std::min(lambda_min, es.eigenvalues().minCoeff());
    lambda_max = std::max(lambda_max, es.eigenvalues().maxCoeff());
    lambda_peak = std::max(
        {lambda_peak, std::abs(es.eigenvalues().minCoeff()),
         std::abs(es.eigenvalues().maxCoeff())});
  }
  const double boundary_tol = 1e-10 * std::max(1.0, lambda_peak);
  if (lambda_min >= -boundary_tol || lambda_max <= boundary_tol)
    throw Error(ErrorCode::NotAWitness,
                "witness is one-sided; a valid perturbation direction has "
                "eigenvalues of both signs");

  BlockSplit split;
  split.t_plus = -1.0 / lambda_min;
  split.t_minus = -1.0 / lambda_max;
  split.weight_plus = -split.t_minus / (split.t_plus - split.t_minus);
  split.weight_minus = split.t_plus / (split.t_plus - split.t_minus);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix push =
        fact.factors[b].adjoint() * witness[b] * fact.factors[b];
    split.plus.push_back(detail::hermitian_part(blocks[b] +
                                                split.t_plus * push));
    split.minus.push_back(detail::hermitian_part(blocks[b] +
                                                 split.t_minus * push));
  }
  return split;
}

ConvexSplit convex_split(const SeedBlock& seeds, const SeedFactorization& fact,
                         const ProjectedConstraintSet& fset,
                         const std::vector<Matrix>& witness, double tol) {
  BlockSplit split = split_blocks(seeds.seeds, fact, fset, witness, tol);
  ConvexSplit out;
  out.t_plus = split.t_plus;
  out.t_minus = split.t_minus;
  out.weight_plus = split.weight_plus;
  out.weight_minus = split.weight_minus;
  std::vector<std::string> labels = seeds.labels;
  out.a_plus = SeedBlock{seeds.rep, std::move(split.plus), labels};
  out.a_minus = SeedBlock{seeds.rep, std::move(split.minus), std::move(labels)};
  return out;
}

RankBound rank_bound_check_blocks(const SeedFactorization& fact,
                                  const ConstraintSet& constraints) {
  RankBound bound;
  bound.lhs = fact.total_rank_square();
  bound.rhs = static_cast<int>(constraints.size());
  bound.satisfied = bound.lhs <= bound.rhs;
  return bound;
}

RankBound rank_bound_check(const SeedFactorization& fact,
                           const IsotypicDecomposition& dec) {
  RankBound bound;
  bound.lhs = fact.total_rank_square();
  bound.rhs = dec.commutant_dim();
  bound.satisfied = bound.lhs <= bound.rhs;
  return bound;
}

bool support_constrained_uniqueness(const std::vector<Matrix>& blocks,
                                    const ConstraintSet& constraints,
                                    double rank_tol) {
  // Real parametrization of every Hermitian deviation supported on the
  // supports of the blocks, against the raw (unprojected) constraints. The
  // point is extremal iff the homogeneous system pins the deviation to zero.
  struct SupportBasis {
    std::vector<Matrix> elements;  // HS-orthonormal Hermitian matrices
  };
  std::vector<SupportBasis> spaces;
  int param_count = 0;
  for (const Matrix& a : blocks) {
    const int d = static_cast<int>(a.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const double top = es.eigenvalues()(d - 1);
    const double cutoff = top > 0 ? rank_tol * top : 0.0;
    std::vector<Vector> support;
    for (int j = d - 1; j >= 0; --j)
      if (es.eigenvalues()(j) > cutoff && es.eigenvalues()(j) > 0.0)
        support.push_back(es.eigenvectors().col(j));
    SupportBasis basis;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t p = 0; p < support.size(); ++p) {
      basis.elements.push_back(support[p] * support[p].adjoint());
      for (std::size_t q = p + 1; q < support.size(); ++q) {
        const Matrix cross = support[p] * support[q].adjoint();
        basis.elements.push_back(inv_sqrt2 * (cross + cross.adjoint()));
        basis.elements.push_back(Complex(0.0, 1.0) * inv_sqrt2 *
                                 (cross - cross.adjoint()));
      }
    }
    param_count += static_cast<int>(basis.elements.size());
    spaces.push_back(std::move(basis));
  }
  if (param_count == 0) return true;

  Eigen::MatrixXd system(2 * constraints.size(), param_count);
  for (std::size_t e = 0; e < constraints.size(); ++e) {
    int col = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (const Matrix& basis_el : spaces[b].elements) {
        const Complex overlap = (constraints[e].coeffs[b] * basis_el).trace();
        system(static_cast<int>(2 * e), col) = overlap.real();
        system(static_cast<int>(2 * e + 1), col) = overlap.imag();
        ++col;
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
  const int rank = detail::numerical_rank(
      svd.singularValues(), static_cast<int>(system.rows()),
      static_cast<int>(system.cols()), rank_tol);
  return rank == param_count;
}

bool extremality_oracle(const SeedBlock& seeds,
                        const IsotypicDecomposition& dec, double rank_tol) {
  return support_constrained_uniqueness(
      seeds.seeds, normalization_constraints(dec, seeds.count()), rank_tol);
}

ExtremalityReport analyze_blocks(const std::vector<Matrix>& blocks,
                                 const ConstraintSet& constraints,
                                 double rank_tol) {
  ExtremalityReport report;
  const SeedFactorization fact = factor_blocks(blocks, rank_tol);
  const ProjectedConstraintSet fset = project_constraints(fact, constraints);
  const SpanResult span = spanning_test(fset, rank_tol);
  const RankBound bound = rank_bound_check_blocks(fact, constraints);
  report.is_extremal = span.is_extremal;
  report.span_dim = span.span_dim;
  report.full_dim = span.full_dim;
  report.rank_bound_rhs = bound.rhs;
  report.rank_bound_satisfied = bound.satisfied;
  report.ranks = fact.ranks;
  if (!span.is_extremal) {
    report.witness = find_perturbation(fset, rank_tol);
    if (report.witness) {
      report.witness_residual = witness_residual(fset, *report.witness);
      std::vector<Matrix> pushed;
      pushed.reserve(blocks.size());
      for (std::size_t b = 0; b < blocks.size(); ++b)
        pushed.push_back(fact.factors[b].adjoint() * (*report.witness)[b] *
                         fact.factors[b]);
      report.witness_perturbation = std::move(pushed);
    }
  }
  return report;
}

ExtremalityReport analyze_extremality(const SeedBlock& seeds,
                                      const IsotypicDecomposition& dec,
                                      double rank_tol) {
  return analyze_blocks(seeds.seeds,
                        normalization_constraints(dec, seeds.count()),
                        rank_tol);
}

namespace {

void split_recursively(SplitNode& node, const ConstraintSet& constraints,
                       double rank_tol, int depth, int max_depth) {
  const SeedFactorization fact = factor_blocks(node.blocks, rank_tol);
  const ProjectedConstraintSet fset = project_constraints(fact, constraints);
  const SpanResult span = spanning_test(fset, rank_tol);
  if (span.is_extremal) {
    node.extremal = true;
    return;
  }
  if (depth >= max_depth)
    throw std::runtime_error(
        "split recursion exceeded the rank-decrease depth bound; the "
        "instance is numerically degenerate");
  const auto witness = find_perturbation(fset, rank_tol);
  if (!witness)
    throw std::runtime_error(
        "spanning test reported a deficiency but no witness was found");
  BlockSplit split =
      split_blocks(node.blocks, fact, fset, *witness, kWitnessTol);
  node.t_plus = split.t_plus;
  node.t_minus = split.t_minus;
  node.plus = std::make_unique<SplitNode>();
  node.plus->blocks = std::move(split.plus);
  node.plus->weight = node.weight * split.weight_plus;
  node.minus = std::make_unique<SplitNode>();
  node.minus->blocks = std::move(split.minus);
  node.minus->weight = node.weight * split.weight_minus;
  split_recursively(*node.plus, constraints, rank_tol, depth + 1, max_depth);
  split_recursively(*node.minus, constraints, rank_tol, depth + 1, max_depth);
}

}  // namespace

SplitNode decompose_into_extremals(const std::vector<Matrix>& blocks,
                                   const ConstraintSet& constraints,
                                   double rank_tol) {
  SplitNode root;
  root.blocks = blocks;
  root.weight = 1.0;
  // Every split strictly lowers the total rank, so the depth can never pass
  // the root's total rank.
  const int max_depth = factor_blocks(blocks, rank_tol).total_rank() + 2;
  split_recursively(root, constraints, rank_tol, 0, max_depth);
  return root;
}

SplitNode extremal_decomposition(const SeedBlock& seeds,
                                 const IsotypicDecomposition& dec,
                                 double rank_tol) {
  return decompose_into_extremals(
      seeds.seeds, normalization_constraints(dec, seeds.count()), rank_tol);
}

std::vector<const SplitNode*> extremal_leaves(const SplitNode& root) {
  std::vector<const SplitNode*> leaves;
  std::vector<const SplitNode*> stack{&root};
  while (!stack.empty()) {
    const SplitNode* node = stack.back();
    stack.pop_back();
    if (node->extremal || (!node->plus && !node->minus)) {
      leaves.push_back(node);
      continue;
    }
    // Depth-first with plus before minus: push minus first.
    if (node->minus) stack.push_back(node->minus.get());
    if (node->plus) stack.push_back(node->plus.get());
  }
  return leaves;
}

}  // namespace covpovm
