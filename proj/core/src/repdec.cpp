#include "covpovm/repdec.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "covpovm/error.hpp"
#include "internal.hpp"

namespace covpovm {

namespace {

Matrix twirl_terms(const ProjectiveRep& rep, const std::vector<int>& elements,
                   const Matrix& x) {
  std::vector<Matrix> terms(elements.size());
  detail::parallel_fill(static_cast<int>(elements.size()), [&](int t) {
    const Matrix& u = rep.matrices[elements[t]];
    terms[t] = u * x * u.adjoint();
  });
  Matrix sum = detail::pairwise_sum(terms);
  return sum / static_cast<double>(elements.size());
}

/// Eigenvalue clusters of an ascending spectrum, split at gaps larger than
/// kClusterRelTol times the spectral diameter.
std::vector<std::pair<int, int>> cluster_spectrum(const Eigen::VectorXd& ev) {
  const int n = static_cast<int>(ev.size());
  std::vector<std::pair<int, int>> clusters;
  const double diameter = ev(n - 1) - ev(0);
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
  if (diameter <= 1e-12 * std::max(1.0, scale)) {
    clusters.emplace_back(0, n);
    return clusters;
  }
  const double gap_bound = kClusterRelTol * diameter;
  int begin = 0;
  for (int i = 1; i < n; ++i) {
    if (ev(i) - ev(i - 1) > gap_bound) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  clusters.emplace_back(begin, n);
  return clusters;
}

struct DecomposeAttempt {
  IsotypicDecomposition result;
  bool ok = false;
  std::string why;
};

DecomposeAttempt try_decompose(RepPtr rep, double tol, std::uint64_t seed) {
  DecomposeAttempt attempt;
  const int d = rep->dim;
  const int n = rep->order();
  detail::Rng rng(seed * 0x100000001b3ull + 0xcbf29ce484222325ull);

  const Matrix probe = twirl(*rep, rng.hermitian_gaussian(d));
  Eigen::SelfAdjointEigenSolver<Matrix> es(probe);
  const auto clusters = cluster_spectrum(es.eigenvalues());

  // Restricted characters per cluster. A cluster's column span is invariant
  // (it is a sum of eigenspaces of a commuting operator), so the restriction
  // is itself a projective rep and character inner products decide both
  // irreducibility and equivalence.
  const int nc = static_cast<int>(clusters.size());
  std::vector<Matrix> bases(nc);
  std::vector<Vector> chars(nc, Vector(n));
  for (int c = 0; c < nc; ++c) {
    const auto [begin, end] = clusters[c];
    bases[c] = es.eigenvectors().middleCols(begin, end - begin);
    for (int g = 0; g < n; ++g)
      chars[c](g) = (bases[c].adjoint() * rep->matrices[g] * bases[c]).trace();
  }
  auto char_overlap = [&](int a, int b) {
    Complex s = 0;
    for (int g = 0; g < n; ++g) s += chars[a](g) * std::conj(chars[b](g));
    return s / static_cast<double>(n);
  };
  for (int c = 0; c < nc; ++c) {
    const Complex s = char_overlap(c, c);
    if (std::abs(s - 1.0) > 0.1) {
      attempt.why = "probe eigenvalue cluster " + std::to_string(c) +
                    " is not a single irreducible block (self-overlap " +
                    std::to_string(std::abs(s)) + ")";
      return attempt;
    }
  }

  // Group equivalent clusters into classes, in order of first appearance
  // along the ascending spectrum.
  std::vector<std::vector<int>> classes;
  for (int c = 0; c < nc; ++c) {
    bool placed = false;
    for (auto& cls : classes) {
      const int c0 = cls.front();
      if (bases[c0].cols() != bases[c].cols()) continue;
      const double s = std::abs(char_overlap(c, c0));
      if (s > 0.5 && std::abs(s - 1.0) > 0.1) {
        attempt.why = "ambiguous equivalence overlap " + std::to_string(s);
        return attempt;
      }
      if (std::abs(s - 1.0) <= 0.1) {
        cls.push_back(c);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({c});
  }

  // Align the multiplicity blocks of each class: block 0 is canonical, and
  // block k is rotated by the unitary polar factor of the twirled cross-block
  // map M = (1/|G|) sum_g R_k(g) C R_0(g)^dag, which intertwines the two
  // restrictions for any C (generic C makes it invertible). For irreducible
  // restrictions such an intertwiner is a scalar times a unitary, so the
  // polar factor is exactly the change of basis that makes the restricted
  // matrices match.
  IsotypicDecomposition dec;
  dec.rep = rep;
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto& cls = classes[ci];
    const int dim_mu = static_cast<int>(bases[cls[0]].cols());
    const int mult = static_cast<int>(cls.size());

    std::vector<std::vector<Matrix>> restricted(mult);
    for (int k = 0; k < mult; ++k) {
      restricted[k].reserve(n);
      for (int g = 0; g < n; ++g)
        restricted[k].push_back(bases[cls[k]].adjoint() * rep->matrices[g] *
                                bases[cls[k]]);
    }

    IsotypicComponent comp;
    comp.label = static_cast<int>(ci);
    comp.irrep_dim = dim_mu;
    comp.multiplicity = mult;
    comp.basis = Matrix(d, dim_mu * mult);
    comp.basis.leftCols(dim_mu) = bases[cls[0]];

    for (int k = 1; k < mult; ++k) {
      Matrix m_cross;
      bool found = false;
      for (int trial = 0; trial < 4 && !found; ++trial) {
        const Matrix c = rng.gaussian(dim_mu, dim_mu);
        std::vector<Matrix> terms(n);
        for (int g = 0; g < n; ++g)
          terms[g] = restricted[k][g] * c * restricted[0][g].adjoint();
        m_cross = detail::pairwise_sum(terms) / static_cast<double>(n);
        found = m_cross.norm() > 1e-6 * std::sqrt(static_cast<double>(dim_mu));
      }
      if (!found) {
        attempt.why = "cross-block intertwiner vanished for class " +
                      std::to_string(ci);
        return attempt;
      }
      Eigen::JacobiSVD<Matrix> svd(m_cross,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) < 0.5 * sv(0)) {
        // A scalar-times-unitary intertwiner has a flat singular spectrum;
        // anything else means the equivalence detection was fooled.
        attempt.why = "cross-block intertwiner is not proportional to a "
                      "unitary for class " + std::to_string(ci);
        return attempt;
      }
      Matrix align = svd.matrixU() * svd.matrixV().adjoint();
      // Fix the global phase: largest-magnitude entry (first on ties) made
      // real positive, so the aligned basis is reproducible.
      {
        Eigen::Index bi = 0, bj = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < align.rows(); ++i)
          for (Eigen::Index j = 0; j < align.cols(); ++j)
            if (std::abs(align(i, j)) > best) {
              best = std::abs(align(i, j));
              bi = i;
              bj = j;
            }
        align *= std::conj(align(bi, bj) / best);
      }
      const Matrix aligned = bases[cls[k]] * align;
      // The aligned copy must now carry numerically identical matrices.
      double worst = 0.0;
      for (int g = 0; g < n; ++g) {
        const Matrix r = aligned.adjoint() * rep->matrices[g] * aligned;
        worst = std::max(worst, (r - restricted[0][g]).norm());
      }
      if (worst > std::max(1e-8, tol * d)) {
        attempt.why = "block alignment residual " + std::to_string(worst) +
                      " for class " + std::to_string(ci);
        return attempt;
      }
      comp.basis.middleCols(k * dim_mu, dim_mu) = aligned;
    }

    dec.components.push_back(std::move(comp));
  }

  // Intertwiners T_{kl} = B_k B_l^dag over the aligned bases.
  dec.intertwiners.resize(dec.components.size());
  for (std::size_t mu = 0; mu < dec.components.size(); ++mu) {
    const auto& comp = dec.components[mu];
    auto& slots = dec.intertwiners[mu];
    slots.reserve(static_cast<std::size_t>(comp.multiplicity) *
                  comp.multiplicity);
    for (int k = 0; k < comp.multiplicity; ++k)
      for (int l = 0; l < comp.multiplicity; ++l)
        slots.push_back(comp.block_basis(k) * comp.block_basis(l).adjoint());
  }

  attempt.result = std::move(dec);
  attempt.ok = true;
  return attempt;
}

}  // namespace

Matrix twirl(const ProjectiveRep& rep, const Matrix& x) {
  if (x.rows() != rep.dim || x.cols() != rep.dim)
    throw Error(ErrorCode::DimensionMismatch,
                "operator is not " + std::to_string(rep.dim) + "x" +
                    std::to_string(rep.dim));
  std::vector<int> all(rep.order());
  for (int g = 0; g < rep.order(); ++g) all[g] = g;
  return twirl_terms(rep, all, x);
}

Matrix twirl_over(const ProjectiveRep& rep, const std::vector<int>& elements,
                  const Matrix& x) {
  if (elements.empty())
    throw std::invalid_argument("twirl_over needs at least one element");
  if (x.rows() != rep.dim || x.cols() != rep.dim)
    throw Error(ErrorCode::DimensionMismatch,
                "operator is not " + std::to_string(rep.dim) + "x" +
                    std::to_string(rep.dim));
  return twirl_terms(rep, elements, x);
}

std::vector<Matrix> commutant_basis(const ProjectiveRep& rep, double tol) {
  const int d = rep.dim;
  const int n = rep.order();
  const int dd = d * d;

  // Stacking the commutator equations [O, U_g] = 0 and forming the normal
  // matrix of the system gives sum_g (2*1 - K_g - K_g^dag) with
  // K_g = conj(U_g) ⊗ U_g (column-major vec convention). Its null space is
  // exactly the vectorized commutant, and because the averaged K is an
  // orthogonal projection the nonzero eigenvalues sit at 2|G| — the null
  // space is separated by a huge gap.
  Matrix normal = 2.0 * n * Matrix::Identity(dd, dd);
  for (int g = 0; g < n; ++g) {
    const Matrix k = detail::kron(rep.matrices[g].conjugate(), rep.matrices[g]);
    normal -= k + k.adjoint();
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(normal);
  const double cutoff = std::max(1.0, es.eigenvalues()(dd - 1)) * tol;
  std::vector<Matrix> basis;
  for (int j = 0; j < dd; ++j) {
    if (es.eigenvalues()(j) <= cutoff)
      basis.push_back(detail::unvec(es.eigenvectors().col(j), d, d));
  }
  return basis;
}

Matrix IsotypicComponent::block_basis(int k) const {
  return basis.middleCols(k * irrep_dim, irrep_dim);
}

const Matrix& IsotypicDecomposition::intertwiner(int mu, int k, int l) const {
  const int m = components[mu].multiplicity;
  return intertwiners[mu][k * m + l];
}

int IsotypicDecomposition::dim() const { return rep ? rep->dim : 0; }

int IsotypicDecomposition::commutant_dim() const {
  int total = 0;
  for (const auto& comp : components)
    total += comp.multiplicity * comp.multiplicity;
  return total;
}

IsotypicDecomposition decompose(RepPtr rep, double tol,
                                std::uint64_t probe_seed) {
  if (!rep) throw std::invalid_argument("decompose needs a representation");
  constexpr int kMaxAttempts = 8;
  std::string last_why = "no attempt ran";
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    DecomposeAttempt result = try_decompose(rep, tol, probe_seed + attempt);
    if (result.ok) return std::move(result.result);
    last_why = std::move(result.why);
  }
  throw Error(ErrorCode::DegenerateProbe,
              "no probe separated the invariant blocks after " +
                  std::to_string(kMaxAttempts) + " attempts; last failure: " +
                  last_why);
}

ReconstructionReport verify_reconstruction(const IsotypicDecomposition& dec,
                                           int trials, double tol,
                                           std::uint64_t seed) {
  if (!dec.rep) throw std::invalid_argument("decomposition has no rep");
  const int d = dec.dim();
  detail::Rng rng(seed ^ 0x5bf03635ull);
  ReconstructionReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Matrix averaged = twirl(*dec.rep, rng.hermitian_gaussian(d));
    Matrix rebuilt = Matrix::Zero(d, d);
    for (int mu = 0; mu < dec.class_count(); ++mu) {
      const auto& comp = dec.components[mu];
      for (int k = 0; k < comp.multiplicity; ++k)
        for (int l = 0; l < comp.multiplicity; ++l)
          rebuilt += (dec.intertwiner(mu, l, k) * averaged).trace() /
                     static_cast<double>(comp.irrep_dim) *
                     dec.intertwiner(mu, k, l);
    }
    report.max_residual =
        std::max(report.max_residual, (averaged - rebuilt).norm());
  }
  report.ok = report.max_residual <= tol * d;
  if (!report.ok)
    throw Error(ErrorCode::ReconstructionFailure,
                "commutant reconstruction residual " +
                    std::to_string(report.max_residual) + " exceeds " +
                    std::to_string(tol * d));
  return report;
}

}  // namespace covpovm
