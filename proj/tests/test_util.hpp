#pragma once

// Shared fixtures: deterministic random data, independently constructed
// reference groups/reps, and brute-force oracles the library must agree with.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <covpovm/covpovm.hpp>

namespace testutil {

using covpovm::Complex;
using covpovm::Matrix;
using covpovm::Vector;

// ---------------------------------------------------------------------------
// Deterministic RNG (kept independent of the library internals so test data
// never shifts when the library's generator changes).
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // (0, 1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex cnormal() { return {normal(), normal()}; }

  Matrix gaussian(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cnormal();
    return m;
  }

  /// Random PSD matrix of the given rank (V V† with V of shape d×rank).
  Matrix psd(int dim, int rank) {
    if (rank == 0) return Matrix::Zero(dim, dim);
    const Matrix v = gaussian(dim, rank);
    return v * v.adjoint();
  }

  Matrix hermitian(int dim) {
    const Matrix g = gaussian(dim, dim);
    return (g + g.adjoint()) / 2.0;
  }

  Matrix unitary(int dim) {
    const Matrix g = gaussian(dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // Fix the phase freedom so the result is a deterministic function of g.
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
      const Complex rjj = r(j, j);
      if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
  }

  Vector unit_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cnormal();
    return v / v.norm();
  }

  int index(int n) { return static_cast<int>(next_u64() % n); }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Reference groups built by an independent method (explicit permutation
// composition rather than the library's constructors).
// ---------------------------------------------------------------------------

/// S_3 as permutations of {0,1,2} in lexicographic order, composed directly.
inline std::vector<std::array<int, 3>> s3_permutations() {
  return {{{0, 1, 2}},
          {{0, 2, 1}},
          {{1, 0, 2}},
          {{1, 2, 0}},
          {{2, 0, 1}},
          {{2, 1, 0}}};
}

inline std::vector<std::vector<int>> s3_table() {
  const auto perms = s3_permutations();
  auto find = [&](const std::array<int, 3>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (perms[i] == p) return static_cast<int>(i);
    throw std::logic_error("permutation lookup failed");
  };
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      table[a][b] = find(c);
    }
  return table;
}

inline covpovm::GroupPtr s3_group() {
  return covpovm::validate_group(s3_table());
}

/// Natural 3-dimensional permutation representation of S_3
/// (decomposes into the trivial and the 2-dimensional standard irrep).
inline covpovm::RepPtr s3_perm_rep() {
  const auto perms = s3_permutations();
  auto group = s3_group();
  std::vector<Matrix> mats;
  for (const auto& p : perms) {
    Matrix m = Matrix::Zero(3, 3);
    for (int x = 0; x < 3; ++x) m(p[x], x) = 1.0;
    mats.push_back(m);
  }
  return covpovm::validate_rep(group, mats);
}

/// Z_2 represented by {identity, diag(1, -1)}.
inline covpovm::RepPtr z2_diag_rep() {
  auto group = covpovm::cyclic_group(2);
  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = -1.0;
  return covpovm::validate_rep(group, {Matrix::Identity(2, 2), z});
}

/// Direct sum of the given rep with itself (doubles every multiplicity).
inline covpovm::RepPtr doubled_rep(const covpovm::RepPtr& rep) {
  const int d = rep->dim;
  std::vector<Matrix> mats;
  for (const Matrix& u : rep->matrices) {
    Matrix big = Matrix::Zero(2 * d, 2 * d);
    big.topLeftCorner(d, d) = u;
    big.bottomRightCorner(d, d) = u;
    mats.push_back(big);
  }
  return covpovm::validate_rep(rep->group, mats);
}

/// Cyclic group Z_n represented by the diagonal characters listed in
/// `characters` (entry c means g -> exp(2*pi*i*c*g/n)), conjugated by a
/// fixed unitary so the isotypic structure is not axis-aligned.
inline covpovm::RepPtr cyclic_character_rep(int n,
                                            const std::vector<int>& characters,
                                            std::uint64_t conj_seed) {
  auto group = covpovm::cyclic_group(n);
  const int d = static_cast<int>(characters.size());
  Rng rng(conj_seed);
  const Matrix w = rng.unitary(d);
  std::vector<Matrix> mats;
  for (int g = 0; g < n; ++g) {
    Matrix diag = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      const int e = ((characters[j] * g) % n + n) % n;
      diag(j, j) = std::exp(Complex(0.0, 2.0 * std::numbers::pi * e / n));
    }
    mats.push_back(w * diag * w.adjoint());
  }
  return covpovm::validate_rep(group, mats);
}

// ---------------------------------------------------------------------------
// Brute-force oracles.
// ---------------------------------------------------------------------------

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Commutant dimension by stacking the linear system [O, U_g] = 0 over all g
/// and counting the null space of the full-pivot LU — no twirling involved.
inline int brute_commutant_dim(const covpovm::RepPtr& rep) {
  const int d = rep->dim;
  const Matrix eye = Matrix::Identity(d, d);
  Matrix stacked(rep->order() * d * d, d * d);
  for (int g = 0; g < rep->order(); ++g) {
    const Matrix& u = rep->matrices[g];
    // vec(U O - O U) = (I ⊗ U - Uᵀ ⊗ I) vec(O), column-major vec.
    stacked.middleRows(g * d * d, d * d) =
        kron(eye, u) - kron(u.transpose(), eye);
  }
  // Absolute-aware cutoff: the representation matrices are unitary, so any
  // genuine non-commutation contributes rows of order one. A matrix whose
  // singular values are all roundoff-sized must count as rank zero, which a
  // purely relative threshold would miss.
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const double cutoff =
      1e-8 * std::max(1.0, svd.singularValues().size() > 0
                               ? svd.singularValues()(0)
                               : 0.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++rank;
  return d * d - rank;
}

/// Span dimension of a family of matrices (as vectors) via the rank of their
/// Gram matrix — an independent cross-check of SVD-based span counting.
inline int gram_span_dim(const std::vector<Matrix>& family, double rel_tol) {
  const int n = static_cast<int>(family.size());
  if (n == 0) return 0;
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = (family[i].adjoint() * family[j]).trace();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double top = es.eigenvalues()(n - 1);
  if (top <= 0) return 0;
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > rel_tol * top) ++rank;
  return rank;
}

// ---------------------------------------------------------------------------
// Random members of the normalized convex set.
// ---------------------------------------------------------------------------

/// Random seeds with the requested ranks, normalized exactly: starting from
/// A_i = V_i V_i†, the sum N = Σ_i twirl(A_i) lies in the commutant, so
/// conjugating every seed by N^{-1/2} preserves ranks and gives
/// Σ_i twirl(N^{-1/2} A_i N^{-1/2}) = identity.
inline std::vector<Matrix> random_member(const covpovm::RepPtr& rep,
                                         const std::vector<int>& ranks,
                                         Rng& rng) {
  const int d = rep->dim;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Matrix> seeds;
    for (int r : ranks) seeds.push_back(rng.psd(d, r));
    Matrix n = Matrix::Zero(d, d);
    for (const Matrix& a : seeds) n += covpovm::twirl(*rep, a);
    Eigen::SelfAdjointEigenSolver<Matrix> es((n + n.adjoint()) / 2.0);
    if (es.eigenvalues()(0) < 0.05 * es.eigenvalues()(d - 1)) continue;
    Matrix inv_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
        es.eigenvectors().adjoint();
    for (Matrix& a : seeds) {
      a = inv_sqrt * a * inv_sqrt;
      a = (a + a.adjoint()) / 2.0;
    }
    return seeds;
  }
  throw std::runtime_error("random_member: could not find a well-conditioned "
                           "normalization after 64 attempts");
}

/// Instance zoo for the agreement suites: reps with d ≤ 3 and |G| ≤ 8
/// covering ordinary/projective, abelian/non-abelian, and multiplicities > 1.
struct ZooEntry {
  std::string name;
  covpovm::RepPtr rep;
  // Largest isotypic multiplicity. Random seed families need total rank at
  // least this large, or the covariant normalization is singular and no
  // member exists at those ranks.
  int max_mult = 1;
};

inline std::vector<ZooEntry> small_zoo() {
  std::vector<ZooEntry> zoo;
  zoo.push_back({"z2-diag", z2_diag_rep(), 1});
  zoo.push_back({"weyl-2", covpovm::weyl_heisenberg_rep(2), 1});
  zoo.push_back({"s3-perm", s3_perm_rep(), 1});
  zoo.push_back({"z3-chars-012", cyclic_character_rep(3, {0, 1, 2}, 11), 1});
  zoo.push_back({"z4-chars-013", cyclic_character_rep(4, {0, 1, 3}, 12), 1});
  zoo.push_back({"z5-chars-114", cyclic_character_rep(5, {1, 1, 4}, 13), 2});
  zoo.push_back({"z6-chars-025", cyclic_character_rep(6, {0, 2, 5}, 14), 1});
  zoo.push_back({"z8-chars-05", cyclic_character_rep(8, {0, 5}, 15), 1});
  zoo.push_back({"z2-doubled-char", cyclic_character_rep(2, {1, 1}, 16), 2});
  return zoo;
}

// ---------------------------------------------------------------------------
// Small assertions helpers.
// ---------------------------------------------------------------------------

inline double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

inline bool near(const Matrix& a, const Matrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && dist(a, b) <= tol;
}

inline Matrix sum_elements(const std::vector<Matrix>& elements) {
  if (elements.empty()) return Matrix();
  Matrix total = Matrix::Zero(elements[0].rows(), elements[0].cols());
  for (const Matrix& e : elements) total += e;
  return total;
}

inline Matrix sum_elements(const std::vector<std::vector<Matrix>>& table) {
  Matrix total;
  for (const auto& row : table)
    for (const Matrix& e : row) {
      if (total.size() == 0) total = Matrix::Zero(e.rows(), e.cols());
      total += e;
    }
  return total;
}

}  // namespace testutil
