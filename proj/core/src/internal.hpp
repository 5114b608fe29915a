// Private numerics helpers shared by the library sources. Not installed.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "covpovm/types.hpp"

namespace covpovm::detail {

/// Deterministic Gaussian source. Box-Muller over explicit 53-bit uniforms so
/// the stream depends only on the seed, not on the standard library's
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64();
  double uniform();        // (0, 1)
  double normal();
  Complex complex_normal();

  Matrix gaussian(int rows, int cols);
  Matrix hermitian_gaussian(int n);
  Vector unit_vector(int dim);

 private:
  std::uint64_t state_;
};

/// Sums terms by a fixed pairwise tree (stride doubling), so the floating
/// point result is independent of how the terms were produced — in particular
/// of the worker count that filled them. Consumes the input.
Matrix pairwise_sum(std::vector<Matrix>& terms);

/// Column-major vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

Matrix hermitian_part(const Matrix& m);

/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Shared rank semantics: sigma significant iff
/// sigma > max(rows, cols) * sigma_max * rel_tol.
int numerical_rank(const Eigen::VectorXd& singular_values, int rows, int cols,
                   double rel_tol);

/// Multiplies each column by a unit phase making its largest-magnitude entry
/// (first one on ties) real positive. In-place.
void fix_column_phases(Matrix& m);

/// Worker count from COVPOVM_THREADS (default 1, clamped to [1, 64]); read
/// once per process.
int max_threads();

/// Calls fill(t) for t in [0, n) using up to max_threads() workers. The
/// assignment of indices to workers never affects results because callers
/// write to disjoint slots and reduce deterministically afterwards.
void parallel_fill(int n, const std::function<void(int)>& fill);

}  // namespace covpovm::detail
