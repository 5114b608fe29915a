#include "internal.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace covpovm::detail {

std::uint64_t Rng::next_u64() {
  // splitmix64: tiny, seed-stable, and plenty for probe generation.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Matrix Rng::gaussian(int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
  return m;
}

Matrix Rng::hermitian_gaussian(int n) {
  Matrix g = gaussian(n, n);
  return 0.5 * (g + g.adjoint());
}

Vector Rng::unit_vector(int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_normal();
  const double norm = v.norm();
  return norm > 0 ? Vector(v / norm) : unit_vector(dim);
}

Matrix pairwise_sum(std::vector<Matrix>& terms) {
  const std::size_t n = terms.size();
  if (n == 0) return Matrix();
  for (std::size_t gap = 1; gap < n; gap *= 2)
    for (std::size_t i = 0; i + gap < n; i += 2 * gap) terms[i] += terms[i + gap];
  return std::move(terms[0]);
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int numerical_rank(const Eigen::VectorXd& singular_values, int rows, int cols,
                   double rel_tol) {
  if (singular_values.size() == 0) return 0;
  const double cutoff =
      std::max(rows, cols) * singular_values(0) * rel_tol;
  int rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
    if (singular_values(i) > cutoff) ++rank;
  return rank;
}

void fix_column_phases(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index lead = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > best) {
        best = a;
        lead = i;
      }
    }
    if (best <= 0) continue;
    const Complex phase = m(lead, j) / best;
    m.col(j) *= std::conj(phase);
  }
}

int max_threads() {
  static const int cached = [] {
    const char* env = std::getenv("COVPOVM_THREADS");
    if (!env) return 1;
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed < 1) return 1;
    return static_cast<int>(std::min(parsed, 64l));
  }();
  return cached;
}

void parallel_fill(int n, const std::function<void(int)>& fill) {
  const int workers = std::min(max_threads(), n);
  if (workers <= 1) {
    for (int t = 0; t < n; ++t) fill(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int t = w; t < n; t += workers) fill(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace covpovm::detail
