// Microbenchmarks for the hot paths: isotypic decomposition, twirling,
// commutant reconstruction, and the extremality spanning test.

#include <benchmark/benchmark.h>

#include <covpovm/covpovm.hpp>

namespace {

using namespace covpovm;

/// Deterministic pseudo-random Hermitian matrix (no <random> so results are
/// stable across standard libraries).
Matrix test_hermitian(int dim, std::uint64_t seed) {
  std::uint64_t state = seed;
  auto next = [&]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53 - 0.5;
  };
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(next(), next());
  return ((m + m.adjoint()) / 2.0).eval();
}

/// Normalized single-orbit seed for an irreducible rep: d |psi><psi|.
Matrix rank_one_seed(int d, std::uint64_t seed) {
  const Matrix h = test_hermitian(d, seed);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector psi = es.eigenvectors().col(0);
  return static_cast<double>(d) * psi * psi.adjoint();
}

void BM_Decompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto rep = weyl_heisenberg_rep(d);
  for (auto _ : state) {
    auto dec = decompose(rep);
    benchmark::DoNotOptimize(dec.commutant_dim());
  }
}
BENCHMARK(BM_Decompose)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_DecomposeRegular(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rep = regular_rep(cyclic_group(n));
  for (auto _ : state) {
    auto dec = decompose(rep);
    benchmark::DoNotOptimize(dec.commutant_dim());
  }
}
BENCHMARK(BM_DecomposeRegular)->Arg(4)->Arg(8)->Arg(12);

void BM_Twirl(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto rep = weyl_heisenberg_rep(d);
  const Matrix x = test_hermitian(d, 42);
  for (auto _ : state) {
    Matrix t = twirl(*rep, x);
    benchmark::DoNotOptimize(t.norm());
  }
}
BENCHMARK(BM_Twirl)->Arg(2)->Arg(4)->Arg(8);

void BM_CommutantBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rep = regular_rep(cyclic_group(n));
  for (auto _ : state) {
    auto basis = commutant_basis(*rep);
    benchmark::DoNotOptimize(basis.size());
  }
}
BENCHMARK(BM_CommutantBasis)->Arg(4)->Arg(8);

void BM_SpanningTest(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto rep = weyl_heisenberg_rep(d);
  auto dec = decompose(rep);
  auto block = make_seed_block(rep, {rank_one_seed(d, 7)});
  for (auto _ : state) {
    auto fact = factor_seeds(block);
    auto fset = build_f_operators(fact, dec);
    auto result = spanning_test(fset);
    benchmark::DoNotOptimize(result.is_extremal);
  }
}
BENCHMARK(BM_SpanningTest)->Arg(2)->Arg(4)->Arg(6);

void BM_ExtremalDecomposition(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto rep = weyl_heisenberg_rep(d);
  auto dec = decompose(rep);
  auto block = make_seed_block(rep, {Matrix::Identity(d, d)});
  for (auto _ : state) {
    auto tree = extremal_decomposition(block, dec);
    benchmark::DoNotOptimize(extremal_leaves(tree).size());
  }
}
BENCHMARK(BM_ExtremalDecomposition)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
