#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace covpovm;
using testutil::Matrix;
using testutil::Rng;

namespace {

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
  int rows = 0, cols = 0;
  for (const Matrix& b : blocks) {
    rows += static_cast<int>(b.rows());
    cols += static_cast<int>(b.cols());
  }
  Matrix out = Matrix::Zero(rows, cols);
  int r = 0, c = 0;
  for (const Matrix& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += static_cast<int>(b.rows());
    c += static_cast<int>(b.cols());
  }
  return out;
}

}  // namespace

TEST_CASE("normalization constraint set has one entry per (class, k, l)") {
  Rng rng(31);
  for (const auto& entry : testutil::small_zoo()) {
    INFO("rep: ", entry.name);
    auto dec = decompose(entry.rep);
    auto constraints = normalization_constraints(dec, 2);
    int expected = 0;
    for (const auto& comp : dec.components)
      expected += comp.multiplicity * comp.multiplicity;
    CHECK(static_cast<int>(constraints.size()) == expected);
    for (const auto& c : constraints) {
      REQUIRE(c.coeffs.size() == 2);
      // Same intertwiner coefficient repeated across seeds.
      CHECK(testutil::dist(c.coeffs[0], c.coeffs[1]) == 0.0);
      const double expected_rhs =
          (c.k == c.l) ? static_cast<double>(dec.components[c.mu].irrep_dim)
                       : 0.0;
      CHECK(c.rhs == doctest::Approx(expected_rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("factorization recovers each block as X^dag X with correct rank") {
  Rng rng(77);
  std::vector<Matrix> blocks = {testutil::Matrix::Zero(3, 3), rng.psd(3, 1),
                                rng.psd(3, 2), rng.psd(3, 3)};
  auto fact = factor_blocks(blocks);
  REQUIRE(fact.factors.size() == 4);
  CHECK(fact.ranks == std::vector<int>{0, 1, 2, 3});
  CHECK(fact.total_rank() == 6);
  CHECK(fact.total_rank_square() == 14);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    CHECK(fact.factors[b].rows() == fact.ranks[b]);
    CHECK(fact.factors[b].cols() == 3);
    CHECK(testutil::dist(fact.factors[b].adjoint() * fact.factors[b],
                         blocks[b]) < 1e-10);
  }
}

TEST_CASE("factorization is deterministic") {
  Rng rng(78);
  std::vector<Matrix> blocks = {rng.psd(4, 2), rng.psd(4, 3)};
  auto a = factor_blocks(blocks);
  auto b = factor_blocks(blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    CHECK((a.factors[i] - b.factors[i]).norm() == 0.0);
}

TEST_CASE("rank cutoff is relative to the largest block in the family") {
  // Regression: a block that is pure floating-point residue (norm ~1e-16)
  // sitting next to an order-one sibling must get rank 0, even though its own
  // largest eigenvalue is positive. A per-block relative threshold would keep
  // one junk eigenvalue and report a spurious rank.
  Rng rng(79);
  Matrix junk = 1e-16 * rng.hermitian(3);
  junk = (junk + junk.adjoint()) / 2.0;
  // Make its top eigenvalue positive so a per-block cutoff would admit it.
  junk += 3e-16 * Matrix::Identity(3, 3);
  std::vector<Matrix> blocks = {rng.psd(3, 2), junk};
  auto fact = factor_blocks(blocks);
  CHECK(fact.ranks[0] == 2);
  CHECK(fact.ranks[1] == 0);
  CHECK(fact.factors[1].rows() == 0);
}

TEST_CASE("spanning verdicts on hand-checked points") {
  SUBCASE("rank-one seed of the qubit shift-and-phase rep is extremal") {
    auto rep = weyl_heisenberg_rep(2);
    Matrix a(2, 2);
    a << 1.0, 1.0, 1.0, 1.0;  // 2 |+><+|
    auto dec = decompose(rep);
    auto report = analyze_extremality(make_seed_block(rep, {a}), dec);
    CHECK(report.is_extremal);
    CHECK(report.span_dim == 1);
    CHECK(report.full_dim == 1);
    CHECK(report.ranks == std::vector<int>{1});
    CHECK(!report.witness.has_value());
    CHECK(report.rank_bound_satisfied);
  }
  SUBCASE("identity seed of the qubit shift-and-phase rep is not extremal") {
    auto rep = weyl_heisenberg_rep(2);
    auto dec = decompose(rep);
    auto report =
        analyze_extremality(make_seed_block(rep, {Matrix::Identity(2, 2)}),
                            dec);
    CHECK(!report.is_extremal);
    CHECK(report.span_dim == 1);
    CHECK(report.full_dim == 4);
    // Rank bound 4 > 1 already rules extremality out.
    CHECK(!report.rank_bound_satisfied);
    CHECK(report.rank_bound_rhs == 1);
    REQUIRE(report.witness.has_value());
  }
}

TEST_CASE("witness properties: Hermitian, orthogonal, unit norm, "
          "deterministic") {
  auto rep = testutil::z2_diag_rep();
  auto dec = decompose(rep);
  auto seeds = make_seed_block(rep, {Matrix::Identity(2, 2)});
  auto fact = factor_seeds(seeds);
  auto fset = build_f_operators(fact, dec);
  auto q = find_perturbation(fset);
  REQUIRE(q.has_value());
  REQUIRE(q->size() == 1);
  const Matrix& w = (*q)[0];
  CHECK(testutil::dist(w, w.adjoint()) < 1e-12);
  double hs = 0.0;
  for (const Matrix& blk : *q) hs += blk.squaredNorm();
  CHECK(std::abs(hs - 1.0) < 1e-12);
  for (const auto& entry : fset.entries) {
    Complex r = 0.0;
    for (std::size_t b = 0; b < entry.blocks.size(); ++b)
      r += (entry.blocks[b] * (*q)[b]).trace();
    CHECK(std::abs(r) < kWitnessTol);
  }
  auto q2 = find_perturbation(fset);
  REQUIRE(q2.has_value());
  CHECK(((*q)[0] - (*q2)[0]).norm() == 0.0);
}

TEST_CASE("no perturbation direction exists at an extremal point") {
  auto rep = weyl_heisenberg_rep(3);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 3.0;
  auto dec = decompose(rep);
  auto seeds = make_seed_block(rep, {a});
  auto fact = factor_seeds(seeds);
  auto fset = build_f_operators(fact, dec);
  CHECK(!find_perturbation(fset).has_value());
  CHECK(spanning_test(fset).is_extremal);
}

TEST_CASE("splitting the identity seed along the bit-flip direction") {
  auto rep = testutil::z2_diag_rep();
  auto dec = decompose(rep);
  auto seeds = make_seed_block(rep, {Matrix::Identity(2, 2)});
  auto fact = factor_seeds(seeds);
  auto fset = build_f_operators(fact, dec);
  auto split = convex_split(seeds, fact, fset, {sigma_x()});

  CHECK(split.t_plus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(split.t_minus == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(split.weight_plus == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(split.weight_minus == doctest::Approx(0.5).epsilon(1e-12));

  Matrix plus_expect(2, 2), minus_expect(2, 2);
  plus_expect << 1.0, 1.0, 1.0, 1.0;    // 2 |+><+|
  minus_expect << 1.0, -1.0, -1.0, 1.0; // 2 |-><-|
  CHECK(testutil::dist(split.a_plus.seeds[0], plus_expect) < 1e-10);
  CHECK(testutil::dist(split.a_minus.seeds[0], minus_expect) < 1e-10);

  // Both endpoints are members and extremal; the mixture reconstructs A.
  for (const SeedBlock* end : {&split.a_plus, &split.a_minus}) {
    CHECK(check_membership(*end, dec).member);
    CHECK(analyze_extremality(*end, dec).is_extremal);
  }
  Matrix recon = split.weight_plus * split.a_plus.seeds[0] +
                 split.weight_minus * split.a_minus.seeds[0];
  CHECK(testutil::dist(recon, Matrix::Identity(2, 2)) < 1e-10);
}

TEST_CASE("split rejects directions that are not valid witnesses") {
  auto rep = testutil::z2_diag_rep();
  auto dec = decompose(rep);
  auto seeds = make_seed_block(rep, {Matrix::Identity(2, 2)});
  auto fact = factor_seeds(seeds);
  auto fset = build_f_operators(fact, dec);
  auto expect_not_a_witness = [&](const std::vector<Matrix>& q) {
    try {
      split_blocks(seeds.seeds, fact, fset, q);
      FAIL("expected NotAWitness");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAWitness);
    }
  };
  SUBCASE("wrong block shape") { expect_not_a_witness({Matrix::Identity(3, 3)}); }
  SUBCASE("wrong block count") {
    expect_not_a_witness({sigma_x(), sigma_x()});
  }
  SUBCASE("non-Hermitian direction") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    expect_not_a_witness({bad});
  }
  SUBCASE("direction violating the constraints") {
    expect_not_a_witness({sigma_z() + Matrix::Identity(2, 2)});
  }
  SUBCASE("zero direction") { expect_not_a_witness({Matrix::Zero(2, 2)}); }
}

TEST_CASE("recursive decomposition terminates with extremal leaves that "
          "reconstruct the root") {
  Rng rng(2121);
  int decomposed = 0;
  for (const auto& entry : testutil::small_zoo()) {
    INFO("rep: ", entry.name);
    auto dec = decompose(entry.rep);
    const int d = entry.rep->dim;
    for (int trial = 0; trial < 3; ++trial) {
      auto seeds = testutil::random_member(entry.rep, {d}, rng);
      auto block = make_seed_block(entry.rep, seeds);
      REQUIRE(check_membership(block, dec).member);
      auto root = extremal_decomposition(block, dec);
      auto leaves = extremal_leaves(root);
      REQUIRE(!leaves.empty());
      double weight_total = 0.0;
      Matrix recon = Matrix::Zero(d, d);
      for (const SplitNode* leaf : leaves) {
        CHECK(leaf->extremal);
        // Leaf verdicts are genuine: re-run the analysis from scratch.
        auto leaf_block = make_seed_block(entry.rep, leaf->blocks);
        CHECK(analyze_extremality(leaf_block, dec).is_extremal);
        CHECK(check_membership(leaf_block, dec, 1e-7).member);
        weight_total += leaf->weight;
        recon += leaf->weight * leaf->blocks[0];
      }
      CHECK(std::abs(weight_total - 1.0) < 1e-8);
      CHECK(testutil::dist(recon, seeds[0]) < 1e-8);
      ++decomposed;
    }
  }
  CHECK(decomposed >= 27);
}

TEST_CASE("rank bound: lhs is sum of squared ranks, rhs the commutant "
          "dimension") {
  auto rep = testutil::z2_diag_rep();
  auto dec = decompose(rep);
  auto fact = factor_seeds(make_seed_block(rep, {Matrix::Identity(2, 2)}));
  auto bound = rank_bound_check(fact, dec);
  CHECK(bound.lhs == 4);
  CHECK(bound.rhs == 2);
  CHECK(!bound.satisfied);

  auto fact1 = factor_seeds(
      make_seed_block(rep, {Matrix::Identity(2, 2) + sigma_z(),
                            Matrix::Identity(2, 2) - sigma_z()}));
  auto bound1 = rank_bound_check(fact1, dec);
  CHECK(bound1.lhs == 2);
  CHECK(bound1.rhs == 2);
  CHECK(bound1.satisfied);
}

TEST_CASE("rank bound violation forces a witness with tiny residuals") {
  // Over-ranked members must always be recognized as convex combinations.
  Rng rng(414);
  for (const auto& entry : testutil::small_zoo()) {
    INFO("rep: ", entry.name);
    auto dec = decompose(entry.rep);
    const int d = entry.rep->dim;
    auto seeds = testutil::random_member(entry.rep, {d, d}, rng);
    auto block = make_seed_block(entry.rep, seeds);
    auto report = analyze_extremality(block, dec);
    if (report.rank_bound_satisfied) continue;
    CHECK(!report.is_extremal);
    REQUIRE(report.witness.has_value());
    double norm = 0.0;
    for (const Matrix& q : *report.witness) norm += q.squaredNorm();
    CHECK(norm > 0.5);  // unit HS norm by construction
    CHECK(report.witness_residual <= kWitnessTol);
  }
}

TEST_CASE("independent uniqueness oracle agrees with the spanning test") {
  Rng rng(616);
  int instances = 0;
  for (const auto& entry : testutil::small_zoo()) {
    INFO("rep: ", entry.name);
    auto dec = decompose(entry.rep);
    const int d = entry.rep->dim;
    // Each family's total rank must reach the largest multiplicity, or no
    // normalized member exists at those ranks.
    const int m = entry.max_mult;
    const std::vector<std::vector<int>> rank_menu = {
        {m}, {d}, {m, m}, {1, d}, {d, d}};
    for (const auto& ranks : rank_menu) {
      auto seeds = testutil::random_member(entry.rep, ranks, rng);
      auto block = make_seed_block(entry.rep, seeds);
      auto spanning = analyze_extremality(block, dec);
      const bool oracle = extremality_oracle(block, dec);
      INFO("ranks size ", ranks.size(), " first rank ", ranks[0]);
      CHECK(spanning.is_extremal == oracle);
      ++instances;
    }
  }
  CHECK(instances == 45);
}

TEST_CASE("span dimension matches a Gram-matrix computation") {
  Rng rng(818);
  for (const auto& entry : testutil::small_zoo()) {
    INFO("rep: ", entry.name);
    auto dec = decompose(entry.rep);
    const int d = entry.rep->dim;
    auto seeds = testutil::random_member(entry.rep, {1, d}, rng);
    auto fact = factor_seeds(make_seed_block(entry.rep, seeds));
    auto fset = build_f_operators(fact, dec);
    std::vector<Matrix> family;
    for (const auto& e : fset.entries) family.push_back(direct_sum(e.blocks));
    CHECK(spanning_test(fset).span_dim ==
          testutil::gram_span_dim(family, 1e-12));
  }
}
