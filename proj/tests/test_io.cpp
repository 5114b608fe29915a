#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace covpovm;
using testutil::Matrix;
using testutil::Rng;

TEST_CASE("group serialization round-trips through JSON") {
  auto group = testutil::s3_group();
  auto back = group_from_json(group_to_json(*group));
  REQUIRE(back->order == group->order);
  CHECK(back->mul == group->mul);
  CHECK(back->identity == group->identity);
  CHECK(back->inv == group->inv);
}

TEST_CASE("malformed group JSON raises a parse error") {
  auto expect_parse_error = [](const std::string& text) {
    try {
      group_from_json(text);
      FAIL("expected ParseError for: ", text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  };
  expect_parse_error("not json at all");
  expect_parse_error("{}");
  expect_parse_error(R"({"order": 2})");
  expect_parse_error(R"({"order": "two", "mul": [[0, 1], [1, 0]]})");
  expect_parse_error(R"({"order": 2, "mul": [[0, 1]]})");
}

TEST_CASE("an invalid table fails group validation, not parsing") {
  // Parseable JSON whose table breaks associativity / identity axioms.
  try {
    group_from_json(R"({"order": 2, "mul": [[1, 1], [1, 1]]})");
    FAIL("expected a group axiom failure");
  } catch (const Error& e) {
    CHECK(e.code() != ErrorCode::ParseError);
  }
}

TEST_CASE("representation matrices round-trip with full precision") {
  Rng rng(21);
  std::vector<Matrix> mats = {rng.unitary(3), rng.unitary(3)};
  auto back = rep_matrices_from_json(rep_matrices_to_json(mats));
  REQUIRE(back.size() == 2);
  for (std::size_t g = 0; g < mats.size(); ++g)
    CHECK(testutil::dist(back[g], mats[g]) < 1e-15);
}

TEST_CASE("seed files round-trip including labels") {
  Rng rng(22);
  std::vector<Matrix> seeds = {rng.psd(2, 1), rng.psd(2, 2)};
  auto text = seeds_to_json(seeds, {"left", "right"});
  auto file = seeds_from_json(text);
  REQUIRE(file.seeds.size() == 2);
  CHECK(file.labels == std::vector<std::string>{"left", "right"});
  for (std::size_t i = 0; i < seeds.size(); ++i)
    CHECK(testutil::dist(file.seeds[i], seeds[i]) < 1e-15);
}

TEST_CASE("subgroup and ensemble files parse") {
  auto subs = subgroups_from_json(R"({"subgroups": [[0, 1], [0, 2]]})");
  REQUIRE(subs.size() == 2);
  CHECK(subs[0] == std::vector<int>{0, 1});
  CHECK(subs[1] == std::vector<int>{0, 2});

  auto ens = ensemble_from_json(
      R"({"states": [[[1, 0], [0, 0], [0, 0], [0, 0]],
                     [[0, 0], [0, 0], [0, 0], [1, 0]]],
          "priors": [0.5, 0.5]})");
  CHECK(ens.size() == 2);
  CHECK(ens.states[0](0, 0).real() == doctest::Approx(1.0));

  try {
    ensemble_from_json(R"({"states": []})");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("group spec strings") {
  SUBCASE("cyclic") {
    auto g = parse_group_spec("cyclic:4");
    CHECK(g->order == 4);
    CHECK(g->op(3, 2) == 1);
  }
  SUBCASE("product uses lexicographic pair indexing") {
    auto g = parse_group_spec("product:cyclic:2,cyclic:3");
    REQUIRE(g->order == 6);
    // (1, 1) has index 1*3 + 1 = 4 and order lcm(2, 3) = 6.
    int x = 4, steps = 1;
    while (x != g->identity) {
      x = g->op(x, 4);
      ++steps;
    }
    CHECK(steps == 6);
  }
  SUBCASE("products nest") {
    auto g = parse_group_spec("product:product:cyclic:2,cyclic:2,cyclic:2");
    CHECK(g->order == 8);
    for (int a = 0; a < 8; ++a) CHECK(g->op(a, a) == g->identity);
  }
  SUBCASE("trailing characters are rejected") {
    try {
      parse_group_spec("cyclic:4!");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
  SUBCASE("unknown scheme is rejected") {
    try {
      parse_group_spec("dihedral:4");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
}

TEST_CASE("group spec can load a file") {
  const std::string path = "/tmp/covpovm_test_group.json";
  {
    auto group = cyclic_group(3);
    std::string text = group_to_json(*group);
    FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  auto g = parse_group_spec("file:" + path);
  CHECK(g->order == 3);
  std::remove(path.c_str());
}

TEST_CASE("rep spec strings") {
  SUBCASE("builtin shift-and-phase brings its own group") {
    auto rep = parse_rep_spec("builtin:weyl:3", nullptr);
    CHECK(rep->dim == 3);
    CHECK(rep->order() == 9);
  }
  SUBCASE("a supplied group must match the builtin order") {
    try {
      parse_rep_spec("builtin:weyl:2", cyclic_group(3));
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
  }
  SUBCASE("regular representation of a supplied group") {
    auto rep = parse_rep_spec("builtin:regular", cyclic_group(3));
    CHECK(rep->dim == 3);
    CHECK(rep->order() == 3);
    // Permutation matrices: each row and column sums to 1.
    for (const Matrix& u : rep->matrices)
      CHECK(std::abs(u.sum() - Complex(3.0, 0.0)) < 1e-12);
  }
  SUBCASE("regular representation with an inline group spec") {
    auto rep = parse_rep_spec("builtin:regular:cyclic:4", nullptr);
    CHECK(rep->dim == 4);
    CHECK(rep->order() == 4);
  }
  SUBCASE("a rep file requires a group") {
    try {
      parse_rep_spec("file:/tmp/does_not_matter.json", nullptr);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
}

TEST_CASE("significant-digit rounding") {
  CHECK(round_significant(0.0) == 0.0);
  CHECK(round_significant(1.0) == 1.0);
  CHECK(round_significant(1.0 / 3.0) == doctest::Approx(0.333333333333).epsilon(1e-15));
  CHECK(round_significant(123456789012345.0) ==
        doctest::Approx(123456789012000.0).epsilon(1e-12));
  // Negative zero is flushed so serialized reports never print "-0".
  const double neg_zero = -0.0;
  CHECK(!std::signbit(round_significant(neg_zero)));
  CHECK(round_significant(-2.5) == -2.5);
  // Extreme magnitudes come back finite with the sign intact.
  CHECK(round_significant(-1e-300) == doctest::Approx(-1e-300));
  CHECK(std::isfinite(round_significant(1e300)));
  CHECK(round_significant(9.999999999999999) == 10.0);
}

TEST_CASE("analysis reports are canonical and comparable") {
  const std::string text =
      R"({"b": 1.5, "a": {"nested": [1, 2, 3]}, "c": "x"})";
  auto report = AnalysisReport::parse(text);
  auto reparsed = AnalysisReport::parse(report.to_json());
  CHECK(report == reparsed);
  CHECK(report.to_json() == reparsed.to_json());
  try {
    AnalysisReport::parse("{broken");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("report builders are deterministic") {
  auto rep = weyl_heisenberg_rep(2);
  auto dec = decompose(rep);
  ReportHeader header;
  header.command = "decompose";
  header.inputs = {{"rep", "builtin:weyl:2"}};

  auto a = make_decompose_report(header, dec);
  auto b = make_decompose_report(header, dec);
  CHECK(a == b);
  CHECK(a.to_json() == b.to_json());
  // The document carries the tool header and the structural table.
  CHECK(a.to_json().find("\"command\": \"decompose\"") != std::string::npos);
  CHECK(a.to_json().find("\"commutant_dim\": 1") != std::string::npos);

  auto seeds = make_seed_block(rep, {Matrix::Identity(2, 2)});
  auto membership = check_membership(seeds, dec);
  auto extremality = analyze_extremality(seeds, dec);
  auto tree = extremal_decomposition(seeds, dec);
  header.command = "check";
  auto c = make_check_report(header, dec, membership, extremality, &tree);
  auto d = make_check_report(header, dec, membership, extremality, &tree);
  CHECK(c == d);
  CHECK(c.to_json().find("\"is_extremal\": false") != std::string::npos);
  CHECK(c.to_json().find("\"split_tree\"") != std::string::npos);
}

TEST_CASE("report doubles survive a parse round-trip unchanged") {
  auto rep = weyl_heisenberg_rep(2);
  auto dec = decompose(rep);
  Matrix tilted(2, 2);
  tilted << 1.0 + 1.0 / 3.0, Complex(0.1, 0.2), Complex(0.1, -0.2),
      1.0 - 1.0 / 3.0;
  auto seeds = make_seed_block(rep, {tilted});
  auto membership = check_membership(seeds, dec);
  ReportHeader header;
  header.command = "check";
  auto report = make_check_report(header, dec, membership, std::nullopt,
                                  nullptr);
  auto reparsed = AnalysisReport::parse(report.to_json());
  CHECK(report == reparsed);
}
