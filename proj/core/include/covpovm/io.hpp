#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covpovm/apps.hpp"

namespace covpovm {

// ---------------------------------------------------------------------------
// JSON file schemas. All matrices are stored as flat row-major lists of
// [re, im] pairs; square matrices infer their side from the length unless the
// surrounding object carries an explicit "dim". Malformed input throws
// Error{ParseError} naming the offending key.
// ---------------------------------------------------------------------------

/// {"order": n, "mul": [[...], ...], "labels": [...]?}
GroupPtr group_from_json(const std::string& text);
std::string group_to_json(const FiniteGroup& group);

/// {"dim": d, "matrices": [mat, ...]} — one matrix per group element, in
/// element-index order.
std::vector<Matrix> rep_matrices_from_json(const std::string& text);
std::string rep_matrices_to_json(const std::vector<Matrix>& matrices);

struct SeedFile {
  std::vector<Matrix> seeds;
  std::vector<std::string> labels;
};

/// {"dim": d?, "seeds": [mat, ...], "labels": [...]?}
SeedFile seeds_from_json(const std::string& text);
std::string seeds_to_json(const std::vector<Matrix>& seeds,
                          const std::vector<std::string>& labels);

/// {"subgroups": [[element indices...], ...]} — one per seed orbit.
std::vector<std::vector<int>> subgroups_from_json(const std::string& text);

/// {"states": [mat, ...], "priors": [...]}
Ensemble ensemble_from_json(const std::string& text, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Spec strings: compact command-line names for common inputs.
//   group: "cyclic:n" | "product:<spec>,<spec>" | "file:path.json"
//   rep:   "builtin:weyl:d" | "builtin:regular" | "file:path.json"
// ---------------------------------------------------------------------------

GroupPtr parse_group_spec(const std::string& spec);

/// `group` may be null for builtin:weyl (which brings its own Z_d x Z_d);
/// builtin:regular and file reps require it. When both a group and
/// builtin:weyl:d are given their orders must agree.
RepPtr parse_rep_spec(const std::string& spec, GroupPtr group,
                      double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Analysis report: the canonical JSON document the command-line tool emits.
// Deterministic (fixed key order, doubles rounded to 12 significant digits),
// so identical inputs and flags produce byte-identical reports.
// ---------------------------------------------------------------------------

class AnalysisReport {
 public:
  /// Parses and canonicalizes; throws Error{ParseError} on malformed JSON.
  static AnalysisReport parse(const std::string& json_text);

  const std::string& to_json() const { return canonical_; }
  bool operator==(const AnalysisReport& other) const = default;

 private:
  friend class ReportBuilder;
  std::string canonical_;
};

/// Common metadata every report carries.
struct ReportHeader {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // echoed flags
  double tol = kDefaultTol;
  std::uint64_t probe_seed = 0;
};

AnalysisReport make_decompose_report(const ReportHeader& header,
                                     const IsotypicDecomposition& dec);

AnalysisReport make_check_report(
    const ReportHeader& header, const IsotypicDecomposition& dec,
    const MembershipReport& membership,
    const std::optional<ExtremalityReport>& extremality,
    const SplitNode* split_tree);

/// Stability-group variant: omega table plus reduced-set verdicts.
AnalysisReport make_stability_check_report(
    const ReportHeader& header, const IsotypicDecomposition& dec,
    const StabilitySetup& setup, const MembershipReport& membership,
    const std::optional<ExtremalityReport>& extremality,
    const SplitNode* split_tree);

AnalysisReport make_mub_report(const ReportHeader& header,
                               const MubScenario& scenario,
                               const DiscriminationResult& result);

struct MutualInfoSummary {
  double bits = 0.0;
  int bound = 0;
  int nonzero_orbits = 0;
  double bound_satisfied_margin = 0.0;  // bound - nonzero_orbits
};

AnalysisReport make_mutinfo_report(const ReportHeader& header,
                                   const IsotypicDecomposition& dec,
                                   const MutualInfoSummary& summary);

/// Rounds to 12 significant digits — the quantization applied to every double
/// embedded in a report.
double round_significant(double value, int digits = 12);

}  // namespace covpovm
