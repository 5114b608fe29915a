// Command-line front end: decompose a representation, check seed families for
// membership / extremality (optionally under stability subgroups), analyze the
// mutually-unbiased-basis discrimination scenario, and evaluate mutual
// information against the orbit bound.
//
// Exit codes: 0 = success, 1 = malformed input (bad flags, unparsable files,
// invalid priors or ensembles), 2 = analysis verdict or numerical failure
// (non-member seeds, degenerate probes, failed validation).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <covpovm/covpovm.hpp>

namespace {

using namespace covpovm;

std::string num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::ParseError, "cannot write file '" + path + "'");
  out << content;
  if (!content.empty() && content.back() != '\n') out << '\n';
}

std::vector<double> parse_priors(const std::string& text) {
  std::vector<double> priors;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      priors.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad prior '" + item + "'");
    }
  }
  if (priors.empty())
    throw Error(ErrorCode::ParseError, "priors list is empty");
  return priors;
}

/// Flags shared by the analysis subcommands.
struct CommonOptions {
  std::string group_spec;
  std::string rep_spec;
  std::string seeds_path;
  std::string out_path;
  double tol = kDefaultTol;
  std::uint64_t probe_seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_seeds) {
  cmd->add_option("--group", opt.group_spec,
                  "group spec: cyclic:<n> | product:<a>,<b> | file:<path>");
  cmd->add_option("--rep", opt.rep_spec,
                  "rep spec: builtin:weyl:<d> | builtin:regular[:<group>] | "
                  "file:<path>")
      ->required();
  auto* seeds = cmd->add_option("--seeds", opt.seeds_path,
                                "seed file (one matrix per orbit)");
  if (needs_seeds) seeds->required();
  cmd->add_option("--tol", opt.tol, "validation tolerance")
      ->capture_default_str();
  cmd->add_option("--probe-seed", opt.probe_seed,
                  "seed for the decomposition probe")
      ->capture_default_str();
  cmd->add_option("--out", opt.out_path, "write the JSON report here");
}

RepPtr resolve_rep(const CommonOptions& opt, GroupPtr& group) {
  if (!opt.group_spec.empty()) group = parse_group_spec(opt.group_spec);
  RepPtr rep = parse_rep_spec(opt.rep_spec, group, opt.tol);
  group = rep->group;
  return rep;
}

ReportHeader make_header(const std::string& command, const CommonOptions& opt,
                         std::vector<std::pair<std::string, std::string>>
                             extra_inputs = {}) {
  ReportHeader header;
  header.command = command;
  if (!opt.group_spec.empty())
    header.inputs.emplace_back("group", opt.group_spec);
  if (!opt.rep_spec.empty()) header.inputs.emplace_back("rep", opt.rep_spec);
  if (!opt.seeds_path.empty())
    header.inputs.emplace_back("seeds", opt.seeds_path);
  for (auto& pair : extra_inputs) header.inputs.push_back(std::move(pair));
  header.tol = opt.tol;
  header.probe_seed = opt.probe_seed;
  return header;
}

void print_decomposition(const IsotypicDecomposition& dec) {
  std::cout << "dim: " << dec.dim() << "\n";
  std::cout << "group_order: " << (dec.rep ? dec.rep->order() : 0) << "\n";
  std::cout << "classes: " << dec.class_count() << "\n";
  for (const auto& comp : dec.components)
    std::cout << "  class " << comp.label << ": irrep_dim=" << comp.irrep_dim
              << " multiplicity=" << comp.multiplicity << "\n";
  std::cout << "commutant_dim: " << dec.commutant_dim() << "\n";
  std::cout << "orbit_bound: " << dec.commutant_dim() << "\n";
}

int run_decompose(const CommonOptions& opt) {
  GroupPtr group;
  RepPtr rep = resolve_rep(opt, group);
  IsotypicDecomposition dec = decompose(rep, opt.tol, opt.probe_seed);
  print_decomposition(dec);
  if (!opt.out_path.empty()) {
    AnalysisReport report =
        make_decompose_report(make_header("decompose", opt), dec);
    write_file(opt.out_path, report.to_json());
  }
  return 0;
}

struct CheckOptions {
  CommonOptions common;
  std::string stabilizers_path;
  bool split = false;
  bool project_invariant = false;
};

int run_check(const CheckOptions& opt) {
  GroupPtr group;
  RepPtr rep = resolve_rep(opt.common, group);
  SeedFile seed_file = seeds_from_json(read_file(opt.common.seeds_path));
  IsotypicDecomposition dec =
      decompose(rep, opt.common.tol, opt.common.probe_seed);

  std::vector<std::pair<std::string, std::string>> extra;
  if (!opt.stabilizers_path.empty())
    extra.emplace_back("stabilizers", opt.stabilizers_path);
  if (opt.split) extra.emplace_back("split", "true");
  if (opt.project_invariant) extra.emplace_back("project_invariant", "true");
  ReportHeader header = make_header("check", opt.common, std::move(extra));

  AnalysisReport report;
  bool member = false;

  if (opt.stabilizers_path.empty()) {
    SeedBlock seeds = make_seed_block(rep, seed_file.seeds, seed_file.labels,
                                      opt.common.tol);
    MembershipReport membership = check_membership(seeds, dec, opt.common.tol);
    member = membership.member;
    std::optional<ExtremalityReport> extremality;
    std::optional<SplitNode> tree;
    if (member) {
      extremality = analyze_extremality(seeds, dec);
      if (opt.split && !extremality->is_extremal)
        tree = extremal_decomposition(seeds, dec);
    }
    report = make_check_report(header, dec, membership, extremality,
                               tree ? &*tree : nullptr);
  } else {
    auto member_lists = subgroups_from_json(read_file(opt.stabilizers_path));
    if (member_lists.size() != seed_file.seeds.size())
      throw Error(ErrorCode::ParseError,
                  "stabilizer file lists " +
                      std::to_string(member_lists.size()) +
                      " subgroups but the seed file has " +
                      std::to_string(seed_file.seeds.size()) + " seeds");
    std::vector<Subgroup> subgroups;
    subgroups.reserve(member_lists.size());
    for (auto& members : member_lists)
      subgroups.push_back(make_subgroup(group, std::move(members)));
    StabilitySetup setup = make_stability_setup(
        rep, std::move(subgroups), opt.common.tol, opt.common.probe_seed);
    MultiplicityBlockSeed blocks =
        project_seeds(seed_file.seeds, setup, opt.common.tol,
                      /*strict=*/!opt.project_invariant);
    ConstraintSet s_blocks = build_s_blocks(setup, dec);
    MembershipReport membership =
        stability_membership(blocks, s_blocks, rep->dim, opt.common.tol);
    member = membership.member;
    std::optional<ExtremalityReport> extremality;
    std::optional<SplitNode> tree;
    if (member) {
      extremality = stability_extremality(blocks, s_blocks);
      if (opt.split && !extremality->is_extremal)
        tree = decompose_into_extremals(blocks.blocks, s_blocks);
    }
    report = make_stability_check_report(header, dec, setup, membership,
                                         extremality, tree ? &*tree : nullptr);
  }

  if (opt.common.out_path.empty())
    std::cout << report.to_json() << "\n";
  else
    write_file(opt.common.out_path, report.to_json());
  return member ? 0 : 2;
}

struct MubOptions {
  int dim = 2;
  std::string priors_text;
  std::string out_path;
  double tol = kDefaultTol;
  std::uint64_t probe_seed = 0;
};

int run_mub(const MubOptions& opt) {
  std::vector<double> priors;
  if (!opt.priors_text.empty()) priors = parse_priors(opt.priors_text);
  MubScenario scenario = build_mub_scenario(opt.dim, priors);
  DiscriminationResult result = optimal_mub_discrimination(scenario, opt.tol);

  std::cout << "dim: " << scenario.d << "\n";
  std::cout << "chosen_basis: " << result.chosen_basis << "\n";
  std::cout << "min_error: " << num(result.min_error) << "\n";
  std::cout << "degenerate: " << (result.degenerate ? "yes" : "no") << "\n";
  for (std::size_t l = 0; l < result.candidate_errors.size(); ++l)
    std::cout << "candidate " << l
              << ": error=" << num(result.candidate_errors[l])
              << " extremal=" << (result.candidate_extremal[l] ? "yes" : "no")
              << "\n";

  if (!opt.out_path.empty()) {
    ReportHeader header;
    header.command = "mub";
    header.inputs.emplace_back("dim", std::to_string(opt.dim));
    if (!opt.priors_text.empty())
      header.inputs.emplace_back("priors", opt.priors_text);
    header.tol = opt.tol;
    header.probe_seed = opt.probe_seed;
    AnalysisReport report = make_mub_report(header, scenario, result);
    write_file(opt.out_path, report.to_json());
  }
  return 0;
}

struct MutinfoOptions {
  CommonOptions common;
  std::string ensemble_path;
};

int run_mutinfo(const MutinfoOptions& opt) {
  GroupPtr group;
  RepPtr rep = resolve_rep(opt.common, group);
  SeedFile seed_file = seeds_from_json(read_file(opt.common.seeds_path));
  Ensemble ensemble =
      ensemble_from_json(read_file(opt.ensemble_path), opt.common.tol);
  for (const Matrix& state : ensemble.states)
    if (state.rows() != rep->dim)
      throw Error(ErrorCode::InvalidEnsemble,
                  "ensemble states are " + std::to_string(state.rows()) +
                      "-dimensional but the representation acts on dim " +
                      std::to_string(rep->dim));

  SeedBlock seeds = make_seed_block(rep, seed_file.seeds, seed_file.labels,
                                    opt.common.tol);
  CovariantPovm povm = synthesize(seeds, opt.common.tol);
  IsotypicDecomposition dec =
      decompose(rep, opt.common.tol, opt.common.probe_seed);

  MutualInfoSummary summary;
  summary.bits = mutual_information(povm, ensemble);
  summary.bound = orbit_bound(dec);
  summary.nonzero_orbits = 0;
  for (const Matrix& seed : seed_file.seeds)
    if (seed.norm() > opt.common.tol * seed.rows()) ++summary.nonzero_orbits;
  summary.bound_satisfied_margin = summary.bound - summary.nonzero_orbits;

  std::cout << "mutual_information_bits: " << num(summary.bits) << "\n";
  std::cout << "orbit_bound: " << summary.bound << "\n";
  std::cout << "nonzero_orbits: " << summary.nonzero_orbits << "\n";

  if (!opt.common.out_path.empty()) {
    ReportHeader header = make_header(
        "mutinfo", opt.common, {{"ensemble", opt.ensemble_path}});
    AnalysisReport report = make_mutinfo_report(header, dec, summary);
    write_file(opt.common.out_path, report.to_json());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariant POVM analysis"};
  app.require_subcommand(1);

  CommonOptions decompose_opt;
  auto* decompose_cmd = app.add_subcommand(
      "decompose", "isotypic decomposition of a representation");
  add_common(decompose_cmd, decompose_opt, /*needs_seeds=*/false);

  CheckOptions check_opt;
  auto* check_cmd = app.add_subcommand(
      "check", "membership and extremality of a seed family");
  add_common(check_cmd, check_opt.common, /*needs_seeds=*/true);
  check_cmd->add_option("--stabilizers", check_opt.stabilizers_path,
                        "subgroup file: one stability subgroup per orbit");
  check_cmd->add_flag("--split", check_opt.split,
                      "decompose non-extremal members into extremal points");
  check_cmd->add_flag(
      "--project-invariant", check_opt.project_invariant,
      "average seeds over their stabilizers instead of rejecting "
      "non-invariant input");

  MubOptions mub_opt;
  auto* mub_cmd = app.add_subcommand(
      "mub", "optimal covariant discrimination of mutually unbiased bases");
  mub_cmd->add_option("--dim,--d", mub_opt.dim, "Hilbert space dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  mub_cmd->add_option("--priors", mub_opt.priors_text,
                      "comma-separated basis priors (default uniform)");
  mub_cmd->add_option("--tol", mub_opt.tol, "validation tolerance")
      ->capture_default_str();
  mub_cmd->add_option("--probe-seed", mub_opt.probe_seed,
                      "seed for the decomposition probe")
      ->capture_default_str();
  mub_cmd->add_option("--out", mub_opt.out_path, "write the JSON report here");

  MutinfoOptions mutinfo_opt;
  auto* mutinfo_cmd = app.add_subcommand(
      "mutinfo", "mutual information of a covariant POVM against an ensemble");
  add_common(mutinfo_cmd, mutinfo_opt.common, /*needs_seeds=*/true);
  mutinfo_cmd
      ->add_option("--ensemble", mutinfo_opt.ensemble_path,
                   "ensemble file: states and priors")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*decompose_cmd) return run_decompose(decompose_opt);
    if (*check_cmd) return run_check(check_opt);
    if (*mub_cmd) return run_mub(mub_opt);
    if (*mutinfo_cmd) return run_mutinfo(mutinfo_opt);
  } catch (const covpovm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ParseError:
      case ErrorCode::InvalidPriors:
      case ErrorCode::InvalidEnsemble:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
