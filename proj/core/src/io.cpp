#include "covpovm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "covpovm/error.hpp"
#include "covpovm/version.hpp"

namespace covpovm {

namespace {

using json = nlohmann::ordered_json;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string(what) + ": " + e.what());
  }
}

Complex complex_from_json(const json& entry, const char* context) {
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
      !entry[1].is_number())
    throw Error(ErrorCode::ParseError,
                std::string(context) + ": entries must be [re, im] pairs");
  return {entry[0].get<double>(), entry[1].get<double>()};
}

/// Flat row-major [re, im] list. The side is the given dim, or the square
/// root of the length when dim < 0.
Matrix square_matrix_from_json(const json& data, int dim,
                               const char* context) {
  if (!data.is_array())
    throw Error(ErrorCode::ParseError,
                std::string(context) + ": matrix must be an array");
  const std::size_t len = data.size();
  int side = dim;
  if (side < 0) {
    side = static_cast<int>(std::llround(std::sqrt(double(len))));
    if (static_cast<std::size_t>(side) * side != len)
      throw Error(ErrorCode::ParseError,
                  std::string(context) +
                      ": length is not a perfect square and no dim is given");
  } else if (static_cast<std::size_t>(side) * side != len) {
    throw Error(ErrorCode::ParseError,
                std::string(context) + ": expected " +
                    std::to_string(side * side) + " entries, got " +
                    std::to_string(len));
  }
  Matrix m(side, side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      m(i, j) = complex_from_json(data[i * side + j], context);
  return m;
}

json square_matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return data;
}

/// Report embedding: explicit shape, rounded entries.
json shaped_matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back(json::array({round_significant(m(i, j).real()),
                                  round_significant(m(i, j).imag())}));
  json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json header_json(const ReportHeader& header) {
  json report;
  report["tool"] = "covpovm";
  report["version"] = kVersionString;
  report["command"] = header.command;
  json inputs = json::object();
  for (const auto& [key, value] : header.inputs) inputs[key] = value;
  report["inputs"] = std::move(inputs);
  report["tolerance"] = round_significant(header.tol);
  report["probe_seed"] = header.probe_seed;
  return report;
}

json decomposition_json(const IsotypicDecomposition& dec) {
  json out;
  out["dim"] = dec.dim();
  out["group_order"] = dec.rep ? dec.rep->order() : 0;
  json classes = json::array();
  for (const auto& comp : dec.components) {
    json cls;
    cls["class"] = comp.label;
    cls["irrep_dim"] = comp.irrep_dim;
    cls["multiplicity"] = comp.multiplicity;
    classes.push_back(std::move(cls));
  }
  out["classes"] = std::move(classes);
  out["commutant_dim"] = dec.commutant_dim();
  out["orbit_bound"] = dec.commutant_dim();
  return out;
}

json membership_json(const MembershipReport& membership) {
  json out;
  out["member"] = membership.member;
  out["positive"] = membership.positive;
  out["normalized"] = membership.normalized;
  out["max_residual"] = round_significant(membership.max_residual);
  out["tolerance"] = round_significant(membership.tol);
  json positivity = json::array();
  for (const auto& entry : membership.positivity) {
    json e;
    e["seed"] = entry.seed;
    e["min_eigenvalue"] = round_significant(entry.min_eigenvalue);
    e["ok"] = entry.ok;
    positivity.push_back(std::move(e));
  }
  out["positivity"] = std::move(positivity);
  json residuals = json::array();
  for (const auto& res : membership.normalization_residuals) {
    json e;
    e["mu"] = res.mu;
    e["k"] = res.k;
    e["l"] = res.l;
    e["residual"] = round_significant(res.residual);
    residuals.push_back(std::move(e));
  }
  out["normalization_residuals"] = std::move(residuals);
  return out;
}

json extremality_json(const ExtremalityReport& extremality) {
  json out;
  out["is_extremal"] = extremality.is_extremal;
  out["span_dim"] = extremality.span_dim;
  out["full_dim"] = extremality.full_dim;
  json ranks = json::array();
  for (int r : extremality.ranks) ranks.push_back(r);
  out["ranks"] = std::move(ranks);
  out["rank_bound_lhs"] = extremality.full_dim;
  out["rank_bound_rhs"] = extremality.rank_bound_rhs;
  out["rank_bound_satisfied"] = extremality.rank_bound_satisfied;
  if (extremality.witness) {
    json witness;
    json blocks = json::array();
    for (const Matrix& q : *extremality.witness)
      blocks.push_back(shaped_matrix_to_json(q));
    witness["blocks"] = std::move(blocks);
    witness["max_constraint_residual"] =
        round_significant(extremality.witness_residual);
    out["witness"] = std::move(witness);
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json split_tree_json(const SplitNode& node) {
  json out;
  out["weight"] = round_significant(node.weight);
  out["extremal"] = node.extremal;
  if (node.extremal || (!node.plus && !node.minus)) {
    json blocks = json::array();
    for (const Matrix& b : node.blocks)
      blocks.push_back(shaped_matrix_to_json(b));
    out["blocks"] = std::move(blocks);
  } else {
    out["t_plus"] = round_significant(node.t_plus);
    out["t_minus"] = round_significant(node.t_minus);
    out["plus"] = split_tree_json(*node.plus);
    out["minus"] = split_tree_json(*node.minus);
  }
  return out;
}

AnalysisReport finish(const json& report) {
  return AnalysisReport::parse(report.dump(2));
}

}  // namespace

double round_significant(double value, int digits) {
  if (value == 0.0) return 0.0;  // flush -0.0 so reports never carry it
  if (!std::isfinite(value)) return value;
  const double magnitude = std::floor(std::log10(std::abs(value)));
  const double scale = std::pow(10.0, digits - 1 - magnitude);
  const double scaled = value * scale;
  // Magnitudes so extreme that the scale overflows are left untouched.
  if (!std::isfinite(scale) || !std::isfinite(scaled)) return value;
  return std::round(scaled) / scale;
}

GroupPtr group_from_json(const std::string& text) {
  const json doc = parse_json(text, "group file");
  if (!doc.contains("order") || !doc["order"].is_number_integer())
    throw Error(ErrorCode::ParseError, "group file: missing integer 'order'");
  if (!doc.contains("mul") || !doc["mul"].is_array())
    throw Error(ErrorCode::ParseError, "group file: missing array 'mul'");
  const int order = doc["order"].get<int>();
  if (order < 1 || static_cast<std::size_t>(order) != doc["mul"].size())
    throw Error(ErrorCode::ParseError,
                "group file: 'mul' does not have 'order' rows");
  std::vector<std::vector<int>> table(order);
  for (int a = 0; a < order; ++a) {
    const json& row = doc["mul"][a];
    if (!row.is_array() || static_cast<std::size_t>(order) != row.size())
      throw Error(ErrorCode::ParseError,
                  "group file: 'mul' row " + std::to_string(a) +
                      " is not a list of length 'order'");
    for (const json& cell : row) {
      if (!cell.is_number_integer())
        throw Error(ErrorCode::ParseError,
                    "group file: non-integer entry in 'mul'");
      table[a].push_back(cell.get<int>());
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array())
      throw Error(ErrorCode::ParseError, "group file: 'labels' must be a list");
    for (const json& label : doc["labels"]) {
      if (!label.is_string())
        throw Error(ErrorCode::ParseError,
                    "group file: labels must be strings");
      labels.push_back(label.get<std::string>());
    }
  }
  return validate_group(std::move(table), std::move(labels));
}

std::string group_to_json(const FiniteGroup& group) {
  json doc;
  doc["order"] = group.order;
  json mul = json::array();
  for (const auto& row : group.mul) mul.push_back(row);
  doc["mul"] = std::move(mul);
  if (!group.labels.empty()) doc["labels"] = group.labels;
  return doc.dump(2);
}

std::vector<Matrix> rep_matrices_from_json(const std::string& text) {
  const json doc = parse_json(text, "rep file");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw Error(ErrorCode::ParseError, "rep file: missing integer 'dim'");
  if (!doc.contains("matrices") || !doc["matrices"].is_array())
    throw Error(ErrorCode::ParseError, "rep file: missing array 'matrices'");
  const int dim = doc["dim"].get<int>();
  std::vector<Matrix> matrices;
  matrices.reserve(doc["matrices"].size());
  for (const json& entry : doc["matrices"])
    matrices.push_back(square_matrix_from_json(entry, dim, "rep file"));
  if (matrices.empty())
    throw Error(ErrorCode::ParseError, "rep file: 'matrices' is empty");
  return matrices;
}

std::string rep_matrices_to_json(const std::vector<Matrix>& matrices) {
  json doc;
  doc["dim"] = matrices.empty() ? 0 : matrices[0].rows();
  json mats = json::array();
  for (const Matrix& m : matrices) mats.push_back(square_matrix_to_json(m));
  doc["matrices"] = std::move(mats);
  return doc.dump(2);
}

SeedFile seeds_from_json(const std::string& text) {
  const json doc = parse_json(text, "seed file");
  if (!doc.contains("seeds") || !doc["seeds"].is_array())
    throw Error(ErrorCode::ParseError, "seed file: missing array 'seeds'");
  int dim = -1;
  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_integer())
      throw Error(ErrorCode::ParseError, "seed file: 'dim' must be an integer");
    dim = doc["dim"].get<int>();
  }
  SeedFile out;
  for (const json& entry : doc["seeds"])
    out.seeds.push_back(square_matrix_from_json(entry, dim, "seed file"));
  if (out.seeds.empty())
    throw Error(ErrorCode::ParseError, "seed file: 'seeds' is empty");
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array() ||
        doc["labels"].size() != out.seeds.size())
      throw Error(ErrorCode::ParseError,
                  "seed file: 'labels' must list one label per seed");
    for (const json& label : doc["labels"]) {
      if (!label.is_string())
        throw Error(ErrorCode::ParseError,
                    "seed file: labels must be strings");
      out.labels.push_back(label.get<std::string>());
    }
  }
  return out;
}

std::string seeds_to_json(const std::vector<Matrix>& seeds,
                          const std::vector<std::string>& labels) {
  json doc;
  doc["dim"] = seeds.empty() ? 0 : seeds[0].rows();
  json list = json::array();
  for (const Matrix& seed : seeds) list.push_back(square_matrix_to_json(seed));
  doc["seeds"] = std::move(list);
  if (!labels.empty()) doc["labels"] = labels;
  return doc.dump(2);
}

std::vector<std::vector<int>> subgroups_from_json(const std::string& text) {
  const json doc = parse_json(text, "stabilizer file");
  if (!doc.contains("subgroups") || !doc["subgroups"].is_array())
    throw Error(ErrorCode::ParseError,
                "stabilizer file: missing array 'subgroups'");
  std::vector<std::vector<int>> out;
  for (const json& entry : doc["subgroups"]) {
    if (!entry.is_array())
      throw Error(ErrorCode::ParseError,
                  "stabilizer file: each subgroup must be a list of element "
                  "indices");
    std::vector<int> members;
    for (const json& member : entry) {
      if (!member.is_number_integer())
        throw Error(ErrorCode::ParseError,
                    "stabilizer file: element indices must be integers");
      members.push_back(member.get<int>());
    }
    out.push_back(std::move(members));
  }
  if (out.empty())
    throw Error(ErrorCode::ParseError, "stabilizer file: 'subgroups' is empty");
  return out;
}

Ensemble ensemble_from_json(const std::string& text, double tol) {
  const json doc = parse_json(text, "ensemble file");
  if (!doc.contains("states") || !doc["states"].is_array())
    throw Error(ErrorCode::ParseError, "ensemble file: missing array 'states'");
  if (!doc.contains("priors") || !doc["priors"].is_array())
    throw Error(ErrorCode::ParseError, "ensemble file: missing array 'priors'");
  std::vector<Matrix> states;
  for (const json& entry : doc["states"])
    states.push_back(square_matrix_from_json(entry, -1, "ensemble file"));
  std::vector<double> priors;
  for (const json& prior : doc["priors"]) {
    if (!prior.is_number())
      throw Error(ErrorCode::ParseError,
                  "ensemble file: priors must be numbers");
    priors.push_back(prior.get<double>());
  }
  return make_ensemble(std::move(states), std::move(priors), tol);
}

namespace {

GroupPtr parse_group_spec_at(const std::string& spec, std::size_t& pos);

GroupPtr parse_group_spec_product(const std::string& spec, std::size_t& pos) {
  GroupPtr first = parse_group_spec_at(spec, pos);
  if (pos >= spec.size() || spec[pos] != ',')
    throw Error(ErrorCode::ParseError,
                "group spec: product needs two comma-separated factors");
  ++pos;
  GroupPtr second = parse_group_spec_at(spec, pos);
  return build_product_group(first, second);
}

GroupPtr parse_group_spec_at(const std::string& spec, std::size_t& pos) {
  auto starts_with = [&](const char* prefix) {
    const std::size_t len = std::string(prefix).size();
    if (spec.compare(pos, len, prefix) == 0) {
      pos += len;
      return true;
    }
    return false;
  };
  if (starts_with("cyclic:")) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    const std::string digits = spec.substr(pos, end - pos);
    pos = end;
    try {
      std::size_t used = 0;
      const int n = std::stoi(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(digits);
      return cyclic_group(n);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError,
                  "group spec: bad cyclic order '" + digits + "'");
    }
  }
  if (starts_with("product:")) return parse_group_spec_product(spec, pos);
  if (starts_with("file:")) {
    // File paths run to the next comma (product context) or to the end.
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    const std::string path = spec.substr(pos, end - pos);
    pos = end;
    return group_from_json(read_file(path));
  }
  throw Error(ErrorCode::ParseError,
              "group spec: expected cyclic:<n>, product:<a>,<b> or "
              "file:<path> at '" + spec.substr(pos) + "'");
}

}  // namespace

GroupPtr parse_group_spec(const std::string& spec) {
  std::size_t pos = 0;
  GroupPtr group = parse_group_spec_at(spec, pos);
  if (pos != spec.size())
    throw Error(ErrorCode::ParseError,
                "group spec: trailing characters '" + spec.substr(pos) + "'");
  return group;
}

RepPtr parse_rep_spec(const std::string& spec, GroupPtr group, double tol) {
  constexpr const char* kWeyl = "builtin:weyl:";
  constexpr const char* kRegular = "builtin:regular";
  constexpr const char* kFile = "file:";
  if (spec.rfind(kWeyl, 0) == 0) {
    const std::string digits = spec.substr(std::string(kWeyl).size());
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(digits);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError,
                  "rep spec: bad dimension '" + digits + "'");
    }
    RepPtr rep = weyl_heisenberg_rep(d);
    if (group && group->order != rep->order())
      throw Error(ErrorCode::DimensionMismatch,
                  "rep spec: builtin:weyl:" + std::to_string(d) +
                      " needs a group of order " + std::to_string(d * d));
    return rep;
  }
  if (spec.rfind(kRegular, 0) == 0) {
    const std::string rest = spec.substr(std::string(kRegular).size());
    GroupPtr target = group;
    if (!rest.empty()) {
      if (rest[0] != ':')
        throw Error(ErrorCode::ParseError, "rep spec: malformed '" + spec + "'");
      GroupPtr from_spec = parse_group_spec(rest.substr(1));
      if (target && target->mul != from_spec->mul)
        throw Error(ErrorCode::DimensionMismatch,
                    "rep spec: builtin:regular group differs from --group");
      target = from_spec;
    }
    if (!target)
      throw Error(ErrorCode::ParseError,
                  "rep spec: builtin:regular needs a group");
    return regular_rep(target);
  }
  if (spec.rfind(kFile, 0) == 0) {
    if (!group)
      throw Error(ErrorCode::ParseError, "rep spec: file reps need a group");
    const std::string path = spec.substr(std::string(kFile).size());
    return validate_rep(group, rep_matrices_from_json(read_file(path)), tol);
  }
  throw Error(ErrorCode::ParseError,
              "rep spec: expected builtin:weyl:<d>, builtin:regular[:<group>] "
              "or file:<path>, got '" + spec + "'");
}

AnalysisReport AnalysisReport::parse(const std::string& json_text) {
  AnalysisReport report;
  report.canonical_ = parse_json(json_text, "analysis report").dump(2);
  return report;
}

AnalysisReport make_decompose_report(const ReportHeader& header,
                                     const IsotypicDecomposition& dec) {
  json report = header_json(header);
  report["decomposition"] = decomposition_json(dec);
  return finish(std::move(report));
}

AnalysisReport make_check_report(
    const ReportHeader& header, const IsotypicDecomposition& dec,
    const MembershipReport& membership,
    const std::optional<ExtremalityReport>& extremality,
    const SplitNode* split_tree) {
  json report = header_json(header);
  report["decomposition"] = decomposition_json(dec);
  report["membership"] = membership_json(membership);
  report["extremality"] =
      extremality ? extremality_json(*extremality) : json(nullptr);
  report["split_tree"] = split_tree ? split_tree_json(*split_tree)
                                    : json(nullptr);
  return finish(std::move(report));
}

AnalysisReport make_stability_check_report(
    const ReportHeader& header, const IsotypicDecomposition& dec,
    const StabilitySetup& setup, const MembershipReport& membership,
    const std::optional<ExtremalityReport>& extremality,
    const SplitNode* split_tree) {
  json report = header_json(header);
  report["decomposition"] = decomposition_json(dec);
  json stability;
  json omega = json::array();
  for (int w = 0; w < setup.omega_count(); ++w) {
    json entry;
    entry["orbit"] = setup.omega[w].orbit;
    entry["nu"] = setup.omega[w].nu;
    entry["irrep_dim"] = setup.copy_dim(w);
    entry["multiplicity"] = setup.block_dim(w);
    omega.push_back(std::move(entry));
  }
  stability["omega"] = std::move(omega);
  stability["membership"] = membership_json(membership);
  stability["extremality"] =
      extremality ? extremality_json(*extremality) : json(nullptr);
  stability["split_tree"] = split_tree ? split_tree_json(*split_tree)
                                       : json(nullptr);
  report["stability"] = std::move(stability);
  return finish(std::move(report));
}

AnalysisReport make_mub_report(const ReportHeader& header,
                               const MubScenario& scenario,
                               const DiscriminationResult& result) {
  json report = header_json(header);
  json mub;
  mub["dim"] = scenario.d;
  json priors = json::array();
  for (double p : scenario.basis_priors)
    priors.push_back(round_significant(p));
  mub["basis_priors"] = std::move(priors);
  mub["chosen_basis"] = result.chosen_basis;
  mub["min_error"] = round_significant(result.min_error);
  mub["degenerate"] = result.degenerate;
  json candidates = json::array();
  for (std::size_t l = 0; l < result.candidate_errors.size(); ++l) {
    json candidate;
    candidate["basis"] = l;
    candidate["error"] = round_significant(result.candidate_errors[l]);
    candidate["extremal"] = result.candidate_extremal[l];
    candidates.push_back(std::move(candidate));
  }
  mub["candidates"] = std::move(candidates);
  report["mub"] = std::move(mub);
  return finish(std::move(report));
}

AnalysisReport make_mutinfo_report(const ReportHeader& header,
                                   const IsotypicDecomposition& dec,
                                   const MutualInfoSummary& summary) {
  json report = header_json(header);
  report["decomposition"] = decomposition_json(dec);
  json info;
  info["bits"] = round_significant(summary.bits);
  info["orbit_bound"] = summary.bound;
  info["nonzero_orbits"] = summary.nonzero_orbits;
  info["bound_margin"] = round_significant(summary.bound_satisfied_margin);
  report["mutual_information"] = std::move(info);
  return finish(std::move(report));
}

}  // namespace covpovm
