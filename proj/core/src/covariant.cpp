#include "covpovm/covariant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "covpovm/error.hpp"
#include "covpovm/extremal.hpp"
#include "internal.hpp"

namespace covpovm {

SeedBlock make_seed_block(RepPtr rep, std::vector<Matrix> seeds,
                          std::vector<std::string> labels, double tol) {
  if (!rep) throw std::invalid_argument("seed block needs a representation");
  if (seeds.empty())
    throw std::invalid_argument("seed block needs at least one seed");
  const int d = rep->dim;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].rows() != d || seeds[i].cols() != d)
      throw Error(ErrorCode::DimensionMismatch,
                  "seed " + std::to_string(i) + " is not " +
                      std::to_string(d) + "x" + std::to_string(d));
    const double defect = (seeds[i] - seeds[i].adjoint()).norm();
    if (defect > tol * (1.0 + seeds[i].norm()))
      throw Error(ErrorCode::InvalidState,
                  "seed " + std::to_string(i) + " is not Hermitian (defect " +
                      std::to_string(defect) + ")");
    seeds[i] = detail::hermitian_part(seeds[i]);
  }
  if (labels.empty()) {
    labels.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
      labels.push_back(std::to_string(i));
  } else if (labels.size() != seeds.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "label count does not match seed count");
  }
  return SeedBlock{std::move(rep), std::move(seeds), std::move(labels)};
}

Matrix normalization_map(const SeedBlock& seeds) {
  Matrix total = Matrix::Zero(seeds.dim(), seeds.dim());
  for (const Matrix& a : seeds.seeds) total += twirl(*seeds.rep, a);
  return total;
}

MembershipReport check_membership(const SeedBlock& seeds,
                                  const IsotypicDecomposition& dec,
                                  double tol) {
  if (dec.dim() != seeds.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "decomposition dimension does not match the seed block");
  return check_block_membership(seeds.seeds,
                                normalization_constraints(dec, seeds.count()),
                                tol, seeds.dim());
}

CovariantPovm::CovariantPovm(SeedBlock seeds) : seeds_(std::move(seeds)) {}

std::size_t CovariantPovm::element_count() const {
  return static_cast<std::size_t>(orbit_count()) * group_order();
}

Matrix CovariantPovm::element(int i, int g) const {
  const Matrix& u = seeds_.rep->matrices[g];
  return u * seeds_.seeds[i] * u.adjoint() /
         static_cast<double>(group_order());
}

void CovariantPovm::for_each_element(
    const std::function<void(int, int, const Matrix&)>& fn) const {
  for (int i = 0; i < orbit_count(); ++i)
    for (int g = 0; g < group_order(); ++g) fn(i, g, element(i, g));
}

std::vector<std::vector<Matrix>> CovariantPovm::materialize(
    std::size_t cap) const {
  const std::size_t entries =
      element_count() * static_cast<std::size_t>(dim()) * dim();
  if (entries > cap)
    throw std::length_error(
        "element table needs " + std::to_string(entries) +
        " complex entries, above the cap of " + std::to_string(cap) +
        "; stream with for_each_element instead");
  std::vector<std::vector<Matrix>> table(orbit_count());
  for (int i = 0; i < orbit_count(); ++i) {
    table[i].reserve(group_order());
    for (int g = 0; g < group_order(); ++g) table[i].push_back(element(i, g));
  }
  return table;
}

CovariantPovm synthesize(const SeedBlock& seeds, double tol) {
  const int d = seeds.dim();
  SeedBlock clipped = seeds;
  for (std::size_t i = 0; i < clipped.seeds.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(clipped.seeds[i]);
    const double scale = 1.0 + std::abs(es.eigenvalues()(d - 1));
    if (es.eigenvalues()(0) < -tol * scale)
      throw Error(ErrorCode::NotNormalized,
                  "seed " + std::to_string(i) +
                      " has negative eigenvalue " +
                      std::to_string(es.eigenvalues()(0)) +
                      " beyond tolerance");
    // Clip roundoff-level negatives so every emitted element is exactly PSD.
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    clipped.seeds[i] = es.eigenvectors() * ev.asDiagonal() *
                       es.eigenvectors().adjoint();
  }
  const Matrix total = normalization_map(clipped);
  const double defect = (total - Matrix::Identity(d, d)).norm();
  if (defect > tol * d)
    throw Error(ErrorCode::NotNormalized,
                "completeness defect " + std::to_string(defect) +
                    " exceeds " + std::to_string(tol * d));
  return CovariantPovm(std::move(clipped));
}

OutcomeProbabilities outcome_probabilities(const CovariantPovm& povm,
                                           const Matrix& state, double tol) {
  const int d = povm.dim();
  if (state.rows() != d || state.cols() != d)
    throw Error(ErrorCode::DimensionMismatch,
                "state is not " + std::to_string(d) + "x" + std::to_string(d));
  if ((state - state.adjoint()).norm() > tol * (1.0 + state.norm()))
    throw Error(ErrorCode::InvalidState, "state is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(state);
  if (es.eigenvalues()(0) < -tol * (1.0 + es.eigenvalues()(d - 1)))
    throw Error(ErrorCode::InvalidState,
                "state has negative eigenvalue " +
                    std::to_string(es.eigenvalues()(0)));
  if (std::abs(state.trace().real() - 1.0) > tol * d)
    throw Error(ErrorCode::InvalidState,
                "state trace " + std::to_string(state.trace().real()) +
                    " is not 1");

  OutcomeProbabilities out;
  out.p.assign(povm.orbit_count(),
               std::vector<double>(povm.group_order(), 0.0));
  povm.for_each_element([&](int i, int g, const Matrix& element) {
    const double p = (element * state).trace().real();
    out.p[i][g] = std::max(p, 0.0);  // clip Born-rule roundoff
    out.total += out.p[i][g];
  });
  return out;
}

}  // namespace covpovm
