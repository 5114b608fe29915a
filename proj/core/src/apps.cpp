#include "covpovm/apps.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "covpovm/error.hpp"
#include "internal.hpp"

namespace covpovm {

namespace {

/// exp(2*pi*i*exponent/d) with the exponent reduced mod d first, and with
/// quarter-turn values (+1, +i, -1, -i) returned exactly. Small dimensions
/// then produce exact matrices: d = 2 yields exactly {1, Z, X, XZ}.
Complex unit_root(int exponent, int d) {
  const int e = (exponent % d + d) % d;
  if ((4 * e) % d == 0) {
    static constexpr Complex quarter[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return quarter[(4 * e / d) % 4];
  }
  return std::exp(Complex(0.0, 2.0 * std::numbers::pi * e / d));
}

}  // namespace

RepPtr weyl_heisenberg_rep(int d) {
  if (d < 2)
    throw std::invalid_argument("shift-and-phase rep needs dimension >= 2");
  GroupPtr group = build_product_group(cyclic_group(d), cyclic_group(d));
  auto root = [d](int exponent) { return unit_root(exponent, d); };
  std::vector<Matrix> matrices;
  matrices.reserve(static_cast<std::size_t>(d) * d);
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) {
      Matrix u = Matrix::Zero(d, d);
      for (int n = 0; n < d; ++n) u((n + p) % d, n) = root(q * n);
      matrices.push_back(std::move(u));
    }
  }
  return validate_rep(std::move(group), std::move(matrices));
}

Ensemble make_ensemble(std::vector<Matrix> states, std::vector<double> priors,
                       double tol) {
  if (states.size() != priors.size())
    throw Error(ErrorCode::InvalidPriors, "state and prior counts differ");
  if (states.empty())
    throw Error(ErrorCode::InvalidEnsemble, "ensemble is empty");
  double total = 0.0;
  for (std::size_t j = 0; j < priors.size(); ++j) {
    if (priors[j] < -tol)
      throw Error(ErrorCode::InvalidPriors,
                  "prior " + std::to_string(j) + " is negative");
    total += priors[j];
  }
  if (std::abs(total - 1.0) > std::max(tol, 1e-12) * priors.size())
    throw Error(ErrorCode::InvalidPriors,
                "priors sum to " + std::to_string(total));
  const int d = static_cast<int>(states[0].rows());
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Matrix& rho = states[j];
    if (rho.rows() != d || rho.cols() != d)
      throw Error(ErrorCode::InvalidEnsemble,
                  "state " + std::to_string(j) + " has mismatched dimensions");
    if ((rho - rho.adjoint()).norm() > tol * (1.0 + rho.norm()))
      throw Error(ErrorCode::InvalidEnsemble,
                  "state " + std::to_string(j) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.eigenvalues()(0) < -tol * (1.0 + es.eigenvalues()(d - 1)))
      throw Error(ErrorCode::InvalidEnsemble,
                  "state " + std::to_string(j) + " has negative eigenvalue " +
                      std::to_string(es.eigenvalues()(0)));
    if (std::abs(rho.trace().real() - 1.0) > tol * d)
      throw Error(ErrorCode::InvalidEnsemble,
                  "state " + std::to_string(j) + " has trace " +
                      std::to_string(rho.trace().real()));
  }
  return Ensemble{std::move(states), std::move(priors)};
}

Ensemble MubScenario::ensemble() const {
  std::vector<Matrix> states;
  std::vector<double> priors;
  states.reserve(static_cast<std::size_t>(basis_count()) * d);
  priors.reserve(states.capacity());
  for (int l = 0; l < basis_count(); ++l) {
    for (int n = 0; n < d; ++n) {
      const Vector v = bases[l].col(n);
      states.push_back(v * v.adjoint());
      priors.push_back(basis_priors[l] / static_cast<double>(d));
    }
  }
  return make_ensemble(std::move(states), std::move(priors));
}

namespace {

void validate_basis_priors(const std::vector<double>& priors,
                           std::size_t expected) {
  if (priors.size() != expected)
    throw Error(ErrorCode::InvalidPriors,
                "expected " + std::to_string(expected) + " basis priors, got " +
                    std::to_string(priors.size()));
  double total = 0.0;
  for (std::size_t l = 0; l < priors.size(); ++l) {
    if (priors[l] < 0.0)
      throw Error(ErrorCode::InvalidPriors,
                  "basis prior " + std::to_string(l) + " is negative");
    total += priors[l];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidPriors,
                "basis priors sum to " + std::to_string(total));
}

}  // namespace

MubScenario build_mub_scenario(int d, std::vector<double> priors) {
  if (d < 2) throw std::invalid_argument("scenario needs dimension >= 2");
  if (priors.empty()) priors.assign(2, 0.5);
  validate_basis_priors(priors, 2);

  MubScenario scenario;
  scenario.d = d;
  scenario.basis_priors = std::move(priors);
  scenario.rep = weyl_heisenberg_rep(d);

  scenario.bases.push_back(Matrix::Identity(d, d));
  Matrix fourier(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) fourier(m, n) = scale * unit_root(m * n, d);
  scenario.bases.push_back(std::move(fourier));

  // Element (p, q) sits at index p*d + q: the computational basis is fixed by
  // the phase subgroup {(0, q)} and the Fourier basis by the shift subgroup
  // {(p, 0)}.
  std::vector<int> phases(d), shifts(d);
  for (int q = 0; q < d; ++q) phases[q] = q;
  for (int p = 0; p < d; ++p) shifts[p] = p * d;
  scenario.stabilizers.push_back(
      make_subgroup(scenario.rep->group, std::move(phases)));
  scenario.stabilizers.push_back(
      make_subgroup(scenario.rep->group, std::move(shifts)));
  return scenario;
}

MubScenario make_mub_scenario(int d, std::vector<Matrix> bases,
                              std::vector<double> priors, double tol) {
  if (d < 2) throw std::invalid_argument("scenario needs dimension >= 2");
  if (bases.size() < 2)
    throw Error(ErrorCode::InvalidEnsemble, "need at least two bases");
  if (priors.empty())
    priors.assign(bases.size(), 1.0 / static_cast<double>(bases.size()));
  validate_basis_priors(priors, bases.size());
  const Matrix eye = Matrix::Identity(d, d);
  for (std::size_t l = 0; l < bases.size(); ++l) {
    if (bases[l].rows() != d || bases[l].cols() != d)
      throw Error(ErrorCode::DimensionMismatch,
                  "basis " + std::to_string(l) + " is not " +
                      std::to_string(d) + "x" + std::to_string(d));
    if ((bases[l].adjoint() * bases[l] - eye).norm() > tol * d)
      throw Error(ErrorCode::InvalidEnsemble,
                  "basis " + std::to_string(l) + " is not orthonormal");
  }
  const double target = 1.0 / static_cast<double>(d);
  for (std::size_t a = 0; a < bases.size(); ++a)
    for (std::size_t b = a + 1; b < bases.size(); ++b)
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          const double overlap =
              std::norm((bases[a].col(m).adjoint() * bases[b].col(n)).value());
          if (std::abs(overlap - target) > tol * d)
            throw Error(ErrorCode::InvalidEnsemble,
                        "bases " + std::to_string(a) + " and " +
                            std::to_string(b) + " are not unbiased at (" +
                            std::to_string(m) + ", " + std::to_string(n) +
                            ")");
        }

  MubScenario scenario;
  scenario.d = d;
  scenario.bases = std::move(bases);
  scenario.basis_priors = std::move(priors);
  scenario.rep = weyl_heisenberg_rep(d);
  return scenario;  // no stabilizers attached for custom families
}

double bayes_error(const QuotientPovm& povm, const MubScenario& scenario) {
  if (static_cast<int>(povm.elements.size()) != scenario.basis_count())
    throw Error(ErrorCode::OutcomeMismatch,
                "POVM has " + std::to_string(povm.elements.size()) +
                    " orbits, scenario has " +
                    std::to_string(scenario.basis_count()) + " bases");
  double success = 0.0;
  for (int l = 0; l < scenario.basis_count(); ++l) {
    if (static_cast<int>(povm.elements[l].size()) != scenario.d)
      throw Error(ErrorCode::OutcomeMismatch,
                  "orbit " + std::to_string(l) + " has " +
                      std::to_string(povm.elements[l].size()) +
                      " outcomes, expected " + std::to_string(scenario.d));
    const double prior = scenario.basis_priors[l] / scenario.d;
    for (int x = 0; x < scenario.d; ++x) {
      const Vector state = scenario.bases[l].col(x);
      const double p =
          (state.adjoint() * povm.elements[l][x] * state).value().real();
      success += prior * std::max(p, 0.0);
    }
  }
  return 1.0 - success;
}

DiscriminationResult optimal_mub_discrimination(const MubScenario& scenario,
                                                double tol) {
  const int num_bases = scenario.basis_count();
  const int d = scenario.d;

  DiscriminationResult result;
  result.chosen_basis = 0;
  for (int l = 1; l < num_bases; ++l)
    if (scenario.basis_priors[l] >
        scenario.basis_priors[result.chosen_basis])
      result.chosen_basis = l;
  double second = -1.0;
  for (int l = 0; l < num_bases; ++l)
    if (l != result.chosen_basis) second = std::max(second,
                                                    scenario.basis_priors[l]);
  result.degenerate =
      scenario.basis_priors[result.chosen_basis] - second <= 1e-12;

  const bool certified =
      static_cast<int>(scenario.stabilizers.size()) == num_bases;
  if (certified) {
    const IsotypicDecomposition full_dec = decompose(scenario.rep, tol);
    StabilitySetup setup =
        make_stability_setup(scenario.rep, scenario.stabilizers, tol);
    const ConstraintSet s_blocks = build_s_blocks(setup, full_dec);
    std::vector<CosetSpace> cosets;
    cosets.reserve(num_bases);
    for (int l = 0; l < num_bases; ++l)
      cosets.push_back(
          left_cosets(scenario.rep->group, scenario.stabilizers[l]));

    for (int l = 0; l < num_bases; ++l) {
      // Candidate "measure basis l" strategy: seed d |b_0><b_0| on orbit l,
      // zero on every other orbit. The group orbit of that seed is exactly
      // the basis-l projective measurement.
      std::vector<Matrix> full_seeds(num_bases, Matrix::Zero(d, d));
      const Vector anchor = scenario.bases[l].col(0);
      full_seeds[l] = static_cast<double>(d) * (anchor * anchor.adjoint());

      const MultiplicityBlockSeed blocks =
          project_seeds(full_seeds, setup, tol, /*strict=*/true);
      const MembershipReport membership =
          stability_membership(blocks, s_blocks, d, tol);
      if (!membership.member)
        throw Error(ErrorCode::NotNormalized,
                    "candidate basis " + std::to_string(l) +
                        " fails normalization (max residual " +
                        std::to_string(membership.max_residual) + ")");
      const ExtremalityReport extremality =
          stability_extremality(blocks, s_blocks);
      result.candidate_extremal.push_back(extremality.is_extremal);

      QuotientPovm povm = synthesize_quotient_povm(blocks, setup, cosets, tol);
      result.candidate_errors.push_back(bayes_error(povm, scenario));
      if (l == result.chosen_basis) result.povm = std::move(povm);
    }
  } else {
    // Custom bases without stabilizer data: build the candidates directly.
    for (int l = 0; l < num_bases; ++l) {
      QuotientPovm povm;
      povm.elements.assign(num_bases, {});
      for (int i = 0; i < num_bases; ++i)
        for (int x = 0; x < d; ++x) {
          if (i == l) {
            const Vector v = scenario.bases[l].col(x);
            povm.elements[i].push_back(v * v.adjoint());
          } else {
            povm.elements[i].push_back(Matrix::Zero(d, d));
          }
        }
      result.candidate_extremal.push_back(false);  // not certified
      result.candidate_errors.push_back(bayes_error(povm, scenario));
      if (l == result.chosen_basis) result.povm = std::move(povm);
    }
  }

  result.min_error = result.candidate_errors[result.chosen_basis];
  for (int l = 0; l < num_bases; ++l)
    if (result.candidate_errors[l] < result.min_error - 1e-12)
      throw Error(ErrorCode::OutcomeMismatch,
                  "candidate " + std::to_string(l) +
                      " beats the claimed optimum; scenario priors are "
                      "inconsistent");
  return result;
}

namespace {

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

}  // namespace

double mutual_information(const std::vector<Matrix>& povm_elements,
                          const Ensemble& ensemble) {
  if (povm_elements.empty())
    throw Error(ErrorCode::OutcomeMismatch, "POVM has no elements");
  const int d = static_cast<int>(ensemble.states[0].rows());
  for (const Matrix& element : povm_elements)
    if (element.rows() != d || element.cols() != d)
      throw Error(ErrorCode::DimensionMismatch,
                  "POVM element dimension does not match the ensemble");

  const std::size_t labels = ensemble.states.size();
  const std::size_t outcomes = povm_elements.size();
  std::vector<double> joint(labels * outcomes, 0.0);
  std::vector<double> marginal(outcomes, 0.0);
  for (std::size_t j = 0; j < labels; ++j) {
    for (std::size_t o = 0; o < outcomes; ++o) {
      const double p =
          (povm_elements[o] * ensemble.states[j]).trace().real() *
          ensemble.priors[j];
      const double clipped = std::max(p, 0.0);  // Born-rule roundoff
      joint[j * outcomes + o] = clipped;
      marginal[o] += clipped;
    }
  }
  return entropy_bits(ensemble.priors) + entropy_bits(marginal) -
         entropy_bits(joint);
}

double mutual_information(const CovariantPovm& povm,
                          const Ensemble& ensemble) {
  std::vector<Matrix> flat;
  flat.reserve(povm.element_count());
  povm.for_each_element(
      [&](int, int, const Matrix& element) { flat.push_back(element); });
  return mutual_information(flat, ensemble);
}

double mutual_information(const QuotientPovm& povm, const Ensemble& ensemble) {
  return mutual_information(povm.flattened(), ensemble);
}

int orbit_bound(const IsotypicDecomposition& dec) {
  return dec.commutant_dim();
}

}  // namespace covpovm
