#pragma once

#include <vector>

#include "covpovm/stability.hpp"

namespace covpovm {

/// Shift-and-phase (generalized Pauli) projective representation of
/// Z_d x Z_d on C^d: U_{(p,q)} = sum_n omega^{qn} |n+p mod d><n| with
/// omega = exp(2 pi i / d). The matrices are exactly unitary with this
/// normalization — no scalar prefactor — and the representation is
/// irreducible for every d >= 2. Element (p, q) sits at group index p*d + q.
RepPtr weyl_heisenberg_rep(int d);

struct Ensemble {
  std::vector<Matrix> states;   // density matrices, one per label
  std::vector<double> priors;  // nonnegative, sum 1

  int size() const { return static_cast<int>(states.size()); }
};

/// Validates dimensions, priors (Error{InvalidPriors}) and state positivity /
/// unit trace (Error{InvalidEnsemble}).
Ensemble make_ensemble(std::vector<Matrix> states, std::vector<double> priors,
                       double tol = kDefaultTol);

/// Discrimination scenario: L mutually unbiased bases of C^d, basis l drawn
/// with prior p_l and its d states uniformly within it. The signal orbit
/// structure matches the shift-and-phase representation, with one stability
/// subgroup per basis.
struct MubScenario {
  int d = 0;
  std::vector<Matrix> bases;         // each d x d unitary; columns are states
  std::vector<double> basis_priors;  // state (l, n) has prior p_l / d
  RepPtr rep;                        // shift-and-phase representation
  std::vector<Subgroup> stabilizers; // per basis; may be empty for custom bases

  int basis_count() const { return static_cast<int>(bases.size()); }
  Ensemble ensemble() const;  // all L*d states, flattened basis-major
};

/// The computational + Fourier pair: basis 0 is the standard basis (stabilized
/// by the phase subgroup {(0, q)}), basis 1 the Fourier basis (stabilized by
/// the shift subgroup {(p, 0)}).
MubScenario build_mub_scenario(int d, std::vector<double> priors);

/// Extension hook for user-supplied families: validates each basis is unitary
/// and every cross pair is unbiased, |<b_m | b'_n>|^2 = 1/d within tol * d.
/// No stabilizer subgroups are attached. Throws Error{InvalidEnsemble} on a
/// non-unbiased pair.
MubScenario make_mub_scenario(int d, std::vector<Matrix> bases,
                              std::vector<double> priors,
                              double tol = kDefaultTol);

struct DiscriminationResult {
  int chosen_basis = 0;
  double min_error = 0.0;
  bool degenerate = false;  // top priors tie within 1e-12
  QuotientPovm povm;        // the optimal measurement
  std::vector<double> candidate_errors;  // per candidate basis
  std::vector<bool> candidate_extremal;  // certification per candidate
};

/// Minimum-error discrimination of the scenario's pooled states: the optimal
/// covariant strategy measures the highest-prior basis orthogonally, giving
/// error 1 - max_l p_l. Every candidate "measure basis l" strategy is built
/// through the stability machinery, certified extremal in the reduced convex
/// set, and scored by exact Bayes error; the claimed optimum must win the
/// comparison or Error{OutcomeMismatch} is thrown.
DiscriminationResult optimal_mub_discrimination(const MubScenario& scenario,
                                                double tol = kDefaultTol);

/// Error probability of a quotient-space POVM under the identification rule
/// outcome (l, x) -> signal (l, x).
double bayes_error(const QuotientPovm& povm, const MubScenario& scenario);

/// Shannon mutual information, in bits, between the ensemble label and the
/// measurement outcome: I = H(priors) + H(outcomes) - H(joint), with the
/// 0 log 0 = 0 convention. Always >= 0 up to roundoff, and concave in the
/// ensemble / convex in the POVM mixtures.
double mutual_information(const std::vector<Matrix>& povm_elements,
                          const Ensemble& ensemble);
double mutual_information(const CovariantPovm& povm, const Ensemble& ensemble);
double mutual_information(const QuotientPovm& povm, const Ensemble& ensemble);

/// Upper bound sum_mu m_mu^2 on the number of seed orbits an extremal
/// covariant POVM ever needs; a single orbit suffices whenever the
/// representation is irreducible.
int orbit_bound(const IsotypicDecomposition& dec);

}  // namespace covpovm
