#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace covpovm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default tolerance for validation checks (unitarity, cocycle residuals,
/// positivity, normalization, completeness). Each check scales it by the
/// natural size of the quantity under test — typically the Hilbert space
/// dimension or 1 + the operator norm — so the bound is meaningful for both
/// tiny and large inputs.
inline constexpr double kDefaultTol = 1e-9;

/// Relative singular-value cutoff used for every numerical rank decision:
/// sigma is significant iff sigma > max(rows, cols) * sigma_max * kRankRelTol.
/// A single rank semantics is used across factorization, spanning tests,
/// perturbation search and the uniqueness oracle so their verdicts agree.
inline constexpr double kRankRelTol = 1e-10;

/// Relative eigenvalue-gap threshold (w.r.t. the spectral diameter) used when
/// clustering the spectrum of a group-averaged probe into invariant blocks.
inline constexpr double kClusterRelTol = 1e-8;

/// Maximum residual |Tr[F Q]| (relative to the witness norm) a perturbation
/// witness may leave on any projected constraint and still be accepted.
inline constexpr double kWitnessTol = 1e-8;

/// Materializing a full POVM element table is refused above this many complex
/// entries; callers must stream through for_each_element instead.
inline constexpr std::size_t kElementCap = 10'000'000;

}  // namespace covpovm
