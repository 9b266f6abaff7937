#pragma once

#include <stdexcept>
#include <string>

namespace qgeom {

/// Numerical tolerances shared by all modules.
struct Tolerances {
  double herm = 1e-10;  ///< max |m_ij - conj(m_ji)| accepted as Hermitian
  double psd = 1e-10;   ///< negative eigenvalues above -psd are clipped to zero
  double trace = 1e-12; ///< |Tr rho - 1| accepted for density matrices
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Input that violates a documented precondition (dimension, Hermiticity,
/// positivity, parameter domain).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The metric formula diverges: the tangent has weight on a zero eigenvalue
/// of the base point.
class StratumError : public std::domain_error {
 public:
  StratumError() : std::domain_error("tangent leaves the manifold stratum") {}
  explicit StratumError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace qgeom
