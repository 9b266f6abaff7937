#pragma once

// Two-qubit entanglement measures.

#include <algorithm>
#include <array>
#include <cmath>

#include "qgeom/states.hpp"

namespace qgeom {

namespace detail {
inline void require_two_qubit_state(const DensityMatrix& rho, const char* who) {
  if (rho.dim() != 4) throw ValidationError(std::string(who) + ": expected a two-qubit state");
}
inline double clip_tiny_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }
}  // namespace detail

/// (||rho^{T_A}||_1 - 1) / 2, in [0, 1/2].
inline double negativity(const DensityMatrix& rho, Subsystem part = Subsystem::First,
                         const Tolerances& tol = default_tolerances()) {
  detail::require_two_qubit_state(rho, "negativity");
  const double n = (trace_norm(partial_transpose(rho.matrix(), part), tol) - 1.0) / 2.0;
  return detail::clip_tiny_negative(n);
}

/// (sy (x) sy) rho* (sy (x) sy)
inline ComplexMatrix spin_flip(const DensityMatrix& rho) {
  detail::require_two_qubit_state(rho, "spin_flip");
  const ComplexMatrix yy = kron(pauli_y(), pauli_y());
  return yy * rho.matrix().conjugate() * yy;
}

/// Descending spectrum of sqrt(rho) rho~ sqrt(rho); it coincides with the
/// spectrum of rho rho~.
inline std::array<double, 4> concurrence_spectrum(const DensityMatrix& rho,
                                                  const Tolerances& tol = default_tolerances()) {
  detail::require_two_qubit_state(rho, "concurrence");
  const ComplexMatrix root = psd_sqrt(rho.matrix(), tol);
  const ComplexMatrix m = root * spin_flip(rho) * root;
  const auto values = eigenvalues(m, tol);
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (values[i] < -tol.psd) {
      throw ValidationError("concurrence: spectrum has a negative eigenvalue");
    }
    out[i] = std::max(values[i], 0.0);
  }
  return out;
}

/// sqrt(rho) (sy (x) sy) conj(sqrt(rho)). Its singular values are the square
/// roots of the spectrum of sqrt(rho) rho~ sqrt(rho), since tau tau^dagger
/// equals that matrix.
inline ComplexMatrix concurrence_factor(const DensityMatrix& rho,
                                        const Tolerances& tol = default_tolerances()) {
  detail::require_two_qubit_state(rho, "concurrence");
  const ComplexMatrix root = psd_sqrt(rho.matrix(), tol);
  return root * kron(pauli_y(), pauli_y()) * root.conjugate();
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}, in [0, 1].
inline double concurrence(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) {
  const auto l = singular_values(concurrence_factor(rho, tol));
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace qgeom
