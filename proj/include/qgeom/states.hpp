#pragma once

// Validated density matrices and generators for the two-qubit state families.
// Two-qubit basis ordering is |00>, |01>, |10>, |11>.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgeom/matrix.hpp"

namespace qgeom {

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
class DensityMatrix {
 public:
  /// Validates `m`; throws ValidationError naming the first violated invariant.
  static DensityMatrix from_matrix(ComplexMatrix m, const Tolerances& tol = default_tolerances()) {
    if (!m.is_square() || (m.rows() != 2 && m.rows() != 4)) {
      throw ValidationError("DensityMatrix: dimension must be 2 or 4, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    require_hermitian(m, tol.herm, "DensityMatrix");
    const cplx tr = m.trace();
    if (std::abs(tr - cplx{1.0, 0.0}) > tol.trace) {
      throw ValidationError("DensityMatrix: trace " + std::to_string(tr.real()) +
                            " differs from 1");
    }
    const auto values = eigenvalues(m, tol);
    if (values.back() < -tol.psd) {
      throw ValidationError("DensityMatrix: negative eigenvalue " +
                            std::to_string(values.back()));
    }
    return DensityMatrix(std::move(m));
  }

  std::size_t dim() const noexcept { return mat_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return mat_; }

  double purity() const { return hs_inner(mat_, mat_).real(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

/// Maximally mixed state I/n.
inline DensityMatrix maximally_mixed(std::size_t n) {
  return DensityMatrix::from_matrix(ComplexMatrix::identity(n) * (1.0 / static_cast<double>(n)));
}

/// Product state rho_a (x) rho_b.
inline DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) throw ValidationError("product_state: factors must be qubits");
  return DensityMatrix::from_matrix(kron(a.matrix(), b.matrix()));
}

namespace basis {
inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
inline ComplexMatrix ket00() { return ComplexMatrix::projector({1.0, 0.0, 0.0, 0.0}); }
inline ComplexMatrix ket01() { return ComplexMatrix::projector({0.0, 1.0, 0.0, 0.0}); }
inline ComplexMatrix ket11() { return ComplexMatrix::projector({0.0, 0.0, 0.0, 1.0}); }
/// (|01> + |10>)/sqrt2
inline ComplexMatrix psi_plus() {
  return ComplexMatrix::projector({0.0, kInvSqrt2, kInvSqrt2, 0.0});
}
/// (|01> - |10>)/sqrt2
inline ComplexMatrix psi_minus() {
  return ComplexMatrix::projector({0.0, kInvSqrt2, -kInvSqrt2, 0.0});
}
/// (|00> + |11>)/sqrt2
inline ComplexMatrix phi_plus() {
  return ComplexMatrix::projector({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
}
}  // namespace basis

inline DensityMatrix bell_state() { return DensityMatrix::from_matrix(basis::phi_plus()); }

/// Projector onto alpha|00> + beta|11>, beta = sqrt(1 - alpha^2).
/// The endpoints alpha = 0, 1 give product states and need `allow_product`.
inline DensityMatrix pure_schmidt(double alpha, bool allow_product = false) {
  const bool interior = alpha > 0.0 && alpha < 1.0;
  const bool endpoint = alpha == 0.0 || alpha == 1.0;
  if (!(interior || (allow_product && endpoint))) {
    throw ValidationError("pure_schmidt: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  const double beta = std::sqrt(1.0 - alpha * alpha);
  return DensityMatrix::from_matrix(ComplexMatrix::projector({alpha, 0.0, 0.0, beta}));
}

/// Spectral weights of the Ishizaka-Hiroshima mixture on
/// (|psi->, |00>, |psi+>, |11>).
struct MemsWeights {
  double p1, p2, p3, p4;
};

inline DensityMatrix mems_mixture(const MemsWeights& w) {
  ComplexMatrix m = w.p1 * basis::psi_minus() + w.p2 * basis::ket00() +
                    w.p3 * basis::psi_plus() + w.p4 * basis::ket11();
  return DensityMatrix::from_matrix(std::move(m));
}

/// Rank-4 weights with p3 fixed by the MEMS condition p3 = p2 + p4 - sqrt(p2 p4).
inline MemsWeights mems_rank4_weights(double p2, double p4) {
  if (!(p4 > 0.0)) throw ValidationError("mems_rank4: requires p4 > 0");
  if (!(p2 >= p4)) throw ValidationError("mems_rank4: requires p2 >= p4");
  const double p3 = p2 + p4 - std::sqrt(p2 * p4);
  const double p1 = 1.0 - p2 - p3 - p4;
  if (!(p1 >= p2)) {
    throw ValidationError("mems_rank4: requires p1 >= p2 (p1 = " + std::to_string(p1) + ")");
  }
  // p2 >= p3 >= p4 follow from p2 >= p4 > 0 and the MEMS condition.
  return {p1, p2, p3, p4};
}

inline DensityMatrix mems_rank4(double p2, double p4) {
  return mems_mixture(mems_rank4_weights(p2, p4));
}

inline MemsWeights mems_rank3_weights(double p2) {
  if (!(p2 > 0.0)) throw ValidationError("mems_rank3: requires p2 > 0");
  const double p1 = 1.0 - 2.0 * p2;
  if (!(p1 >= p2)) throw ValidationError("mems_rank3: requires p1 >= p2, i.e. p2 <= 1/3");
  return {p1, p2, p2, 0.0};
}

inline DensityMatrix mems_rank3(double p2) { return mems_mixture(mems_rank3_weights(p2)); }

inline MemsWeights mems_rank2_weights(double p1) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw ValidationError("mems_rank2: requires 0 < p1 < 1");
  return {p1, 1.0 - p1, 0.0, 0.0};
}

inline DensityMatrix mems_rank2(double p1) { return mems_mixture(mems_rank2_weights(p1)); }

/// MEMS for negativity at mixedness parameter r in [0, 1].
inline DensityMatrix mjw_mems(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("mjw_mems: requires 0 <= r <= 1");
  const double s = std::sqrt(3.0 * r * r + 1.0);
  const double outer = (1.0 + s) / 6.0;
  const double mid = (4.0 - 2.0 * s) / 6.0;
  ComplexMatrix m(4, 4);
  m(0, 0) = outer;
  m(1, 1) = mid;
  m(3, 3) = outer;
  m(0, 3) = r / 2.0;
  m(3, 0) = r / 2.0;
  return DensityMatrix::from_matrix(std::move(m));
}

/// p |psi><psi| + (1-p)|01><01| with psi = alpha|00> + beta|11>.
inline DensityMatrix nmems(double p, double alpha) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("nmems: requires 0 < p <= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("nmems: requires 0 < alpha < 1");
  const double beta = std::sqrt(1.0 - alpha * alpha);
  ComplexMatrix m = p * ComplexMatrix::projector({alpha, 0.0, 0.0, beta}) + (1.0 - p) * basis::ket01();
  return DensityMatrix::from_matrix(std::move(m));
}

/// Reduced single-qubit state.
inline DensityMatrix reduce(const DensityMatrix& rho, Subsystem keep,
                            const Tolerances& tol = default_tolerances()) {
  if (rho.dim() != 4) throw ValidationError("reduce: expected a two-qubit state");
  return DensityMatrix::from_matrix(partial_trace(rho.matrix(), keep), tol);
}

// ---------------------------------------------------------------------------
// Family descriptors

enum class Family { PureSchmidt, MemsRank4, MemsRank3, MemsRank2, MjwMems, Nmems, Bell };

struct FamilyInfo {
  Family family;
  std::string_view name;  ///< CLI identifier
  std::vector<std::string_view> params;
};

inline const std::vector<FamilyInfo>& family_table() {
  static const std::vector<FamilyInfo> table = {
      {Family::PureSchmidt, "pure", {"alpha"}},
      {Family::MemsRank4, "mems4", {"p2", "p4"}},
      {Family::MemsRank3, "mems3", {"p2"}},
      {Family::MemsRank2, "mems2", {"p1"}},
      {Family::MjwMems, "mjw", {"r"}},
      {Family::Nmems, "nmems", {"p", "alpha"}},
      {Family::Bell, "bell", {}},
  };
  return table;
}

inline const FamilyInfo& family_info(Family f) {
  for (const auto& info : family_table())
    if (info.family == f) return info;
  throw ValidationError("unknown family");
}

inline std::optional<Family> family_from_name(std::string_view name) {
  for (const auto& info : family_table())
    if (info.name == name) return info.family;
  return std::nullopt;
}

/// A family together with concrete parameter values.
struct FamilyDescriptor {
  Family family;
  std::map<std::string, double> params;

  double param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) {
      throw ValidationError("family '" + std::string(family_info(family).name) +
                            "' requires parameter --" + name);
    }
    return it->second;
  }
};

inline DensityMatrix generate(const FamilyDescriptor& d) {
  switch (d.family) {
    case Family::PureSchmidt: return pure_schmidt(d.param("alpha"));
    case Family::MemsRank4: return mems_rank4(d.param("p2"), d.param("p4"));
    case Family::MemsRank3: return mems_rank3(d.param("p2"));
    case Family::MemsRank2: return mems_rank2(d.param("p1"));
    case Family::MjwMems: return mjw_mems(d.param("r"));
    case Family::Nmems: return nmems(d.param("p"), d.param("alpha"));
    case Family::Bell: return bell_state();
  }
  throw ValidationError("unknown family");
}

}  // namespace qgeom
