#pragma once

// Dense complex matrices and the small-matrix spectral kernels (dimension <= 4)
// used throughout the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/config.hpp"

namespace qgeom {

using cplx = std::complex<double>;

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, cplx{0.0, 0.0}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw ValidationError("ComplexMatrix: entry count " +
                            std::to_string(entries_.size()) + " != " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  /// Builds a matrix from nested row lists; all rows must have equal length.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ValidationError("ComplexMatrix: ragged rows");
      entries_.insert(entries_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  /// |v><v| for a column vector given as amplitudes.
  static ComplexMatrix projector(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  static ComplexMatrix projector(std::initializer_list<cplx> v) {
    return projector(std::span<const cplx>(v.begin(), v.size()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const cplx> entries() const noexcept { return entries_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  /// Entrywise complex conjugate in the computational basis.
  ComplexMatrix conjugate() const {
    ComplexMatrix r = *this;
    for (auto& z : r.entries_) z = std::conj(z);
    return r;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : entries_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx{s, 0.0}; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx{s, 0.0}; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw ValidationError("ComplexMatrix product: inner dimensions differ");
    }
    ComplexMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw ValidationError(std::string("ComplexMatrix ") + op + ": shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

/// Largest entrywise modulus of a - b. Shapes must agree.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

// Pauli matrices.
inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return {{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

/// Max |m_ij - conj(m_ji)|; infinite for non-square input.
inline double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = default_tolerances().herm) {
  return hermiticity_defect(m) <= tol;
}

inline void require_hermitian(const ComplexMatrix& m, double tol, const char* who) {
  const double d = hermiticity_defect(m);
  if (!(d <= tol)) {
    throw ValidationError(std::string(who) + ": matrix is not Hermitian (max asymmetry " +
                          std::to_string(d) + ")");
  }
}

/// Hilbert-Schmidt inner product Tr(x^dagger y).
inline cplx hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (!x.is_square() || x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ValidationError("hs_inner: operands must be square of equal dimension");
  }
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < x.entries().size(); ++k)
    s += std::conj(x.entries()[k]) * y.entries()[k];
  return s;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

/// Spectrum of a Hermitian matrix: values descending, eigenvectors in the
/// columns of `basis`.
struct EigenDecomposition {
  std::vector<double> values;
  ComplexMatrix basis;

  ComplexMatrix reconstruct() const {
    return basis * ComplexMatrix::diagonal(values) * basis.adjoint();
  }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Complex Jacobi rotation G (acting on coordinates p, q) that diagonalises the
// Hermitian 2x2 block [[app, apq], [conj(apq), aqq]] as G^dagger block G.
// The phase of apq is absorbed first so the remaining problem is real symmetric.
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
  cplx phase{1.0, 0.0};

  JacobiRotation(double app, double aqq, cplx apq) {
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    phase = apq / mag;
    const double theta = (aqq - app) / (2.0 * mag);
    const double t =
        (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    c = 1.0 / std::sqrt(t * t + 1.0);
    s = t * c;
  }

  // G = D R, D = diag(1, conj(phase)), R = [[c, s], [-s, c]].
  cplx g_pp() const { return c; }
  cplx g_pq() const { return s; }
  cplx g_qp() const { return -s * std::conj(phase); }
  cplx g_qq() const { return c * std::conj(phase); }

  /// Columns p, q of m replaced by those of m G.
  void apply_right(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const cplx mp = m(i, p), mq = m(i, q);
      m(i, p) = mp * g_pp() + mq * g_qp();
      m(i, q) = mp * g_pq() + mq * g_qq();
    }
  }
};

inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  if (a(p, q) == cplx{0.0, 0.0}) return;
  const JacobiRotation rot(a(p, p).real(), a(q, q).real(), a(p, q));
  // a <- G^dagger a G
  rot.apply_right(a, p, q);
  ComplexMatrix at = a.adjoint();
  rot.apply_right(at, p, q);
  a = at.adjoint();
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) = a(i, i).real();
  rot.apply_right(v, p, q);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for small Hermitian matrices.
inline EigenDecomposition herm_eig(const ComplexMatrix& m,
                                   const Tolerances& tol = default_tolerances()) {
  require_hermitian(m, tol.herm, "herm_eig");
  const std::size_t n = m.rows();

  // Work on the exactly Hermitian part.
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double stop = 1e-14 * std::max(1.0, frobenius_norm(a));
  for (int sweep = 0; sweep < 64 && detail::off_diagonal_norm(a) >= stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out;
  out.values.reserve(n);
  out.basis = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(a(order[k], order[k]).real());
    for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = v(i, order[k]);
  }
  return out;
}

inline std::vector<double> eigenvalues(const ComplexMatrix& m,
                                       const Tolerances& tol = default_tolerances()) {
  return herm_eig(m, tol).values;
}

enum class Subsystem { First = 1, Second = 2 };

namespace detail {
inline void require_two_qubit(const ComplexMatrix& m, const char* who) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw ValidationError(std::string(who) + ": expected a 4x4 two-qubit operator, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}
}  // namespace detail

/// Partial trace of a 2x2 (x) 2x2 operator in |a1 a2> row-major ordering,
/// keeping the indicated factor.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep) {
  detail::require_two_qubit(m, "partial_trace");
  ComplexMatrix r(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == Subsystem::First) {
          r(i, j) += m(2 * i + k, 2 * j + k);
        } else {
          r(i, j) += m(2 * k + i, 2 * k + j);
        }
      }
  return r;
}

/// Transpose on the indices of one tensor factor only.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, Subsystem part) {
  detail::require_two_qubit(m, "partial_transpose");
  ComplexMatrix r(4, 4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t d = 0; d < 2; ++d) {
          // <a b| m |c d>
          const cplx x = m(2 * a + b, 2 * c + d);
          if (part == Subsystem::First) {
            r(2 * c + b, 2 * a + d) = x;
          } else {
            r(2 * a + d, 2 * c + b) = x;
          }
        }
  return r;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& m, const Tolerances& tol = default_tolerances()) {
  double s = 0.0;
  for (double v : herm_eig(m, tol).values) s += std::abs(v);
  return s;
}

/// Hermitian PSD square root; eigenvalues in [-tol.psd, 0) are clipped.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerances& tol = default_tolerances()) {
  auto eig = herm_eig(m, tol);
  for (double& v : eig.values) {
    if (v < -tol.psd) {
      throw ValidationError("psd_sqrt: eigenvalue " + std::to_string(v) +
                            " below -tol_psd");
    }
    v = std::sqrt(std::max(v, 0.0));
  }
  return eig.reconstruct();
}

/// Singular values (descending) by one-sided Jacobi orthogonalisation of the
/// columns. Small singular values keep absolute accuracy ~ eps * ||m||, unlike
/// square roots of the eigenvalues of m^dagger m.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  ComplexMatrix u = m;
  const std::size_t n = u.cols();
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{0.0, 0.0};
        for (std::size_t i = 0; i < u.rows(); ++i) {
          alpha += std::norm(u(i, p));
          beta += std::norm(u(i, q));
          gamma += std::conj(u(i, p)) * u(i, q);
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        detail::JacobiRotation(alpha, beta, gamma).apply_right(u, p, q);
        rotated = true;
      }
    if (!rotated) break;
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) s += std::norm(u(i, j));
    out[j] = std::sqrt(s);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// i (rho k - k rho). For Hermitian rho and k the result is Hermitian and traceless.
inline ComplexMatrix commutator_i(const ComplexMatrix& rho, const ComplexMatrix& k,
                                  const Tolerances& tol = default_tolerances()) {
  if (!rho.is_square() || rho.rows() != k.rows() || rho.cols() != k.cols()) {
    throw ValidationError("commutator_i: operands must be square of equal dimension");
  }
  require_hermitian(rho, tol.herm, "commutator_i (rho)");
  require_hermitian(k, tol.herm, "commutator_i (generator)");
  ComplexMatrix r = cplx{0.0, 1.0} * (rho * k - k * rho);
  // Scale-aware post-conditions; these can only fail on non-finite input.
  const double scale = std::max(1.0, max_abs(rho) * max_abs(k));
  if (hermiticity_defect(r) > tol.herm * scale || std::abs(r.trace()) > 1e-12 * scale) {
    throw ValidationError("commutator_i: result is not a traceless Hermitian matrix");
  }
  return r;
}

}  // namespace qgeom
