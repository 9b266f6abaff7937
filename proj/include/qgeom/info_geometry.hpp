#pragma once

// Monotone Riemannian metrics on density matrices in Morozova-Cencov form,
//
//   K_rho(A, A) = C sum_i A'_ii^2 / l_i + 2 sum_{i<j} |A'_ij|^2 c(l_i, l_j),
//
// where rho = U diag(l) U^dagger and A' = U^dagger A U; together with the
// tangent construction i[rho, K] and Kraus channels for contraction checks.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgeom/states.hpp"

namespace qgeom {

/// Traceless Hermitian matrix: a tangent direction at a state of dimension `base_dim`.
class TangentVector {
 public:
  static TangentVector from_matrix(ComplexMatrix m, const Tolerances& tol = default_tolerances()) {
    require_hermitian(m, tol.herm, "TangentVector");
    const double scale = std::max(1.0, max_abs(m));
    if (std::abs(m.trace()) >= 1e-12 * scale) {
      throw ValidationError("TangentVector: trace " + std::to_string(std::abs(m.trace())) +
                            " is not zero");
    }
    return TangentVector(std::move(m));
  }

  static TangentVector zero(std::size_t dim) { return TangentVector(ComplexMatrix(dim, dim)); }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t base_dim() const noexcept { return mat_.rows(); }

 private:
  explicit TangentVector(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

/// i[rho, k] as a tangent at rho.
inline TangentVector tangent_from_generator(const DensityMatrix& rho, const ComplexMatrix& k,
                                            const Tolerances& tol = default_tolerances()) {
  if (k.rows() != rho.dim() || k.cols() != rho.dim()) {
    throw ValidationError("tangent_from_generator: generator dimension does not match the state");
  }
  return TangentVector::from_matrix(commutator_i(rho.matrix(), k, tol), tol);
}

// ---------------------------------------------------------------------------
// Morozova-Cencov functions

/// A Morozova-Cencov function c(l, m) and the constant C of its diagonal law
/// c(l, l) = C / l.
struct MCFunction {
  std::string name;
  std::function<double(double, double)> c;
  double big_c = 1.0;

  double operator()(double l, double m) const { return c(l, m); }
};

/// c(l, m) = 2 / (l + m); C = 1.
inline MCFunction mc_symmetric_mean() {
  return {"morozova-cencov", [](double l, double m) { return 2.0 / (l + m); }, 1.0};
}

/// c(l, m) = 4 / (sqrt l + sqrt m)^2; C = 1.
inline MCFunction mc_wigner_yanase() {
  return {"wigner-yanase",
          [](double l, double m) {
            const double s = std::sqrt(l) + std::sqrt(m);
            return 4.0 / (s * s);
          },
          1.0};
}

/// c(l, m) = (log l - log m) / (l - m); C = 1.
inline MCFunction mc_kubo_mori() {
  return {"kubo-mori",
          [](double l, double m) {
            const double sum = l + m;
            const double d = (l - m) / sum;
            // log(l/m) = 2 atanh(d), l - m = d (l + m)
            if (std::abs(d) < 1e-4) {
              const double d2 = d * d;
              return 2.0 * (1.0 + d2 / 3.0 + d2 * d2 / 5.0) / sum;
            }
            // Near |d| = 1 atanh amplifies the rounding in d; the ratio is safe there.
            if (std::abs(d) > 0.5) return std::log(l / m) / (l - m);
            return 2.0 * std::atanh(d) / (d * sum);
          },
          1.0};
}

inline MCFunction default_mc_function() { return mc_symmetric_mean(); }

inline std::vector<MCFunction> mc_function_registry() {
  return {mc_symmetric_mean(), mc_wigner_yanase(), mc_kubo_mori()};
}

inline std::optional<MCFunction> find_mc_function(std::string_view name) {
  for (auto& f : mc_function_registry())
    if (f.name == name) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Metric evaluation

/// The two sums of the metric formula, kept separate.
struct MetricTerms {
  double diagonal = 0.0;
  double off_diagonal = 0.0;
  double total() const { return diagonal + off_diagonal; }
};

namespace detail {

constexpr double kNegligibleComponent = 1e-14;

struct Rotated {
  std::vector<double> lambda;
  ComplexMatrix a;
  ComplexMatrix b;
};

inline Rotated rotate_to_eigenbasis(const DensityMatrix& rho, const TangentVector& a,
                                    const TangentVector& b, const Tolerances& tol) {
  if (a.base_dim() != rho.dim() || b.base_dim() != rho.dim()) {
    throw ValidationError("metric: tangent dimension does not match the base point");
  }
  auto eig = herm_eig(rho.matrix(), tol);
  const ComplexMatrix ud = eig.basis.adjoint();
  Rotated r{std::move(eig.values), ud * a.matrix() * eig.basis, ud * b.matrix() * eig.basis};
  for (double& l : r.lambda) l = l <= tol.psd ? 0.0 : l;
  return r;
}

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw StratumError(std::string("tangent leaves the manifold stratum (") + what + ")");
  return v;
}

}  // namespace detail

/// Sesquilinear form K_rho(a, b). Real for Hermitian tangents.
inline cplx metric_form(const DensityMatrix& rho, const TangentVector& a, const TangentVector& b,
                        const MCFunction& f = default_mc_function(),
                        const Tolerances& tol = default_tolerances()) {
  using detail::kNegligibleComponent;
  const auto r = detail::rotate_to_eigenbasis(rho, a, b, tol);
  const std::size_t n = r.lambda.size();
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ai = r.a(i, i), bi = r.b(i, i);
    if (std::abs(ai) < kNegligibleComponent || std::abs(bi) < kNegligibleComponent) continue;
    if (r.lambda[i] == 0.0) throw StratumError();
    sum += f.big_c / r.lambda[i] * std::conj(ai) * bi;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx pair{0.0, 0.0};
      bool used = false;
      for (auto [p, q] : {std::pair{i, j}, std::pair{j, i}}) {
        const cplx ap = r.a(p, q), bp = r.b(p, q);
        if (std::abs(ap) < kNegligibleComponent || std::abs(bp) < kNegligibleComponent) continue;
        pair += std::conj(ap) * bp;
        used = true;
      }
      if (!used) continue;
      if (r.lambda[i] == 0.0 && r.lambda[j] == 0.0) throw StratumError();
      sum += pair * detail::checked(f(r.lambda[i], r.lambda[j]), "c(l, m) diverges");
    }
  return sum;
}

/// Both sums of K_rho(a, a).
inline MetricTerms metric_terms(const DensityMatrix& rho, const TangentVector& a,
                                const MCFunction& f = default_mc_function(),
                                const Tolerances& tol = default_tolerances()) {
  using detail::kNegligibleComponent;
  const auto r = detail::rotate_to_eigenbasis(rho, a, a, tol);
  const std::size_t n = r.lambda.size();
  MetricTerms t;
  for (std::size_t i = 0; i < n; ++i) {
    const double aii = r.a(i, i).real();
    if (std::abs(r.a(i, i)) < kNegligibleComponent) continue;
    if (r.lambda[i] == 0.0) throw StratumError();
    t.diagonal += f.big_c * aii * aii / r.lambda[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double mag2 = std::norm(r.a(i, j));
      if (std::abs(r.a(i, j)) < kNegligibleComponent) continue;
      if (r.lambda[i] == 0.0 && r.lambda[j] == 0.0) throw StratumError();
      t.off_diagonal += 2.0 * mag2 * detail::checked(f(r.lambda[i], r.lambda[j]), "c(l, m) diverges");
    }
  return t;
}

/// K_rho(a, a) >= 0.
inline double metric_eval(const DensityMatrix& rho, const TangentVector& a,
                          const MCFunction& f = default_mc_function(),
                          const Tolerances& tol = default_tolerances()) {
  return metric_terms(rho, a, f, tol).total();
}

// ---------------------------------------------------------------------------
// Channels

/// CPTP map given by Kraus operators with sum K_i^dagger K_i = I.
class KrausChannel {
 public:
  static KrausChannel from_ops(std::vector<ComplexMatrix> ops, std::string name = "kraus") {
    if (ops.empty()) throw ValidationError("KrausChannel: no Kraus operators");
    const std::size_t n = ops.front().rows();
    ComplexMatrix sum(n, n);
    for (const auto& k : ops) {
      if (k.rows() != n || k.cols() != n) {
        throw ValidationError("KrausChannel: Kraus operators must be square of equal dimension");
      }
      sum += k.adjoint() * k;
    }
    const double defect = max_abs_diff(sum, ComplexMatrix::identity(n));
    if (defect > 1e-12) {
      throw ValidationError("KrausChannel: completeness violated (defect " +
                            std::to_string(defect) + ")");
    }
    return KrausChannel(std::move(ops), std::move(name));
  }

  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }
  std::size_t dim() const noexcept { return ops_.front().rows(); }
  const std::string& name() const noexcept { return name_; }

 private:
  KrausChannel(std::vector<ComplexMatrix> ops, std::string name)
      : ops_(std::move(ops)), name_(std::move(name)) {}
  std::vector<ComplexMatrix> ops_;
  std::string name_;
};

/// sum_i K_i m K_i^dagger
inline ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& m) {
  if (m.rows() != ch.dim() || m.cols() != ch.dim()) {
    throw ValidationError("apply_channel: operand dimension does not match the channel");
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (const auto& k : ch.kraus_ops()) out += k * m * k.adjoint();
  return out;
}

inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho,
                                   const Tolerances& tol = default_tolerances()) {
  return DensityMatrix::from_matrix(apply_channel(ch, rho.matrix()), tol);
}

inline TangentVector apply_channel(const KrausChannel& ch, const TangentVector& a,
                                   const Tolerances& tol = default_tolerances()) {
  return TangentVector::from_matrix(apply_channel(ch, a.matrix()), tol);
}

/// The channel acting independently on each qubit of a two-qubit system.
inline KrausChannel local_product(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> ops;
  for (const auto& ka : a.kraus_ops())
    for (const auto& kb : b.kraus_ops()) ops.push_back(kron(ka, kb));
  return KrausChannel::from_ops(std::move(ops), a.name() + "(x)" + b.name());
}

enum class ChannelKind { Identity, Depolarizing, Dephasing, AmplitudeDamping, BitFlip };

inline std::string_view channel_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::Identity: return "identity";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::Dephasing: return "dephasing";
    case ChannelKind::AmplitudeDamping: return "amplitude-damping";
    case ChannelKind::BitFlip: return "bit-flip";
  }
  return "unknown";
}

inline std::optional<ChannelKind> channel_kind_from_name(std::string_view name) {
  for (auto k : {ChannelKind::Identity, ChannelKind::Depolarizing, ChannelKind::Dephasing,
                 ChannelKind::AmplitudeDamping, ChannelKind::BitFlip})
    if (channel_name(k) == name) return k;
  return std::nullopt;
}

/// Qubit channel of the given kind; `q` is the strength (gamma for amplitude damping).
inline KrausChannel make_qubit_channel(ChannelKind kind, double q = 0.0) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("channel parameter must lie in [0, 1]");
  const ComplexMatrix id = ComplexMatrix::identity(2);
  std::vector<ComplexMatrix> ops;
  switch (kind) {
    case ChannelKind::Identity:
      ops = {id};
      break;
    case ChannelKind::Depolarizing: {
      const double w = std::sqrt(q) / 2.0;
      ops = {std::sqrt(1.0 - 0.75 * q) * id, w * pauli_x(), w * pauli_y(), w * pauli_z()};
      break;
    }
    case ChannelKind::Dephasing:
      ops = {std::sqrt(1.0 - q) * id, std::sqrt(q) * pauli_z()};
      break;
    case ChannelKind::AmplitudeDamping:
      ops = {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - q)}},
             ComplexMatrix{{0.0, std::sqrt(q)}, {0.0, 0.0}}};
      break;
    case ChannelKind::BitFlip:
      ops = {std::sqrt(1.0 - q) * id, std::sqrt(q) * pauli_x()};
      break;
  }
  return KrausChannel::from_ops(std::move(ops), std::string(channel_name(kind)));
}

/// Depolarizing, dephasing, amplitude-damping and bit-flip channels at strength q.
inline std::vector<KrausChannel> builtin_channels(double q) {
  return {make_qubit_channel(ChannelKind::Depolarizing, q),
          make_qubit_channel(ChannelKind::Dephasing, q),
          make_qubit_channel(ChannelKind::AmplitudeDamping, q),
          make_qubit_channel(ChannelKind::BitFlip, q)};
}

// ---------------------------------------------------------------------------
// Contraction under channels

enum class MonotonicityMode {
  Standard,  ///< K_{L(rho)}(L(a), L(a)) <= K_rho(a, a)
  Literal,   ///< K_{L(rho)}(a, a) <= K_rho(a, a); not a theorem, comparison only
};

struct MonotonicityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool skipped = false;  ///< the mapped tangent hits a zero eigenvalue of L(rho)
  std::string note;
};

inline MonotonicityReport monotonicity_check(const DensityMatrix& rho, const TangentVector& a,
                                             const KrausChannel& ch,
                                             const MCFunction& f = default_mc_function(),
                                             MonotonicityMode mode = MonotonicityMode::Standard,
                                             const Tolerances& tol = default_tolerances()) {
  MonotonicityReport rep;
  const DensityMatrix mapped = apply_channel(ch, rho, tol);
  const TangentVector mapped_a = mode == MonotonicityMode::Standard ? apply_channel(ch, a, tol) : a;
  try {
    rep.rhs = metric_eval(rho, a, f, tol);
    rep.lhs = metric_eval(mapped, mapped_a, f, tol);
  } catch (const StratumError& e) {
    rep.skipped = true;
    rep.note = e.what();
    return rep;
  }
  rep.holds = rep.lhs <= rep.rhs + 1e-10;
  return rep;
}

}  // namespace qgeom
