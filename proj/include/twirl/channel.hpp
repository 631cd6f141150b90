#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twirl/decompose.hpp"

namespace twirl {

inline constexpr double kDefaultChannelTolerance = 1e-9;
inline constexpr double kChoiRankRel = 1e-8;

struct ChannelCertificate {
  double tp_defect = 0.0;         // ‖Σ A*A − I‖ (spectral)
  double min_choi_eigenvalue = 0.0;
  double choi_norm = 0.0;
  double form_mismatch = 0.0;     // ‖C(kraus) − C(stored)‖_F when both forms exist
  bool trace_preserving = false;
  bool completely_positive = false;
  bool pass = false;
};

/// CPTP map B(C^in) → B(C^out) held as Kraus operators (out × in) and/or a
/// Choi matrix. Choi convention: C = [Φ(E_ij)]_{i,j}, block (i, j) of size
/// out × out, so C = Σ_k vec(A_k) vec(A_k)* with column-major vec.
class QuantumChannel {
 public:
  /// Throws not-trace-preserving when the TP defect exceeds tol.
  static QuantumChannel from_kraus(std::vector<Matrix> kraus, double tol = kDefaultChannelTolerance);
  /// Throws not-completely-positive or not-trace-preserving.
  static QuantumChannel from_choi(Matrix choi, int in_dim, int out_dim, double tol = kDefaultChannelTolerance);
  /// Both forms; also checks they describe the same map.
  static QuantumChannel from_both(std::vector<Matrix> kraus, Matrix choi, double tol = kDefaultChannelTolerance);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  double tolerance() const { return tol_; }
  const std::optional<std::vector<Matrix>>& kraus() const { return kraus_; }
  const std::optional<Matrix>& stored_choi() const { return choi_; }
  const ChannelCertificate& certificate() const { return cert_; }

  /// Σᵢ Aᵢ T Aᵢ* (or the Choi contraction when no Kraus form is stored).
  Matrix apply(const Matrix& t) const;

 private:
  QuantumChannel() = default;
  void certify();

  int in_ = 0;
  int out_ = 0;
  double tol_ = kDefaultChannelTolerance;
  std::optional<std::vector<Matrix>> kraus_;
  std::optional<Matrix> choi_;
  ChannelCertificate cert_;
};

Matrix choi_matrix(const QuantumChannel& phi);
/// Choi of an arbitrary Kraus list (no TP requirement).
Matrix choi_from_kraus(const std::vector<Matrix>& kraus, int in_dim, int out_dim);

struct ChoiRankReport {
  int rank = 0;
  std::vector<double> spectrum;  // descending nonzero-candidate singular values of C
  double gap_orders = 0.0;       // log10(σ_r / σ_{r+1}); infinite if σ_{r+1} = 0
};

/// Singular values of C taken from the Kraus Gram matrix when Kraus operators
/// exist (C = W W*, W = [vec A_k]), else from the Hermitian spectrum of C.
ChoiRankReport choi_rank_report(const QuantumChannel& phi);
int choi_rank(const QuantumChannel& phi);

/// Minimal Kraus set from the eigenpairs of C above the relative threshold.
std::vector<Matrix> kraus_from_choi(const QuantumChannel& phi);

/// Φ_π(T) = (1/|G|) Σ π(g) T π(g)⁻¹ or the bimodule map
/// Φ_{π,σ}(T) = (1/|G|) Σ π(g) T σ(g)⁻¹ on π.dim × σ.dim matrices. Only the
/// π = σ form is a channel; the bimodule form is a plain linear map.
class TwirlingChannel {
 public:
  static TwirlingChannel of(const Representation& pi);
  static TwirlingChannel bimodule(const Representation& pi, const Representation& sigma);

  bool is_channel() const { return !sigma_.has_value(); }
  const Representation& left() const { return pi_; }
  const Representation& right() const { return sigma_ ? *sigma_ : pi_; }
  /// Kraus {π(g)/√|G|}; throws invalid-parameter for the bimodule form.
  const QuantumChannel& channel() const;

  Matrix apply(const Matrix& t) const;
  /// True iff the map vanishes on every matrix unit (within tol).
  bool is_zero_map(double tol = 1e-10) const;

 private:
  TwirlingChannel(Representation pi, std::optional<Representation> sigma, std::optional<QuantumChannel> channel)
      : pi_(std::move(pi)), sigma_(std::move(sigma)), channel_(std::move(channel)) {}

  Representation pi_;
  std::optional<Representation> sigma_;
  std::optional<QuantumChannel> channel_;
};

inline TwirlingChannel twirling_channel(const Representation& pi) { return TwirlingChannel::of(pi); }
inline TwirlingChannel bimodule_map(const Representation& pi, const Representation& sigma) {
  return TwirlingChannel::bimodule(pi, sigma);
}

/// Ψ(T) = (1/|G|) Σ σ(g)⁻¹ Φ(π(g) T π(g)⁻¹) σ(g) with π on the input and σ on
/// the output space. Returned with a minimal Kraus set.
QuantumChannel twirl_channel(const QuantumChannel& phi, const Representation& pi, const Representation& sigma);

struct CovarianceCertificate {
  double max_defect = 0.0;  // max_{g,k} ‖Φ(π(g)B_kπ(g)⁻¹) − σ(g)Φ(B_k)σ(g)⁻¹‖_F
  int worst_element = -1;
  bool pass = false;
};

/// Checks (π, σ)-covariance on the matrix-unit basis of the input space.
CovarianceCertificate is_covariant(const QuantumChannel& phi, const Representation& pi, const Representation& sigma,
                                   double tol = 1e-10);

struct RangeCertificate {
  int range_dim = 0;
  int commutant_dim = 0;
  double range_outside_commutant = 0.0;
  double commutant_outside_range = 0.0;
  double idempotence = 0.0;  // max_k ‖Φ(Φ(E_k)) − Φ(E_k)‖_F
  bool pass = false;
};

/// range(Φ_π) = commutant of π(G), with idempotence.
RangeCertificate range_equals_commutant(const Representation& pi, double tol = 1e-8);

struct TwirlProperties {
  double idempotence = 0.0;
  double unitality = 0.0;       // ‖Φ(I) − I‖_F
  double trace_preservation = 0.0;
  double self_adjointness = 0.0;  // |⟨Φ(A),B⟩ − ⟨A,Φ(B)⟩| over random pairs
  double covariance = 0.0;
  double tp_defect = 0.0;
  double min_choi_eigenvalue = 0.0;
};

/// Seeded random-operator probes of the properties every Φ_π must have.
TwirlProperties twirl_properties(const Representation& pi, std::uint64_t seed = 0, int samples = 8);

}  // namespace twirl
