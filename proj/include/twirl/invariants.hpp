#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twirl/channel.hpp"

namespace twirl {

/// Pass threshold for witness certificates is this times the ambient dim.
inline constexpr double kWitnessTolerance = 1e-7;

enum class WitnessKind { independent_set, code_subspace, orthogonal_family, tau_subspace };

const char* to_string(WitnessKind kind);

struct WitnessCertificate {
  WitnessKind kind = WitnessKind::independent_set;
  Matrix vectors;                          // witness vectors / subspace basis as columns
  std::map<std::string, double> residuals;
  Matrix coefficients;                     // Hermitian A = [a_ij] for code checks
  double tolerance = 0.0;
  int failing_a = -1;
  int failing_b = -1;
  bool pass = false;

  double max_residual() const;
};

int alpha_closed(const IsotypicDecomposition& decomp);
int beta_closed(const IsotypicDecomposition& decomp);
int gamma_closed(const IsotypicDecomposition& decomp);
int tau_closed(const IsotypicDecomposition& decomp);

/// log_base(Σ mᵢ).
double zero_error_capacity(const IsotypicDecomposition& decomp, double base = 2.0);

/// One vector per (type, copy): U*(e_copy ⊗ u₁). Checks ⟨x_b, π(g)x_a⟩ = 0
/// for a ≠ b and every g, plus trace-orthogonality of the outputs.
WitnessCertificate alpha_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                 double tol = -1.0);

/// 𝒞 = U*(ℂ^{m} ⊗ u₁) inside the type of largest multiplicity; checks
/// Pπ(g)P = c_g P for every g.
WitnessCertificate code_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                double tol = -1.0);

/// Knill–Laflamme check of the range of P against any channel: residual of
/// P E_i*E_j P − a_ij P, hermiticity of A, and output orthogonality on the
/// standard basis of range P together with every rotated pair
/// (x_k ± x_l)/√2. Residual keys "kl" and "outputs" report the two sides.
WitnessCertificate verify_code(const QuantumChannel& phi, const Matrix& projection, double tol = kWitnessTolerance);

/// Largest trace overlap √⟨Φ(xx*), Φ(yy*)⟩ over distinct columns.
double output_overlap(const QuantumChannel& phi, const Matrix& vectors, int* worst_a = nullptr, int* worst_b = nullptr);

/// Σnᵢ vectors x = U*(e_{j mod mᵢ} ⊗ u_j); checks Φ_π(x_a ⊗ x_b) = 0 and
/// commutant-orthogonality ⟨x_a, B x_b⟩ = 0.
WitnessCertificate gamma_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                 double tol = -1.0);

/// M = U*(e₁ ⊗ H) for the type of largest dimension; Φ_π must kill every
/// trace-zero operator supported on M.
WitnessCertificate tau_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                               double tol = -1.0);

struct OrthogonalityPair {
  double channel_norm = 0.0;   // ‖Φ_π(x ⊗ y)‖_F
  double commutant_max = 0.0;  // max_k |⟨x, B_k y⟩|
};

/// Both sides of x ⟂_π y for one pair.
OrthogonalityPair orthogonality_pair(const Representation& pi, const OperatorSpaceBasis& commutant, const Vector& x,
                                     const Vector& y);

struct CapacityTensorReport {
  int power = 2;
  int alpha_base = 0;
  int alpha_tensor = 0;
  int expected_alpha = 0;       // (Σmᵢ)^n
  int types_base = 0;
  int types_tensor = 0;
  double product_type_gram_defect = 0.0;  // ‖[⟨χ_a, χ_b⟩] − I‖ over product types
  bool pass = false;
};

/// Decomposes π^{⊠n} on G^n and compares α with (Σmᵢ)^n.
CapacityTensorReport capacity_tensor_check(const Representation& pi, int n = 2, std::uint64_t seed = 0);

struct AlphaProbe {
  int trials = 0;
  int rejected = 0;
  double min_violation = 0.0;  // smallest overlap a random extension achieved
};

/// Random unit vectors orthogonal to the witness span, appended one at a time;
/// each extension should break the independence condition.
AlphaProbe alpha_non_improvement(const Representation& pi, const WitnessCertificate& alpha, std::uint64_t seed = 0,
                                 int trials = 1000);

struct InvariantReport {
  IsotypicDecomposition decomposition;
  DecompositionResiduals decomposition_residuals;
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
  int tau = 0;
  double capacity_bits = 0.0;
  WitnessCertificate alpha_cert;
  WitnessCertificate code_cert;
  WitnessCertificate gamma_cert;
  WitnessCertificate tau_cert;
};

/// Decomposes π, evaluates every closed form and builds and verifies every
/// witness. Throws witness-failed if a certificate does not pass.
InvariantReport full_report(const Representation& pi, std::uint64_t seed = 0);

}  // namespace twirl
