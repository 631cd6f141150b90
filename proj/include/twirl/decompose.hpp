#pragma once

#include <cstdint>
#include <vector>

#include "twirl/representation.hpp"

namespace twirl {

inline constexpr int kMaxDecomposeDim = 256;

/// Trace-orthonormal basis of a space of rows × cols operators.
struct OperatorSpaceBasis {
  int rows = 0;
  int cols = 0;
  std::vector<Matrix> basis;

  int dimension() const { return static_cast<int>(basis.size()); }
  /// max |⟨B_a, B_b⟩ − δ_ab|
  double orthonormality_defect() const;
  /// Frobenius norm of the part of T outside the span.
  double distance_from_span(const Matrix& t) const;
};

/// Hom(π, σ) = {T : T π(g) = σ(g) T}; T maps π's space into σ's. For up to
/// 400 unknowns this is the null space of Σ_g K_g* K_g with K_g the stacked
/// constraint T ↦ Tπ(g) − σ(g)T; above that the range of the averaging
/// projection T ↦ (1/|G|)Σ σ(g) T π(g)* is sampled until it saturates.
OperatorSpaceBasis intertwiner_space(const Representation& pi, const Representation& sigma);

/// Null-space route regardless of size (test oracle for the sampled route).
OperatorSpaceBasis intertwiner_space_nullspace(const Representation& pi, const Representation& sigma);
/// Sampled-projection route regardless of size.
OperatorSpaceBasis intertwiner_space_sampled(const Representation& pi, const Representation& sigma,
                                             std::uint64_t seed = 0);

/// Commutant {T : Tπ(g) = π(g)T}; dimension Σ mᵢ².
OperatorSpaceBasis commutant_basis(const Representation& pi);

/// span{π(g)}; dimension Σ nᵢ².
OperatorSpaceBasis algebra_basis(const Representation& pi);

struct IrreducibleType {
  int multiplicity = 0;
  Representation rep;  // representative πᵢ, nᵢ × nᵢ
  ClassFunction character;

  int dim() const { return rep.dim(); }
};

/// U π(g) U* = ⊕ᵢ (I_{mᵢ} ⊗ πᵢ(g)). In block coordinates type i occupies rows
/// [offset(i), offset(i) + mᵢnᵢ) and copy c, basis vector k of Hᵢ sits at
/// offset(i) + c·nᵢ + k.
struct IsotypicDecomposition {
  std::vector<IrreducibleType> types;
  Matrix U;
  std::uint64_t seed = 0;
  int attempts = 1;

  int d() const { return static_cast<int>(types.size()); }
  int ambient_dim() const { return static_cast<int>(U.rows()); }
  std::vector<int> multiplicities() const;
  std::vector<int> dimensions() const;
  int offset(int type) const;

  /// U*(e_copy ⊗ u_k) in the original coordinates.
  Vector basis_vector(int type, int copy, int k) const;
  /// Orthogonal projection Pᵢ onto the isotypic component of type i.
  Matrix isotypic_projection(int type) const;
  /// Block-diagonal ⊕ᵢ (I_{mᵢ} ⊗ πᵢ(g)).
  Matrix block_form(int g) const;
};

/// Random-commutant-element eigenspace method. Deterministic for fixed
/// (π, seed). Retries up to 5 times with fresh draws on near-degenerate
/// spectra before failing with degenerate-commutant-element.
IsotypicDecomposition isotypic_decomposition(const Representation& pi, std::uint64_t seed = 0);

struct DecompositionResiduals {
  double unitarity = 0.0;         // ‖UU* − I‖_F
  double block = 0.0;             // max_g ‖Uπ(g)U* − block_form(g)‖_F
  double irreducibility = 0.0;    // max_i |⟨χᵢ,χᵢ⟩ − 1|
  double inequivalence = 0.0;     // max_{i≠j} |⟨χᵢ,χⱼ⟩|
  int max_cross_intertwiner_dim = 0;
  int dimension_sum = 0;          // Σ mᵢnᵢ
  int commutant_dim = 0;
  int algebra_dim = 0;
  double commutation = 0.0;       // max ‖AB − BA‖_F over commutant × algebra bases
  bool pass = false;
};

DecompositionResiduals verify_decomposition(const Representation& pi, const IsotypicDecomposition& decomp);

struct MultiplicityReport {
  std::vector<double> character_multiplicities;  // ⟨χ_π, χᵢ⟩ (real part)
  double max_residual = 0.0;
  bool dimension_ok = false;
  bool pass = false;
};

/// Checks mᵢ = ⟨χ_π, χᵢ⟩ and Σ mᵢnᵢ = dim; throws decomposition-inconsistent
/// on mismatch beyond 1e-6.
MultiplicityReport multiplicity_crosscheck(const Representation& pi, const IsotypicDecomposition& decomp);

}  // namespace twirl
