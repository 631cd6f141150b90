#pragma once

#include <utility>
#include <vector>

#include "twirl/group.hpp"

namespace twirl {

inline constexpr double kDefaultRepTolerance = 1e-9;
inline constexpr int kMaxRegularOrder = 200;
inline constexpr int kMaxTensorDim = 256;

/// Unitary representation g ↦ π(g), one dense matrix per group element in the
/// group's element order. Construction checks shapes only; use validate() or
/// require_valid() for the homomorphism and unitarity certificate.
class Representation {
 public:
  Representation(GroupPtr group, std::vector<Matrix> matrices, double tolerance = kDefaultRepTolerance);

  const FiniteGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  int dim() const { return dim_; }
  double tolerance() const { return tolerance_; }
  const Matrix& operator()(int g) const { return matrices_[g]; }
  const std::vector<Matrix>& matrices() const { return matrices_; }

  Representation with_tolerance(double tol) const { return Representation(group_, matrices_, tol); }

 private:
  GroupPtr group_;
  std::vector<Matrix> matrices_;
  int dim_ = 0;
  double tolerance_ = kDefaultRepTolerance;
};

struct RepresentationCertificate {
  double homomorphism_defect = 0.0;  // max_{g,h} ‖π(g)π(h) − π(gh)‖_F
  double unitarity_defect = 0.0;     // max_g ‖π(g)π(g)* − I‖_F
  double identity_defect = 0.0;      // ‖π(e) − I‖_F
  int failing_g = -1;
  int failing_h = -1;
  bool pass = false;
};

RepresentationCertificate validate(const Representation& pi);

/// Throws inconsistent_representation with the defect report if validation fails.
void require_valid(const Representation& pi);

/// Class function: one value per conjugacy class.
struct ClassFunction {
  GroupPtr group;
  std::vector<Complex> values;

  Complex at_element(int g) const { return values[group->conjugacy_classes().class_of[g]]; }
};

/// ⟨χ, ψ⟩ = (1/|G|) Σ_g χ(g) conj(ψ(g)).
Complex inner_product(const ClassFunction& chi, const ClassFunction& psi);

/// Per-element traces, checked for class constancy.
ClassFunction character(const Representation& pi);

Representation trivial_representation(GroupPtr group, int dim = 1);

/// Left-regular representation: π(g) e_h = e_{gh}.
Representation regular_representation(GroupPtr group);

/// action[g][p] is the image of point p under g. Must satisfy
/// action[gh][p] = action[g][action[h][p]].
Representation permutation_representation(GroupPtr group, const std::vector<std::vector<int>>& action);

/// Block-diagonal sum with each part repeated by its multiplicity.
Representation direct_sum(const std::vector<std::pair<Representation, int>>& parts);

/// (g, h) ↦ πA(g) ⊗ πB(h) on the direct product group (index g·|H| + h).
Representation outer_tensor(const Representation& a, const Representation& b);

/// g ↦ V* π(g) V for an isometry V whose range is invariant.
Representation restrict_to(const Representation& pi, const Matrix& isometry);

/// g ↦ U π(g) U*.
Representation conjugate_by(const Representation& pi, const Matrix& unitary);

/// (1/|G|) Σ_g π(g) X σ(g)⁻¹, summed in element order. X is π.dim × σ.dim.
Matrix group_average(const Representation& pi, const Representation& sigma, const Matrix& x);

/// (1/|G|) Σ_g π(g) X π(g)⁻¹.
inline Matrix group_average(const Representation& pi, const Matrix& x) { return group_average(pi, pi, x); }

}  // namespace twirl
