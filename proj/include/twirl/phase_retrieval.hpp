#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twirl/channel.hpp"

namespace twirl {

inline constexpr int kMaxFalsifierDim = 8;
inline constexpr int kDefaultRestarts = 64;
inline constexpr long kDefaultBudget = 100000;
inline constexpr double kMeasurementAgreement = 1e-10;
inline constexpr double kStateSeparation = 1e-4;

/// Vectors f_j in ℂⁿ.
struct Frame {
  int n = 0;
  std::vector<Vector> vectors;
};

struct FrameReport {
  int rank = 0;
  bool is_frame = false;
  double lower_bound = 0.0;  // A: smallest eigenvalue of Σ f_j f_j*
  double upper_bound = 0.0;  // B: largest
  bool parseval = false;
  double parseval_defect = 0.0;  // ‖Σ f_j f_j* − I‖_F
  std::vector<Vector> parseval_frame;  // S^{-1/2} f_j, only when is_frame
};

/// Throws not-a-frame if the frame operator vanishes.
FrameReport frame_analysis(const Frame& frame, double tol = 1e-10);

/// Hermitian measurement operators on ℂ^k.
struct OperatorFrame {
  int k = 0;
  std::vector<Matrix> ops;
};

struct PovmReport {
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double sum_defect = 0.0;  // ‖Σ F_j − I‖_F
  bool is_povm = false;
};

PovmReport povm_check(const OperatorFrame& frame, double tol = 1e-10);

/// {f_j f_j*}.
OperatorFrame rank_one_frame(const Frame& frame);

/// ⟨x, A_j x⟩ for every operator.
RealVector measure(const OperatorFrame& frame, const Vector& x);

/// Real-orthonormal basis of {H = H* : tr(A_j H) = 0 for all j}.
std::vector<Matrix> hermitian_kernel(const OperatorFrame& frame);

enum class PRVerdict { retrievable, counterexample_found, undecided };

const char* to_string(PRVerdict verdict);

struct PRCertificate {
  PRVerdict verdict = PRVerdict::undecided;
  bool exact = false;
  std::string method;
  int ambient_dim = 0;
  int kernel_dim = 0;
  std::optional<std::pair<Vector, Vector>> counterexample;
  double measurement_gap = 0.0;  // max_j |⟨x,A_j x⟩ − ⟨y,A_j y⟩| of the counterexample
  double state_distance = 0.0;   // ‖xx* − yy*‖_F of the counterexample
  int restarts = 0;
  long evaluations = 0;
  double best_objective = 0.0;   // smallest relative middle-spectrum mass seen
};

/// Checks a claimed collision: measurements agree within 1e-10 while the
/// states differ by more than 1e-4.
bool verify_collision(const OperatorFrame& frame, const Vector& x, const Vector& y, double* gap = nullptr,
                      double* distance = nullptr);

/// Looks for x, y with equal measurements and xx* ≠ yy*, i.e. a kernel element
/// with at most one positive and one negative eigenvalue. Exact when the
/// kernel has dimension ≤ 1 or k = 2; otherwise seeded alternating
/// projections with `restarts` starts sharing `budget` evaluations.
PRCertificate pr_falsifier(const OperatorFrame& frame, std::uint64_t seed = 0, long budget = kDefaultBudget,
                           int restarts = kDefaultRestarts);

/// max(β, ⌊d/4⌋ + 1).
int pr_lower_bound(const IsotypicDecomposition& decomp);

/// 4n − 4 for n ≥ 2, 1 for n = 1.
int minimal_frame_length_bound(int n);

struct PRConjectureProbe {
  int beta = 0;
  int bracket_k = 0;  // k with bound(k) ≤ d < bound(k + 1)
  int value = 0;      // max(β, k)
  bool conditional_on_surrogate = true;
};

/// Brackets d with the 4k − 4 surrogate for the minimal phase-retrievable
/// frame length; the value is conditional on that surrogate.
PRConjectureProbe pr_conjecture_probe(const IsotypicDecomposition& decomp);

struct SubspaceWitness {
  Matrix basis;                  // orthonormal basis of M
  Matrix map;                    // T : ℂ^k → H (subspace witness only)
  std::vector<Vector> frame;     // ξ_i (subspace witness only)
  PRCertificate certificate;     // frame / channel falsifier result
  double block_formula = 0.0;    // multiplicity witness only
  double injectivity = 0.0;      // worst violation of ‖Φ(xx*) − Φ(yy*)‖ ≥ c‖xx* − yy*‖
  double rank_gap = 0.0;         // σ_k / σ_1 of T
  int trials = 0;
  int collisions = 0;
  int attempts = 1;
  bool pass = false;
};

/// M = U*(ℂ^{m} ⊗ u) for the type of largest multiplicity. Checks the block
/// formula Φ_π(xx*) = (a a*) ⊗ I/n and runs seeded pair trials. Throws
/// witness-failed on a violated pair.
SubspaceWitness multiplicity_pr_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                        std::uint64_t seed = 0, int trials = 200);

/// k = ⌊d/4⌋ + 1; ξ = canonical basis then seeded generic unit vectors;
/// T = Σ x_i ξ_i* with x_i in the first copy of type i; M = range(T).
SubspaceWitness subspace_pr_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                    std::uint64_t seed = 0);

struct Prop51Report {
  PRCertificate channel_side;      // falsifier on {T* C T}, C Hermitian in the commutant
  PRCertificate measurement_side;  // falsifier on {T_i* T_i}
  double channel_collision_gap = 0.0;  // ‖Φ(xx*) − Φ(yy*)‖_F for a channel-side counterexample
  int trials = 0;
  int phase_pairs_collided = 0;
  bool agree = false;
};

/// Runs both sides of the multiplicity-one characterization on M = range(T).
/// Throws equivalence-violation when one side finds a collision and the other
/// does not.
Prop51Report prop51_equivalence_check(const Representation& pi, const IsotypicDecomposition& decomp, const Matrix& t,
                                      std::uint64_t seed = 0, int trials = 100);

}  // namespace twirl
