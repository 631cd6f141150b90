#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

namespace twirl {
namespace {

// Knill-Laflamme form: P E_i* E_j P = a_ij P for all i, j.
bool kl_holds(const std::vector<Matrix>& kraus, const Matrix& p, double tol) {
  const double rank = std::real(p.trace());
  for (const auto& ei : kraus)
    for (const auto& ej : kraus) {
      const Matrix m = p * ei.adjoint() * ej * p;
      const Complex a = m.trace() / rank;
      if ((m - a * p).norm() > tol) return false;
    }
  return true;
}

// Outputs of every orthonormal basis of range(P) pairwise trace-orthogonal,
// probed on several Haar-random bases.
bool outputs_orthogonal(const QuantumChannel& phi, const Matrix& basis, std::mt19937_64& rng, double tol) {
  const int k = static_cast<int>(basis.cols());
  for (int trial = 0; trial < 6; ++trial) {
    const Matrix v = trial == 0 ? basis : Matrix(basis * testing::haar_unitary(k, rng));
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        const Matrix oa = phi.apply(v.col(a) * v.col(a).adjoint());
        const Matrix ob = phi.apply(v.col(b) * v.col(b).adjoint());
        if (std::abs(testing::frobenius_inner(oa, ob)) > tol) return false;
      }
  }
  return true;
}

TEST(Invariants, ClosedFormsOnRegularSuite) {
  for (const auto& e : testing::regular_suite()) {
    const auto dec = isotypic_decomposition(e.rep, 0);
    int sum_m = 0, max_m = 0, sum_n = 0, max_n = 0;
    for (const auto& t : dec.types) {
      sum_m += t.multiplicity;
      max_m = std::max(max_m, t.multiplicity);
      sum_n += t.dim();
      max_n = std::max(max_n, t.dim());
    }
    EXPECT_EQ(alpha_closed(dec), sum_m) << e.name;
    EXPECT_EQ(beta_closed(dec), max_m);
    EXPECT_EQ(gamma_closed(dec), sum_n);
    EXPECT_EQ(tau_closed(dec), max_n);
    EXPECT_NEAR(zero_error_capacity(dec), std::log2(sum_m), 1e-12);
  }
}

TEST(Invariants, KnownValuesForS3) {
  const auto report = full_report(regular_representation(build_symmetric(3)), 0);
  EXPECT_EQ(report.alpha, 4);
  EXPECT_EQ(report.beta, 2);
  EXPECT_EQ(report.gamma, 4);
  EXPECT_EQ(report.tau, 2);
  EXPECT_DOUBLE_EQ(report.capacity_bits, 2.0);
}

TEST(Invariants, CapacityBaseValidation) {
  const auto dec = isotypic_decomposition(regular_representation(build_dihedral(4)), 0);
  EXPECT_NEAR(zero_error_capacity(dec, std::exp(1.0)), std::log(6.0), 1e-12);
  EXPECT_THROW(zero_error_capacity(dec, 1.0), Error);
  EXPECT_THROW(zero_error_capacity(dec, 0.0), Error);
}

TEST(Invariants, WitnessesPassOnSuite) {
  for (const auto& e : testing::regular_suite()) {
    const auto dec = isotypic_decomposition(e.rep, 0);
    for (const auto& w : {alpha_witness(e.rep, dec), code_witness(e.rep, dec), gamma_witness(e.rep, dec),
                          tau_witness(e.rep, dec)}) {
      EXPECT_TRUE(w.pass) << e.name << " " << to_string(w.kind);
      EXPECT_LE(w.max_residual(), 1e-9);
    }
  }
}

TEST(Invariants, AlphaWitnessOutputsOrthogonalByDirectComputation) {
  const auto pi = regular_representation(build_quaternion());
  const auto dec = isotypic_decomposition(pi, 0);
  const auto w = alpha_witness(pi, dec);
  ASSERT_EQ(w.vectors.cols(), 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      for (int g = 0; g < 8; ++g) EXPECT_LT(std::abs(w.vectors.col(a).dot(pi(g) * w.vectors.col(b))), 1e-9);
    }
}

TEST(Invariants, AlphaCannotBeExtended) {
  const auto pi = regular_representation(build_symmetric(3));
  const auto dec = isotypic_decomposition(pi, 0);
  const auto probe = alpha_non_improvement(pi, alpha_witness(pi, dec), 1, 200);
  EXPECT_EQ(probe.trials, 200);
  EXPECT_EQ(probe.rejected, probe.trials);
}

TEST(Invariants, DephasingIndependentSetIsNotACode) {
  Matrix e1 = Matrix::Zero(2, 2), e2 = Matrix::Zero(2, 2);
  e1(0, 0) = 1.0;
  e2(1, 1) = 1.0;
  const auto phi = QuantumChannel::from_kraus({e1, e2});
  EXPECT_FALSE(verify_code(phi, Matrix::Identity(2, 2)).pass);
  EXPECT_LT(output_overlap(phi, Matrix::Identity(2, 2)), 1e-15);
}

TEST(Invariants, SplittingChannelHasWholeSpaceAsCode) {
  const int n = 3;
  Matrix e1 = Matrix::Zero(2 * n, n), e2 = Matrix::Zero(2 * n, n);
  e1.topRows(n) = Matrix::Identity(n, n) / std::sqrt(2.0);
  e2.bottomRows(n) = Matrix::Identity(n, n) / std::sqrt(2.0);
  const auto phi = QuantumChannel::from_kraus({e1, e2});
  EXPECT_TRUE(verify_code(phi, Matrix::Identity(n, n)).pass);
}

TEST(Invariants, VerifyCodeRejectsNonProjection) {
  const auto phi = twirling_channel(regular_representation(build_cyclic(3))).channel();
  EXPECT_THROW(verify_code(phi, 2.0 * Matrix::Identity(3, 3)), Error);
}

TEST(Invariants, KnillLaflammeAgreesWithOutputOrthogonality) {
  std::mt19937_64 rng(2024);
  const auto pi = regular_representation(build_symmetric(3));
  const auto dec = isotypic_decomposition(pi, 0);
  const auto phi = twirling_channel(pi).channel();
  const auto& kraus = *phi.kraus();
  const Matrix code = code_witness(pi, dec).vectors;
  int disagreements = 0;
  int codes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix basis;
    if (trial % 2 == 0) {
      const int k = 1 + trial % 3;
      basis = linalg::random_isometry(6, k, rng);
    } else {
      const int k = 1 + (trial / 2) % static_cast<int>(code.cols());
      basis = code * linalg::random_isometry(code.cols(), k, rng);
    }
    const Matrix p = basis * basis.adjoint();
    const bool ii = kl_holds(kraus, p, 1e-8);
    const bool iv = outputs_orthogonal(phi, basis, rng, 1e-8);
    const bool lib = verify_code(phi, p).pass;
    codes += ii;
    disagreements += (ii != iv) + (ii != lib);
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(codes, 10);
  EXPECT_LT(codes, 50);
}

TEST(Invariants, OrthogonalityTwoSidedEquivalence) {
  std::mt19937_64 rng(77);
  for (const auto& e : testing::regular_suite()) {
    const auto& pi = e.rep;
    const int dim = pi.dim();
    const auto dec = isotypic_decomposition(pi, 0);
    const auto comm = commutant_basis(pi);
    const auto phi = twirling_channel(pi);
    int disagreements = 0;
    int orthogonal = 0;
    std::uniform_int_distribution<int> pick(0, dec.d() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      Vector x, y;
      if (trial % 2 == 0) {
        x = linalg::random_unit_vector(dim, rng);
        y = linalg::random_unit_vector(dim, rng);
      } else {
        // structured pair: basis vectors of types, copies and components
        const int i = pick(rng), j = pick(rng);
        std::uniform_int_distribution<int> ci(0, dec.types[i].multiplicity - 1), ki(0, dec.types[i].dim() - 1);
        std::uniform_int_distribution<int> cj(0, dec.types[j].multiplicity - 1), kj(0, dec.types[j].dim() - 1);
        x = dec.basis_vector(i, ci(rng), ki(rng));
        y = dec.basis_vector(j, cj(rng), kj(rng));
      }
      const bool channel_zero = phi.apply(x * y.adjoint()).norm() <= 1e-9;
      double comm_max = 0.0;
      for (const auto& b : comm.basis) comm_max = std::max(comm_max, std::abs(x.dot(b * y)));
      const bool commutant_perp = comm_max <= 1e-9;
      disagreements += channel_zero != commutant_perp;
      orthogonal += channel_zero;
      const auto lib = orthogonality_pair(pi, comm, x, y);
      EXPECT_NEAR(lib.commutant_max, comm_max, 1e-9);
    }
    EXPECT_EQ(disagreements, 0) << e.name;
    if (pi.dim() > 1) EXPECT_GT(orthogonal, 0) << e.name;
  }
}

TEST(Invariants, CapacityTensorCheck) {
  struct Case {
    GroupPtr g;
    int alpha;
  };
  for (const auto& c : {Case{build_cyclic(2), 4}, Case{build_cyclic(3), 9}, Case{build_symmetric(3), 16}}) {
    const auto r = capacity_tensor_check(regular_representation(c.g), 2, 0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.alpha_tensor, c.alpha);
    EXPECT_EQ(r.expected_alpha, c.alpha);
    EXPECT_EQ(r.types_tensor, r.types_base * r.types_base);
  }
}

TEST(Invariants, SingleTypeHasAlphaEqualBeta) {
  const auto irreps = testing::irreducibles(build_symmetric(3));
  const auto pi = direct_sum({{irreps[2], 3}});
  const auto report = full_report(pi, 0);
  EXPECT_EQ(report.alpha, 3);
  EXPECT_EQ(report.beta, 3);
  EXPECT_EQ(report.gamma, 2);
  EXPECT_TRUE(verify_code(twirling_channel(pi).channel(), report.alpha_cert.vectors * report.alpha_cert.vectors.adjoint())
                  .pass);
}

TEST(Invariants, AlphaSpanIsNotACodeWithSeveralTypes) {
  const auto pi = regular_representation(build_symmetric(3));
  const auto report = full_report(pi, 0);
  const Matrix& v = report.alpha_cert.vectors;
  EXPECT_FALSE(verify_code(twirling_channel(pi).channel(), v * v.adjoint()).pass);
  const Matrix& c = report.code_cert.vectors;
  EXPECT_TRUE(verify_code(twirling_channel(pi).channel(), c * c.adjoint()).pass);
}

}  // namespace
}  // namespace twirl
