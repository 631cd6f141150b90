#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

namespace twirl {
namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

QuantumChannel dephasing() { return QuantumChannel::from_kraus({unit(2, 0, 0), unit(2, 1, 1)}); }

TEST(Channel, DephasingKeepsDiagonal) {
  Matrix rho(2, 2);
  rho << Complex(0.3, 0), Complex(0.1, 0.2), Complex(0.1, -0.2), Complex(0.7, 0);
  const Matrix out = dephasing().apply(rho);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 0.3;
  expect(1, 1) = 0.7;
  EXPECT_LT((out - expect).norm(), 1e-15);
}

TEST(Channel, ChoiOfIdentityChannelIsMaximallyEntangledProjector) {
  const auto id = QuantumChannel::from_kraus({Matrix::Identity(3, 3)});
  const Matrix c = choi_matrix(id);
  const Vector omega = linalg::vec(Matrix(Matrix::Identity(3, 3)));
  EXPECT_LT((c - omega * omega.adjoint()).norm(), 1e-14);
  EXPECT_EQ(choi_rank(id), 1);
}

TEST(Channel, ChoiBlocksAreImagesOfMatrixUnits) {
  std::mt19937_64 rng(1);
  const auto iso = linalg::random_isometry(6, 2, rng);
  std::vector<Matrix> kraus{iso.topRows(3), iso.bottomRows(3)};
  const auto phi = QuantumChannel::from_kraus(kraus);
  const Matrix c = choi_matrix(phi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_LT((c.block(3 * i, 3 * j, 3, 3) - phi.apply(unit(2, i, j))).norm(), 1e-13);
}

TEST(Channel, FromChoiRoundTrip) {
  const auto phi = dephasing();
  const auto psi = QuantumChannel::from_choi(choi_matrix(phi), 2, 2);
  EXPECT_TRUE(psi.certificate().pass);
  const auto kraus = kraus_from_choi(psi);
  EXPECT_EQ(kraus.size(), 2u);
  EXPECT_LT((choi_from_kraus(kraus, 2, 2) - choi_matrix(phi)).norm(), 1e-12);
}

TEST(Channel, NonTracePreservingRejected) {
  try {
    QuantumChannel::from_kraus({Matrix(Matrix::Identity(2, 2) / 2.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_trace_preserving);
    EXPECT_NE(std::string(e.what()).find("0.75"), std::string::npos);
  }
}

TEST(Channel, NonPositiveChoiRejected) {
  // transpose map: trace preserving, not completely positive
  Matrix c = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c(2 * i + j, 2 * j + i) = 1.0;
  try {
    QuantumChannel::from_choi(c, 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_completely_positive);
  }
}

TEST(Channel, MismatchedFormsRejected) {
  EXPECT_THROW(QuantumChannel::from_both({Matrix::Identity(2, 2)}, choi_matrix(dephasing())), Error);
}

TEST(Twirl, CyclicTwoFormula) {
  const auto pi = regular_representation(build_cyclic(2));
  const auto phi = twirling_channel(pi);
  Matrix t(2, 2);
  t << Complex(1, 0), Complex(2, 1), Complex(3, -1), Complex(4, 0);
  Matrix expect(2, 2);
  const Complex diag = (t(0, 0) + t(1, 1)) / 2.0;
  const Complex off = (t(0, 1) + t(1, 0)) / 2.0;
  expect << diag, off, off, diag;
  EXPECT_LT((phi.apply(t) - expect).norm(), 1e-15);
}

TEST(Twirl, ChoiRankIsSumOfSquaredDimensions) {
  for (const auto& e : testing::regular_suite()) {
    const auto rep = choi_rank_report(twirling_channel(e.rep).channel());
    EXPECT_EQ(rep.rank, e.rep.dim()) << e.name;
    EXPECT_GE(rep.gap_orders, 6.0) << e.name;
  }
  const auto irreps = testing::irreducibles(build_symmetric(3));
  const auto pi = direct_sum({{irreps[2], 3}, {irreps[0], 2}});
  EXPECT_EQ(choi_rank(twirling_channel(pi).channel()), 4 + 1);
}

TEST(Twirl, ChannelPropertiesAcrossSuite) {
  for (const auto& e : testing::regular_suite()) {
    const auto p = twirl_properties(e.rep, 3);
    const double tol = 1e-9 * e.rep.dim();
    EXPECT_LE(p.idempotence, tol) << e.name;
    EXPECT_LE(p.unitality, tol);
    EXPECT_LE(p.trace_preservation, tol);
    EXPECT_LE(p.self_adjointness, tol);
    EXPECT_LE(p.covariance, tol);
    EXPECT_LE(p.tp_defect, tol);
    EXPECT_GE(p.min_choi_eigenvalue, -tol);
    EXPECT_TRUE(range_equals_commutant(e.rep).pass) << e.name;
  }
}

TEST(Twirl, RangeDimensionIsCommutantDimension) {
  const auto irreps = testing::irreducibles(build_dihedral(4));
  const auto pi = direct_sum({{irreps[4], 2}, {irreps[1], 1}});
  const auto r = range_equals_commutant(pi);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.range_dim, 5);
  EXPECT_EQ(r.commutant_dim, 5);
}

TEST(Twirl, CovarianceOfTwirledChannel) {
  std::mt19937_64 rng(8);
  const auto pi = regular_representation(build_symmetric(3));
  const auto iso = linalg::random_isometry(12, 6, rng);
  const auto phi = QuantumChannel::from_kraus({iso.topRows(6), iso.bottomRows(6)});
  EXPECT_FALSE(is_covariant(phi, pi, pi).pass);
  const auto tw = twirl_channel(phi, pi, pi);
  EXPECT_TRUE(is_covariant(tw, pi, pi).pass);
  EXPECT_TRUE(is_covariant(twirling_channel(pi).channel(), pi, pi).pass);
}

TEST(Twirl, BimoduleBetweenInequivalentIrreduciblesIsZero) {
  const auto irreps = testing::irreducibles(build_symmetric(3));
  EXPECT_TRUE(bimodule_map(irreps[0], irreps[1]).is_zero_map());
  EXPECT_FALSE(bimodule_map(irreps[2], irreps[2]).is_zero_map());
  EXPECT_FALSE(bimodule_map(irreps[0], irreps[1]).is_channel());
}

TEST(Twirl, IdentityRepresentationGivesIdentityChannel) {
  const auto pi = trivial_representation(build_cyclic(4), 3);
  std::mt19937_64 rng(2);
  const Matrix t = linalg::random_gaussian(3, 3, rng);
  EXPECT_LT((twirling_channel(pi).apply(t) - t).norm(), 1e-14);
}

}  // namespace
}  // namespace twirl
