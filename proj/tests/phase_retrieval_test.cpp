#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

namespace twirl {
namespace {

Frame random_frame(int n, int count, std::mt19937_64& rng) {
  Frame f{n, {}};
  for (int j = 0; j < count; ++j) f.vectors.push_back(linalg::random_gaussian(n, 1, rng));
  return f;
}

TEST(Frame, BoundsAndParseval) {
  Frame f{2, {}};
  Vector a(2), b(2), c(2);
  a << 1, 0;
  b << 0, 1;
  c << 1, 1;
  f.vectors = {a, b, c};
  const auto r = frame_analysis(f);
  EXPECT_TRUE(r.is_frame);
  EXPECT_NEAR(r.lower_bound, 1.0, 1e-12);
  EXPECT_NEAR(r.upper_bound, 3.0, 1e-12);
  EXPECT_FALSE(r.parseval);
  Matrix s = Matrix::Zero(2, 2);
  for (const auto& v : r.parseval_frame) s += v * v.adjoint();
  EXPECT_LT((s - Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Frame, RankDeficientIsNotAFrame) {
  Vector a(2);
  a << 1, 0;
  const auto r = frame_analysis(Frame{2, {a, 2.0 * a}});
  EXPECT_FALSE(r.is_frame);
  EXPECT_EQ(r.rank, 1);
}

TEST(Frame, RankOneFrameOfOrthonormalBasisIsPovm) {
  Frame f{3, {}};
  for (int i = 0; i < 3; ++i) f.vectors.push_back(Vector::Unit(3, i));
  EXPECT_TRUE(povm_check(rank_one_frame(f)).is_povm);
}

TEST(Falsifier, ThreeVectorsInC2AlwaysCollide) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto frame = rank_one_frame(random_frame(2, 3, rng));
    const auto c = pr_falsifier(frame, trial);
    ASSERT_EQ(c.verdict, PRVerdict::counterexample_found);
    EXPECT_TRUE(c.exact);
    EXPECT_LE(c.measurement_gap, kMeasurementAgreement);
    EXPECT_GT(c.state_distance, kStateSeparation);
    EXPECT_TRUE(verify_collision(frame, c.counterexample->first, c.counterexample->second));
  }
}

TEST(Falsifier, FourGenericVectorsInC2Retrieve) {
  std::mt19937_64 rng(4);
  const auto c = pr_falsifier(rank_one_frame(random_frame(2, 4, rng)), 0);
  EXPECT_EQ(c.verdict, PRVerdict::retrievable);
  EXPECT_TRUE(c.exact);
  EXPECT_EQ(c.kernel_dim, 0);
}

TEST(Falsifier, StandardBasisInC3Collides) {
  Frame f{3, {}};
  for (int i = 0; i < 3; ++i) f.vectors.push_back(Vector::Unit(3, i));
  const auto frame = rank_one_frame(f);
  const auto c = pr_falsifier(frame, 0);
  ASSERT_EQ(c.verdict, PRVerdict::counterexample_found);
  double gap = 0, dist = 0;
  EXPECT_TRUE(verify_collision(frame, c.counterexample->first, c.counterexample->second, &gap, &dist));
  EXPECT_NEAR(gap, c.measurement_gap, 1e-12);
}

TEST(Falsifier, RejectsOversizedProblems) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(pr_falsifier(rank_one_frame(random_frame(9, 40, rng))), Error);
}

TEST(Falsifier, DeterministicForSeed) {
  Frame f{3, {}};
  for (int i = 0; i < 3; ++i) f.vectors.push_back(Vector::Unit(3, i));
  const auto a = pr_falsifier(rank_one_frame(f), 5);
  const auto b = pr_falsifier(rank_one_frame(f), 5);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_EQ((a.counterexample->first - b.counterexample->first).norm(), 0.0);
}

TEST(Falsifier, HermitianKernelIsOrthogonalToMeasurements) {
  std::mt19937_64 rng(9);
  const auto frame = rank_one_frame(random_frame(3, 5, rng));
  const auto kernel = hermitian_kernel(frame);
  EXPECT_EQ(kernel.size(), 4u);
  for (const auto& h : kernel) {
    EXPECT_LT((h - h.adjoint()).norm(), 1e-12);
    for (const auto& a : frame.ops) EXPECT_LT(std::abs((a * h).trace()), 1e-10);
  }
}

TEST(PhaseBounds, LowerBoundAndFrameLength) {
  const auto dec = isotypic_decomposition(regular_representation(build_cyclic(5)), 0);
  EXPECT_EQ(pr_lower_bound(dec), 2);
  const auto s3 = isotypic_decomposition(regular_representation(build_symmetric(3)), 0);
  EXPECT_EQ(pr_lower_bound(s3), 2);
  EXPECT_EQ(minimal_frame_length_bound(2), 4);
  EXPECT_THROW(minimal_frame_length_bound(0), Error);
}

TEST(Witness, MultiplicityWitnessOnTwoCopiesOfStandard) {
  const auto irreps = testing::irreducibles(build_symmetric(3));
  const auto pi = direct_sum({{irreps[2], 2}});
  const auto dec = isotypic_decomposition(pi, 0);
  const auto w = multiplicity_pr_witness(pi, dec, 0, 200);
  EXPECT_TRUE(w.pass);
  EXPECT_EQ(w.trials, 200);
  EXPECT_EQ(w.basis.cols(), 2);
  EXPECT_LE(w.block_formula, 1e-10);
}

TEST(Witness, SubspaceWitnessOnCyclicFive) {
  const auto pi = regular_representation(build_cyclic(5));
  const auto dec = isotypic_decomposition(pi, 0);
  const auto w = subspace_pr_witness(pi, dec, 0);
  EXPECT_TRUE(w.pass);
  EXPECT_EQ(w.basis.cols(), 2);
  EXPECT_EQ(w.certificate.verdict, PRVerdict::retrievable);
  const auto r = prop51_equivalence_check(pi, dec, w.map, 0);
  EXPECT_TRUE(r.agree);
  EXPECT_EQ(r.channel_side.verdict, r.measurement_side.verdict);
}

TEST(Witness, TwoOneDimensionalTypesAreNotInjective) {
  const auto pi = regular_representation(build_cyclic(2));
  const auto dec = isotypic_decomposition(pi, 0);
  Vector x = dec.basis_vector(0, 0, 0) + dec.basis_vector(1, 0, 0);
  Vector y = dec.basis_vector(0, 0, 0) - dec.basis_vector(1, 0, 0);
  const auto phi = twirling_channel(pi);
  EXPECT_LT((phi.apply(x * x.adjoint()) - phi.apply(y * y.adjoint())).norm(), 1e-12);
  EXPECT_NEAR((x * x.adjoint() - y * y.adjoint()).norm(), 2.0 * std::sqrt(2.0), 1e-12);
  const auto r = prop51_equivalence_check(pi, dec, Matrix::Identity(2, 2), 0);
  EXPECT_TRUE(r.agree);
  EXPECT_EQ(r.channel_side.verdict, PRVerdict::counterexample_found);
  EXPECT_LT(r.channel_collision_gap, 1e-12);
}

TEST(Witness, EquivalenceCheckRequiresMultiplicityOne) {
  const auto pi = regular_representation(build_symmetric(3));
  const auto dec = isotypic_decomposition(pi, 0);
  EXPECT_THROW(prop51_equivalence_check(pi, dec, Matrix::Identity(6, 2), 0), Error);
}

}  // namespace
}  // namespace twirl
