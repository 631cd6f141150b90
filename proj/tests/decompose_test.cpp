#include <algorithm>

#include <gtest/gtest.h>

#include "support.hpp"

namespace twirl {
namespace {

std::vector<std::pair<int, int>> nm_pairs(const IsotypicDecomposition& d) {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : d.types) out.emplace_back(t.dim(), t.multiplicity);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Decompose, RegularSuiteHasMultiplicityEqualDimension) {
  for (const auto& e : testing::regular_suite()) {
    const auto dec = isotypic_decomposition(e.rep, 0);
    const auto res = verify_decomposition(e.rep, dec);
    EXPECT_TRUE(res.pass) << e.name;
    EXPECT_LE(res.block, 1e-7);
    EXPECT_EQ(res.dimension_sum, e.rep.dim());
    int sum_m2 = 0;
    for (const auto& t : dec.types) {
      EXPECT_EQ(t.multiplicity, t.dim()) << e.name;
      sum_m2 += t.multiplicity * t.multiplicity;
    }
    EXPECT_EQ(res.commutant_dim, sum_m2);
    EXPECT_EQ(dec.d(), e.rep.group().conjugacy_classes().count());
    EXPECT_TRUE(multiplicity_crosscheck(e.rep, dec).pass);
  }
}

TEST(Decompose, TypesOrderedByDimension) {
  const auto dec = isotypic_decomposition(regular_representation(build_symmetric(4)), 0);
  const auto n = dec.dimensions();
  EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
  EXPECT_EQ(n, (std::vector<int>{1, 1, 2, 3, 3}));
}

TEST(Decompose, RecoversKnownStructureAfterRandomConjugation) {
  std::mt19937_64 rng(5);
  const auto g = build_dihedral(4);
  const auto irreps = testing::irreducibles(g);
  const auto sum = direct_sum({{irreps[0], 3}, {irreps[4], 2}, {irreps[2], 1}});
  const auto pi = conjugate_by(sum, testing::haar_unitary(sum.dim(), rng));
  const auto dec = isotypic_decomposition(pi, 9);
  EXPECT_TRUE(verify_decomposition(pi, dec).pass);
  const std::vector<std::pair<int, int>> expect{{1, 1}, {1, 3}, {2, 2}};
  EXPECT_EQ(nm_pairs(dec), expect);
}

TEST(Decompose, BasisVectorsTransformAsIrreducible) {
  const auto pi = regular_representation(build_symmetric(3));
  const auto dec = isotypic_decomposition(pi, 0);
  const int i = 2;
  const auto& t = dec.types[i];
  for (int g = 0; g < 6; ++g)
    for (int c = 0; c < t.multiplicity; ++c)
      for (int k = 0; k < t.dim(); ++k) {
        Vector expect = Vector::Zero(pi.dim());
        for (int l = 0; l < t.dim(); ++l) expect += t.rep(g)(l, k) * dec.basis_vector(i, c, l);
        EXPECT_LT((pi(g) * dec.basis_vector(i, c, k) - expect).norm(), 1e-10);
      }
}

TEST(Decompose, IsotypicProjectionsResolveIdentity) {
  const auto pi = regular_representation(build_quaternion());
  const auto dec = isotypic_decomposition(pi, 0);
  Matrix total = Matrix::Zero(8, 8);
  for (int i = 0; i < dec.d(); ++i) {
    const Matrix p = dec.isotypic_projection(i);
    EXPECT_LT((p * p - p).norm(), 1e-10);
    total += p;
  }
  EXPECT_LT((total - Matrix::Identity(8, 8)).norm(), 1e-10);
}

TEST(Decompose, DeterministicForFixedSeed) {
  const auto pi = regular_representation(build_dihedral(4));
  const auto a = isotypic_decomposition(pi, 42);
  const auto b = isotypic_decomposition(pi, 42);
  EXPECT_EQ((a.U - b.U).norm(), 0.0);
}

TEST(Decompose, IntertwinerRoutesAgree) {
  const auto g = build_symmetric(3);
  const auto irreps = testing::irreducibles(g);
  const auto pi = direct_sum({{irreps[2], 2}, {irreps[0], 1}});
  const auto sigma = direct_sum({{irreps[2], 1}, {irreps[1], 1}});
  const auto a = intertwiner_space_nullspace(pi, sigma);
  const auto b = intertwiner_space_sampled(pi, sigma, 3);
  ASSERT_EQ(a.dimension(), 2);
  ASSERT_EQ(b.dimension(), 2);
  for (const auto& m : b.basis) EXPECT_LT(a.distance_from_span(m), 1e-9);
  EXPECT_LT(a.orthonormality_defect(), 1e-10);
}

TEST(Decompose, SampledRouteAboveNullSpaceLimit) {
  // 24 x 24 unknowns exceed the null-space route
  const auto pi = regular_representation(build_symmetric(4));
  const auto comm = commutant_basis(pi);
  EXPECT_EQ(comm.dimension(), 24);
  EXPECT_LT(comm.orthonormality_defect(), 1e-9);
  for (const auto& b : comm.basis)
    for (int g = 0; g < 24; g += 5) EXPECT_LT((b * pi(g) - pi(g) * b).norm(), 1e-9);
}

TEST(Decompose, InequivalentIrreduciblesHaveNoIntertwiners) {
  const auto irreps = testing::irreducibles(build_dihedral(4));
  for (std::size_t a = 0; a < irreps.size(); ++a)
    for (std::size_t b = 0; b < irreps.size(); ++b)
      EXPECT_EQ(intertwiner_space(irreps[a], irreps[b]).dimension(), a == b ? 1 : 0);
}

TEST(Decompose, CommutantAndAlgebraDimensions) {
  const auto irreps = testing::irreducibles(build_symmetric(3));
  const auto pi = direct_sum({{irreps[2], 3}, {irreps[1], 2}});
  EXPECT_EQ(commutant_basis(pi).dimension(), 9 + 4);
  EXPECT_EQ(algebra_basis(pi).dimension(), 4 + 1);
}

TEST(Decompose, TrivialRepresentationOfHigherDimension) {
  const auto pi = trivial_representation(build_cyclic(3), 4);
  const auto dec = isotypic_decomposition(pi, 0);
  ASSERT_EQ(dec.d(), 1);
  EXPECT_EQ(dec.types[0].multiplicity, 4);
}

}  // namespace
}  // namespace twirl
