#include <gtest/gtest.h>

#include "support.hpp"

namespace twirl {
namespace {

TEST(Representation, RegularIsValidPermutationMatrices) {
  for (const auto& e : testing::regular_suite()) {
    const auto c = validate(e.rep);
    EXPECT_TRUE(c.pass) << e.name;
    EXPECT_LT(c.homomorphism_defect, 1e-12);
    EXPECT_EQ(e.rep.dim(), e.rep.group().order());
  }
}

TEST(Representation, RegularCharacter) {
  const auto pi = regular_representation(build_dihedral(4));
  const auto chi = character(pi);
  const int e = pi.group().identity();
  for (int g = 0; g < 8; ++g) EXPECT_NEAR(std::abs(chi.at_element(g) - Complex(g == e ? 8.0 : 0.0)), 0.0, 1e-12);
  // ⟨χ_reg, χ_reg⟩ = |G|
  EXPECT_NEAR(inner_product(chi, chi).real(), 8.0, 1e-12);
}

TEST(Representation, PerturbedMatricesFailValidation) {
  auto pi = regular_representation(build_symmetric(3));
  auto mats = pi.matrices();
  mats[1](0, 0) += 1e-3;
  const Representation bad(pi.group_ptr(), mats);
  const auto c = validate(bad);
  EXPECT_FALSE(c.pass);
  EXPECT_GE(c.failing_g, 0);
  EXPECT_THROW(require_valid(bad), Error);
  // a loose tolerance accepts it
  EXPECT_TRUE(validate(bad.with_tolerance(1e-1)).pass);
}

TEST(Representation, WrongMatrixCountRejected) {
  const auto g = build_cyclic(3);
  EXPECT_THROW(Representation(g, {Matrix::Identity(2, 2)}), Error);
}

TEST(Representation, DirectSumDimensionsAndCharacters) {
  const auto g = build_symmetric(3);
  const auto irreps = testing::irreducibles(g);
  ASSERT_EQ(irreps.size(), 3u);
  const auto sum = direct_sum({{irreps[0], 2}, {irreps[2], 3}});
  EXPECT_EQ(sum.dim(), 2 * irreps[0].dim() + 3 * irreps[2].dim());
  EXPECT_TRUE(validate(sum).pass);
  const auto chi = character(sum);
  EXPECT_NEAR(inner_product(chi, character(irreps[0])).real(), 2.0, 1e-10);
  EXPECT_NEAR(inner_product(chi, character(irreps[1])).real(), 0.0, 1e-10);
  EXPECT_NEAR(inner_product(chi, character(irreps[2])).real(), 3.0, 1e-10);
}

TEST(Representation, IrreducibleCharactersOrthonormal) {
  for (const auto& g : {build_symmetric(3), build_dihedral(4), build_quaternion(), build_cyclic(5)}) {
    const auto irreps = testing::irreducibles(g);
    int sum_sq = 0;
    for (std::size_t a = 0; a < irreps.size(); ++a) {
      sum_sq += irreps[a].dim() * irreps[a].dim();
      for (std::size_t b = 0; b < irreps.size(); ++b) {
        const double expect = a == b ? 1.0 : 0.0;
        EXPECT_NEAR(std::abs(inner_product(character(irreps[a]), character(irreps[b])) - expect), 0.0, 1e-9);
      }
    }
    EXPECT_EQ(sum_sq, g->order());
    EXPECT_EQ(static_cast<int>(irreps.size()), g->conjugacy_classes().count());
  }
}

TEST(Representation, OuterTensorIsRepresentationOfProduct) {
  const auto a = regular_representation(build_cyclic(2));
  const auto b = testing::irreducibles(build_symmetric(3))[2];
  const auto t = outer_tensor(a, b);
  EXPECT_EQ(t.dim(), 4);
  EXPECT_EQ(t.group().order(), 12);
  EXPECT_TRUE(validate(t).pass);
  const auto chi = character(t);
  EXPECT_NEAR(inner_product(chi, chi).real(), 2.0, 1e-10);
}

TEST(Representation, ConjugationPreservesCharacter) {
  std::mt19937_64 rng(3);
  const auto pi = regular_representation(build_dihedral(3));
  const auto rho = conjugate_by(pi, testing::haar_unitary(pi.dim(), rng));
  EXPECT_TRUE(validate(rho).pass);
  const auto a = character(pi);
  const auto b = character(rho);
  for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(std::abs(a.values[k] - b.values[k]), 0.0, 1e-10);
}

TEST(Representation, PermutationRepresentationOfS3OnThreePoints) {
  const auto g = build_symmetric(3);
  const auto perms = enumerate_permutations(3);
  std::vector<std::vector<int>> action(perms.begin(), perms.end());
  const auto pi = permutation_representation(g, action);
  EXPECT_TRUE(validate(pi).pass);
  const auto chi = character(pi);
  // trivial ⊕ standard: two constituents, each once
  EXPECT_NEAR(inner_product(chi, chi).real(), 2.0, 1e-10);
}

TEST(Representation, InvalidActionRejected) {
  const auto g = build_cyclic(3);
  EXPECT_THROW(permutation_representation(g, {{0, 1}, {0, 1}, {1, 0}}), Error);
}

TEST(Representation, GroupAverageLandsInCommutant) {
  std::mt19937_64 rng(11);
  const auto pi = regular_representation(build_quaternion());
  const Matrix x = linalg::random_gaussian(8, 8, rng);
  const Matrix avg = group_average(pi, x);
  for (int g = 0; g < 8; ++g) EXPECT_LT((avg * pi(g) - pi(g) * avg).norm(), 1e-12);
  EXPECT_LT((group_average(pi, avg) - avg).norm(), 1e-12);
}

}  // namespace
}  // namespace twirl
