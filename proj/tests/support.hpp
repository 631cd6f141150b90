#pragma once

#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "twirl/invariants.hpp"
#include "twirl/linalg.hpp"
#include "twirl/phase_retrieval.hpp"

namespace twirl::testing {

struct SuiteEntry {
  std::string name;
  Representation rep;
};

// Q8 assembled from its 2x2 matrix realization, independent of build_quaternion.
inline GroupPtr quaternion_from_matrices() {
  const Complex i(0.0, 1.0);
  Matrix one = Matrix::Identity(2, 2);
  Matrix qi(2, 2), qj(2, 2), qk(2, 2);
  qi << i, 0, 0, -i;
  qj << 0, 1, -1, 0;
  qk = qi * qj;
  std::vector<Matrix> elems{one, qi, qj, qk, -one, -qi, -qj, -qk};
  const std::vector<std::string> labels{"1", "i", "j", "k", "-1", "-i", "-j", "-k"};
  std::vector<std::vector<int>> table(8, std::vector<int>(8, -1));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        if ((elems[a] * elems[b] - elems[c]).norm() < 1e-12) table[a][b] = c;
  return build_from_cayley_table(labels, table);
}

inline std::vector<SuiteEntry> regular_suite() {
  std::vector<SuiteEntry> out;
  for (int n = 1; n <= 6; ++n) out.push_back({"Z" + std::to_string(n), regular_representation(build_cyclic(n))});
  out.push_back({"S3", regular_representation(build_symmetric(3))});
  out.push_back({"D4", regular_representation(build_dihedral(4))});
  out.push_back({"Q8", regular_representation(quaternion_from_matrices())});
  return out;
}

inline Matrix haar_unitary(int n, std::mt19937_64& rng) { return linalg::random_isometry(n, n, rng); }

// Irreducibles of a group, read off a decomposition of its regular representation.
inline std::vector<Representation> irreducibles(const GroupPtr& g) {
  const auto dec = isotypic_decomposition(regular_representation(g), 7);
  std::vector<Representation> irreps;
  for (const auto& t : dec.types) irreps.push_back(t.rep);
  return irreps;
}

inline double frobenius_inner(const Matrix& a, const Matrix& b) { return std::real((a.adjoint() * b).trace()); }

}  // namespace twirl::testing
