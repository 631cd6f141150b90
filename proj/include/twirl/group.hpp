#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "twirl/types.hpp"

namespace twirl {

inline constexpr int kMaxGroupOrder = 10000;
inline constexpr int kMaxSymmetricDegree = 6;
inline constexpr int kExhaustiveAssociativityOrder = 200;

/// Partition of the elements into conjugacy classes. Classes are ordered by
/// their smallest element, which is also the representative; the identity
/// class comes first.
struct ConjugacyClasses {
  std::vector<std::vector<int>> classes;
  std::vector<int> representatives;
  std::vector<int> class_of;  // element index -> class index

  int count() const { return static_cast<int>(classes.size()); }
};

/// A finite group stored as a validated Cayley table. Element order is fixed
/// at construction and is what every downstream index refers to.
class FiniteGroup {
 public:
  /// Validates the table: Latin square, identity, inverses, associativity
  /// (exhaustive up to order 200, otherwise 10·order² seeded random triples).
  FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table);

  int order() const { return order_; }
  int identity() const { return identity_; }
  int mul(int g, int h) const { return table_[static_cast<std::size_t>(g) * order_ + h]; }
  int inverse(int g) const { return inverses_[g]; }
  const std::vector<int>& inverses() const { return inverses_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::vector<std::vector<int>> table() const;

  /// Multiplicative order of an element.
  int element_order(int g) const;
  bool is_abelian() const;

  const ConjugacyClasses& conjugacy_classes() const { return classes_; }

 private:
  void validate();
  void compute_classes();

  int order_ = 0;
  int identity_ = 0;
  std::vector<std::string> labels_;
  std::vector<int> table_;
  std::vector<int> inverses_;
  ConjugacyClasses classes_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr build_cyclic(int n);

/// D_n of order 2n: rotations r^k at indices [0, n), reflections s·r^k at
/// [n, 2n).
GroupPtr build_dihedral(int n);

/// S_n with permutations enumerated in lexicographic order; (g·h)(p) = g(h(p)).
GroupPtr build_symmetric(int n);

/// G × H with (g, h) at index g·|H| + h.
GroupPtr build_direct_product(const FiniteGroup& g, const FiniteGroup& h);

GroupPtr build_from_cayley_table(std::vector<std::string> labels, std::vector<std::vector<int>> table);

/// Quaternion group Q_8 = {±1, ±i, ±j, ±k}.
GroupPtr build_quaternion();

const ConjugacyClasses& conjugacy_classes(const FiniteGroup& g);

/// Permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> enumerate_permutations(int n);

}  // namespace twirl
