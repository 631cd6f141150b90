#include "twirl/group.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace twirl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::size_limit: return "size-limit";
    case ErrorCode::invalid_table: return "invalid-table";
    case ErrorCode::not_a_group: return "not-a-group";
    case ErrorCode::invalid_action: return "invalid-action";
    case ErrorCode::inconsistent_representation: return "inconsistent-representation";
    case ErrorCode::degenerate_commutant_element: return "degenerate-commutant-element";
    case ErrorCode::decomposition_inconsistent: return "decomposition-inconsistent";
    case ErrorCode::not_trace_preserving: return "not-trace-preserving";
    case ErrorCode::not_completely_positive: return "not-completely-positive";
    case ErrorCode::not_a_frame: return "not-a-frame";
    case ErrorCode::witness_failed: return "witness-failed";
    case ErrorCode::construction_failed: return "construction-failed";
    case ErrorCode::frame_not_retrievable: return "frame-not-retrievable";
    case ErrorCode::equivalence_violation: return "equivalence-violation";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

FiniteGroup::FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table)
    : order_(static_cast<int>(table.size())), labels_(std::move(labels)) {
  if (order_ == 0) throw Error(ErrorCode::invalid_table, "empty Cayley table");
  if (order_ > kMaxGroupOrder) {
    throw Error(ErrorCode::size_limit, "group order " + std::to_string(order_) + " exceeds " +
                                           std::to_string(kMaxGroupOrder));
  }
  if (labels_.empty()) {
    for (int i = 0; i < order_; ++i) labels_.push_back(std::to_string(i));
  }
  if (static_cast<int>(labels_.size()) != order_) {
    throw Error(ErrorCode::invalid_table, "label count does not match table size");
  }
  table_.resize(static_cast<std::size_t>(order_) * order_);
  for (int g = 0; g < order_; ++g) {
    if (static_cast<int>(table[g].size()) != order_) {
      throw Error(ErrorCode::invalid_table, "row " + std::to_string(g) + " has wrong length");
    }
    for (int h = 0; h < order_; ++h) {
      const int v = table[g][h];
      if (v < 0 || v >= order_) {
        throw Error(ErrorCode::invalid_table, "entry out of range at (" + std::to_string(g) + "," +
                                                  std::to_string(h) + ")");
      }
      table_[static_cast<std::size_t>(g) * order_ + h] = v;
    }
  }
  validate();
  compute_classes();
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> out(order_, std::vector<int>(order_));
  for (int g = 0; g < order_; ++g) {
    for (int h = 0; h < order_; ++h) out[g][h] = mul(g, h);
  }
  return out;
}

void FiniteGroup::validate() {
  const int n = order_;
  std::vector<char> seen(n);
  for (int g = 0; g < n; ++g) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int h = 0; h < n; ++h) {
      if (seen[mul(g, h)]++) throw Error(ErrorCode::invalid_table, "row " + std::to_string(g) + " is not a permutation");
    }
  }
  for (int h = 0; h < n; ++h) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int g = 0; g < n; ++g) {
      if (seen[mul(g, h)]++) {
        throw Error(ErrorCode::invalid_table, "column " + std::to_string(h) + " is not a permutation");
      }
    }
  }

  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = mul(e, g) == g && mul(g, e) == g;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw Error(ErrorCode::not_a_group, "no two-sided identity");

  inverses_.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (mul(g, h) == identity_) {
        inverses_[g] = h;
        break;
      }
    }
    if (inverses_[g] < 0 || mul(inverses_[g], g) != identity_) {
      throw Error(ErrorCode::not_a_group, "element " + labels_[g] + " has no two-sided inverse");
    }
  }

  auto check = [&](int a, int b, int c) {
    if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
      std::ostringstream msg;
      msg << "associativity fails for triple (" << a << ", " << b << ", " << c << ") = (" << labels_[a] << ", "
          << labels_[b] << ", " << labels_[c] << ")";
      throw Error(ErrorCode::not_a_group, msg.str());
    }
  };
  if (n <= kExhaustiveAssociativityOrder) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed0fa55ULL + static_cast<std::uint64_t>(n));
    std::uniform_int_distribution<int> pick(0, n - 1);
    const long long samples = 10LL * n * n;
    for (long long s = 0; s < samples; ++s) {
      const int a = pick(rng);
      const int b = pick(rng);
      const int c = pick(rng);
      check(a, b, c);
    }
  }
}

void FiniteGroup::compute_classes() {
  const int n = order_;
  classes_.class_of.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (classes_.class_of[x] >= 0) continue;
    const int idx = classes_.count();
    std::vector<int> members;
    for (int g = 0; g < n; ++g) {
      const int y = mul(mul(g, x), inverses_[g]);
      if (classes_.class_of[y] < 0) {
        classes_.class_of[y] = idx;
        members.push_back(y);
      }
    }
    std::sort(members.begin(), members.end());
    classes_.classes.push_back(std::move(members));
    classes_.representatives.push_back(x);
  }
  // The identity is its own class; move it to the front if it is not index 0.
  const int id_class = classes_.class_of[identity_];
  if (id_class != 0) {
    std::rotate(classes_.classes.begin(), classes_.classes.begin() + id_class,
                classes_.classes.begin() + id_class + 1);
    std::rotate(classes_.representatives.begin(), classes_.representatives.begin() + id_class,
                classes_.representatives.begin() + id_class + 1);
    for (int c = 0; c < classes_.count(); ++c) {
      for (int x : classes_.classes[c]) classes_.class_of[x] = c;
    }
  }
}

int FiniteGroup::element_order(int g) const {
  int k = 1;
  int x = g;
  while (x != identity_) {
    x = mul(x, g);
    ++k;
  }
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (int g = 0; g < order_; ++g)
    for (int h = g + 1; h < order_; ++h)
      if (mul(g, h) != mul(h, g)) return false;
  return true;
}

const ConjugacyClasses& conjugacy_classes(const FiniteGroup& g) { return g.conjugacy_classes(); }

GroupPtr build_cyclic(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "cyclic group needs n >= 1");
  if (n > kMaxGroupOrder) throw Error(ErrorCode::size_limit, "cyclic order too large");
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g) {
    labels.push_back(g == 0 ? "e" : "r^" + std::to_string(g));
    for (int h = 0; h < n; ++h) table[g][h] = (g + h) % n;
  }
  return std::make_shared<const FiniteGroup>(std::move(labels), std::move(table));
}

GroupPtr build_dihedral(int n) {
  if (n < 2) throw Error(ErrorCode::invalid_parameter, "dihedral group needs n >= 2");
  if (2 * n > kMaxGroupOrder) throw Error(ErrorCode::size_limit, "dihedral order too large");
  // Element (f, k) = s^f r^k at index f·n + k; r s = s r^{-1}.
  const int order = 2 * n;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a) {
    const int fa = a / n;
    const int ka = a % n;
    std::string label = fa ? "s" : "";
    if (ka != 0) label += "r^" + std::to_string(ka);
    labels.push_back(label.empty() ? "e" : label);
    for (int b = 0; b < order; ++b) {
      const int fb = b / n;
      const int kb = b % n;
      // s^fa r^ka s^fb r^kb = s^(fa+fb) r^((fb ? -ka : ka) + kb)
      const int f = (fa + fb) % 2;
      const int k = (((fb ? -ka : ka) + kb) % n + n) % n;
      table[a][b] = f * n + k;
    }
  }
  return std::make_shared<const FiniteGroup>(std::move(labels), std::move(table));
}

std::vector<std::vector<int>> enumerate_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GroupPtr build_symmetric(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "symmetric group needs n >= 1");
  if (n > kMaxSymmetricDegree) {
    throw Error(ErrorCode::size_limit, "symmetric group degree " + std::to_string(n) + " exceeds " +
                                           std::to_string(kMaxSymmetricDegree));
  }
  const auto perms = enumerate_permutations(n);
  const int order = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& p) {
    return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  std::vector<int> comp(n);
  for (int a = 0; a < order; ++a) {
    std::string label = "[";
    for (int i = 0; i < n; ++i) label += (i ? " " : "") + std::to_string(perms[a][i]);
    labels.push_back(label + "]");
    for (int b = 0; b < order; ++b) {
      for (int i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
      table[a][b] = index_of(comp);
    }
  }
  return std::make_shared<const FiniteGroup>(std::move(labels), std::move(table));
}

GroupPtr build_direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const long long order = static_cast<long long>(g.order()) * h.order();
  if (order > kMaxGroupOrder) {
    throw Error(ErrorCode::size_limit, "product order " + std::to_string(order) + " exceeds " +
                                           std::to_string(kMaxGroupOrder));
  }
  const int n = static_cast<int>(order);
  const int nh = h.order();
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    labels.push_back("(" + g.labels()[a / nh] + "," + h.labels()[a % nh] + ")");
    for (int b = 0; b < n; ++b) {
      table[a][b] = g.mul(a / nh, b / nh) * nh + h.mul(a % nh, b % nh);
    }
  }
  return std::make_shared<const FiniteGroup>(std::move(labels), std::move(table));
}

GroupPtr build_from_cayley_table(std::vector<std::string> labels, std::vector<std::vector<int>> table) {
  return std::make_shared<const FiniteGroup>(std::move(labels), std::move(table));
}

GroupPtr build_quaternion() {
  // Index = sign·4 + unit, unit in {1, i, j, k}; sign 0 is +.
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  const char* names[4] = {"1", "i", "j", "k"};
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a) {
    labels.push_back(std::string(a / 4 ? "-" : "") + names[a % 4]);
    for (int b = 0; b < 8; ++b) {
      const int ua = a % 4;
      const int ub = b % 4;
      const int sign = (a / 4 + b / 4 + unit_sign[ua][ub]) % 2;
      table[a][b] = sign * 4 + unit_mul[ua][ub];
    }
  }
  return build_from_cayley_table(std::move(labels), std::move(table));
}

}  // namespace twirl
