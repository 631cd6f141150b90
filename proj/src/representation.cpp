#include "twirl/representation.hpp"

#include <sstream>

#include "twirl/linalg.hpp"
#include "twirl/parallel.hpp"

namespace twirl {

Representation::Representation(GroupPtr group, std::vector<Matrix> matrices, double tolerance)
    : group_(std::move(group)), matrices_(std::move(matrices)), tolerance_(tolerance) {
  if (!group_) throw Error(ErrorCode::invalid_parameter, "representation without a group");
  if (tolerance_ < 0.0) throw Error(ErrorCode::invalid_parameter, "negative tolerance");
  if (static_cast<int>(matrices_.size()) != group_->order()) {
    throw Error(ErrorCode::invalid_parameter, "expected one matrix per group element (" +
                                                  std::to_string(group_->order()) + "), got " +
                                                  std::to_string(matrices_.size()));
  }
  dim_ = static_cast<int>(matrices_.front().rows());
  if (dim_ < 1) throw Error(ErrorCode::invalid_parameter, "representation dimension must be positive");
  for (const auto& m : matrices_) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw Error(ErrorCode::invalid_parameter, "representation matrices must all be dim x dim");
    }
  }
}

RepresentationCertificate validate(const Representation& pi) {
  const auto& g = pi.group();
  const int n = g.order();
  RepresentationCertificate cert;

  std::vector<double> hom(n, 0.0);
  std::vector<int> worst_h(n, -1);
  parallel_for(n, [&](int a) {
    for (int b = 0; b < n; ++b) {
      const double d = (pi(a) * pi(b) - pi(g.mul(a, b))).norm();
      if (d > hom[a]) {
        hom[a] = d;
        worst_h[a] = b;
      }
    }
  });
  for (int a = 0; a < n; ++a) {
    if (hom[a] > cert.homomorphism_defect) {
      cert.homomorphism_defect = hom[a];
      cert.failing_g = a;
      cert.failing_h = worst_h[a];
    }
    cert.unitarity_defect = std::max(cert.unitarity_defect, linalg::unitarity_defect(pi(a)));
  }
  cert.identity_defect = (pi(g.identity()) - Matrix::Identity(pi.dim(), pi.dim())).norm();
  const double limit = pi.tolerance() * pi.dim();
  cert.pass = cert.homomorphism_defect <= limit && cert.unitarity_defect <= limit && cert.identity_defect <= limit;
  return cert;
}

void require_valid(const Representation& pi) {
  const auto cert = validate(pi);
  if (cert.pass) return;
  std::ostringstream msg;
  msg.precision(3);
  msg << "representation failed validation: homomorphism defect " << cert.homomorphism_defect;
  if (cert.failing_g >= 0) msg << " at (" << cert.failing_g << ", " << cert.failing_h << ")";
  msg << ", unitarity defect " << cert.unitarity_defect << ", identity defect " << cert.identity_defect
      << " (limit " << pi.tolerance() * pi.dim() << ")";
  throw Error(ErrorCode::inconsistent_representation, msg.str());
}

Complex inner_product(const ClassFunction& chi, const ClassFunction& psi) {
  const auto& cls = chi.group->conjugacy_classes();
  Complex acc = 0.0;
  for (int c = 0; c < cls.count(); ++c) {
    acc += static_cast<double>(cls.classes[c].size()) * chi.values[c] * std::conj(psi.values[c]);
  }
  return acc / static_cast<double>(chi.group->order());
}

ClassFunction character(const Representation& pi) {
  const auto& cls = pi.group().conjugacy_classes();
  ClassFunction chi{pi.group_ptr(), std::vector<Complex>(cls.count())};
  const double limit = std::max(pi.tolerance(), 1e-12) * pi.dim();
  for (int c = 0; c < cls.count(); ++c) {
    const Complex first = pi(cls.classes[c].front()).trace();
    for (int g : cls.classes[c]) {
      const Complex t = pi(g).trace();
      if (std::abs(t - first) > limit) {
        throw Error(ErrorCode::inconsistent_representation,
                    "trace not constant on conjugacy class of element " + std::to_string(cls.representatives[c]));
      }
    }
    chi.values[c] = first;
  }
  return chi;
}

Representation trivial_representation(GroupPtr group, int dim) {
  if (dim < 1) throw Error(ErrorCode::invalid_parameter, "dimension must be positive");
  std::vector<Matrix> mats(group->order(), Matrix::Identity(dim, dim));
  return Representation(std::move(group), std::move(mats));
}

Representation regular_representation(GroupPtr group) {
  const int n = group->order();
  if (n > kMaxRegularOrder) {
    throw Error(ErrorCode::size_limit, "regular representation needs |G| <= " + std::to_string(kMaxRegularOrder));
  }
  std::vector<Matrix> mats(n, Matrix::Zero(n, n));
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) mats[g](group->mul(g, h), h) = 1.0;
  }
  return Representation(std::move(group), std::move(mats));
}

Representation permutation_representation(GroupPtr group, const std::vector<std::vector<int>>& action) {
  const int n = group->order();
  if (static_cast<int>(action.size()) != n) {
    throw Error(ErrorCode::invalid_action, "action must list one permutation per element");
  }
  const int k = static_cast<int>(action.front().size());
  for (int g = 0; g < n; ++g) {
    std::vector<char> seen(k, 0);
    if (static_cast<int>(action[g].size()) != k) throw Error(ErrorCode::invalid_action, "ragged action");
    for (int p : action[g]) {
      if (p < 0 || p >= k || seen[p]++) {
        throw Error(ErrorCode::invalid_action, "image of element " + std::to_string(g) + " is not a permutation");
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto& ab = action[group->mul(a, b)];
      for (int p = 0; p < k; ++p) {
        if (ab[p] != action[a][action[b][p]]) {
          throw Error(ErrorCode::invalid_action, "action is not a homomorphism at pair (" + std::to_string(a) + ", " +
                                                     std::to_string(b) + ")");
        }
      }
    }
  }
  std::vector<Matrix> mats(n, Matrix::Zero(k, k));
  for (int g = 0; g < n; ++g) {
    for (int p = 0; p < k; ++p) mats[g](action[g][p], p) = 1.0;
  }
  return Representation(std::move(group), std::move(mats));
}

Representation direct_sum(const std::vector<std::pair<Representation, int>>& parts) {
  if (parts.empty()) throw Error(ErrorCode::invalid_parameter, "direct sum of nothing");
  const auto& group = parts.front().first.group_ptr();
  int dim = 0;
  double tol = 0.0;
  for (const auto& [rep, mult] : parts) {
    if (rep.group_ptr() != group && rep.group().table() != group->table()) {
      throw Error(ErrorCode::invalid_parameter, "direct sum parts act on different groups");
    }
    if (mult < 1) throw Error(ErrorCode::invalid_parameter, "multiplicity must be positive");
    dim += rep.dim() * mult;
    tol = std::max(tol, rep.tolerance());
  }
  std::vector<Matrix> mats(group->order(), Matrix::Zero(dim, dim));
  for (int g = 0; g < group->order(); ++g) {
    int offset = 0;
    for (const auto& [rep, mult] : parts) {
      for (int c = 0; c < mult; ++c) {
        mats[g].block(offset, offset, rep.dim(), rep.dim()) = rep(g);
        offset += rep.dim();
      }
    }
  }
  return Representation(group, std::move(mats), tol);
}

Representation outer_tensor(const Representation& a, const Representation& b) {
  const long long dim = static_cast<long long>(a.dim()) * b.dim();
  if (dim > kMaxTensorDim) {
    throw Error(ErrorCode::size_limit, "tensor dimension " + std::to_string(dim) + " exceeds " +
                                           std::to_string(kMaxTensorDim));
  }
  auto group = build_direct_product(a.group(), b.group());
  const int nb = b.group().order();
  std::vector<Matrix> mats(group->order());
  for (int x = 0; x < group->order(); ++x) mats[x] = linalg::kron(a(x / nb), b(x % nb));
  return Representation(std::move(group), std::move(mats), std::max(a.tolerance(), b.tolerance()));
}

Representation restrict_to(const Representation& pi, const Matrix& isometry) {
  std::vector<Matrix> mats(pi.group().order());
  for (int g = 0; g < pi.group().order(); ++g) mats[g] = isometry.adjoint() * pi(g) * isometry;
  return Representation(pi.group_ptr(), std::move(mats), pi.tolerance());
}

Representation conjugate_by(const Representation& pi, const Matrix& unitary) {
  std::vector<Matrix> mats(pi.group().order());
  for (int g = 0; g < pi.group().order(); ++g) mats[g] = unitary * pi(g) * unitary.adjoint();
  return Representation(pi.group_ptr(), std::move(mats), pi.tolerance());
}

Matrix group_average(const Representation& pi, const Representation& sigma, const Matrix& x) {
  if (x.rows() != pi.dim() || x.cols() != sigma.dim()) {
    throw Error(ErrorCode::invalid_parameter, "group_average: operand has wrong shape");
  }
  Matrix acc = Matrix::Zero(pi.dim(), sigma.dim());
  for (int g = 0; g < pi.group().order(); ++g) acc.noalias() += pi(g) * x * sigma(g).adjoint();
  return acc / static_cast<double>(pi.group().order());
}

}  // namespace twirl
