#include "twirl/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "twirl/linalg.hpp"
#include "twirl/parallel.hpp"

namespace twirl {
namespace {

double resolve_tol(double tol, int dim) { return tol > 0.0 ? tol : kWitnessTolerance * std::max(1, dim); }

int argmax_multiplicity(const IsotypicDecomposition& decomp) {
  int best = 0;
  for (int i = 1; i < decomp.d(); ++i)
    if (decomp.types[i].multiplicity > decomp.types[best].multiplicity) best = i;
  return best;
}

int argmax_dimension(const IsotypicDecomposition& decomp) {
  int best = 0;
  for (int i = 1; i < decomp.d(); ++i)
    if (decomp.types[i].dim() > decomp.types[best].dim()) best = i;
  return best;
}

void finish(WitnessCertificate& cert) {
  cert.pass = true;
  for (const auto& [name, value] : cert.residuals) {
    if (!(value <= cert.tolerance)) cert.pass = false;
  }
}

void check_shapes(const Representation& pi, const IsotypicDecomposition& decomp) {
  if (decomp.ambient_dim() != pi.dim()) {
    throw Error(ErrorCode::invalid_parameter, "decomposition does not belong to this representation");
  }
}

// Columns π(g)x for every g, one block per vector.
std::vector<Matrix> orbit_blocks(const Representation& pi, const Matrix& vectors) {
  const int order = pi.group().order();
  std::vector<Matrix> z(vectors.cols(), Matrix(pi.dim(), order));
  for (int g = 0; g < order; ++g) {
    const Matrix moved = pi(g) * vectors;
    for (Eigen::Index a = 0; a < vectors.cols(); ++a) z[a].col(g) = moved.col(a);
  }
  return z;
}

}  // namespace

const char* to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::independent_set: return "independent-set";
    case WitnessKind::code_subspace: return "code-subspace";
    case WitnessKind::orthogonal_family: return "orthogonal-family";
    case WitnessKind::tau_subspace: return "tau-subspace";
  }
  return "unknown";
}

double WitnessCertificate::max_residual() const {
  double m = 0.0;
  for (const auto& [name, value] : residuals) m = std::max(m, value);
  return m;
}

int alpha_closed(const IsotypicDecomposition& decomp) {
  int s = 0;
  for (const auto& t : decomp.types) s += t.multiplicity;
  return s;
}

int beta_closed(const IsotypicDecomposition& decomp) {
  int m = 0;
  for (const auto& t : decomp.types) m = std::max(m, t.multiplicity);
  return m;
}

int gamma_closed(const IsotypicDecomposition& decomp) {
  int s = 0;
  for (const auto& t : decomp.types) s += t.dim();
  return s;
}

int tau_closed(const IsotypicDecomposition& decomp) {
  int m = 0;
  for (const auto& t : decomp.types) m = std::max(m, t.dim());
  return m;
}

double zero_error_capacity(const IsotypicDecomposition& decomp, double base) {
  if (!(base > 0.0) || base == 1.0) throw Error(ErrorCode::invalid_parameter, "logarithm base must be positive and not 1");
  return std::log(static_cast<double>(alpha_closed(decomp))) / std::log(base);
}

double output_overlap(const QuantumChannel& phi, const Matrix& vectors, int* worst_a, int* worst_b) {
  const std::vector<Matrix> kraus = phi.kraus() ? *phi.kraus() : kraus_from_choi(phi);
  const int n = static_cast<int>(vectors.cols());
  const int r = static_cast<int>(kraus.size());
  std::vector<Matrix> f(n, Matrix(phi.out_dim(), r));
  for (int k = 0; k < r; ++k) {
    const Matrix moved = kraus[k] * vectors;
    for (int a = 0; a < n; ++a) f[a].col(k) = moved.col(a);
  }
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      // ⟨Φ(xx*), Φ(yy*)⟩ = Σ_ij |⟨E_j y, E_i x⟩|²
      const double v = (f[a].adjoint() * f[b]).norm();
      if (v > worst) {
        worst = v;
        if (worst_a) *worst_a = a;
        if (worst_b) *worst_b = b;
      }
    }
  return worst;
}

WitnessCertificate alpha_witness(const Representation& pi, const IsotypicDecomposition& decomp, double tol) {
  check_shapes(pi, decomp);
  WitnessCertificate cert;
  cert.kind = WitnessKind::independent_set;
  cert.tolerance = resolve_tol(tol, pi.dim());
  const int n = alpha_closed(decomp);
  cert.vectors.resize(pi.dim(), n);
  int col = 0;
  for (int i = 0; i < decomp.d(); ++i)
    for (int c = 0; c < decomp.types[i].multiplicity; ++c) cert.vectors.col(col++) = decomp.basis_vector(i, c, 0);

  const int order = pi.group().order();
  std::vector<double> worst(order, 0.0);
  std::vector<std::pair<int, int>> where(order, {-1, -1});
  parallel_for(order, [&](int g) {
    const Matrix gram = cert.vectors.adjoint() * pi(g) * cert.vectors;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a != b && std::abs(gram(b, a)) > worst[g]) {
          worst[g] = std::abs(gram(b, a));
          where[g] = {a, b};
        }
      }
  });
  double cross = 0.0;
  for (int g = 0; g < order; ++g) {
    if (worst[g] > cross) {
      cross = worst[g];
      cert.failing_a = where[g].first;
      cert.failing_b = where[g].second;
    }
  }
  cert.residuals["cross_inner"] = cross;
  cert.residuals["orthonormality"] = linalg::orthonormality_defect(cert.vectors);
  cert.residuals["outputs"] = output_overlap(twirling_channel(pi).channel(), cert.vectors);
  finish(cert);
  return cert;
}

WitnessCertificate code_witness(const Representation& pi, const IsotypicDecomposition& decomp, double tol) {
  check_shapes(pi, decomp);
  WitnessCertificate cert;
  cert.kind = WitnessKind::code_subspace;
  cert.tolerance = resolve_tol(tol, pi.dim());
  const int best = argmax_multiplicity(decomp);
  const int m = decomp.types[best].multiplicity;
  cert.vectors.resize(pi.dim(), m);
  for (int c = 0; c < m; ++c) cert.vectors.col(c) = decomp.basis_vector(best, c, 0);

  const int order = pi.group().order();
  cert.coefficients.resize(order, 1);
  double kl = 0.0;
  for (int g = 0; g < order; ++g) {
    // P π(g) P − c_g P measured in the basis of 𝒞
    const Matrix block = cert.vectors.adjoint() * pi(g) * cert.vectors;
    const Complex c = block.trace() / static_cast<double>(m);
    cert.coefficients(g, 0) = c;
    const double r = (block - c * Matrix::Identity(m, m)).norm();
    if (r > kl) {
      kl = r;
      cert.failing_a = g;
    }
  }
  cert.residuals["kl"] = kl;
  cert.residuals["orthonormality"] = linalg::orthonormality_defect(cert.vectors);
  finish(cert);
  return cert;
}

WitnessCertificate verify_code(const QuantumChannel& phi, const Matrix& projection, double tol) {
  const int n = phi.in_dim();
  if (projection.rows() != n || projection.cols() != n) {
    throw Error(ErrorCode::invalid_parameter, "projection does not act on the channel input");
  }
  const double scale = std::max(1, n);
  const double idem = (projection * projection - projection).norm();
  const double herm = (projection - projection.adjoint()).norm();
  if (idem > 1e-8 * scale || herm > 1e-8 * scale) {
    throw Error(ErrorCode::invalid_parameter, "not an orthogonal projection (P^2-P " + std::to_string(idem) +
                                                  ", P-P* " + std::to_string(herm) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(projection));
  std::vector<int> keep;
  for (int j = n - 1; j >= 0; --j)
    if (es.eigenvalues()(j) > 0.5) keep.push_back(j);
  if (keep.empty()) throw Error(ErrorCode::invalid_parameter, "projection is zero");
  const int k = static_cast<int>(keep.size());
  Matrix v(n, k);
  for (int j = 0; j < k; ++j) v.col(j) = es.eigenvectors().col(keep[j]);

  const std::vector<Matrix> kraus = phi.kraus() ? *phi.kraus() : kraus_from_choi(phi);
  const int r = static_cast<int>(kraus.size());
  std::vector<Matrix> b(r);
  for (int i = 0; i < r; ++i) b[i] = kraus[i] * v;

  WitnessCertificate cert;
  cert.kind = WitnessKind::code_subspace;
  cert.tolerance = tol;
  cert.vectors = v;
  cert.coefficients.resize(r, r);
  double kl = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Matrix prod = b[i].adjoint() * b[j];
      const Complex a = prod.trace() / static_cast<double>(k);
      cert.coefficients(i, j) = a;
      const double res = (prod - a * Matrix::Identity(k, k)).norm();
      if (res > kl) {
        kl = res;
        cert.failing_a = i;
        cert.failing_b = j;
      }
    }
  cert.residuals["kl"] = kl;
  cert.residuals["hermitian"] = (cert.coefficients - cert.coefficients.adjoint()).norm();

  // x_k with x_l, then (x_k + x_l)/√2 with (x_k − x_l)/√2
  double outputs = 0.0;
  const double h = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      Matrix pair(n, 2);
      pair << v.col(p), v.col(q);
      outputs = std::max(outputs, output_overlap(phi, pair));
      pair << h * (v.col(p) + v.col(q)), h * (v.col(p) - v.col(q));
      outputs = std::max(outputs, output_overlap(phi, pair));
    }
  cert.residuals["outputs"] = outputs;
  finish(cert);
  return cert;
}

WitnessCertificate gamma_witness(const Representation& pi, const IsotypicDecomposition& decomp, double tol) {
  check_shapes(pi, decomp);
  WitnessCertificate cert;
  cert.kind = WitnessKind::orthogonal_family;
  cert.tolerance = resolve_tol(tol, pi.dim());
  const int n = gamma_closed(decomp);
  cert.vectors.resize(pi.dim(), n);
  int col = 0;
  for (int i = 0; i < decomp.d(); ++i) {
    const auto& t = decomp.types[i];
    for (int j = 0; j < t.dim(); ++j) cert.vectors.col(col++) = decomp.basis_vector(i, j % t.multiplicity, j);
  }

  const std::vector<Matrix> z = orbit_blocks(pi, cert.vectors);
  const double inv = 1.0 / pi.group().order();
  double channel = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double v = inv * (z[a] * z[b].adjoint()).norm();
      if (v > channel) {
        channel = v;
        cert.failing_a = a;
        cert.failing_b = b;
      }
    }
  const auto comm = commutant_basis(pi);
  double commutant = 0.0;
  for (const auto& bk : comm.basis) {
    const Matrix gram = cert.vectors.adjoint() * bk * cert.vectors;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) commutant = std::max(commutant, std::abs(gram(a, b)));
  }
  cert.residuals["channel"] = channel;
  cert.residuals["commutant"] = commutant;
  cert.residuals["orthonormality"] = linalg::orthonormality_defect(cert.vectors);
  finish(cert);
  return cert;
}

WitnessCertificate tau_witness(const Representation& pi, const IsotypicDecomposition& decomp, double tol) {
  check_shapes(pi, decomp);
  WitnessCertificate cert;
  cert.kind = WitnessKind::tau_subspace;
  cert.tolerance = resolve_tol(tol, pi.dim());
  const int best = argmax_dimension(decomp);
  const int n = decomp.types[best].dim();
  cert.vectors.resize(pi.dim(), n);
  for (int k = 0; k < n; ++k) cert.vectors.col(k) = decomp.basis_vector(best, 0, k);

  // E_kl (k ≠ l) and E_kk − E_{k+1,k+1}
  std::vector<Matrix> basis;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (k == l && k + 1 == n) continue;
      Matrix t = Matrix::Zero(n, n);
      if (k == l) {
        t(k, k) = 1.0;
        t(k + 1, k + 1) = -1.0;
      } else {
        t(k, l) = 1.0;
      }
      basis.push_back(std::move(t));
    }
  std::vector<double> images(basis.size(), 0.0);
  parallel_for(static_cast<int>(basis.size()), [&](int j) {
    images[j] = group_average(pi, cert.vectors * basis[j] * cert.vectors.adjoint()).norm();
  });
  double worst = 0.0;
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (images[j] > worst) {
      worst = images[j];
      cert.failing_a = static_cast<int>(j);
    }
  }
  cert.residuals["trace_zero_images"] = worst;
  cert.residuals["orthonormality"] = linalg::orthonormality_defect(cert.vectors);
  finish(cert);
  return cert;
}

OrthogonalityPair orthogonality_pair(const Representation& pi, const OperatorSpaceBasis& commutant, const Vector& x,
                                     const Vector& y) {
  OrthogonalityPair p;
  p.channel_norm = group_average(pi, x * y.adjoint()).norm();
  for (const auto& b : commutant.basis) p.commutant_max = std::max(p.commutant_max, std::abs(x.dot(b * y)));
  return p;
}

CapacityTensorReport capacity_tensor_check(const Representation& pi, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "tensor power must be at least 1");
  double order_pow = 1.0;
  double dim_pow = 1.0;
  for (int k = 0; k < n; ++k) {
    order_pow *= pi.group().order();
    dim_pow *= pi.dim();
  }
  if (order_pow > kMaxGroupOrder) throw Error(ErrorCode::size_limit, "|G|^n exceeds the group order cap");
  if (dim_pow > kMaxTensorDim) throw Error(ErrorCode::size_limit, "dim^n exceeds the tensor dimension cap");

  CapacityTensorReport rep;
  rep.power = n;
  const auto base = isotypic_decomposition(pi, seed);
  rep.alpha_base = alpha_closed(base);
  rep.types_base = base.d();
  Representation power = pi;
  for (int k = 1; k < n; ++k) power = outer_tensor(power, pi);
  const auto tensor = isotypic_decomposition(power, seed);
  rep.alpha_tensor = alpha_closed(tensor);
  rep.types_tensor = tensor.d();
  rep.expected_alpha = 1;
  for (int k = 0; k < n; ++k) rep.expected_alpha *= rep.alpha_base;

  // product characters χ_{k₁}(g₁)···χ_{kₙ}(gₙ) over Gⁿ
  const int order = pi.group().order();
  const int d = base.d();
  std::vector<std::vector<Complex>> chi(d, std::vector<Complex>(order));
  for (int i = 0; i < d; ++i)
    for (int g = 0; g < order; ++g) chi[i][g] = base.types[i].character.at_element(g);
  const int tuples = static_cast<int>(std::lround(std::pow(d, n)));
  const int elements = static_cast<int>(order_pow);
  Matrix table(tuples, elements);
  for (int t = 0; t < tuples; ++t)
    for (int x = 0; x < elements; ++x) {
      Complex v = 1.0;
      int tt = t;
      int xx = x;
      for (int k = 0; k < n; ++k) {
        v *= chi[tt % d][xx % order];
        tt /= d;
        xx /= order;
      }
      table(t, x) = v;
    }
  const Matrix gram = table * table.adjoint() / static_cast<double>(elements);
  rep.product_type_gram_defect = (gram - Matrix::Identity(tuples, tuples)).norm();
  rep.pass = rep.alpha_tensor == rep.expected_alpha && rep.types_tensor == tuples &&
             rep.product_type_gram_defect <= 1e-8;
  return rep;
}

AlphaProbe alpha_non_improvement(const Representation& pi, const WitnessCertificate& alpha, std::uint64_t seed,
                                 int trials) {
  AlphaProbe probe;
  const int dim = pi.dim();
  const Matrix& x = alpha.vectors;
  if (x.cols() >= dim) return probe;
  std::mt19937_64 rng(seed ^ 0xa1fa'0000ULL);
  const auto phi = twirling_channel(pi).channel();
  probe.min_violation = std::numeric_limits<double>::infinity();
  Matrix extended(dim, x.cols() + 1);
  extended.leftCols(x.cols()) = x;
  for (int t = 0; t < trials; ++t) {
    Vector y = linalg::random_unit_vector(dim, rng);
    y -= x * (x.adjoint() * y);
    y.normalize();
    extended.col(x.cols()) = y;
    double worst = 0.0;
    for (Eigen::Index a = 0; a < x.cols(); ++a) {
      Matrix pair(dim, 2);
      pair << x.col(a), y;
      worst = std::max(worst, output_overlap(phi, pair));
    }
    ++probe.trials;
    if (worst > alpha.tolerance) ++probe.rejected;
    probe.min_violation = std::min(probe.min_violation, worst);
  }
  return probe;
}

InvariantReport full_report(const Representation& pi, std::uint64_t seed) {
  InvariantReport rep;
  rep.decomposition = isotypic_decomposition(pi, seed);
  rep.decomposition_residuals = verify_decomposition(pi, rep.decomposition);
  if (!rep.decomposition_residuals.pass) {
    throw Error(ErrorCode::decomposition_inconsistent, "decomposition residuals exceed tolerance");
  }
  const auto& dec = rep.decomposition;
  rep.alpha = alpha_closed(dec);
  rep.beta = beta_closed(dec);
  rep.gamma = gamma_closed(dec);
  rep.tau = tau_closed(dec);
  rep.capacity_bits = zero_error_capacity(dec, 2.0);
  rep.alpha_cert = alpha_witness(pi, dec);
  rep.code_cert = code_witness(pi, dec);
  rep.gamma_cert = gamma_witness(pi, dec);
  rep.tau_cert = tau_witness(pi, dec);
  for (const auto* c : {&rep.alpha_cert, &rep.code_cert, &rep.gamma_cert, &rep.tau_cert}) {
    if (!c->pass) {
      throw Error(ErrorCode::witness_failed,
                  std::string(to_string(c->kind)) + " witness failed with residual " + std::to_string(c->max_residual()));
    }
  }
  return rep;
}

}  // namespace twirl
