#include "twirl/phase_retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "twirl/linalg.hpp"
#include "twirl/parallel.hpp"

namespace twirl {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Real-orthonormal basis of k×k Hermitian matrices.
std::vector<Matrix> hermitian_coordinates(int k) {
  std::vector<Matrix> basis;
  const double h = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) {
    Matrix e = Matrix::Zero(k, k);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Matrix re = Matrix::Zero(k, k);
      re(i, j) = re(j, i) = h;
      basis.push_back(std::move(re));
      Matrix im = Matrix::Zero(k, k);
      im(i, j) = Complex(0.0, h);
      im(j, i) = Complex(0.0, -h);
      basis.push_back(std::move(im));
    }
  return basis;
}

double real_inner(const Matrix& a, const Matrix& b) { return linalg::trace_inner(a, b).real(); }

// x from the positive part, y from the negative part of a rank ≤ 2 H.
std::pair<Vector, Vector> split(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(h));
  const auto& ev = es.eigenvalues();
  const int k = static_cast<int>(ev.size());
  Vector x = std::sqrt(std::max(ev(k - 1), 0.0)) * es.eigenvectors().col(k - 1);
  Vector y = std::sqrt(std::max(-ev(0), 0.0)) * es.eigenvectors().col(0);
  if (k == 1) y.setZero();
  if (x.norm() < y.norm()) std::swap(x, y);
  linalg::fix_phase(x);
  linalg::fix_phase(y);
  return {x, y};
}

// Keeps the largest positive and the most negative eigenvalue only.
Matrix truncate_to_pair(const Matrix& h, double* middle_mass) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(h));
  const auto& ev = es.eigenvalues();
  const int k = static_cast<int>(ev.size());
  double mid = 0.0;
  for (int i = 1; i + 1 < k; ++i) mid += std::abs(ev(i));
  const double scale = ev.norm();
  if (middle_mass) *middle_mass = scale > 0.0 ? mid / scale : 0.0;
  const auto& v = es.eigenvectors();
  Matrix out = std::max(ev(k - 1), 0.0) * v.col(k - 1) * v.col(k - 1).adjoint();
  if (k > 1) out += std::min(ev(0), 0.0) * v.col(0) * v.col(0).adjoint();
  return out;
}

bool certify_kernel_element(const OperatorFrame& frame, const Matrix& h, PRCertificate& cert) {
  auto [x, y] = split(h);
  double gap = 0.0;
  double dist = 0.0;
  if (!verify_collision(frame, x, y, &gap, &dist)) return false;
  cert.verdict = PRVerdict::counterexample_found;
  cert.counterexample = std::make_pair(std::move(x), std::move(y));
  cert.measurement_gap = gap;
  cert.state_distance = dist;
  return true;
}

// Hermitian spanning set of the commutant.
std::vector<Matrix> commutant_hermitian(const Representation& pi) {
  std::vector<Matrix> out;
  for (const auto& b : commutant_basis(pi).basis) {
    out.push_back(linalg::hermitian_part(b));
    out.push_back(linalg::hermitian_part(Matrix(Complex(0.0, 1.0) * b)));
  }
  return out;
}

OperatorFrame compress(const std::vector<Matrix>& ops, const Matrix& t) {
  OperatorFrame f;
  f.k = static_cast<int>(t.cols());
  for (const auto& c : ops) f.ops.push_back(linalg::hermitian_part(Matrix(t.adjoint() * c * t)));
  return f;
}

bool found(const PRCertificate& c) { return c.verdict == PRVerdict::counterexample_found; }

}  // namespace

const char* to_string(PRVerdict verdict) {
  switch (verdict) {
    case PRVerdict::retrievable: return "retrievable";
    case PRVerdict::counterexample_found: return "counterexample-found";
    case PRVerdict::undecided: return "undecided";
  }
  return "unknown";
}

FrameReport frame_analysis(const Frame& frame, double tol) {
  if (frame.n < 1 || frame.vectors.empty()) throw Error(ErrorCode::invalid_parameter, "frame needs n >= 1 and vectors");
  Matrix s = Matrix::Zero(frame.n, frame.n);
  for (const auto& f : frame.vectors) {
    if (f.size() != frame.n) throw Error(ErrorCode::invalid_parameter, "frame vector has wrong length");
    s.noalias() += f * f.adjoint();
  }
  if (s.norm() == 0.0) throw Error(ErrorCode::not_a_frame, "frame operator is zero");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const RealVector& ev = es.eigenvalues();
  FrameReport rep;
  rep.upper_bound = ev(frame.n - 1);
  rep.lower_bound = std::max(ev(0), 0.0);
  for (int i = 0; i < frame.n; ++i)
    if (ev(i) > 1e-10 * rep.upper_bound) ++rep.rank;
  rep.is_frame = rep.rank == frame.n;
  rep.parseval_defect = (s - Matrix::Identity(frame.n, frame.n)).norm();
  rep.parseval = rep.parseval_defect <= tol * frame.n;
  if (rep.is_frame) {
    const Matrix inv_sqrt = es.operatorInverseSqrt();
    for (const auto& f : frame.vectors) rep.parseval_frame.push_back(inv_sqrt * f);
  }
  return rep;
}

PovmReport povm_check(const OperatorFrame& frame, double tol) {
  PovmReport rep;
  Matrix sum = Matrix::Zero(frame.k, frame.k);
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& f : frame.ops) {
    rep.hermiticity = std::max(rep.hermiticity, (f - f.adjoint()).norm());
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(f), Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues()(0));
    sum += f;
  }
  rep.sum_defect = (sum - Matrix::Identity(frame.k, frame.k)).norm();
  rep.is_povm = rep.hermiticity <= tol && rep.min_eigenvalue >= -tol && rep.sum_defect <= tol * frame.k;
  return rep;
}

OperatorFrame rank_one_frame(const Frame& frame) {
  OperatorFrame out;
  out.k = frame.n;
  for (const auto& f : frame.vectors) out.ops.push_back(f * f.adjoint());
  return out;
}

RealVector measure(const OperatorFrame& frame, const Vector& x) {
  RealVector m(frame.ops.size());
  for (std::size_t j = 0; j < frame.ops.size(); ++j) m(j) = x.dot(frame.ops[j] * x).real();
  return m;
}

std::vector<Matrix> hermitian_kernel(const OperatorFrame& frame) {
  const int k = frame.k;
  if (k < 1) throw Error(ErrorCode::invalid_parameter, "operator frame needs k >= 1");
  for (const auto& a : frame.ops) {
    if (a.rows() != k || a.cols() != k) throw Error(ErrorCode::invalid_parameter, "measurement operator has wrong shape");
    if ((a - a.adjoint()).norm() > 1e-8 * std::max(1.0, a.norm())) {
      throw Error(ErrorCode::invalid_parameter, "measurement operators must be Hermitian");
    }
  }
  const auto coords = hermitian_coordinates(k);
  const int dim = k * k;
  RealMatrix rows(static_cast<Eigen::Index>(frame.ops.size()), dim);
  for (std::size_t j = 0; j < frame.ops.size(); ++j)
    for (int b = 0; b < dim; ++b) rows(j, b) = real_inner(frame.ops[j], coords[b]);
  int rank = 0;
  RealMatrix v = RealMatrix::Identity(dim, dim);
  if (rows.rows() > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(rows, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(0) > 0.0 && s(i) > 1e-10 * s(0)) ++rank;
    v = svd.matrixV();
  }
  std::vector<Matrix> kernel;
  for (int j = rank; j < dim; ++j) {
    RealVector c = v.col(j);
    Eigen::Index arg = 0;
    c.cwiseAbs().maxCoeff(&arg);
    if (c(arg) < 0) c = -c;
    Matrix h = Matrix::Zero(k, k);
    for (int b = 0; b < dim; ++b) h += c(b) * coords[b];
    kernel.push_back(std::move(h));
  }
  return kernel;
}

bool verify_collision(const OperatorFrame& frame, const Vector& x, const Vector& y, double* gap, double* distance) {
  const double g = (measure(frame, x) - measure(frame, y)).cwiseAbs().maxCoeff();
  const double d = (x * x.adjoint() - y * y.adjoint()).norm();
  if (gap) *gap = g;
  if (distance) *distance = d;
  return g <= kMeasurementAgreement && d > kStateSeparation;
}

PRCertificate pr_falsifier(const OperatorFrame& frame, std::uint64_t seed, long budget, int restarts) {
  if (frame.k < 1 || frame.k > kMaxFalsifierDim) {
    throw Error(ErrorCode::size_limit, "falsifier supports 1 <= k <= " + std::to_string(kMaxFalsifierDim));
  }
  PRCertificate cert;
  cert.ambient_dim = frame.k;
  const auto kernel = hermitian_kernel(frame);
  const int p = static_cast<int>(kernel.size());
  cert.kernel_dim = p;

  if (p == 0) {
    cert.verdict = PRVerdict::retrievable;
    cert.exact = true;
    cert.method = "kernel-empty";
    return cert;
  }
  if (p == 1) {
    cert.exact = true;
    cert.method = "kernel-line";
    double mid = 0.0;
    truncate_to_pair(kernel[0], &mid);
    cert.best_objective = mid;
    cert.evaluations = 1;
    if (mid <= 1e-12 && certify_kernel_element(frame, kernel[0], cert)) return cert;
    cert.verdict = PRVerdict::retrievable;
    return cert;
  }
  if (frame.k == 2) {
    // det is a (1,3) quadratic form on 2×2 Hermitians; H is indefinite or
    // singular iff det H ≤ 0.
    cert.exact = true;
    cert.method = "qubit-determinant";
    RealMatrix q(p, p);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        const Matrix& x = kernel[a];
        const Matrix& y = kernel[b];
        q(a, b) = 0.5 * (x(0, 0).real() * y(1, 1).real() + x(1, 1).real() * y(0, 0).real()) -
                  (x(0, 1) * std::conj(y(0, 1))).real();
      }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(q);
    cert.evaluations = 1;
    cert.best_objective = es.eigenvalues()(0);
    if (es.eigenvalues()(0) <= 1e-12) {
      Matrix h = Matrix::Zero(2, 2);
      for (int a = 0; a < p; ++a) h += es.eigenvectors()(a, 0) * kernel[a];
      h /= h.norm();
      if (certify_kernel_element(frame, h, cert)) return cert;
      cert.verdict = PRVerdict::undecided;
      cert.exact = false;
      return cert;
    }
    cert.verdict = PRVerdict::retrievable;
    return cert;
  }

  cert.method = "alternating-projection";
  restarts = std::max(1, restarts);
  const long per_restart = std::max(1L, budget / restarts);
  struct Run {
    long evals = 0;
    double best = std::numeric_limits<double>::infinity();
    std::optional<PRCertificate> hit;
  };
  std::vector<Run> runs(restarts);
  parallel_for(restarts, [&](int r) {
    std::mt19937_64 rng(mix(seed ^ mix(static_cast<std::uint64_t>(r) + 1)));
    std::normal_distribution<double> normal;
    RealVector c(p);
    for (int i = 0; i < p; ++i) c(i) = normal(rng);
    c.normalize();
    Run& run = runs[r];
    while (run.evals < per_restart) {
      Matrix h = Matrix::Zero(frame.k, frame.k);
      for (int i = 0; i < p; ++i) h += c(i) * kernel[i];
      double mid = 0.0;
      const Matrix trunc = truncate_to_pair(h, &mid);
      ++run.evals;
      run.best = std::min(run.best, mid);
      if (mid <= 1e-12) {
        PRCertificate local;
        if (certify_kernel_element(frame, h, local)) {
          run.hit = std::move(local);
          return;
        }
      }
      RealVector next(p);
      for (int i = 0; i < p; ++i) next(i) = real_inner(kernel[i], trunc);
      const double norm = next.norm();
      if (norm < 1e-14) {
        for (int i = 0; i < p; ++i) next(i) = normal(rng);
        c = next.normalized();
      } else {
        c = next / norm;
      }
    }
  });
  cert.best_objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    cert.evaluations += runs[r].evals;
    cert.best_objective = std::min(cert.best_objective, runs[r].best);
  }
  cert.restarts = restarts;
  for (int r = 0; r < restarts; ++r) {
    if (runs[r].hit) {
      PRCertificate hit = *runs[r].hit;
      cert.verdict = hit.verdict;
      cert.counterexample = hit.counterexample;
      cert.measurement_gap = hit.measurement_gap;
      cert.state_distance = hit.state_distance;
      return cert;
    }
  }
  cert.verdict = PRVerdict::undecided;
  return cert;
}

int pr_lower_bound(const IsotypicDecomposition& decomp) {
  int beta = 0;
  for (const auto& t : decomp.types) beta = std::max(beta, t.multiplicity);
  return std::max(beta, decomp.d() / 4 + 1);
}

int minimal_frame_length_bound(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "dimension must be at least 1");
  return n == 1 ? 1 : 4 * n - 4;
}

PRConjectureProbe pr_conjecture_probe(const IsotypicDecomposition& decomp) {
  PRConjectureProbe probe;
  for (const auto& t : decomp.types) probe.beta = std::max(probe.beta, t.multiplicity);
  int k = 1;
  while (minimal_frame_length_bound(k + 1) <= decomp.d()) ++k;
  probe.bracket_k = k;
  probe.value = std::max(probe.beta, k);
  return probe;
}

SubspaceWitness multiplicity_pr_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                        std::uint64_t seed, int trials) {
  if (decomp.ambient_dim() != pi.dim()) throw Error(ErrorCode::invalid_parameter, "decomposition does not match π");
  int best = 0;
  for (int i = 1; i < decomp.d(); ++i)
    if (decomp.types[i].multiplicity > decomp.types[best].multiplicity) best = i;
  const int m = decomp.types[best].multiplicity;
  const int n = decomp.types[best].dim();
  const Matrix block = decomp.U.middleRows(decomp.offset(best), m * n).adjoint();

  SubspaceWitness w;
  w.basis.resize(pi.dim(), m);
  for (int c = 0; c < m; ++c) w.basis.col(c) = block.col(c * n);

  if (m <= kMaxFalsifierDim) {
    w.certificate = pr_falsifier(compress(commutant_hermitian(pi), w.basis), seed);
  } else {
    w.certificate.verdict = PRVerdict::undecided;
    w.certificate.method = "skipped";
  }

  std::mt19937_64 rng(mix(seed ^ 0x5eedULL));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double tol = 1e-9 * pi.dim();
  bool violated = false;
  for (int t = 0; t < trials; ++t) {
    const Vector a = linalg::random_unit_vector(m, rng);
    const Vector x = w.basis * a;
    Vector y;
    if (t % 2 == 1) {
      y = std::polar(1.0, angle(rng)) * x;
    } else {
      y = w.basis * linalg::random_unit_vector(m, rng);
    }
    const Matrix fx = group_average(pi, x * x.adjoint());
    const Matrix fy = group_average(pi, y * y.adjoint());
    const Matrix expected = block * linalg::kron(Matrix(a * a.adjoint()), Matrix::Identity(n, n)) * block.adjoint() / n;
    w.block_formula = std::max(w.block_formula, (fx - expected).norm());
    const double d_out = (fx - fy).norm();
    const double d_in = (x * x.adjoint() - y * y.adjoint()).norm();
    w.injectivity = std::max(w.injectivity, std::abs(d_out - d_in / std::sqrt(static_cast<double>(n))));
    ++w.trials;
    if (d_out <= 1e-10) {
      ++w.collisions;
      if (d_in > 1e-6) violated = true;
    }
  }
  w.rank_gap = 1.0;
  w.pass = !violated && w.block_formula <= tol && w.injectivity <= tol && !found(w.certificate);
  if (!w.pass) {
    throw Error(ErrorCode::witness_failed, "multiplicity phase-retrieval witness failed (block " +
                                               std::to_string(w.block_formula) + ", injectivity " +
                                               std::to_string(w.injectivity) + ")");
  }
  return w;
}

SubspaceWitness subspace_pr_witness(const Representation& pi, const IsotypicDecomposition& decomp,
                                    std::uint64_t seed) {
  if (decomp.ambient_dim() != pi.dim()) throw Error(ErrorCode::invalid_parameter, "decomposition does not match π");
  const int d = decomp.d();
  const int k = d / 4 + 1;
  if (k > kMaxFalsifierDim) throw Error(ErrorCode::size_limit, "too many types for the frame certificate");
  ErrorCode last = ErrorCode::construction_failed;
  std::string reason;
  for (int attempt = 0; attempt < 5; ++attempt) {
    std::mt19937_64 rng(mix(seed + static_cast<std::uint64_t>(attempt) * 0x9e37ULL));
    SubspaceWitness w;
    w.attempts = attempt + 1;
    Frame xi{k, {}};
    for (int i = 0; i < d; ++i) {
      if (i < k) {
        xi.vectors.push_back(Vector::Unit(k, i));
      } else {
        xi.vectors.push_back(linalg::random_unit_vector(k, rng));
      }
    }
    w.certificate = pr_falsifier(rank_one_frame(xi), mix(seed + attempt));
    if (found(w.certificate)) {
      last = ErrorCode::frame_not_retrievable;
      reason = "frame {xi_i} admits a collision";
      continue;
    }
    w.map = Matrix::Zero(pi.dim(), k);
    for (int i = 0; i < d; ++i) w.map += decomp.basis_vector(i, 0, 0) * xi.vectors[i].adjoint();
    Eigen::JacobiSVD<Matrix> svd(w.map);
    const auto& s = svd.singularValues();
    w.rank_gap = s(0) > 0.0 ? s(k - 1) / s(0) : 0.0;
    if (!(w.rank_gap > 1e-6)) {
      last = ErrorCode::construction_failed;
      reason = "T is rank deficient";
      continue;
    }
    w.frame = xi.vectors;
    w.basis = linalg::orthonormal_range(w.map, 1e-8);
    w.pass = true;
    return w;
  }
  throw Error(last, "subspace phase-retrieval witness: " + reason + " after 5 attempts");
}

Prop51Report prop51_equivalence_check(const Representation& pi, const IsotypicDecomposition& decomp, const Matrix& t,
                                      std::uint64_t seed, int trials) {
  if (decomp.ambient_dim() != pi.dim() || t.rows() != pi.dim()) {
    throw Error(ErrorCode::invalid_parameter, "T must map into the representation space");
  }
  for (const auto& type : decomp.types) {
    if (type.multiplicity != 1) throw Error(ErrorCode::invalid_parameter, "requires a multiplicity-one decomposition");
  }
  const int k = static_cast<int>(t.cols());
  if (k < 1 || linalg::numerical_rank(t, 1e-8) != k) {
    throw Error(ErrorCode::invalid_parameter, "T must have full column rank");
  }
  Prop51Report rep;
  rep.channel_side = pr_falsifier(compress(commutant_hermitian(pi), t), seed);
  std::vector<Matrix> projections;
  for (int i = 0; i < decomp.d(); ++i) projections.push_back(decomp.isotypic_projection(i));
  rep.measurement_side = pr_falsifier(compress(projections, t), seed);

  if (rep.channel_side.counterexample) {
    const Vector x = t * rep.channel_side.counterexample->first;
    const Vector y = t * rep.channel_side.counterexample->second;
    rep.channel_collision_gap = (group_average(pi, x * x.adjoint()) - group_average(pi, y * y.adjoint())).norm();
  }
  std::mt19937_64 rng(mix(seed ^ 0x51ULL));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int s = 0; s < trials; ++s) {
    const Vector x = t * linalg::random_unit_vector(k, rng);
    const Vector y = std::polar(1.0, angle(rng)) * x;
    ++rep.trials;
    if ((group_average(pi, x * x.adjoint()) - group_average(pi, y * y.adjoint())).norm() <= 1e-10) {
      ++rep.phase_pairs_collided;
    }
  }
  rep.agree = found(rep.channel_side) == found(rep.measurement_side) && rep.phase_pairs_collided == rep.trials &&
              (!rep.channel_side.counterexample || rep.channel_collision_gap <= 1e-9);
  if (!rep.agree) {
    throw Error(ErrorCode::equivalence_violation,
                std::string("channel side: ") + to_string(rep.channel_side.verdict) +
                    ", measurement side: " + to_string(rep.measurement_side.verdict));
  }
  return rep;
}

}  // namespace twirl
