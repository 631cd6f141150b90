#include "twirl/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "twirl/linalg.hpp"
#include "twirl/parallel.hpp"

namespace twirl {
namespace {

constexpr int kDenseChoiLimit = 256;

double hermitian_spectral_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(h), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Gram-route minimal Kraus set: b_j = W v_j for eigenpairs (λ_j, v_j) of W*W.
std::vector<Matrix> compress_kraus(const std::vector<Matrix>& kraus) {
  const int out = static_cast<int>(kraus.front().rows());
  const int in = static_cast<int>(kraus.front().cols());
  const int r = static_cast<int>(kraus.size());
  Matrix w(out * in, r);
  for (int k = 0; k < r; ++k) w.col(k) = linalg::vec(kraus[k]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(w.adjoint() * w);
  const RealVector& ev = es.eigenvalues();
  const double top = ev(r - 1);
  std::vector<Matrix> out_kraus;
  for (int j = r - 1; j >= 0; --j) {
    if (top > 0.0 && ev(j) > kChoiRankRel * top) {
      Matrix b = linalg::unvec(w * es.eigenvectors().col(j), out, in);
      linalg::fix_phase(b);
      out_kraus.push_back(std::move(b));
    }
  }
  return out_kraus;
}

}  // namespace

Matrix choi_from_kraus(const std::vector<Matrix>& kraus, int in_dim, int out_dim) {
  const int n = in_dim * out_dim;
  Matrix c = Matrix::Zero(n, n);
  for (const auto& a : kraus) {
    const Vector v = linalg::vec(a);
    c.noalias() += v * v.adjoint();
  }
  return c;
}

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus, double tol) {
  if (kraus.empty()) throw Error(ErrorCode::invalid_parameter, "channel needs at least one Kraus operator");
  QuantumChannel ch;
  ch.out_ = static_cast<int>(kraus.front().rows());
  ch.in_ = static_cast<int>(kraus.front().cols());
  for (const auto& a : kraus) {
    if (a.rows() != ch.out_ || a.cols() != ch.in_) {
      throw Error(ErrorCode::invalid_parameter, "Kraus operators must share one shape");
    }
  }
  ch.tol_ = tol;
  ch.kraus_ = std::move(kraus);
  ch.certify();
  return ch;
}

QuantumChannel QuantumChannel::from_choi(Matrix choi, int in_dim, int out_dim, double tol) {
  if (in_dim < 1 || out_dim < 1 || choi.rows() != in_dim * out_dim || choi.cols() != in_dim * out_dim) {
    throw Error(ErrorCode::invalid_parameter, "Choi matrix must be (in*out) x (in*out)");
  }
  QuantumChannel ch;
  ch.in_ = in_dim;
  ch.out_ = out_dim;
  ch.tol_ = tol;
  ch.choi_ = std::move(choi);
  ch.certify();
  return ch;
}

QuantumChannel QuantumChannel::from_both(std::vector<Matrix> kraus, Matrix choi, double tol) {
  QuantumChannel ch = from_kraus(std::move(kraus), tol);
  if (choi.rows() != ch.in_ * ch.out_ || choi.cols() != ch.in_ * ch.out_) {
    throw Error(ErrorCode::invalid_parameter, "Choi matrix shape does not match the Kraus operators");
  }
  ch.choi_ = std::move(choi);
  ch.certify();
  return ch;
}

void QuantumChannel::certify() {
  ChannelCertificate c;
  Matrix tp(in_, in_);
  if (kraus_) {
    tp.setZero();
    for (const auto& a : *kraus_) tp.noalias() += a.adjoint() * a;
  } else {
    const Matrix& choi = *choi_;
    for (int i = 0; i < in_; ++i)
      for (int j = 0; j < in_; ++j) tp(j, i) = choi.block(i * out_, j * out_, out_, out_).trace();
  }
  c.tp_defect = hermitian_spectral_norm(tp - Matrix::Identity(in_, in_));
  c.trace_preserving = c.tp_defect <= tol_;

  const bool have_choi = choi_.has_value();
  if (have_choi || in_ * out_ <= kDenseChoiLimit) {
    const Matrix choi = have_choi ? *choi_ : choi_from_kraus(*kraus_, in_, out_);
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(choi), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    c.min_choi_eigenvalue = ev(0);
    c.choi_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    c.completely_positive = (have_choi && !kraus_) ? ev(0) >= -tol_ * std::max(1.0, c.choi_norm) : true;
    if (kraus_ && have_choi) {
      c.form_mismatch = (choi_from_kraus(*kraus_, in_, out_) - *choi_).norm();
    }
  } else {
    c.completely_positive = true;  // Kraus form is CP by construction
  }
  c.pass = c.trace_preserving && c.completely_positive && c.form_mismatch <= tol_ * std::max(1, in_ * out_);
  cert_ = c;
  if (!c.completely_positive) {
    throw Error(ErrorCode::not_completely_positive,
                "Choi matrix has eigenvalue " + std::to_string(c.min_choi_eigenvalue));
  }
  if (!c.trace_preserving) {
    throw Error(ErrorCode::not_trace_preserving, "trace-preservation defect " + std::to_string(c.tp_defect));
  }
  if (!c.pass) {
    throw Error(ErrorCode::invalid_parameter,
                "Kraus and Choi forms disagree (mismatch " + std::to_string(c.form_mismatch) + ")");
  }
}

Matrix QuantumChannel::apply(const Matrix& t) const {
  if (t.rows() != in_ || t.cols() != in_) throw Error(ErrorCode::invalid_parameter, "apply: operand has wrong shape");
  Matrix out = Matrix::Zero(out_, out_);
  if (kraus_) {
    for (const auto& a : *kraus_) out.noalias() += a * t * a.adjoint();
    return out;
  }
  const Matrix& choi = *choi_;
  for (int i = 0; i < in_; ++i)
    for (int j = 0; j < in_; ++j) {
      if (t(i, j) != Complex(0.0)) out += t(i, j) * choi.block(i * out_, j * out_, out_, out_);
    }
  return out;
}

Matrix choi_matrix(const QuantumChannel& phi) {
  if (phi.stored_choi()) return *phi.stored_choi();
  return choi_from_kraus(*phi.kraus(), phi.in_dim(), phi.out_dim());
}

ChoiRankReport choi_rank_report(const QuantumChannel& phi) {
  ChoiRankReport rep;
  const int n = phi.in_dim() * phi.out_dim();
  std::vector<double> spectrum;
  if (phi.kraus() && n > kDenseChoiLimit) {
    const auto& kraus = *phi.kraus();
    const int r = static_cast<int>(kraus.size());
    Matrix w(n, r);
    for (int k = 0; k < r; ++k) w.col(k) = linalg::vec(kraus[k]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(w.adjoint() * w, Eigen::EigenvaluesOnly);
    for (int i = 0; i < r; ++i) spectrum.push_back(std::max(0.0, es.eigenvalues()(i)));
    spectrum.resize(std::max(r, std::min(n, r + 1)), 0.0);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(choi_matrix(phi)), Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) spectrum.push_back(std::abs(es.eigenvalues()(i)));
  }
  std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
  const double top = spectrum.empty() ? 0.0 : spectrum.front();
  for (double s : spectrum) {
    if (top > 0.0 && s > kChoiRankRel * top) ++rep.rank;
  }
  if (rep.rank < static_cast<int>(spectrum.size()) && spectrum[rep.rank] > 0.0) {
    rep.gap_orders = std::log10(spectrum[rep.rank - 1] / spectrum[rep.rank]);
  } else {
    rep.gap_orders = std::numeric_limits<double>::infinity();
  }
  rep.spectrum = std::move(spectrum);
  return rep;
}

int choi_rank(const QuantumChannel& phi) { return choi_rank_report(phi).rank; }

std::vector<Matrix> kraus_from_choi(const QuantumChannel& phi) {
  const int in = phi.in_dim();
  const int out = phi.out_dim();
  if (phi.kraus() && in * out > kDenseChoiLimit) return compress_kraus(*phi.kraus());
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(choi_matrix(phi)));
  const RealVector& ev = es.eigenvalues();
  const double top = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  std::vector<Matrix> kraus;
  for (Eigen::Index j = ev.size() - 1; j >= 0; --j) {
    if (top > 0.0 && ev(j) > kChoiRankRel * top) {
      Matrix a = linalg::unvec(Vector(std::sqrt(ev(j)) * es.eigenvectors().col(j)), out, in);
      linalg::fix_phase(a);
      kraus.push_back(std::move(a));
    }
  }
  return kraus;
}

TwirlingChannel TwirlingChannel::of(const Representation& pi) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(pi.group().order()));
  std::vector<Matrix> kraus;
  kraus.reserve(pi.group().order());
  for (const auto& m : pi.matrices()) kraus.push_back(scale * m);
  const double tol = std::max(kDefaultChannelTolerance, pi.tolerance() * pi.dim());
  return TwirlingChannel(pi, std::nullopt, QuantumChannel::from_kraus(std::move(kraus), tol));
}

TwirlingChannel TwirlingChannel::bimodule(const Representation& pi, const Representation& sigma) {
  if (pi.group_ptr() != sigma.group_ptr() && pi.group().table() != sigma.group().table()) {
    throw Error(ErrorCode::invalid_parameter, "bimodule map needs representations of one group");
  }
  return TwirlingChannel(pi, sigma, std::nullopt);
}

const QuantumChannel& TwirlingChannel::channel() const {
  if (!channel_) throw Error(ErrorCode::invalid_parameter, "bimodule map Φ_{π,σ} is not a channel");
  return *channel_;
}

Matrix TwirlingChannel::apply(const Matrix& t) const { return group_average(pi_, right(), t); }

bool TwirlingChannel::is_zero_map(double tol) const {
  const int rows = pi_.dim();
  const int cols = right().dim();
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) {
      Matrix e = Matrix::Zero(rows, cols);
      e(a, b) = 1.0;
      if (apply(e).norm() > tol) return false;
    }
  }
  return true;
}

QuantumChannel twirl_channel(const QuantumChannel& phi, const Representation& pi, const Representation& sigma) {
  if (phi.in_dim() != pi.dim() || phi.out_dim() != sigma.dim()) {
    throw Error(ErrorCode::invalid_parameter, "twirl_channel: representation dimensions do not match the channel");
  }
  if (pi.group_ptr() != sigma.group_ptr() && pi.group().table() != sigma.group().table()) {
    throw Error(ErrorCode::invalid_parameter, "twirl_channel: representations act on different groups");
  }
  const std::vector<Matrix> base = phi.kraus() ? *phi.kraus() : kraus_from_choi(phi);
  const double scale = 1.0 / std::sqrt(static_cast<double>(pi.group().order()));
  std::vector<Matrix> kraus;
  for (int g = 0; g < pi.group().order(); ++g) {
    for (const auto& a : base) kraus.push_back(scale * sigma(g).adjoint() * a * pi(g));
  }
  return QuantumChannel::from_kraus(compress_kraus(kraus), phi.tolerance());
}

CovarianceCertificate is_covariant(const QuantumChannel& phi, const Representation& pi, const Representation& sigma,
                                   double tol) {
  if (phi.in_dim() != pi.dim() || phi.out_dim() != sigma.dim()) {
    throw Error(ErrorCode::invalid_parameter, "is_covariant: dimension mismatch");
  }
  const int in = phi.in_dim();
  std::vector<Matrix> images;
  images.reserve(in * in);
  for (int b = 0; b < in; ++b)
    for (int a = 0; a < in; ++a) {
      Matrix e = Matrix::Zero(in, in);
      e(a, b) = 1.0;
      images.push_back(phi.apply(e));
    }
  const int order = pi.group().order();
  std::vector<double> worst(order, 0.0);
  parallel_for(order, [&](int g) {
    const Matrix& p = pi(g);
    const Matrix& s = sigma(g);
    for (int b = 0; b < in; ++b)
      for (int a = 0; a < in; ++a) {
        // π(g) E_ab π(g)* = p.col(a) p.col(b)*
        const Matrix lhs = phi.apply(p.col(a) * p.col(b).adjoint());
        const Matrix rhs = s * images[b * in + a] * s.adjoint();
        worst[g] = std::max(worst[g], (lhs - rhs).norm());
      }
  });
  CovarianceCertificate cert;
  for (int g = 0; g < order; ++g) {
    if (worst[g] > cert.max_defect) {
      cert.max_defect = worst[g];
      cert.worst_element = g;
    }
  }
  cert.pass = cert.max_defect <= tol;
  return cert;
}

RangeCertificate range_equals_commutant(const Representation& pi, double tol) {
  const int dim = pi.dim();
  RangeCertificate cert;
  Matrix stacked(dim * dim, dim * dim);
  for (int b = 0; b < dim; ++b)
    for (int a = 0; a < dim; ++a) {
      Matrix e = Matrix::Zero(dim, dim);
      e(a, b) = 1.0;
      const Matrix img = group_average(pi, e);
      cert.idempotence = std::max(cert.idempotence, (group_average(pi, img) - img).norm());
      stacked.col(b * dim + a) = linalg::vec(img);
    }
  const Matrix range = linalg::orthonormal_range(stacked, 1e-8);
  cert.range_dim = static_cast<int>(range.cols());
  const auto comm = commutant_basis(pi);
  cert.commutant_dim = comm.dimension();
  for (Eigen::Index j = 0; j < range.cols(); ++j) {
    cert.range_outside_commutant =
        std::max(cert.range_outside_commutant, comm.distance_from_span(linalg::unvec(range.col(j), dim, dim)));
  }
  for (const auto& b : comm.basis) {
    const Vector v = linalg::vec(b);
    cert.commutant_outside_range = std::max(cert.commutant_outside_range, (v - range * (range.adjoint() * v)).norm());
  }
  cert.pass = cert.range_dim == cert.commutant_dim && cert.range_outside_commutant <= tol &&
              cert.commutant_outside_range <= tol && cert.idempotence <= tol;
  return cert;
}

TwirlProperties twirl_properties(const Representation& pi, std::uint64_t seed, int samples) {
  TwirlProperties p;
  const auto twirl = TwirlingChannel::of(pi);
  const int dim = pi.dim();
  std::mt19937_64 rng(seed ^ 0x7a11ULL);
  for (int s = 0; s < samples; ++s) {
    const Matrix a = linalg::random_gaussian(dim, dim, rng);
    const Matrix b = linalg::random_gaussian(dim, dim, rng);
    const Matrix fa = twirl.apply(a);
    const Matrix fb = twirl.apply(b);
    p.idempotence = std::max(p.idempotence, (twirl.apply(fa) - fa).norm());
    p.trace_preservation = std::max(p.trace_preservation, std::abs(fa.trace() - a.trace()));
    p.self_adjointness =
        std::max(p.self_adjointness, std::abs(linalg::trace_inner(fa, b) - linalg::trace_inner(a, fb)));
  }
  p.unitality = (twirl.apply(Matrix::Identity(dim, dim)) - Matrix::Identity(dim, dim)).norm();
  p.covariance = is_covariant(twirl.channel(), pi, pi, std::numeric_limits<double>::infinity()).max_defect;
  p.tp_defect = twirl.channel().certificate().tp_defect;
  p.min_choi_eigenvalue = twirl.channel().certificate().min_choi_eigenvalue;
  return p;
}

}  // namespace twirl
