#include "twirl/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include "twirl/linalg.hpp"

namespace twirl {
namespace {

constexpr int kNullSpaceUnknowns = 400;
constexpr int kMaxRetries = 5;
constexpr double kClusterRel = 1e-8;
constexpr double kAmbiguityRel = 1e-6;
constexpr double kInvarianceTol = 1e-7;
constexpr double kCharacterTol = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_same_group(const Representation& a, const Representation& b) {
  if (a.group_ptr() != b.group_ptr() && a.group().table() != b.group().table()) {
    throw Error(ErrorCode::invalid_parameter, "representations act on different groups");
  }
}

OperatorSpaceBasis from_columns(const Matrix& cols, int rows, int ncols) {
  OperatorSpaceBasis out{rows, ncols, {}};
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Matrix b = linalg::unvec(cols.col(j), rows, ncols);
    linalg::fix_phase(b);
    out.basis.push_back(std::move(b));
  }
  return out;
}

Complex self_inner(const Representation& rho) {
  Complex acc = 0.0;
  for (const auto& m : rho.matrices()) acc += std::norm(m.trace());
  return acc / static_cast<double>(rho.group().order());
}

struct Ambiguous {};

// Splits the invariant subspace spanned by `basis` (an isometry into the
// original space) into irreducible invariant subspaces.
void split(const Representation& pi, const Matrix& basis, std::mt19937_64& rng, int depth,
           std::vector<Matrix>& out) {
  const Representation rho = restrict_to(pi, basis);
  const double norm2 = self_inner(rho).real();
  if (std::abs(norm2 - 1.0) <= kCharacterTol) {
    out.push_back(basis);
    return;
  }
  if (depth > 2 * pi.dim()) throw Ambiguous{};

  const int k = rho.dim();
  const Matrix r = group_average(rho, linalg::random_hermitian(k, rng));
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(r));
  const RealVector& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(k - 1)));
  if (scale == 0.0) throw Ambiguous{};

  std::vector<std::pair<int, int>> clusters;  // [begin, end)
  int begin = 0;
  for (int i = 1; i <= k; ++i) {
    if (i == k || ev(i) - ev(i - 1) > kClusterRel * scale) {
      if (i < k && ev(i) - ev(i - 1) < kAmbiguityRel * scale) throw Ambiguous{};
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  if (clusters.size() == 1) throw Ambiguous{};

  for (const auto& [b, e] : clusters) {
    const Matrix w = es.eigenvectors().middleCols(b, e - b);
    const Matrix complement = Matrix::Identity(k, k) - w * w.adjoint();
    for (const auto& m : rho.matrices()) {
      if ((complement * m * w).norm() > kInvarianceTol * k) throw Ambiguous{};
    }
    split(pi, basis * w, rng, depth + 1, out);
  }
}

// Descending lexicographic comparison of character values with tolerance.
int compare_characters(const ClassFunction& a, const ClassFunction& b) {
  for (std::size_t c = 0; c < a.values.size(); ++c) {
    const auto x = a.values[c];
    const auto y = b.values[c];
    if (std::abs(x.real() - y.real()) > kCharacterTol) return x.real() > y.real() ? -1 : 1;
    if (std::abs(x.imag() - y.imag()) > kCharacterTol) return x.imag() > y.imag() ? -1 : 1;
  }
  return 0;
}

struct Cluster {
  Representation rep;
  ClassFunction character;
  std::vector<Matrix> copies;  // aligned isometries
};

IsotypicDecomposition assemble(const Representation& pi, const std::vector<Matrix>& pieces) {
  std::vector<Cluster> clusters;
  for (const auto& v : pieces) {
    const Representation rho = restrict_to(pi, v);
    const ClassFunction chi = character(rho);
    bool placed = false;
    for (auto& cl : clusters) {
      if (cl.rep.dim() != rho.dim()) continue;
      const double overlap = std::abs(inner_product(chi, cl.character));
      const auto hom = intertwiner_space(rho, cl.rep);
      const bool equivalent_by_character = overlap > 0.5;
      if (equivalent_by_character != (hom.dimension() == 1)) {
        throw Error(ErrorCode::decomposition_inconsistent,
                    "character overlap and intertwiner dimension disagree on equivalence");
      }
      if (!equivalent_by_character) continue;
      // T ρ(g) = ρ_rep(g) T; unitary polar factor, phase fixed by fix_phase.
      Matrix t = linalg::polar_unitary(hom.basis.front());
      linalg::fix_phase(t);
      cl.copies.push_back(v * t.adjoint());
      placed = true;
      break;
    }
    if (!placed) clusters.push_back(Cluster{rho, chi, {v}});
  }

  std::stable_sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.rep.dim() != b.rep.dim()) return a.rep.dim() < b.rep.dim();
    return compare_characters(a.character, b.character) < 0;
  });

  IsotypicDecomposition out;
  const int dim = pi.dim();
  Matrix u_adjoint(dim, dim);
  int col = 0;
  for (auto& cl : clusters) {
    for (const auto& v : cl.copies) {
      u_adjoint.middleCols(col, v.cols()) = v;
      col += static_cast<int>(v.cols());
    }
    out.types.push_back(IrreducibleType{static_cast<int>(cl.copies.size()), cl.rep, cl.character});
  }
  if (col != dim) throw Error(ErrorCode::decomposition_inconsistent, "irreducible pieces do not fill the space");
  out.U = u_adjoint.adjoint();
  return out;
}

}  // namespace

double OperatorSpaceBasis::orthonormality_defect() const {
  double worst = 0.0;
  for (int a = 0; a < dimension(); ++a) {
    for (int b = 0; b < dimension(); ++b) {
      const Complex ip = linalg::trace_inner(basis[a], basis[b]);
      worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double OperatorSpaceBasis::distance_from_span(const Matrix& t) const {
  Matrix residual = t;
  for (const auto& b : basis) residual -= linalg::trace_inner(residual, b) * b;
  return residual.norm();
}

OperatorSpaceBasis intertwiner_space_nullspace(const Representation& pi, const Representation& sigma) {
  check_same_group(pi, sigma);
  const int dp = pi.dim();
  const int ds = sigma.dim();
  const int n = dp * ds;
  const Matrix id_p = Matrix::Identity(dp, dp);
  const Matrix id_s = Matrix::Identity(ds, ds);
  // K_g = πᵀ ⊗ I − I ⊗ σ on column-major vec(T); accumulate K_g* K_g.
  Matrix q = Matrix::Zero(n, n);
  for (int g = 0; g < pi.group().order(); ++g) {
    const Matrix k = linalg::kron(Matrix(pi(g).transpose()), id_s) - linalg::kron(id_p, sigma(g));
    q.noalias() += k.adjoint() * k;
  }
  const Matrix null = linalg::psd_null_space(q, 1e-8, static_cast<double>(pi.group().order()));
  return from_columns(null, ds, dp);
}

OperatorSpaceBasis intertwiner_space_sampled(const Representation& pi, const Representation& sigma,
                                             std::uint64_t seed) {
  check_same_group(pi, sigma);
  const int dp = pi.dim();
  const int ds = sigma.dim();
  std::mt19937_64 rng(splitmix64(seed ^ 0x1417e5ULL));
  std::vector<Vector> cols;
  int misses = 0;
  while (misses < 2 && static_cast<int>(cols.size()) < dp * ds) {
    const Matrix sample = group_average(sigma, pi, linalg::random_gaussian(ds, dp, rng));
    Vector v = linalg::vec(sample);
    const double scale = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cols) v -= c.dot(v) * c;
    }
    if (scale == 0.0 || v.norm() <= 1e-8 * scale) {
      ++misses;
      continue;
    }
    cols.push_back(v / v.norm());
  }
  Matrix basis(dp * ds, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = cols[j];
  return from_columns(basis, ds, dp);
}

OperatorSpaceBasis intertwiner_space(const Representation& pi, const Representation& sigma) {
  if (pi.dim() * sigma.dim() <= kNullSpaceUnknowns) return intertwiner_space_nullspace(pi, sigma);
  return intertwiner_space_sampled(pi, sigma);
}

OperatorSpaceBasis commutant_basis(const Representation& pi) { return intertwiner_space(pi, pi); }

OperatorSpaceBasis algebra_basis(const Representation& pi) {
  const int n = pi.group().order();
  const int dim = pi.dim();
  Matrix w(dim * dim, n);
  for (int g = 0; g < n; ++g) w.col(g) = linalg::vec(pi(g));
  const Matrix gram = w.adjoint() * w;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const RealVector& ev = es.eigenvalues();
  const double top = ev(n - 1);
  Matrix cols(dim * dim, 0);
  std::vector<Vector> kept;
  for (int i = n - 1; i >= 0; --i) {
    if (ev(i) > 1e-8 * top) kept.push_back(w * es.eigenvectors().col(i) / std::sqrt(ev(i)));
  }
  cols.resize(dim * dim, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = kept[j];
  return from_columns(cols, dim, dim);
}

std::vector<int> IsotypicDecomposition::multiplicities() const {
  std::vector<int> out;
  for (const auto& t : types) out.push_back(t.multiplicity);
  return out;
}

std::vector<int> IsotypicDecomposition::dimensions() const {
  std::vector<int> out;
  for (const auto& t : types) out.push_back(t.dim());
  return out;
}

int IsotypicDecomposition::offset(int type) const {
  int off = 0;
  for (int i = 0; i < type; ++i) off += types[i].multiplicity * types[i].dim();
  return off;
}

Vector IsotypicDecomposition::basis_vector(int type, int copy, int k) const {
  const int row = offset(type) + copy * types[type].dim() + k;
  return U.row(row).adjoint();
}

Matrix IsotypicDecomposition::isotypic_projection(int type) const {
  const int off = offset(type);
  const int len = types[type].multiplicity * types[type].dim();
  const Matrix rows = U.middleRows(off, len);
  return rows.adjoint() * rows;
}

Matrix IsotypicDecomposition::block_form(int g) const {
  const int dim = ambient_dim();
  Matrix out = Matrix::Zero(dim, dim);
  int off = 0;
  for (const auto& t : types) {
    for (int c = 0; c < t.multiplicity; ++c) {
      out.block(off, off, t.dim(), t.dim()) = t.rep(g);
      off += t.dim();
    }
  }
  return out;
}

IsotypicDecomposition isotypic_decomposition(const Representation& pi, std::uint64_t seed) {
  if (pi.dim() > kMaxDecomposeDim) {
    throw Error(ErrorCode::size_limit, "decomposition needs dim <= " + std::to_string(kMaxDecomposeDim));
  }
  require_valid(pi);
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    std::mt19937_64 rng(splitmix64(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(attempt)));
    std::vector<Matrix> pieces;
    try {
      split(pi, Matrix::Identity(pi.dim(), pi.dim()), rng, 0, pieces);
    } catch (const Ambiguous&) {
      continue;
    }
    IsotypicDecomposition out = assemble(pi, pieces);
    out.seed = seed;
    out.attempts = attempt + 1;
    return out;
  }
  throw Error(ErrorCode::degenerate_commutant_element,
              "eigenvalue clustering stayed ambiguous after " + std::to_string(kMaxRetries) + " retries");
}

DecompositionResiduals verify_decomposition(const Representation& pi, const IsotypicDecomposition& decomp) {
  DecompositionResiduals r;
  const int dim = pi.dim();
  r.unitarity = linalg::unitarity_defect(decomp.U);
  for (int g = 0; g < pi.group().order(); ++g) {
    r.block = std::max(r.block, (decomp.U * pi(g) * decomp.U.adjoint() - decomp.block_form(g)).norm());
  }
  for (int i = 0; i < decomp.d(); ++i) {
    const auto& ti = decomp.types[i];
    r.irreducibility = std::max(r.irreducibility, std::abs(inner_product(ti.character, ti.character) - 1.0));
    r.dimension_sum += ti.multiplicity * ti.dim();
    for (int j = i + 1; j < decomp.d(); ++j) {
      const auto& tj = decomp.types[j];
      r.inequivalence = std::max(r.inequivalence, std::abs(inner_product(ti.character, tj.character)));
      r.max_cross_intertwiner_dim =
          std::max(r.max_cross_intertwiner_dim, intertwiner_space(ti.rep, tj.rep).dimension());
    }
  }
  const auto comm = commutant_basis(pi);
  const auto alg = algebra_basis(pi);
  r.commutant_dim = comm.dimension();
  r.algebra_dim = alg.dimension();
  for (const auto& a : comm.basis) {
    for (const auto& b : alg.basis) r.commutation = std::max(r.commutation, (a * b - b * a).norm());
  }
  int sum_m2 = 0;
  int sum_n2 = 0;
  for (const auto& t : decomp.types) {
    sum_m2 += t.multiplicity * t.multiplicity;
    sum_n2 += t.dim() * t.dim();
  }
  r.pass = r.unitarity <= 1e-8 * dim && r.block <= 1e-7 * dim && r.irreducibility <= kCharacterTol &&
           r.inequivalence <= kCharacterTol && r.max_cross_intertwiner_dim == 0 && r.dimension_sum == dim &&
           r.commutant_dim == sum_m2 && r.algebra_dim == sum_n2 && r.commutation <= 1e-8;
  return r;
}

MultiplicityReport multiplicity_crosscheck(const Representation& pi, const IsotypicDecomposition& decomp) {
  MultiplicityReport rep;
  const ClassFunction chi = character(pi);
  int sum = 0;
  for (const auto& t : decomp.types) {
    const Complex m = inner_product(chi, t.character);
    rep.character_multiplicities.push_back(m.real());
    rep.max_residual = std::max(rep.max_residual, std::abs(m - static_cast<double>(t.multiplicity)));
    sum += t.multiplicity * t.dim();
  }
  rep.dimension_ok = sum == pi.dim();
  rep.pass = rep.dimension_ok && rep.max_residual <= kCharacterTol;
  if (!rep.pass) {
    throw Error(ErrorCode::decomposition_inconsistent,
                "character multiplicities disagree with the decomposition (max residual " +
                    std::to_string(rep.max_residual) + ")");
  }
  return rep;
}

}  // namespace twirl
