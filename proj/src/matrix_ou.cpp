#include "cutofflab/matrix_ou.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutofflab/linalg.hpp"

namespace cutofflab {

namespace {

constexpr std::size_t kMaxN = 512;

// Dense real symmetric matrix of a GOE packing.
std::vector<double> goe_dense(const MatrixEnsemble& m) {
  const std::size_t n = m.n;
  std::vector<double> s(n * n, 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = m.coords[k++];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = m.coords[k++] * inv_sqrt2;
      s[i * n + j] = v;
      s[j * n + i] = v;
    }
  return s;
}

// Real symmetric embedding [[X, -Y], [Y, X]] of the Hermitian matrix X + iY;
// its spectrum is the Hermitian spectrum with every value doubled.
std::vector<double> gue_embedding(const MatrixEnsemble& m) {
  const std::size_t n = m.n;
  const std::size_t nn = 2 * n;
  std::vector<double> s(nn * nn, 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = m.coords[k++];
    s[i * nn + i] = v;
    s[(n + i) * nn + (n + i)] = v;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double re = m.coords[k++] * inv_sqrt2;
      double im = m.coords[k++] * inv_sqrt2;
      // X blocks
      s[i * nn + j] = re;
      s[j * nn + i] = re;
      s[(n + i) * nn + (n + j)] = re;
      s[(n + j) * nn + (n + i)] = re;
      // Y blocks: Y_ij = im, Y_ji = -im
      s[i * nn + (n + j)] = -im;
      s[j * nn + (n + i)] = im;
      s[(n + i) * nn + j] = im;
      s[(n + j) * nn + i] = -im;
    }
  return s;
}

}  // namespace

std::size_t MatrixEnsemble::coord_count(EnsembleKind kind, std::size_t n) {
  return kind == EnsembleKind::GOE ? n * (n + 1) / 2 : n * n;
}

MatrixEnsemble sample_ensemble(EnsembleKind kind, std::size_t n,
                               RngStream& rng) {
  if (n < 1 || n > kMaxN)
    throw std::invalid_argument("sample_ensemble: n outside [1, 512]");
  MatrixEnsemble m{kind, n, {}};
  m.coords.resize(MatrixEnsemble::coord_count(kind, n));
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& c : m.coords) c = sd * rng.normal();
  return m;
}

MatrixEnsemble diagonal_ensemble(EnsembleKind kind,
                                 const std::vector<double>& d) {
  const std::size_t n = d.size();
  if (n < 1 || n > kMaxN)
    throw std::invalid_argument("diagonal_ensemble: n outside [1, 512]");
  MatrixEnsemble m{kind, n, {}};
  m.coords.assign(MatrixEnsemble::coord_count(kind, n), 0.0);
  for (std::size_t i = 0; i < n; ++i) m.coords[i] = d[i];
  return m;
}

MatrixEnsemble matrix_ou_step(const MatrixEnsemble& m, double dt,
                              RngStream& rng) {
  if (dt <= 0.0) throw std::invalid_argument("matrix_ou_step: dt <= 0");
  MatrixEnsemble out = m;
  const double decay = std::exp(-dt);
  const double sd =
      std::sqrt(-std::expm1(-2.0 * dt) / static_cast<double>(m.n));
  for (double& c : out.coords) c = c * decay + sd * rng.normal();
  return out;
}

std::vector<double> eigenvalues(const MatrixEnsemble& m) {
  if (m.kind == EnsembleKind::GOE) {
    return symmetric_eigenvalues(goe_dense(m), m.n);
  }
  std::vector<double> doubled =
      symmetric_eigenvalues(gue_embedding(m), 2 * m.n);
  std::vector<double> lambda(m.n);
  for (std::size_t i = 0; i < m.n; ++i) lambda[i] = doubled[2 * i];
  return lambda;
}

std::pair<double, double> hoffman_wielandt_check(const MatrixEnsemble& a,
                                                 const MatrixEnsemble& b) {
  if (a.kind != b.kind || a.n != b.n)
    throw std::invalid_argument("hoffman_wielandt_check: shape mismatch");
  std::vector<double> la = eigenvalues(a);
  std::vector<double> lb = eigenvalues(b);
  double lhs = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double d = la[i] - lb[i];
    lhs += d * d;
  }
  // The packing is an isometry, so the entrywise squared distance is the
  // packed squared distance.
  double rhs = 0.0;
  for (std::size_t k = 0; k < a.coords.size(); ++k) {
    double d = a.coords[k] - b.coords[k];
    rhs += d * d;
  }
  return {lhs, rhs};
}

double matrix_chi2_divergence(const MatrixEnsemble& h0, double t) {
  if (t <= 0.0) throw std::domain_error("matrix_chi2_divergence: t <= 0");
  const double d = static_cast<double>(h0.coords.size());
  const double nn = static_cast<double>(h0.n);
  const double eps = std::exp(-2.0 * t);
  double norm2 = 0.0;
  for (double c : h0.coords) norm2 += c * c;
  double l = -0.5 * d * std::log1p(-eps * eps) +
             nn * norm2 * eps / (1.0 + eps);
  if (l > 700.0) return std::numeric_limits<double>::infinity();
  return std::expm1(l);
}

}  // namespace cutofflab
