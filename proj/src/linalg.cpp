#include "cutofflab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cutofflab {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

// QL with implicit shifts on (d, e); e[i] couples d[i] and d[i+1].
void ql_implicit(std::vector<double>& d, std::vector<double>& e) {
  const long n = static_cast<long>(d.size());
  if (n == 0) return;
  e.push_back(0.0);
  for (long l = 0; l < n; ++l) {
    int iter = 0;
    long m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("ql_implicit: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (long i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  e.pop_back();
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> sub) {
  if (!diag.empty() && sub.size() + 1 != diag.size())
    throw std::invalid_argument("tridiagonal_eigenvalues: size mismatch");
  ql_implicit(diag, sub);
  std::sort(diag.begin(), diag.end());
  return diag;
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& a,
                                          std::size_t n) {
  if (a.size() != n * n)
    throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
  // Householder reduction to tridiagonal form (values only).
  std::vector<double> m = a;
  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (std::size_t i = n; i-- > 1;) {
    std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(m[i * n + k]);
      if (scale == 0.0) {
        e[i] = m[i * n + l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          m[i * n + k] /= scale;
          h += m[i * n + k] * m[i * n + k];
        }
        double f = m[i * n + l];
        double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        e[i] = scale * g;
        h -= f * g;
        m[i * n + l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += m[j * n + k] * m[i * n + k];
          for (std::size_t k = j + 1; k <= l; ++k)
            g += m[k * n + j] * m[i * n + k];
          e[j] = g / h;
          f += e[j] * m[i * n + j];
        }
        double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = m[i * n + j];
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k)
            m[j * n + k] -= f * e[k] + g * m[i * n + k];
        }
      }
    } else {
      e[i] = m[i * n + l];
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = m[i * n + i];
  std::vector<double> sub(e.begin() + 1, e.end());
  return tridiagonal_eigenvalues(d, sub);
}

void jacobi_eigen(const std::vector<double>& a, std::size_t n,
                  std::vector<double>& values, std::vector<double>& vectors) {
  if (a.size() != n * n)
    throw std::invalid_argument("jacobi_eigen: size mismatch");
  std::vector<double> m = a;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m[p * n + q] * m[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = m[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double mkp = m[k * n + p], mkq = m[k * n + q];
          m[k * n + p] = c * mkp - s * mkq;
          m[k * n + q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double mpk = m[p * n + k], mqk = m[q * n + k];
          m[p * n + k] = c * mpk - s * mqk;
          m[q * n + k] = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  // sort by eigenvalue, carrying columns along
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m[i * n + i] < m[j * n + j]; });
  values.assign(n, 0.0);
  vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = m[order[k] * n + order[k]];
    for (std::size_t r = 0; r < n; ++r) vectors[r * n + k] = v[r * n + order[k]];
  }
}

}  // namespace cutofflab
