#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cutofflab/rng.hpp"

// Matrix-valued OU processes on real symmetric (GOE, beta=1) and complex
// Hermitian (GUE, beta=2) matrices, through the packed orthonormal coordinate
// parametrization in which all coordinates are independent real OU processes.

namespace cutofflab {

enum class EnsembleKind { GOE, GUE };

struct MatrixEnsemble {
  EnsembleKind kind;
  std::size_t n;
  // Packed coordinates: n(n+1)/2 reals for GOE (diagonal then scaled upper
  // triangle), n^2 for GUE (diagonal, scaled real and imaginary parts).  The
  // packing is an isometry: Tr(h^2) = sum of squared coordinates.
  std::vector<double> coords;

  static std::size_t coord_count(EnsembleKind kind, std::size_t n);
};

// All packed coordinates iid N(0, 1/n).
MatrixEnsemble sample_ensemble(EnsembleKind kind, std::size_t n,
                               RngStream& rng);

// Ensemble whose matrix is diag(d) (zero off-diagonal coordinates).
MatrixEnsemble diagonal_ensemble(EnsembleKind kind,
                                 const std::vector<double>& d);

// Exact per-coordinate OU transition with theta = sqrt(2/n), rho = 1.
MatrixEnsemble matrix_ou_step(const MatrixEnsemble& m, double dt,
                              RngStream& rng);

// Sorted spectrum of the packed matrix.
std::vector<double> eigenvalues(const MatrixEnsemble& m);

// (sum |lambda_i(A) - lambda_i(B)|^2, sum |A_ij - B_ij|^2); the first never
// exceeds the second.
std::pair<double, double> hoffman_wielandt_check(const MatrixEnsemble& a,
                                                 const MatrixEnsemble& b);

// Closed-form chi-square divergence between Law(H_t) started at the packed
// point h0 and the equilibrium ensemble (per-coordinate Gaussian formula).
double matrix_chi2_divergence(const MatrixEnsemble& h0, double t);

}  // namespace cutofflab
