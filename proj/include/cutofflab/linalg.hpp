#pragma once

#include <cstddef>
#include <vector>

// Dense symmetric eigenvalue machinery: Householder tridiagonalization + QL
// with implicit shifts (values only), plus a Jacobi rotation solver (values
// and vectors) for the small matrices used by the metric formulas.

namespace cutofflab {

// Eigenvalues of a symmetric tridiagonal matrix; diag has length n, sub has
// length n-1.  Returns the sorted spectrum.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> sub);

// Sorted eigenvalues of a dense symmetric matrix (row-major n x n) via
// Householder reduction to tridiagonal form followed by QL.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& a,
                                          std::size_t n);

// Jacobi eigen-decomposition of a dense symmetric matrix; fills sorted
// eigenvalues and the matching eigenvectors (column k of `vectors` is the
// eigenvector of values[k], stored row-major).
void jacobi_eigen(const std::vector<double>& a, std::size_t n,
                  std::vector<double>& values, std::vector<double>& vectors);

}  // namespace cutofflab
