#pragma once

#include <span>
#include <vector>

namespace mbe {

/// Eigenvalue routines for real symmetric tridiagonal matrices, based on
/// Sturm-sequence bisection. `diag` holds the n diagonal entries, `off` the
/// n-1 subdiagonal entries. Accuracy target: 1e-10 relative on the
/// well-conditioned small matrices used here.

/// Number of eigenvalues strictly less than x.
int tridiag_count_below(std::span<const double> diag, std::span<const double> off, double x);

/// Smallest and largest eigenvalue.
double tridiag_min_eigenvalue(std::span<const double> diag, std::span<const double> off);
double tridiag_max_eigenvalue(std::span<const double> diag, std::span<const double> off);

/// All eigenvalues in ascending order.
std::vector<double> tridiag_eigenvalues(std::span<const double> diag,
                                        std::span<const double> off);

/// Smallest eigenvalue of a dense symmetric matrix (row-major, n x n),
/// via LAPACK dsyev.
double dense_symmetric_min_eigenvalue(std::vector<double> matrix, int n);

}  // namespace mbe
