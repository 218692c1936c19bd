#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mbe/time_mesh.hpp"

namespace mbe {

/// Variable-step BDF2 convolution coefficients at level n:
/// b0 = (1+2r_n)/(tau_n(1+r_n)), b1 = -r_n^2/(tau_n(1+r_n)); level 1 is the
/// BDF1 start (1/tau_1, 0). All higher kernels vanish.
struct Bdf2Coeffs {
    double b0 = 0.0;
    double b1 = 0.0;
};
Bdf2Coeffs bdf2_coefficients(const TimeMesh& mesh, int n);

/// D2 v^n = sum_k b_{n-k}^{(n)} (v^k - v^{k-1}); `history` spans v^0..v^n
/// (at least). Works elementwise for any value type with +, - and double
/// scaling (doubles, Fields).
template <class V>
V apply_d2(const TimeMesh& mesh, int n, std::span<const V> history) {
    if (n < 1 || n > mesh.num_steps()) throw std::out_of_range("apply_d2: level index");
    if (static_cast<int>(history.size()) < n + 1)
        throw std::invalid_argument("apply_d2: insufficient history");
    const auto [b0, b1] = bdf2_coefficients(mesh, n);
    V result = (history[n] - history[n - 1]) * b0;
    if (n >= 2) result = result + (history[n - 1] - history[n - 2]) * b1;
    return result;
}

/// Lower-triangular table of DOC kernels theta_{n-k}^{(n)}, 1 <= k <= n <= N.
class DocKernelTable {
public:
    /// Recursion theta_0^{(n)} = 1/b0^{(n)},
    /// theta_{n-k}^{(n)} = -(1/b0^{(k)}) theta_{n-k-1}^{(n)} b1^{(k+1)}.
    static DocKernelTable recursive(const TimeMesh& mesh);

    /// Product form theta_{n-j}^{(n)} = (1/b0^{(j)}) prod_{i=j+1}^n r_i^2/(1+2r_i).
    static DocKernelTable closed_form(const TimeMesh& mesh);

    int size() const { return levels_; }

    /// theta_{n-k}^{(n)} for 1 <= k <= n <= size().
    double entry(int n, int k) const;

    double row_sum(int n) const;

    /// Test hook: perturb one entry in place.
    void perturb(int n, int k, double delta);

private:
    DocKernelTable(int levels) : levels_(levels), data_(std::size_t(levels) * (levels + 1) / 2) {}
    std::size_t index(int n, int k) const;

    int levels_;
    std::vector<double> data_;  // packed rows n=1..N
};

/// Max |sum_{j=k}^n theta_{n-j}^{(n)} b_{j-k}^{(j)} - delta_{nk}| over all pairs.
double verify_orthogonality(const TimeMesh& mesh, const DocKernelTable& table);

/// Max relative |row_sum(n) - tau_n|/tau_n over n.
double max_row_sum_deviation(const TimeMesh& mesh, const DocKernelTable& table);

/// Summed positive-definiteness bound for the BDF2 kernels:
///   sum_k w_k sum_j b_{k-j}^{(k)} w_j
///     >= (1/2) sum_k [(2+4r_k-r_k^2)/(1+r_k) - r_{k+1}/(1+r_{k+1})] w_k^2/tau_k,
/// with r_{N+1} taken as 0.
struct QuadFormCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
QuadFormCheck quadratic_form_lower_bound_check(const TimeMesh& mesh,
                                               std::span<const double> w);

/// Step-scaled kernels of the matrix Lambda_tau * B2 * Lambda_tau:
/// b~0 = (1+2r_k)/(1+r_k), b~1 = -r_k^{3/2}/(1+r_k).
Bdf2Coeffs bdf2_scaled_coefficients(const TimeMesh& mesh, int k);

/// Tridiagonal (diag, off) representations of the n x n leading blocks.
/// The paper's tensor factor with the 2x2 identity is dropped; it only
/// duplicates eigenvalues.
struct TridiagMatrix {
    std::vector<double> diag;
    std::vector<double> off;
};
TridiagMatrix matrix_b_symmetric(const TimeMesh& mesh, int n);        // B2 + B2^T
TridiagMatrix matrix_btilde_symmetric(const TimeMesh& mesh, int n);   // B~2 + B~2^T
TridiagMatrix matrix_btilde_gram(const TimeMesh& mesh, int n);        // B~2^T B~2

/// Stability quantity M_r = max_n lambda_max(B~2^T B~2) / lambda_min^2(B~).
struct MrResult {
    double value = 0.0;
    int argmax_level = 0;
    bool ok = true;
    std::string message;
};
MrResult compute_m_r(const TimeMesh& mesh);

/// lambda_min(B2+B2^T) for the full N x N block.
double bdf2_symmetric_min_eigenvalue(const TimeMesh& mesh);

/// lambda_min(Theta2+Theta2^T) from a DOC table (dense symmetric eigenvalue).
double doc_symmetric_min_eigenvalue(const DocKernelTable& table);

}  // namespace mbe
