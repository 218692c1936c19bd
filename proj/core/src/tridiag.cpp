#include "mbe/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

extern "C" void dsyev_(const char* jobz, const char* uplo, const int* n, double* a,
                       const int* lda, double* w, double* work, const int* lwork,
                       int* info);

namespace mbe {

namespace {

// Gershgorin interval containing the whole spectrum.
std::pair<double, double> spectrum_bounds(std::span<const double> diag,
                                          std::span<const double> off) {
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(off[i - 1]);
        if (i + 1 < n) radius += std::abs(off[i]);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    return {lo, hi};
}

// Bisection for the k-th smallest eigenvalue (0-based).
double kth_eigenvalue(std::span<const double> diag, std::span<const double> off, int k) {
    auto [lo, hi] = spectrum_bounds(diag, off);
    const double span = std::max(hi - lo, 1.0);
    lo -= 1e-12 * span;
    hi += 1e-12 * span;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (tridiag_count_below(diag, off, mid) > k)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-14 * std::max({std::abs(lo), std::abs(hi), 1e-300}))
            break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

int tridiag_count_below(std::span<const double> diag, std::span<const double> off,
                        double x) {
    if (diag.empty()) return 0;
    if (off.size() + 1 != diag.size())
        throw std::invalid_argument("tridiag: off-diagonal size mismatch");
    const double tiny = std::numeric_limits<double>::min();
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        if (q == 0.0) q = tiny;
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

double tridiag_min_eigenvalue(std::span<const double> diag, std::span<const double> off) {
    if (diag.empty()) throw std::invalid_argument("tridiag: empty matrix");
    return kth_eigenvalue(diag, off, 0);
}

double tridiag_max_eigenvalue(std::span<const double> diag, std::span<const double> off) {
    if (diag.empty()) throw std::invalid_argument("tridiag: empty matrix");
    return kth_eigenvalue(diag, off, static_cast<int>(diag.size()) - 1);
}

std::vector<double> tridiag_eigenvalues(std::span<const double> diag,
                                        std::span<const double> off) {
    std::vector<double> values(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k)
        values[k] = kth_eigenvalue(diag, off, static_cast<int>(k));
    return values;
}

double dense_symmetric_min_eigenvalue(std::vector<double> matrix, int n) {
    if (n < 1 || static_cast<int>(matrix.size()) != n * n)
        throw std::invalid_argument("dense_symmetric_min_eigenvalue: bad dimensions");
    std::vector<double> w(n);
    int info = 0;
    int lwork = -1;
    double wk = 0.0;
    dsyev_("N", "U", &n, matrix.data(), &n, w.data(), &wk, &lwork, &info);
    if (info != 0) throw std::runtime_error("dsyev workspace query failed");
    lwork = static_cast<int>(wk);
    std::vector<double> work(lwork);
    dsyev_("N", "U", &n, matrix.data(), &n, w.data(), work.data(), &lwork, &info);
    if (info != 0) throw std::runtime_error("dsyev failed");
    return w.front();
}

}  // namespace mbe
