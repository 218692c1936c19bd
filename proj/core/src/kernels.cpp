#include "mbe/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "mbe/tridiag.hpp"

namespace mbe {

Bdf2Coeffs bdf2_coefficients(const TimeMesh& mesh, int n) {
    if (n < 1 || n > mesh.num_steps())
        throw std::out_of_range("bdf2_coefficients: level index");
    if (n == 1) return {1.0 / mesh.step(1), 0.0};
    const double tau = mesh.step(n);
    const double r = mesh.ratio(n);
    return {(1.0 + 2.0 * r) / (tau * (1.0 + r)), -r * r / (tau * (1.0 + r))};
}

std::size_t DocKernelTable::index(int n, int k) const {
    if (n < 1 || n > levels_ || k < 1 || k > n)
        throw std::out_of_range("DocKernelTable: indices");
    return std::size_t(n - 1) * n / 2 + (k - 1);
}

double DocKernelTable::entry(int n, int k) const { return data_[index(n, k)]; }

void DocKernelTable::perturb(int n, int k, double delta) { data_[index(n, k)] += delta; }

double DocKernelTable::row_sum(int n) const {
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += entry(n, k);
    return sum;
}

DocKernelTable DocKernelTable::recursive(const TimeMesh& mesh) {
    const int levels = mesh.num_steps();
    DocKernelTable table(levels);
    for (int n = 1; n <= levels; ++n) {
        table.data_[table.index(n, n)] = 1.0 / bdf2_coefficients(mesh, n).b0;
        for (int k = n - 1; k >= 1; --k) {
            // only the j = k+1 term survives since b_j^{(n)} = 0 for j >= 2
            const double b1_next = bdf2_coefficients(mesh, k + 1).b1;
            const double b0_k = bdf2_coefficients(mesh, k).b0;
            table.data_[table.index(n, k)] =
                -table.data_[table.index(n, k + 1)] * b1_next / b0_k;
        }
    }
    return table;
}

DocKernelTable DocKernelTable::closed_form(const TimeMesh& mesh) {
    const int levels = mesh.num_steps();
    DocKernelTable table(levels);
    for (int n = 1; n <= levels; ++n) {
        double product = 1.0;  // prod_{i=j+1}^n r_i^2/(1+2r_i), built from j = n down
        for (int j = n; j >= 1; --j) {
            table.data_[table.index(n, j)] = product / bdf2_coefficients(mesh, j).b0;
            if (j > 1) {
                const double r = mesh.ratio(j);
                product *= r * r / (1.0 + 2.0 * r);
            }
        }
    }
    return table;
}

double verify_orthogonality(const TimeMesh& mesh, const DocKernelTable& table) {
    double worst = 0.0;
    for (int n = 1; n <= table.size(); ++n) {
        for (int k = 1; k <= n; ++k) {
            double sum = table.entry(n, k) * bdf2_coefficients(mesh, k).b0;
            if (k < n) sum += table.entry(n, k + 1) * bdf2_coefficients(mesh, k + 1).b1;
            const double target = (n == k) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(sum - target));
        }
    }
    return worst;
}

double max_row_sum_deviation(const TimeMesh& mesh, const DocKernelTable& table) {
    double worst = 0.0;
    for (int n = 1; n <= table.size(); ++n) {
        const double tau = mesh.step(n);
        worst = std::max(worst, std::abs(table.row_sum(n) - tau) / tau);
    }
    return worst;
}

QuadFormCheck quadratic_form_lower_bound_check(const TimeMesh& mesh,
                                               std::span<const double> w) {
    const int n = static_cast<int>(w.size());
    if (n > mesh.num_steps())
        throw std::invalid_argument("quadratic_form_lower_bound_check: sequence too long");
    QuadFormCheck result;
    for (int k = 1; k <= n; ++k) {
        const auto [b0, b1] = bdf2_coefficients(mesh, k);
        double conv = b0 * w[k - 1];
        if (k >= 2) conv += b1 * w[k - 2];
        result.lhs += w[k - 1] * conv;

        const double rk = mesh.ratio(k);
        const double rnext = (k < n) ? mesh.ratio(k + 1) : 0.0;
        const double coeff =
            (2.0 + 4.0 * rk - rk * rk) / (1.0 + rk) - rnext / (1.0 + rnext);
        result.rhs += 0.5 * coeff * w[k - 1] * w[k - 1] / mesh.step(k);
    }
    const double scale = std::max({std::abs(result.lhs), std::abs(result.rhs), 1.0});
    result.holds = result.lhs >= result.rhs - 1e-12 * scale;
    return result;
}

Bdf2Coeffs bdf2_scaled_coefficients(const TimeMesh& mesh, int k) {
    const double r = mesh.ratio(k);  // r_1 == 0 gives (1, 0)
    return {(1.0 + 2.0 * r) / (1.0 + r), -std::pow(r, 1.5) / (1.0 + r)};
}

TridiagMatrix matrix_b_symmetric(const TimeMesh& mesh, int n) {
    TridiagMatrix m;
    m.diag.resize(n);
    m.off.resize(n > 0 ? n - 1 : 0);
    for (int k = 1; k <= n; ++k) {
        m.diag[k - 1] = 2.0 * bdf2_coefficients(mesh, k).b0;
        if (k < n) m.off[k - 1] = bdf2_coefficients(mesh, k + 1).b1;
    }
    return m;
}

TridiagMatrix matrix_btilde_symmetric(const TimeMesh& mesh, int n) {
    TridiagMatrix m;
    m.diag.resize(n);
    m.off.resize(n > 0 ? n - 1 : 0);
    for (int k = 1; k <= n; ++k) {
        m.diag[k - 1] = 2.0 * bdf2_scaled_coefficients(mesh, k).b0;
        if (k < n) m.off[k - 1] = bdf2_scaled_coefficients(mesh, k + 1).b1;
    }
    return m;
}

TridiagMatrix matrix_btilde_gram(const TimeMesh& mesh, int n) {
    TridiagMatrix m;
    m.diag.resize(n);
    m.off.resize(n > 0 ? n - 1 : 0);
    for (int k = 1; k <= n; ++k) {
        const double a = bdf2_scaled_coefficients(mesh, k).b0;
        const double c_next = (k < n) ? bdf2_scaled_coefficients(mesh, k + 1).b1 : 0.0;
        m.diag[k - 1] = a * a + c_next * c_next;
        if (k < n) m.off[k - 1] = bdf2_scaled_coefficients(mesh, k + 1).b0 * c_next;
    }
    return m;
}

MrResult compute_m_r(const TimeMesh& mesh) {
    MrResult result;
    for (int n = 1; n <= mesh.num_steps(); ++n) {
        const auto sym = matrix_btilde_symmetric(mesh, n);
        const double lambda_min = tridiag_min_eigenvalue(sym.diag, sym.off);
        if (lambda_min <= 0.0) {
            result.ok = false;
            result.message = "lambda_min(B~) <= 0 at level " + std::to_string(n) +
                             " (S1 violated or numerical breakdown)";
            return result;
        }
        const auto gram = matrix_btilde_gram(mesh, n);
        const double lambda_max = tridiag_max_eigenvalue(gram.diag, gram.off);
        const double ratio = lambda_max / (lambda_min * lambda_min);
        if (ratio > result.value) {
            result.value = ratio;
            result.argmax_level = n;
        }
    }
    return result;
}

double bdf2_symmetric_min_eigenvalue(const TimeMesh& mesh) {
    const auto m = matrix_b_symmetric(mesh, mesh.num_steps());
    return tridiag_min_eigenvalue(m.diag, m.off);
}

double doc_symmetric_min_eigenvalue(const DocKernelTable& table) {
    const int n = table.size();
    std::vector<double> dense(std::size_t(n) * n, 0.0);
    for (int row = 1; row <= n; ++row)
        for (int col = 1; col <= row; ++col) {
            const double theta = table.entry(row, col);
            dense[std::size_t(row - 1) * n + (col - 1)] += theta;
            dense[std::size_t(col - 1) * n + (row - 1)] += theta;
        }
    return dense_symmetric_min_eigenvalue(std::move(dense), n);
}

}  // namespace mbe
