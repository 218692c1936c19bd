#pragma once

#include <filesystem>
#include <functional>
#include <vector>

namespace mbe {

/// Uniform periodic square grid on (0, L)^2 with M nodes per side, h = L/M.
/// M must be an even integer >= 4 so Fourier mode indexing is unambiguous.
struct GridSpec {
    double length = 0.0;
    int size = 0;

    GridSpec() = default;
    GridSpec(double length, int size);

    double spacing() const { return length / size; }
    int nodes() const { return size * size; }

    bool operator==(const GridSpec&) const = default;
};

/// Scalar grid function: M x M values at nodes (i*h, j*h) with periodic
/// indexing. Stored row-major with the y-index as the row.
class Field {
public:
    Field() = default;
    explicit Field(const GridSpec& spec, double fill = 0.0);

    const GridSpec& spec() const { return spec_; }
    int size() const { return spec_.size; }

    /// Value at x-index i, y-index j (indices taken mod M).
    double& at(int i, int j);
    double at(int i, int j) const;

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Fill from a pointwise function of the node coordinates (x, y).
    static Field sample(const GridSpec& spec, const std::function<double(double, double)>& f);

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double scale);

    /// CSV snapshot: `# L=<L> M=<M> t=<time>` header comment, then M rows
    /// (row = y-index) of M comma-separated values (column = x-index).
    void save_csv(const std::filesystem::path& file, double time) const;
    static Field load_csv(const std::filesystem::path& file, double* time_out = nullptr);

private:
    GridSpec spec_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, double scale);
Field operator*(double scale, Field a);

struct VectorField {
    Field x;
    Field y;
};

/// Central-difference gradient, (w_{i+1,j}-w_{i-1,j})/(2h) and likewise in y.
VectorField gradient(const Field& w);

/// Central-difference divergence of a vector field.
Field divergence(const VectorField& u);

/// Five-point Laplacian (second-difference stencils in x and y).
Field laplacian(const Field& w);

/// Laplacian applied twice.
Field bilaplacian(const Field& w);

/// Discrete L2 inner product h^2 * sum of products, and derived norms.
double inner(const Field& v, const Field& w);
double norm_l2(const Field& v);
double gradient_norm(const Field& v);   // ||grad_h v||
double laplacian_norm(const Field& v);  // ||Delta_h v||
double mean(const Field& v);

/// Solve (alpha*I + eps*Delta_h^2) w = rhs exactly by diagonalizing the
/// periodic second-difference operator in the discrete Fourier basis.
/// alpha must be positive (the constant mode would otherwise be singular).
Field solve_helmholtz_biharmonic(double alpha, double eps, const Field& rhs);

}  // namespace mbe
