#include "mbe/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

namespace mbe {

GridSpec::GridSpec(double length, int size) : length(length), size(size) {
    if (!(length > 0.0)) throw std::invalid_argument("GridSpec: length must be positive");
    if (size < 4 || size % 2 != 0)
        throw std::invalid_argument("GridSpec: size must be an even integer >= 4");
}

Field::Field(const GridSpec& spec, double fill)
    : spec_(spec), values_(std::size_t(spec.nodes()), fill) {
    if (spec.size == 0) throw std::invalid_argument("Field: default GridSpec");
}

namespace {
inline int wrap(int i, int m) {
    i %= m;
    return i < 0 ? i + m : i;
}
}  // namespace

double& Field::at(int i, int j) {
    return values_[std::size_t(wrap(j, spec_.size)) * spec_.size + wrap(i, spec_.size)];
}

double Field::at(int i, int j) const {
    return values_[std::size_t(wrap(j, spec_.size)) * spec_.size + wrap(i, spec_.size)];
}

Field Field::sample(const GridSpec& spec, const std::function<double(double, double)>& f) {
    Field field(spec);
    const double h = spec.spacing();
    for (int j = 0; j < spec.size; ++j)
        for (int i = 0; i < spec.size; ++i)
            field.at(i, j) = f(i * h, j * h);
    return field;
}

Field& Field::operator+=(const Field& other) {
    if (spec_ != other.spec_) throw std::invalid_argument("Field: grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    if (spec_ != other.spec_) throw std::invalid_argument("Field: grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double scale) {
    for (auto& v : values_) v *= scale;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, double scale) { return a *= scale; }
Field operator*(double scale, Field a) { return a *= scale; }

void Field::save_csv(const std::filesystem::path& file, double time) const {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out.precision(17);
    out << "# L=" << spec_.length << " M=" << spec_.size << " t=" << time << "\n";
    for (int j = 0; j < spec_.size; ++j) {
        for (int i = 0; i < spec_.size; ++i) {
            if (i) out << ",";
            out << at(i, j);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

Field Field::load_csv(const std::filesystem::path& file, double* time_out) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string header;
    std::getline(in, header);
    double length = 0.0, time = 0.0;
    int size = 0;
    if (std::sscanf(header.c_str(), "# L=%lf M=%d t=%lf", &length, &size, &time) != 3)
        throw std::runtime_error("bad field header in " + file.string());
    Field field(GridSpec(length, size));
    std::string line;
    for (int j = 0; j < size; ++j) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated field " + file.string());
        std::stringstream row(line);
        std::string cell;
        for (int i = 0; i < size; ++i) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in " + file.string());
            field.at(i, j) = std::stod(cell);
        }
    }
    if (time_out) *time_out = time;
    return field;
}

VectorField gradient(const Field& w) {
    const int m = w.size();
    const double inv2h = 1.0 / (2.0 * w.spec().spacing());
    VectorField g{Field(w.spec()), Field(w.spec())};
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            g.x.at(i, j) = (w.at(i + 1, j) - w.at(i - 1, j)) * inv2h;
            g.y.at(i, j) = (w.at(i, j + 1) - w.at(i, j - 1)) * inv2h;
        }
    return g;
}

Field divergence(const VectorField& u) {
    if (u.x.spec() != u.y.spec()) throw std::invalid_argument("divergence: grid mismatch");
    const int m = u.x.size();
    const double inv2h = 1.0 / (2.0 * u.x.spec().spacing());
    Field d(u.x.spec());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            d.at(i, j) = (u.x.at(i + 1, j) - u.x.at(i - 1, j)) * inv2h +
                         (u.y.at(i, j + 1) - u.y.at(i, j - 1)) * inv2h;
    return d;
}

Field laplacian(const Field& w) {
    const int m = w.size();
    const double h = w.spec().spacing();
    const double invh2 = 1.0 / (h * h);
    Field lap(w.spec());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            lap.at(i, j) = (w.at(i + 1, j) + w.at(i - 1, j) + w.at(i, j + 1) +
                            w.at(i, j - 1) - 4.0 * w.at(i, j)) * invh2;
    return lap;
}

Field bilaplacian(const Field& w) { return laplacian(laplacian(w)); }

double inner(const Field& v, const Field& w) {
    if (v.spec() != w.spec()) throw std::invalid_argument("inner: grid mismatch");
    const double h = v.spec().spacing();
    double sum = 0.0;
    const auto& a = v.values();
    const auto& b = w.values();
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return h * h * sum;
}

double norm_l2(const Field& v) { return std::sqrt(inner(v, v)); }

double gradient_norm(const Field& v) {
    const auto g = gradient(v);
    return std::sqrt(inner(g.x, g.x) + inner(g.y, g.y));
}

double laplacian_norm(const Field& v) { return norm_l2(laplacian(v)); }

double mean(const Field& v) {
    double sum = 0.0;
    for (double x : v.values()) sum += x;
    return sum / v.values().size();
}

namespace {

// Cached FFTW workspace per grid size. Plans use FFTW_ESTIMATE so results are
// deterministic; access is serialized (FFTW plan execution on shared buffers
// is not thread-safe).
struct SpectralWorkspace {
    int m = 0;
    double* real = nullptr;
    fftw_complex* spectral = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    std::vector<double> mode_eigenvalue;  // second-difference symbol per mode index

    explicit SpectralWorkspace(int m, double h) : m(m) {
        real = fftw_alloc_real(std::size_t(m) * m);
        spectral = fftw_alloc_complex(std::size_t(m) * (m / 2 + 1));
        forward = fftw_plan_dft_r2c_2d(m, m, real, spectral, FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_2d(m, m, spectral, real, FFTW_ESTIMATE);
        mode_eigenvalue.resize(m);
        for (int k = 0; k < m; ++k) {
            const double s = std::sin(M_PI * k / m);
            mode_eigenvalue[k] = -(4.0 / (h * h)) * s * s;
        }
    }
    ~SpectralWorkspace() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
        fftw_free(real);
        fftw_free(spectral);
    }
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;
};

std::mutex spectral_mutex;
std::map<std::pair<int, double>, std::unique_ptr<SpectralWorkspace>> spectral_cache;

}  // namespace

Field solve_helmholtz_biharmonic(double alpha, double eps, const Field& rhs) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("solve_helmholtz_biharmonic: alpha must be positive");
    if (eps < 0.0)
        throw std::invalid_argument("solve_helmholtz_biharmonic: eps must be nonnegative");
    const int m = rhs.size();
    const double h = rhs.spec().spacing();

    std::lock_guard<std::mutex> lock(spectral_mutex);
    auto& ws = spectral_cache[{m, h}];
    if (!ws) ws = std::make_unique<SpectralWorkspace>(m, h);

    std::memcpy(ws->real, rhs.data(), sizeof(double) * rhs.values().size());
    fftw_execute(ws->forward);
    const int half = m / 2 + 1;
    for (int ky = 0; ky < m; ++ky) {
        for (int kx = 0; kx < half; ++kx) {
            const double lam = ws->mode_eigenvalue[kx] + ws->mode_eigenvalue[ky];
            const double den = alpha + eps * lam * lam;
            fftw_complex& c = ws->spectral[std::size_t(ky) * half + kx];
            c[0] /= den;
            c[1] /= den;
        }
    }
    fftw_execute(ws->inverse);
    Field out(rhs.spec());
    const double scale = 1.0 / (double(m) * m);
    for (std::size_t k = 0; k < out.values().size(); ++k)
        out.values()[k] = ws->real[k] * scale;
    return out;
}

}  // namespace mbe
