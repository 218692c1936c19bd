#include "mbe/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mbe {

double ratio_limit() { return (3.0 + std::sqrt(17.0)) / 2.0; }
double ratio_classical_limit() { return 1.0 + std::sqrt(2.0); }

TimeMesh::TimeMesh(std::vector<double> levels, std::optional<std::uint64_t> seed)
    : levels_(std::move(levels)), seed_(seed) {
    if (levels_.empty())
        throw std::invalid_argument("TimeMesh: need at least one level");
    for (std::size_t k = 1; k < levels_.size(); ++k) {
        if (!(levels_[k] > levels_[k - 1]))
            throw std::invalid_argument("TimeMesh: levels must be strictly increasing");
        if (!std::isfinite(levels_[k]))
            throw std::invalid_argument("TimeMesh: non-finite level");
    }
}

TimeMesh TimeMesh::from_levels(std::vector<double> levels) {
    return TimeMesh(std::move(levels));
}

TimeMesh TimeMesh::uniform(double horizon, int num_steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("uniform mesh: horizon must be positive");
    if (num_steps < 1) throw std::invalid_argument("uniform mesh: need at least one step");
    std::vector<double> levels(num_steps + 1);
    for (int k = 0; k <= num_steps; ++k)
        levels[k] = horizon * static_cast<double>(k) / num_steps;
    levels.back() = horizon;
    return TimeMesh(std::move(levels));
}

TimeMesh TimeMesh::random(double horizon, int num_steps, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw std::invalid_argument("random mesh: horizon must be positive");
    if (num_steps < 1) throw std::invalid_argument("random mesh: need at least one step");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> sigma(num_steps);
    for (auto& s : sigma) {
        do { s = unit(gen); } while (s == 0.0);
    }
    const double total = std::accumulate(sigma.begin(), sigma.end(), 0.0);
    std::vector<double> levels(num_steps + 1);
    levels[0] = 0.0;
    for (int k = 1; k <= num_steps; ++k)
        levels[k] = levels[k - 1] + horizon * sigma[k - 1] / total;
    levels.back() = horizon;  // absorb rounding in the last step
    TimeMesh mesh(std::move(levels));
    mesh.seed_ = seed;
    return mesh;
}

double TimeMesh::level(int k) const {
    if (k < 0 || k > num_steps()) throw std::out_of_range("TimeMesh::level");
    return levels_[k];
}

double TimeMesh::step(int k) const {
    if (k < 1 || k > num_steps()) throw std::out_of_range("TimeMesh::step");
    return levels_[k] - levels_[k - 1];
}

double TimeMesh::ratio(int k) const {
    if (k < 1 || k > num_steps()) throw std::out_of_range("TimeMesh::ratio");
    if (k == 1) return 0.0;
    return step(k) / step(k - 1);
}

double TimeMesh::max_step() const {
    double m = 0.0;
    for (int k = 1; k <= num_steps(); ++k) m = std::max(m, step(k));
    return m;
}

double TimeMesh::max_ratio() const {
    double m = 0.0;
    for (int k = 2; k <= num_steps(); ++k) m = std::max(m, ratio(k));
    return m;
}

void TimeMesh::save_csv(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    if (seed_) out << "# seed=" << *seed_ << "\n";
    out << "t\n";
    out.precision(17);
    for (double t : levels_) out << t << "\n";
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

TimeMesh TimeMesh::load_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::optional<std::uint64_t> seed;
    std::vector<double> levels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("seed=");
            if (pos != std::string::npos)
                seed = std::stoull(line.substr(pos + 5));
            continue;
        }
        if (line == "t") continue;
        levels.push_back(std::stod(line));
    }
    TimeMesh mesh(std::move(levels));
    mesh.seed_ = seed;
    return mesh;
}

S1Report check_s1(const TimeMesh& mesh) {
    S1Report report;
    const double rs = ratio_limit();
    for (int k = 2; k <= mesh.num_steps(); ++k) {
        const double r = mesh.ratio(k);
        if (r >= rs) {
            report.satisfied = false;
            report.violations.emplace_back(k, r);
        }
    }
    return report;
}

S2Report check_s2(const TimeMesh& mesh) {
    S2Report report;
    const double lo = ratio_classical_limit();
    const double hi = ratio_limit();
    for (int k = 2; k <= mesh.num_steps(); ++k) {
        const double r = mesh.ratio(k);
        if (r >= lo && r < hi) report.index_set.push_back(k);
    }
    report.count = static_cast<int>(report.index_set.size());
    report.fraction = static_cast<double>(report.count) / mesh.num_steps();
    report.satisfied = report.fraction <= 0.1;  // advisory; paper gives no cutoff
    return report;
}

double energy_step_bound(const TimeMesh& mesh, double eps, int n) {
    if (!(eps > 0.0)) throw std::invalid_argument("energy_step_bound: eps must be positive");
    const double rn = mesh.ratio(n);
    const double rnext = (n < mesh.num_steps()) ? mesh.ratio(n + 1) : 0.0;
    const double term = (2.0 + 4.0 * rn - rn * rn) / (1.0 + rn) - rnext / (1.0 + rnext);
    return 4.0 * eps * std::min(1.0, term);
}

StepRestrictionReport check_energy_step_restriction(const TimeMesh& mesh, double eps) {
    StepRestrictionReport report;
    for (int n = 1; n <= mesh.num_steps(); ++n) {
        if (mesh.step(n) > energy_step_bound(mesh, eps, n)) {
            report.satisfied = false;
            report.violations.push_back(n);
        }
    }
    return report;
}

}  // namespace mbe
