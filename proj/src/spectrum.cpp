#include "xythermo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace xythermo {

ChainSpec::ChainSpec(double gamma, double field_ratio, int sites, double coupling)
    : gamma_(gamma), field_ratio_(field_ratio), coupling_(coupling), sites_(sites) {
    if (!(gamma >= -1.0 && gamma <= 1.0))
        throw std::invalid_argument("anisotropy must lie in [-1, 1], got " + std::to_string(gamma));
    if (!std::isfinite(field_ratio))
        throw std::invalid_argument("field ratio must be finite");
    if (!(coupling > 0.0) || !std::isfinite(coupling))
        throw std::invalid_argument("coupling must be positive (ferromagnetic chain only)");
    // N = 2 would count the single bond twice on the ring.
    if (sites < 4 || sites % 2 != 0)
        throw std::invalid_argument("site count must be even and >= 4, got " + std::to_string(sites));
}

ChainSpec ChainSpec::with_gamma(double gamma) const {
    return ChainSpec(gamma, field_ratio_, sites_, coupling_);
}

ChainSpec ChainSpec::with_field_ratio(double field_ratio) const {
    return ChainSpec(gamma_, field_ratio, sites_, coupling_);
}

ChainSpec ChainSpec::with_sites(int sites) const {
    return ChainSpec(gamma_, field_ratio_, sites, coupling_);
}

double dispersion(const ChainSpec& spec, double k) {
    const double a = std::cos(k) - spec.field_ratio();
    const double b = spec.gamma() * std::sin(k);
    return 2.0 * spec.coupling() * std::hypot(a, b);
}

double bogoliubov_phase(const ChainSpec& spec, double k) {
    return std::atan2(spec.gamma() * std::sin(k), std::cos(k) - spec.field_ratio());
}

std::vector<double> quasi_momenta(int sites) {
    std::vector<double> k(static_cast<std::size_t>(sites));
    const int half = sites / 2;
    for (int j = -half; j < half; ++j)
        k[static_cast<std::size_t>(j + half)] = std::numbers::pi * (2.0 * j + 1.0) / sites;
    return k;
}

ModeTable mode_table(const ChainSpec& spec) {
    ModeTable table;
    table.momenta = quasi_momenta(spec.sites());
    table.energies.reserve(table.momenta.size());
    table.angles.reserve(table.momenta.size());
    for (double k : table.momenta) {
        table.energies.push_back(dispersion(spec, k));
        table.angles.push_back(0.5 * bogoliubov_phase(spec, k));
    }
    return table;
}

double energy_gap(const ChainSpec& spec) {
    // eps^2 / 4J^2 = (1 - g^2) x^2 - 2 h x + h^2 + g^2 with x = cos k in [-1, 1].
    const double g2 = spec.gamma() * spec.gamma();
    const double h = spec.field_ratio();
    double best = std::min((1.0 - h) * (1.0 - h), (1.0 + h) * (1.0 + h));
    const double curvature = 1.0 - g2;
    if (curvature > 0.0) {
        const double x = h / curvature;
        if (x > -1.0 && x < 1.0) {
            const double f = h * h + g2 - h * x;
            best = std::min(best, std::max(f, 0.0));
        }
    }
    return 2.0 * spec.coupling() * std::sqrt(best);
}

double factorization_field(double gamma) {
    if (!(std::abs(gamma) <= 1.0))
        throw std::invalid_argument("anisotropy must lie in [-1, 1]");
    return std::sqrt(1.0 - gamma * gamma);
}

bool is_critical(const ChainSpec& spec) {
    const double h = std::abs(spec.field_ratio());
    return h == 1.0 || (spec.gamma() == 0.0 && h <= 1.0);
}

} // namespace xythermo
