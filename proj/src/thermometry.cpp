#include "xythermo/thermometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xythermo {

double fermi_occupation(double x) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
}

double fermi_fluctuation(double x) {
    const double c = std::cosh(0.5 * x);
    return 1.0 / (4.0 * c * c);
}

ThermalEnsemble::ThermalEnsemble(ChainSpec spec, double temperature)
    : spec_(std::move(spec)), temperature_(temperature), modes_(mode_table(spec_)) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("temperature must be positive");
    occupations_.reserve(modes_.size());
    fluctuations_.reserve(modes_.size());
    polarizations_.reserve(modes_.size());
    for (double eps : modes_.energies) {
        const double x = eps / temperature_;
        occupations_.push_back(fermi_occupation(x));
        fluctuations_.push_back(fermi_fluctuation(x));
        polarizations_.push_back(std::tanh(0.5 * x));
    }
}

ThermalEnsemble ensemble(const ChainSpec& spec, double temperature) {
    return ThermalEnsemble(spec, temperature);
}

double energy_variance(const ThermalEnsemble& ens) {
    const auto& eps = ens.modes().energies;
    const auto& fl = ens.fluctuations();
    double sum = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i)
        sum += eps[i] * eps[i] * fl[i];
    return sum;
}

std::vector<double> mode_qfi(const ThermalEnsemble& ens) {
    const double t2 = ens.temperature() * ens.temperature();
    const auto& eps = ens.modes().energies;
    const auto& fl = ens.fluctuations();
    std::vector<double> out(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double r = eps[i] / t2;
        out[i] = r * r * fl[i];
    }
    return out;
}

double qfi(const ThermalEnsemble& ens) {
    const auto per_mode = mode_qfi(ens);
    return std::accumulate(per_mode.begin(), per_mode.end(), 0.0);
}

double snr_crb(const ThermalEnsemble& ens) {
    const double t = ens.temperature();
    const auto& eps = ens.modes().energies;
    const auto& fl = ens.fluctuations();
    double sum = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double r = eps[i] / t;
        sum += r * r * fl[i];
    }
    return sum;
}

double uncertainty_product(const ThermalEnsemble& ens) {
    const double t = ens.temperature();
    return std::sqrt(energy_variance(ens)) / std::sqrt(qfi(ens)) / (t * t);
}

SensitivityReport SensitivityReport::per_site_copy() const {
    if (per_site)
        return *this;
    SensitivityReport out = *this;
    const double n = static_cast<double>(sites);
    out.snr_crb /= n;
    out.snr_varjx /= n;
    out.snr_meanjz /= n;
    out.per_site = true;
    return out;
}

} // namespace xythermo
