#pragma once

#include "xythermo/spectrum.hpp"

#include <vector>

namespace xythermo {

/// Gibbs state of the chain at temperature T (k_B = 1, units of J).
///
/// The state factorizes over Bogoliubov modes, so it is fully described by
/// the Fermi-Dirac occupations n_k = 1 / (1 + exp(eps_k / T)). T may be
/// +infinity, which gives the maximally mixed state (n_k = 1/2).
class ThermalEnsemble {
public:
    ThermalEnsemble(ChainSpec spec, double temperature);

    const ChainSpec& spec() const { return spec_; }
    double temperature() const { return temperature_; }
    const ModeTable& modes() const { return modes_; }
    int sites() const { return spec_.sites(); }

    /// n_k for each mode, same order as modes().momenta.
    const std::vector<double>& occupations() const { return occupations_; }
    /// n_k (1 - n_k), evaluated without cancellation.
    const std::vector<double>& fluctuations() const { return fluctuations_; }
    /// tanh(eps_k / 2T) = 1 - 2 n_k.
    const std::vector<double>& polarizations() const { return polarizations_; }

private:
    ChainSpec spec_;
    double temperature_;
    ModeTable modes_;
    std::vector<double> occupations_;
    std::vector<double> fluctuations_;
    std::vector<double> polarizations_;
};

ThermalEnsemble ensemble(const ChainSpec& spec, double temperature);

/// Fermi-Dirac occupation 1 / (1 + exp(x)) for x = eps / T >= 0.
double fermi_occupation(double x);
/// n (1 - n) = 1 / (4 cosh^2(x / 2)).
double fermi_fluctuation(double x);

/// Delta H^2 = sum_k eps_k^2 n_k (1 - n_k).
double energy_variance(const ThermalEnsemble& ens);

/// Quantum Fisher information for T, Delta H^2 / T^4.
double qfi(const ThermalEnsemble& ens);

/// Per-mode contributions (eps_k / T^2)^2 n_k (1 - n_k); they sum to qfi().
std::vector<double> mode_qfi(const ThermalEnsemble& ens);

/// Single-shot Cramer-Rao ceiling (T / Delta T)^2 = T^2 F.
double snr_crb(const ThermalEnsemble& ens);

/// Delta H * Delta T / T^2 with Delta T = 1 / sqrt(F). Saturates at 1.
double uncertainty_product(const ThermalEnsemble& ens);

/// One grid point of the sensitivity comparison. Values are raw (not per
/// site) unless per_site is set; see per_site_copy().
struct SensitivityReport {
    double gamma = 0.0;
    double field_ratio = 0.0;
    double temperature = 0.0;
    int sites = 0;
    double snr_crb = 0.0;
    double snr_varjx = 0.0;
    double snr_meanjz = 0.0;
    bool per_site = false;

    SensitivityReport per_site_copy() const;
};

} // namespace xythermo
