#pragma once

#include <vector>

namespace xythermo {

/// Parameters of the periodic spin-1/2 XY chain in a transverse field,
///
///   H = -J sum_i [ (1+g)/2 sx_i sx_{i+1} + (1-g)/2 sy_i sy_{i+1} ] - h sum_i sz_i
///
/// with g the anisotropy and h = field_ratio * J. Only the ferromagnetic
/// sign J > 0 is supported. Construction validates the parameters.
class ChainSpec {
public:
    ChainSpec(double gamma, double field_ratio, int sites, double coupling = 1.0);

    double gamma() const { return gamma_; }
    double field_ratio() const { return field_ratio_; }
    double coupling() const { return coupling_; }
    int sites() const { return sites_; }
    double field() const { return field_ratio_ * coupling_; }

    ChainSpec with_gamma(double gamma) const;
    ChainSpec with_field_ratio(double field_ratio) const;
    ChainSpec with_sites(int sites) const;

private:
    double gamma_;
    double field_ratio_;
    double coupling_;
    int sites_;
};

/// Free-fermion solution on the antiperiodic grid k_j = pi (2j+1) / N,
/// j = -N/2 .. N/2-1. angles[j] is the Bogoliubov angle theta_k with
/// tan(2 theta_k) = gamma sin k / (cos k - h/J); 2 theta_k is taken on the
/// atan2 branch so that theta_{-k} = -theta_k.
struct ModeTable {
    std::vector<double> momenta;
    std::vector<double> energies;
    std::vector<double> angles;

    std::size_t size() const { return momenta.size(); }
};

double dispersion(const ChainSpec& spec, double k);

/// 2 theta_k, i.e. the polar angle of (cos k - h/J, gamma sin k).
double bogoliubov_phase(const ChainSpec& spec, double k);

std::vector<double> quasi_momenta(int sites);

ModeTable mode_table(const ChainSpec& spec);

/// Minimum of the dispersion over the continuum k in [0, pi].
double energy_gap(const ChainSpec& spec);

/// Positive branch of the factorization line h/J = sqrt(1 - gamma^2).
double factorization_field(double gamma);

/// True on |h/J| = 1 or on gamma = 0 with |h/J| <= 1.
bool is_critical(const ChainSpec& spec);

} // namespace xythermo
