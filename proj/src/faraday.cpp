#include "xythermo/faraday.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace xythermo {

void FaradaySetup::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("kappa must be positive and finite");
}

const char* to_string(ReadoutObservable obs) {
    return obs == ReadoutObservable::MeanJz ? "meanjz" : "varjx";
}

double output_mean_from(double mean_jz, int sites, double kappa) {
    return -kappa / std::sqrt(static_cast<double>(sites)) * mean_jz;
}

double output_variance_from(double var_jz, int sites, double kappa) {
    return input_quadrature_variance + kappa * kappa / sites * var_jz;
}

double var_jz_from_output(double output_var, int sites, double kappa) {
    return (output_var - input_quadrature_variance) * sites / (kappa * kappa);
}

double output_mean(const ThermalEnsemble& ens, const FaradaySetup& setup) {
    setup.validate();
    return output_mean_from(mean_jz(ens, setup.modulation), ens.sites(), setup.kappa);
}

double output_variance(const ThermalEnsemble& ens, const FaradaySetup& setup) {
    setup.validate();
    return output_variance_from(var_jz(ens, setup.modulation), ens.sites(), setup.kappa);
}

double derivative_step(double x) { return std::max(1e-4, 1e-3 * x); }

Derivative richardson_derivative(const std::function<double(double)>& f, double x) {
    const double h = derivative_step(x);
    if (!(x > 2.0 * h))
        throw std::invalid_argument("point too close to zero for the difference stencil");
    const double coarse = (f(x + h) - f(x - h)) / (2.0 * h);
    const double fine = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    Derivative d;
    d.value = (4.0 * fine - coarse) / 3.0;
    d.error = std::abs(d.value - fine);
    d.step = h;
    return d;
}

namespace {

// Temperature-dependent part of <A>; constant offsets do not change the slope.
double signal(const ChainSpec& spec, double temperature, const FaradaySetup& setup, ReadoutObservable obs) {
    const ThermalEnsemble ens(spec, temperature);
    if (obs == ReadoutObservable::MeanJz)
        return mean_jz_thermal_shift(ens, setup.modulation);
    return var_jx(CorrelationKernel(ens));
}

double readout_variance(const ThermalEnsemble& ens, const FaradaySetup& setup, ReadoutObservable obs,
                        int threads) {
    if (obs == ReadoutObservable::MeanJz) {
        double v = var_jz(ens, setup.modulation);
        if (setup.include_shot_noise)
            v += input_quadrature_variance * ens.sites() / (setup.kappa * setup.kappa);
        return v;
    }
    const CorrelationKernel kern(ens);
    const double second = var_jx(kern);
    return fourth_moment_jx(kern, threads) - second * second;
}

} // namespace

SnrEstimate temperature_snr_estimate(const ChainSpec& spec, double temperature, const FaradaySetup& setup,
                                     ReadoutObservable obs, int threads) {
    setup.validate();
    if (!(temperature > 0.0))
        throw std::invalid_argument("temperature must be positive");
    SnrEstimate out;
    if (std::isinf(temperature)) {
        // The infinite-temperature state no longer depends on T.
        out.variance = readout_variance(ThermalEnsemble(spec, temperature), setup, obs, threads);
        return out;
    }
    out.slope = richardson_derivative(
        [&](double t) { return signal(spec, t, setup, obs); }, temperature);
    out.variance = readout_variance(ThermalEnsemble(spec, temperature), setup, obs, threads);
    if (!(out.variance > 0.0) || !std::isfinite(out.variance))
        throw NumericalError(std::string("readout variance of ") + to_string(obs) +
                             " is not positive at T = " + std::to_string(temperature));
    out.snr = out.slope.value * out.slope.value * temperature * temperature / out.variance;
    if (!std::isfinite(out.snr))
        throw NumericalError("non-finite signal-to-noise ratio");
    return out;
}

double temperature_snr(const ChainSpec& spec, double temperature, const FaradaySetup& setup,
                       ReadoutObservable obs, int threads) {
    return temperature_snr_estimate(spec, temperature, setup, obs, threads).snr;
}

double temperature_snr(const ThermalEnsemble& ens, const FaradaySetup& setup, ReadoutObservable obs,
                       int threads) {
    return temperature_snr(ens.spec(), ens.temperature(), setup, obs, threads);
}

SensitivityReport sensitivity_report(const ChainSpec& spec, double temperature, const FaradaySetup& setup,
                                     int threads) {
    SensitivityReport r;
    r.gamma = spec.gamma();
    r.field_ratio = spec.field_ratio();
    r.temperature = temperature;
    r.sites = spec.sites();
    r.snr_crb = snr_crb(ThermalEnsemble(spec, temperature));
    r.snr_varjx = temperature_snr(spec, temperature, setup, ReadoutObservable::VarJx, threads);
    r.snr_meanjz = temperature_snr(spec, temperature, setup, ReadoutObservable::MeanJz, threads);
    return r;
}

} // namespace xythermo
