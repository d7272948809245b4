#pragma once

#include "xythermo/correlations.hpp"
#include "xythermo/thermometry.hpp"

#include <functional>
#include <stdexcept>

namespace xythermo {

/// Shot-noise variance of a coherent input quadrature.
inline constexpr double input_quadrature_variance = 0.5;

/// QND Faraday probe: X_out = X_in - (kappa / sqrt(N)) J_z.
struct FaradaySetup {
    double kappa = 1.0;
    Modulation modulation = Modulation::uniform;
    /// Add the light shot noise N / (2 kappa^2) to the J_z readout.
    bool include_shot_noise = false;

    void validate() const;
};

enum class ReadoutObservable {
    MeanJz, ///< A' = J_z
    VarJx,  ///< A = (J_x - <J_x>)^2 = J_x^2
};

const char* to_string(ReadoutObservable obs);

/// Raised when an error-propagated SNR is not finite (e.g. the readout
/// variance underflows in a saturated state).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double output_mean(const ThermalEnsemble& ens, const FaradaySetup& setup);
double output_variance(const ThermalEnsemble& ens, const FaradaySetup& setup);

/// Affine maps from atomic moments to light-quadrature moments.
double output_mean_from(double mean_jz, int sites, double kappa);
double output_variance_from(double var_jz, int sites, double kappa);
/// Inverse of output_variance_from.
double var_jz_from_output(double output_var, int sites, double kappa);

/// Central-difference derivative with one Richardson level.
struct Derivative {
    double value = 0.0;
    double error = 0.0; ///< |Richardson - half-step central difference|
    double step = 0.0;
};

/// Step max(1e-4, 1e-3 x); requires x > 2 * step.
double derivative_step(double x);
Derivative richardson_derivative(const std::function<double(double)>& f, double x);

struct SnrEstimate {
    double snr = 0.0;
    Derivative slope;
    double variance = 0.0;
};

/// (d<A>/dT)^2 T^2 / Var(A) for one readout observable.
SnrEstimate temperature_snr_estimate(const ChainSpec& spec, double temperature, const FaradaySetup& setup,
                                     ReadoutObservable obs, int threads = 1);
double temperature_snr(const ChainSpec& spec, double temperature, const FaradaySetup& setup,
                       ReadoutObservable obs, int threads = 1);
double temperature_snr(const ThermalEnsemble& ens, const FaradaySetup& setup, ReadoutObservable obs,
                       int threads = 1);

/// snr_crb together with the two Faraday readouts at one grid point.
SensitivityReport sensitivity_report(const ChainSpec& spec, double temperature, const FaradaySetup& setup,
                                     int threads = 1);

} // namespace xythermo
