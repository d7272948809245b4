#pragma once

#include "xythermo/thermometry.hpp"

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace xythermo {

/// Probe-beam standing-wave pattern for the collective J_z = sum_l cos^2(k_p l d) sz_l.
enum class Modulation {
    uniform, ///< k_p = pi / d, every site weighted 1
    half,    ///< k_p = pi / 2d, even sites weighted 1, odd sites 0
};

Modulation parse_modulation(const std::string& name);
const char* to_string(Modulation m);

/// Site weights cos^2(k_p l d) for l = 0 .. N-1.
std::vector<double> modulation_weights(Modulation m, int sites);

/// Majorana two-point function g_j = <B_l A_{l+j}> of the thermal state,
/// j = -(N-1) .. N-1. Majoranas are A_l = c_l^dag + c_l, B_l = c_l^dag - c_l
/// with the Jordan-Wigner string running over the sites to the right of l,
/// so that sz_l = A_l B_l and sx_l sx_{l+1} = B_{l+1} A_l.
///
///   g_j = (1/N) sum_k tanh(eps_k / 2T) cos(k j + 2 theta_k)
///
/// The antiperiodic k grid gives g_{j-N} = -g_j.
class CorrelationKernel {
public:
    explicit CorrelationKernel(const ThermalEnsemble& ens);

    int sites() const { return sites_; }
    double temperature() const { return temperature_; }

    /// g_j for |j| < N.
    double operator()(int j) const { return coefficients_[static_cast<std::size_t>(j + sites_ - 1)]; }

    /// All coefficients, index 0 holding g_{-(N-1)}.
    std::span<const double> coefficients() const { return coefficients_; }

private:
    int sites_;
    double temperature_;
    std::vector<double> coefficients_;
};

CorrelationKernel kernel(const ThermalEnsemble& ens);

enum class Majorana : std::uint8_t { A, B };

struct MajoranaOp {
    Majorana kind;
    int site;
};

/// <w_1 w_2 ... w_2m> for distinct Majorana operators, as the Pfaffian of the
/// matrix of pairwise contractions (Wick's theorem).
double majorana_string(const CorrelationKernel& kern, std::span<const MajoranaOp> ops);

/// <B_p A_q>-type contraction of two Majoranas, p and q inside the chain.
double contraction(const CorrelationKernel& kern, MajoranaOp left, MajoranaOp right);

/// <sx_l sx_{l+r}> as the r x r Toeplitz determinant with entries g_{i-j-1}.
double xx_correlation(const CorrelationKernel& kern, int r);

/// <sy_l sy_{l+r}>, evaluated as a Majorana string.
double yy_correlation(const CorrelationKernel& kern, int r);

/// <sx_l1 sx_l2 sx_l3 sx_l4> for l2 - l1 = a, l3 - l2 = b, l4 - l3 = c (all >= 1).
double four_point_xx(const CorrelationKernel& kern, int a, int b, int c);

/// Same quantity through the determinant of the B/A contraction block. Used
/// to cross-check the Pfaffian route.
double four_point_xx_det(const CorrelationKernel& kern, int a, int b, int c);

/// Var(J_x) = sum_{l,m} <sx_l sx_m> = N + 2 sum_{r=1}^{N-1} (N - r) <sx_0 sx_r>.
double var_jx(const CorrelationKernel& kern);
/// Var(J_y), the axis-swapped analogue of var_jx.
double var_jy(const CorrelationKernel& kern);

double mean_jz(const ThermalEnsemble& ens, Modulation m);
/// <J_z>(T) - <J_z>(T = 0); carries all temperature dependence of mean_jz.
double mean_jz_thermal_shift(const ThermalEnsemble& ens, Modulation m);

/// Var of the modulated J_z. Uniform modulation uses the mode-space closed
/// form; other patterns sum the real-space density-density contractions.
double var_jz(const ThermalEnsemble& ens, Modulation m);
/// Real-space Wick evaluation, <sz_l sz_m>_c = -g_{l-m} g_{m-l}.
double var_jz_wick(const CorrelationKernel& kern, Modulation m);

/// Memo table of four-point correlators keyed by displacement class (a, b, c).
/// Safe for concurrent use: values are deterministic, so racing inserts of
/// the same key store the same number.
class FourPointMemo {
public:
    bool lookup(int a, int b, int c, double& value) const;
    void store(int a, int b, int c, double value);
    std::size_t size() const;

private:
    static std::uint64_t key(int a, int b, int c);

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, double> table_;
};

/// <J_x^4> summed over all site quadruples. Repeated sites reduce through
/// (sx)^2 = 1; distinct quadruples are grouped into displacement classes
/// and evaluated as Pfaffians, optionally across `threads` workers.
double fourth_moment_jx(const CorrelationKernel& kern, int threads = 1, FourPointMemo* memo = nullptr);
double fourth_moment_jx(const ThermalEnsemble& ens, int threads = 1);

struct MomentSet {
    double mean_jx = 0.0;
    double var_jx = 0.0;
    double mean_jz = 0.0;
    double var_jz = 0.0;
    double fourth_jx = 0.0;
    double var_jx_squared = 0.0; ///< fourth_jx - var_jx^2
};

MomentSet moments(const ThermalEnsemble& ens, Modulation m, int threads = 1);

} // namespace xythermo
