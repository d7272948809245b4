#include "xythermo/correlations.hpp"

#include "xythermo/pfaffian.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace xythermo {

Modulation parse_modulation(const std::string& name) {
    if (name == "uniform")
        return Modulation::uniform;
    if (name == "half")
        return Modulation::half;
    throw std::invalid_argument("unknown modulation '" + name + "' (expected uniform or half)");
}

const char* to_string(Modulation m) {
    switch (m) {
    case Modulation::uniform:
        return "uniform";
    case Modulation::half:
        return "half";
    }
    return "?";
}

std::vector<double> modulation_weights(Modulation m, int sites) {
    std::vector<double> w(static_cast<std::size_t>(sites), 1.0);
    switch (m) {
    case Modulation::uniform:
        break;
    case Modulation::half:
        // cos^2(pi l / 2) is exactly 1 on even sites and 0 on odd ones.
        for (int l = 1; l < sites; l += 2)
            w[static_cast<std::size_t>(l)] = 0.0;
        break;
    default:
        throw std::invalid_argument("unknown modulation");
    }
    return w;
}

CorrelationKernel::CorrelationKernel(const ThermalEnsemble& ens)
    : sites_(ens.sites()), temperature_(ens.temperature()),
      coefficients_(static_cast<std::size_t>(2 * ens.sites() - 1), 0.0) {
    const auto& k = ens.modes().momenta;
    const auto& theta = ens.modes().angles;
    const auto& t = ens.polarizations();
    const double inv_n = 1.0 / sites_;
    for (int j = -(sites_ - 1); j < sites_; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i)
            sum += t[i] * std::cos(k[i] * j + 2.0 * theta[i]);
        coefficients_[static_cast<std::size_t>(j + sites_ - 1)] = sum * inv_n;
    }
}

CorrelationKernel kernel(const ThermalEnsemble& ens) { return CorrelationKernel(ens); }

double contraction(const CorrelationKernel& kern, MajoranaOp left, MajoranaOp right) {
    if (left.kind == right.kind) {
        if (left.site != right.site)
            return 0.0;
        return left.kind == Majorana::A ? 1.0 : -1.0;
    }
    if (left.kind == Majorana::B)
        return kern(right.site - left.site);
    // A_q B_p = -B_p A_q, including q = p.
    return -kern(left.site - right.site);
}

double majorana_string(const CorrelationKernel& kern, std::span<const MajoranaOp> ops) {
    const auto n = static_cast<Eigen::Index>(ops.size());
    if (n % 2 != 0)
        return 0.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            m(i, j) = contraction(kern, ops[static_cast<std::size_t>(i)], ops[static_cast<std::size_t>(j)]);
    return pfaffian(std::move(m));
}

namespace {

void check_distance(const CorrelationKernel& kern, int r) {
    if (r < 0 || r >= kern.sites())
        throw std::out_of_range("site distance must lie in [0, N-1], got " + std::to_string(r));
}

void check_four_point(const CorrelationKernel& kern, int a, int b, int c) {
    if (a < 1 || b < 1 || c < 1 || a + b + c >= kern.sites())
        throw std::out_of_range("four-point displacements must be >= 1 with a + b + c <= N - 1");
}

// sx_l sx_m = prod_{i=l}^{m-1} B_{i+1} A_i.
void append_xx_string(std::vector<MajoranaOp>& ops, int from, int to) {
    for (int i = from; i < to; ++i) {
        ops.push_back({Majorana::B, i + 1});
        ops.push_back({Majorana::A, i});
    }
}

} // namespace

double xx_correlation(const CorrelationKernel& kern, int r) {
    check_distance(kern, r);
    if (r == 0)
        return 1.0;
    Eigen::MatrixXd g(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            g(i, j) = kern(i - j - 1);
    return g.partialPivLu().determinant();
}

double yy_correlation(const CorrelationKernel& kern, int r) {
    check_distance(kern, r);
    if (r == 0)
        return 1.0;
    // sy_i sy_{i+1} = -A_{i+1} B_i.
    std::vector<MajoranaOp> ops;
    ops.reserve(static_cast<std::size_t>(2 * r));
    for (int i = 0; i < r; ++i) {
        ops.push_back({Majorana::A, i + 1});
        ops.push_back({Majorana::B, i});
    }
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    return sign * majorana_string(kern, ops);
}

double four_point_xx(const CorrelationKernel& kern, int a, int b, int c) {
    check_four_point(kern, a, b, c);
    std::vector<MajoranaOp> ops;
    ops.reserve(static_cast<std::size_t>(2 * (a + c)));
    append_xx_string(ops, 0, a);
    append_xx_string(ops, a + b, a + b + c);
    return majorana_string(kern, ops);
}

double four_point_xx_det(const CorrelationKernel& kern, int a, int b, int c) {
    check_four_point(kern, a, b, c);
    // Pair i contributes (B_{s_i + 1}, A_{s_i}); only B-A contractions survive.
    std::vector<int> starts;
    starts.reserve(static_cast<std::size_t>(a + c));
    for (int i = 0; i < a; ++i)
        starts.push_back(i);
    for (int i = a + b; i < a + b + c; ++i)
        starts.push_back(i);
    const auto m = static_cast<Eigen::Index>(starts.size());
    Eigen::MatrixXd x(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            x(i, j) = kern(starts[static_cast<std::size_t>(j)] - starts[static_cast<std::size_t>(i)] - 1);
    return x.partialPivLu().determinant();
}

double var_jx(const CorrelationKernel& kern) {
    const int n = kern.sites();
    double sum = 0.0;
    for (int r = 1; r < n; ++r)
        sum += (n - r) * xx_correlation(kern, r);
    return n + 2.0 * sum;
}

double var_jy(const CorrelationKernel& kern) {
    const int n = kern.sites();
    double sum = 0.0;
    for (int r = 1; r < n; ++r)
        sum += (n - r) * yy_correlation(kern, r);
    return n + 2.0 * sum;
}

namespace {

double total_weight(Modulation m, int sites) {
    const auto w = modulation_weights(m, sites);
    return std::accumulate(w.begin(), w.end(), 0.0);
}

} // namespace

double mean_jz(const ThermalEnsemble& ens, Modulation m) {
    // <sz_l> = -g_0 on every site.
    const auto& theta = ens.modes().angles;
    const auto& t = ens.polarizations();
    double sum = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        sum += t[i] * std::cos(2.0 * theta[i]);
    return -total_weight(m, ens.sites()) * sum / ens.sites();
}

double mean_jz_thermal_shift(const ThermalEnsemble& ens, Modulation m) {
    // 1 - tanh(x/2) = 2 n_k.
    const auto& theta = ens.modes().angles;
    const auto& n = ens.occupations();
    double sum = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        sum += 2.0 * n[i] * std::cos(2.0 * theta[i]);
    return total_weight(m, ens.sites()) * sum / ens.sites();
}

double var_jz_wick(const CorrelationKernel& kern, Modulation m) {
    const int n = kern.sites();
    const auto w = modulation_weights(m, n);
    const double g0 = kern(0);
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
        const double wl = w[static_cast<std::size_t>(l)];
        if (wl == 0.0)
            continue;
        sum += wl * wl * (1.0 - g0 * g0);
        for (int q = 0; q < n; ++q) {
            if (q == l)
                continue;
            sum -= wl * w[static_cast<std::size_t>(q)] * kern(q - l) * kern(l - q);
        }
    }
    return sum;
}

double var_jz(const ThermalEnsemble& ens, Modulation m) {
    if (m != Modulation::uniform)
        return var_jz_wick(kernel(ens), m);
    // 4 Var(N_f) = sum_k [sech^2(eps_k/2T) + 2 tanh^2(eps_k/2T) sin^2(2 theta_k)].
    const auto& theta = ens.modes().angles;
    const auto& fl = ens.fluctuations();
    const auto& t = ens.polarizations();
    double sum = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double s = std::sin(2.0 * theta[i]);
        sum += 4.0 * fl[i] + 2.0 * t[i] * t[i] * s * s;
    }
    return sum;
}

std::uint64_t FourPointMemo::key(int a, int b, int c) {
    return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) |
           static_cast<std::uint64_t>(c);
}

bool FourPointMemo::lookup(int a, int b, int c, double& value) const {
    std::shared_lock lock(mutex_);
    const auto it = table_.find(key(a, b, c));
    if (it == table_.end())
        return false;
    value = it->second;
    return true;
}

void FourPointMemo::store(int a, int b, int c, double value) {
    std::unique_lock lock(mutex_);
    table_[key(a, b, c)] = value;
}

std::size_t FourPointMemo::size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
}

double fourth_moment_jx(const CorrelationKernel& kern, int threads, FourPointMemo* memo) {
    const int n = kern.sites();
    const double nd = n;

    // Ordered pairs of distinct sites.
    double pair_sum = 0.0;
    for (int r = 1; r < n; ++r)
        pair_sum += (n - r) * xx_correlation(kern, r);
    pair_sum *= 2.0;

    std::vector<std::array<int, 3>> classes;
    for (int a = 1; a <= n - 3; ++a)
        for (int b = 1; a + b <= n - 2; ++b)
            for (int c = 1; a + b + c <= n - 1; ++c)
                classes.push_back({a, b, c});

    std::vector<double> values(classes.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < classes.size(); i += stride) {
            const auto [a, b, c] = classes[i];
            double v;
            if (memo == nullptr || !memo->lookup(a, b, c, v)) {
                v = four_point_xx(kern, a, b, c);
                if (memo != nullptr)
                    memo->store(a, b, c, v);
            }
            values[i] = v;
        }
    };

    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work, w, workers);
    }

    // Fixed summation order keeps the result independent of the worker count.
    double quad_sum = 0.0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto [a, b, c] = classes[i];
        quad_sum += (n - a - b - c) * values[i];
    }

    // {aaaa}: N, {aabb}: 3N(N-1), {aaab}: 4 S2, {aabc}: 6(N-2) S2, {abcd}: 24 S4.
    return nd + 3.0 * nd * (nd - 1.0) + (4.0 + 6.0 * (nd - 2.0)) * pair_sum + 24.0 * quad_sum;
}

double fourth_moment_jx(const ThermalEnsemble& ens, int threads) {
    return fourth_moment_jx(kernel(ens), threads);
}

MomentSet moments(const ThermalEnsemble& ens, Modulation m, int threads) {
    const CorrelationKernel kern(ens);
    MomentSet out;
    // The Gibbs state is invariant under the spin flip sx -> -sx.
    out.mean_jx = 0.0;
    out.var_jx = var_jx(kern);
    out.mean_jz = mean_jz(ens, m);
    out.var_jz = m == Modulation::uniform ? var_jz(ens, m) : var_jz_wick(kern, m);
    out.fourth_jx = fourth_moment_jx(kern, threads);
    out.var_jx_squared = out.fourth_jx - out.var_jx * out.var_jx;
    return out;
}

} // namespace xythermo
