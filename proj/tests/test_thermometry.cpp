#include "doctest.h"

#include "xythermo/thermometry.hpp"

#include <cmath>
#include <stdexcept>
#include <limits>
#include <numeric>
#include <random>

using namespace xythermo;
using doctest::Approx;

TEST_CASE("ensemble rejects non-positive temperatures") {
    const ChainSpec s(0.5, 0.5, 8);
    CHECK_THROWS_AS(ThermalEnsemble(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ThermalEnsemble(s, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ThermalEnsemble(s, NAN), std::invalid_argument);
    CHECK_NOTHROW(ThermalEnsemble(s, std::numeric_limits<double>::infinity()));
}

TEST_CASE("occupations at the temperature extremes") {
    const ChainSpec s(0.5, 0.5, 8);
    const ThermalEnsemble hot(s, 1e9);
    for (double n : hot.occupations())
        CHECK(n == Approx(0.5).epsilon(1e-8));
    const ThermalEnsemble cold(ChainSpec(1.0, 2.0, 8), 1e-9);
    for (double n : cold.occupations())
        CHECK(n < 1e-8);
    CHECK(fermi_occupation(1.0) == Approx(0.2689414213699951).epsilon(1e-14));
    const ThermalEnsemble flat(ChainSpec(1.0, 0.0, 8), 2.0);
    for (double n : flat.occupations())
        CHECK(n == Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-14));
}

TEST_CASE("fluctuations stay accurate deep in the tail") {
    // n (1 - n) would cancel to zero long before the true value underflows.
    CHECK(fermi_fluctuation(700.0) > 0.0);
    CHECK(fermi_fluctuation(700.0) == Approx(std::exp(-700.0)).epsilon(1e-12));
    CHECK(fermi_fluctuation(0.0) == 0.25);
}

TEST_CASE("flat band closed forms") {
    for (double t : {0.2, 0.5, 1.3}) {
        const ThermalEnsemble ens(ChainSpec(1.0, 0.0, 10), t);
        const double n = 1.0 / (1.0 + std::exp(2.0 / t));
        CHECK(energy_variance(ens) == Approx(10 * 4 * n * (1 - n)).epsilon(1e-12));
        CHECK(qfi(ens) == Approx(10 * std::pow(2.0 / (t * t), 2) * n * (1 - n)).epsilon(1e-12));
    }
    const double n = 1.0 / (1.0 + std::exp(10.0));
    CHECK(snr_crb(ThermalEnsemble(ChainSpec(1.0, 0.0, 12), 0.2)) == Approx(12 * 100 * n * (1 - n)).epsilon(1e-12));
}

TEST_CASE("frozen dense-diagonalization values") {
    // Matched-sector exact diagonalization, N = 8.
    CHECK(energy_variance(ThermalEnsemble(ChainSpec(0.5, 0.5, 8), 0.3)) ==
          Approx(0.15264649120785173).epsilon(1e-10));
    CHECK(qfi(ThermalEnsemble(ChainSpec(0.3, 1.2, 8), 0.4)) == Approx(7.5052350248445485).epsilon(1e-10));
    CHECK(qfi(ThermalEnsemble(ChainSpec(0.3, 1.0, 8), 1.0)) == Approx(2.0828469455788232).epsilon(1e-10));
}

TEST_CASE("qfi limits") {
    const ChainSpec gapped(0.7, 1.8, 16);
    CHECK(energy_variance(ThermalEnsemble(gapped, 1e-3)) < 1e-12);
    CHECK(snr_crb(ThermalEnsemble(gapped, 1e-3)) < 1e-12);
    CHECK(qfi(ThermalEnsemble(gapped, std::numeric_limits<double>::infinity())) == 0.0);
    double prev = qfi(ThermalEnsemble(gapped, 20.0));
    for (double t : {40.0, 80.0, 160.0}) {
        const double q = qfi(ThermalEnsemble(gapped, t));
        CHECK(q * std::pow(t, 4) == Approx(prev * std::pow(t / 2, 4)).epsilon(0.05));
        prev = q;
    }
    CHECK(snr_crb(ThermalEnsemble(gapped, 1e4)) < 1e-4);
}

TEST_CASE("qfi is additive over modes") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> g(-1, 1), h(0, 2), lt(-2, 1.5);
    for (int i = 0; i < 50; ++i) {
        const ThermalEnsemble ens(ChainSpec(g(rng), h(rng), 20), std::exp(lt(rng)));
        const auto parts = mode_qfi(ens);
        CHECK(std::accumulate(parts.begin(), parts.end(), 0.0) == Approx(qfi(ens)).epsilon(1e-14));
    }
}

TEST_CASE("uncertainty product saturates") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> g(-1, 1), h(0, 2), lt(-2, 1.5);
    for (int i = 0; i < 50; ++i) {
        const ThermalEnsemble ens(ChainSpec(g(rng), h(rng), 20), std::exp(lt(rng)));
        CHECK(uncertainty_product(ens) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("crb is symmetric in h and gamma") {
    for (double t : {0.1, 0.7, 2.0}) {
        const ChainSpec s(0.4, 0.8, 30);
        const double ref = snr_crb(ThermalEnsemble(s, t));
        CHECK(snr_crb(ThermalEnsemble(s.with_field_ratio(-0.8), t)) == Approx(ref).epsilon(1e-10));
        CHECK(snr_crb(ThermalEnsemble(s.with_gamma(-0.4), t)) == Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("per-site report") {
    SensitivityReport r;
    r.sites = 4;
    r.snr_crb = 8;
    r.snr_varjx = 4;
    r.snr_meanjz = 2;
    const auto p = r.per_site_copy();
    CHECK(p.per_site);
    CHECK(p.snr_crb == 2);
    CHECK(p.snr_varjx == 1);
    CHECK(p.snr_meanjz == 0.5);
    CHECK(p.per_site_copy().snr_crb == 2);
}
