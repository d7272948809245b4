#include "doctest.h"

#include "xythermo/oracle.hpp"
#include "xythermo/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

using namespace xythermo;
using namespace xythermo::oracle;
using doctest::Approx;

TEST_CASE("size guard") {
    CHECK_THROWS_AS(build(ChainSpec(0.5, 0.5, 14), Sector::physical), std::invalid_argument);
    CHECK_NOTHROW(build(ChainSpec(0.5, 0.5, 4), Sector::physical));
}

TEST_CASE("pauli algebra") {
    // sz = A B and sy = i W with W = X Z.
    for (int l = 0; l < 4; ++l) {
        Operator ab(4);
        ab.add(majorana(Majorana::A, l, 4) * majorana(Majorana::B, l, 4));
        Operator z(4);
        z.add(pauli_z(l));
        CHECK((ab.dense() - z.dense()).norm() == 0.0);
    }
    Operator yy(2);
    yy.add(pauli_yy(0, 1));
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    // sy sy flips both spins, +1 between |00>,|11>... with sign -1, and +1 between |01>,|10>.
    expect(3, 0) = expect(0, 3) = -1;
    expect(2, 1) = expect(1, 2) = 1;
    CHECK((yy.dense() - expect).norm() == 0.0);
}

TEST_CASE("hamiltonians are real symmetric") {
    for (auto sector : {Sector::physical, Sector::antiperiodic_matched}) {
        const auto sys = build(ChainSpec(0.37, 0.81, 8), sector);
        const auto& h = sys.hamiltonian();
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        const auto& e = sys.eigenvalues();
        CHECK(std::is_sorted(e.data(), e.data() + e.size()));
    }
}

TEST_CASE("sectors agree on even parity and differ on odd") {
    const ChainSpec s(0.7, 0.4, 8);
    const Eigen::MatrixXd d = hamiltonian(s, Sector::physical).dense() - hamiltonian(s, Sector::antiperiodic_matched).dense();
    double even = 0.0, odd = 0.0;
    for (int c = 0; c < 256; ++c) {
        const double norm = d.col(c).norm();
        (__builtin_popcount(static_cast<unsigned>(c)) % 2 ? odd : even) = std::max(
            __builtin_popcount(static_cast<unsigned>(c)) % 2 ? odd : even, norm);
    }
    CHECK(even == 0.0);
    CHECK(odd > 0.1);
}

TEST_CASE("matched sector is the free-fermion spectrum") {
    const ChainSpec s(0.5, 0.5, 8);
    const auto sys = build(s, Sector::antiperiodic_matched);
    const auto modes = mode_table(s);
    double ground = 0.0;
    for (double e : modes.energies)
        ground -= e / 2;
    CHECK(sys.eigenvalues()(0) == Approx(ground).epsilon(1e-12));
    // Every many-body level is the ground energy plus a subset sum of modes.
    std::vector<double> levels;
    for (unsigned mask = 0; mask < 256; ++mask) {
        double e = ground;
        for (int k = 0; k < 8; ++k)
            if (mask >> k & 1)
                e += modes.energies[static_cast<std::size_t>(k)];
        levels.push_back(e);
    }
    std::sort(levels.begin(), levels.end());
    for (int i = 0; i < 256; ++i)
        CHECK(sys.eigenvalues()(i) == Approx(levels[static_cast<std::size_t>(i)]).epsilon(1e-11));

    const auto ising = build(ChainSpec(1.0, 0.0, 4), Sector::antiperiodic_matched);
    CHECK(ising.eigenvalues().size() == 16);
    CHECK(ising.eigenvalues()(0) == Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("spectrum is symmetric under field reversal") {
    for (auto sector : {Sector::physical, Sector::antiperiodic_matched}) {
        const auto a = build(ChainSpec(0.6, 0.9, 6), sector);
        const auto b = build(ChainSpec(0.6, -0.9, 6), sector);
        CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("thermal expectations") {
    const auto sys = build(ChainSpec(0.5, 0.5, 6), Sector::physical);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(64, 64);
    CHECK(thermal_expectation(sys, 0.3, id) == Approx(1.0).epsilon(1e-14));
    CHECK(thermal_expectation(sys, std::numeric_limits<double>::infinity(), sys.hamiltonian()) ==
          Approx(sys.hamiltonian().trace() / 64).epsilon(1e-12));
    // Boltzmann weights survive large energy / temperature ratios.
    const auto w = sys.boltzmann_weights(1e-3);
    CHECK(std::isfinite(w.sum()));
    CHECK(w.sum() == Approx(1.0));

    const auto polarized = build(ChainSpec(0.0, 2.0, 4), Sector::physical);
    Operator z(4);
    z.add(pauli_z(0));
    CHECK(thermal_expectation(polarized, 0.01, z) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle qfi") {
    const auto sys = build(ChainSpec(0.3, 1.2, 8), Sector::antiperiodic_matched);
    CHECK(oracle_qfi(sys, 0.4) == Approx(qfi(ThermalEnsemble(ChainSpec(0.3, 1.2, 8), 0.4))).epsilon(1e-10));
    CHECK(oracle_qfi(sys, 1e-3) < 1e-12);
    CHECK(oracle_qfi(sys, 1e4) < 1e-12);
    CHECK(energy_variance(sys, 0.4) == Approx(oracle_qfi(sys, 0.4) * std::pow(0.4, 4)).epsilon(1e-14));
}

TEST_CASE("z2 symmetry kills <J_x>") {
    for (auto sector : {Sector::physical, Sector::antiperiodic_matched})
        for (double t : {0.05, 0.5, 5.0}) {
            const auto sys = build(ChainSpec(0.8, 0.3, 8), sector);
            CHECK(std::abs(collective_moments(sys, t, Modulation::uniform).mean_jx) < 1e-12);
        }
}

TEST_CASE("oracle moments at infinite temperature") {
    const auto sys = build(ChainSpec(0.8, 0.3, 6), Sector::physical);
    const auto m = collective_moments(sys, std::numeric_limits<double>::infinity(), Modulation::uniform);
    CHECK(m.var_jx == Approx(6.0).epsilon(1e-12));
    CHECK(m.var_jy == Approx(6.0).epsilon(1e-12));
    CHECK(m.var_jz == Approx(6.0).epsilon(1e-12));
    CHECK(m.fourth_jx == Approx(3.0 * 36 - 12).epsilon(1e-12));
    CHECK(std::abs(m.mean_jz) < 1e-12);
}

TEST_CASE("xx correlation from the oracle") {
    const auto sys = build(ChainSpec(1.0, 0.5, 8), Sector::antiperiodic_matched);
    CHECK(xx_correlation(sys, 0.3, 0) == Approx(1.0));
    CHECK(xx_correlation(sys, 0.3, 3) == Approx(0.89643722634477441).epsilon(1e-10));
    CHECK_THROWS_AS(xx_correlation(sys, 0.3, 8), std::out_of_range);
    CHECK(majorana_contraction(sys, 0.3, {Majorana::A, 2}, {Majorana::A, 2}) == Approx(1.0));
}
