#pragma once

#include "xythermo/correlations.hpp"
#include "xythermo/spectrum.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace xythermo::oracle {

/// Real single-site factors. W = X Z = -i sigma^y, so sigma^y = i W and
/// every operator built here stays real.
enum class Factor : std::uint8_t { X, Z, W };

/// coeff * f_1 f_2 ... f_m, factors applied right to left.
struct Term {
    double coeff = 1.0;
    std::vector<std::pair<int, Factor>> factors;
};

Term operator*(const Term& lhs, const Term& rhs);

/// Sum of real Pauli-like strings on `sites` spins. Basis state bit l set
/// means site l points down (sz = -1).
class Operator {
public:
    explicit Operator(int sites) : sites_(sites) {}

    int sites() const { return sites_; }
    const std::vector<Term>& terms() const { return terms_; }

    Operator& add(Term t);
    Operator& operator+=(const Operator& other);

    Eigen::MatrixXd dense() const;

private:
    int sites_;
    std::vector<Term> terms_;
};

Term pauli_x(int site);
Term pauli_z(int site);
/// sy_l sy_m as a real term, -W_l W_m.
Term pauli_yy(int l, int m);
/// Jordan-Wigner Majoranas with the string over sites > l:
/// A_l = (prod_{l'>l} Z_l') X_l, B_l = (prod_{l'>l} Z_l') W_l.
Term majorana(Majorana kind, int site, int sites);

enum class Sector {
    physical,             ///< the spin ring exactly as written
    antiperiodic_matched, ///< boundary bond closed with antiperiodic fermions in every parity sector
};

const char* to_string(Sector s);

Operator hamiltonian(const ChainSpec& spec, Sector sector);

/// Dense exact diagonalization of a chain with 4 <= N <= 12.
class DenseSystem {
public:
    DenseSystem(const ChainSpec& spec, Sector sector);

    const ChainSpec& spec() const { return spec_; }
    Sector sector() const { return sector_; }
    int sites() const { return spec_.sites(); }
    const Eigen::MatrixXd& hamiltonian() const { return hamiltonian_; }
    /// Ascending.
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

    /// Gibbs weights over eigenstates; T = +inf gives uniform weights.
    Eigen::VectorXd boltzmann_weights(double temperature) const;

private:
    ChainSpec spec_;
    Sector sector_;
    Eigen::MatrixXd hamiltonian_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

DenseSystem build(const ChainSpec& spec, Sector sector);

/// Tr(O e^{-H/T}) / Z.
double thermal_expectation(const DenseSystem& sys, double temperature, const Eigen::MatrixXd& op);
double thermal_expectation(const DenseSystem& sys, double temperature, const Operator& op);

/// <(H - <H>)^2>, evaluated in two passes over the spectrum.
double energy_variance(const DenseSystem& sys, double temperature);
double oracle_qfi(const DenseSystem& sys, double temperature);

/// <w_left w_right> for two Majoranas.
double majorana_contraction(const DenseSystem& sys, double temperature, MajoranaOp left, MajoranaOp right);

struct Moments {
    double mean_jx = 0.0;
    double var_jx = 0.0;
    double var_jy = 0.0;
    double mean_jz = 0.0;
    double var_jz = 0.0;
    double fourth_jx = 0.0;
};

Moments collective_moments(const DenseSystem& sys, double temperature, Modulation m);

/// <sx_0 sx_r>.
double xx_correlation(const DenseSystem& sys, double temperature, int r);

} // namespace xythermo::oracle
