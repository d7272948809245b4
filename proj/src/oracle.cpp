#include "xythermo/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace xythermo::oracle {

Term operator*(const Term& lhs, const Term& rhs) {
    Term out;
    out.coeff = lhs.coeff * rhs.coeff;
    out.factors = lhs.factors;
    out.factors.insert(out.factors.end(), rhs.factors.begin(), rhs.factors.end());
    return out;
}

Operator& Operator::add(Term t) {
    for (const auto& [site, f] : t.factors)
        if (site < 0 || site >= sites_)
            throw std::out_of_range("operator factor outside the chain");
    terms_.push_back(std::move(t));
    return *this;
}

Operator& Operator::operator+=(const Operator& other) {
    if (other.sites_ != sites_)
        throw std::invalid_argument("operator size mismatch");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

Eigen::MatrixXd Operator::dense() const {
    const std::size_t dim = std::size_t{1} << sites_;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& term : terms_) {
        for (std::size_t in = 0; in < dim; ++in) {
            std::size_t s = in;
            double sign = 1.0;
            for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
                const std::size_t bit = std::size_t{1} << it->first;
                switch (it->second) {
                case Factor::X:
                    s ^= bit;
                    break;
                case Factor::Z:
                    if (s & bit)
                        sign = -sign;
                    break;
                case Factor::W:
                    if (s & bit)
                        sign = -sign;
                    s ^= bit;
                    break;
                }
            }
            m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(in)) += term.coeff * sign;
        }
    }
    return m;
}

Term pauli_x(int site) { return Term{1.0, {{site, Factor::X}}}; }

Term pauli_z(int site) { return Term{1.0, {{site, Factor::Z}}}; }

Term pauli_yy(int l, int m) { return Term{-1.0, {{l, Factor::W}, {m, Factor::W}}}; }

Term majorana(Majorana kind, int site, int sites) {
    Term t;
    for (int l = sites - 1; l > site; --l)
        t.factors.emplace_back(l, Factor::Z);
    t.factors.emplace_back(site, kind == Majorana::A ? Factor::X : Factor::W);
    return t;
}

const char* to_string(Sector s) {
    return s == Sector::physical ? "physical" : "antiperiodic_matched";
}

Operator hamiltonian(const ChainSpec& spec, Sector sector) {
    const int n = spec.sites();
    const double j = spec.coupling();
    const double cx = -j * 0.5 * (1.0 + spec.gamma());
    const double cy = -j * 0.5 * (1.0 - spec.gamma());
    Operator h(n);
    const int bulk_bonds = sector == Sector::physical ? n : n - 1;
    for (int l = 0; l < bulk_bonds; ++l) {
        const int m = (l + 1) % n;
        Term xx = pauli_x(l) * pauli_x(m);
        xx.coeff *= cx;
        Term yy = pauli_yy(l, m);
        yy.coeff *= cy;
        h.add(std::move(xx)).add(std::move(yy));
    }
    if (sector == Sector::antiperiodic_matched) {
        // Bulk bonds are B_{l+1} A_l (xx) and -A_{l+1} B_l (yy); closing the
        // ring with A_N = -A_0, B_N = -B_0 flips the sign of both.
        Term xx = majorana(Majorana::B, 0, n) * majorana(Majorana::A, n - 1, n);
        xx.coeff *= -cx;
        Term yy = majorana(Majorana::A, 0, n) * majorana(Majorana::B, n - 1, n);
        yy.coeff *= cy;
        h.add(std::move(xx)).add(std::move(yy));
    }
    for (int l = 0; l < n; ++l) {
        Term z = pauli_z(l);
        z.coeff = -spec.field();
        h.add(std::move(z));
    }
    return h;
}

DenseSystem::DenseSystem(const ChainSpec& spec, Sector sector) : spec_(spec), sector_(sector) {
    if (spec.sites() > 12)
        throw std::invalid_argument("dense oracle limited to N <= 12, got " + std::to_string(spec.sites()));
    hamiltonian_ = oracle::hamiltonian(spec, sector).dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXd DenseSystem::boltzmann_weights(double temperature) const {
    if (!(temperature > 0.0))
        throw std::invalid_argument("temperature must be positive");
    const Eigen::Index dim = eigenvalues_.size();
    Eigen::VectorXd p(dim);
    if (std::isinf(temperature)) {
        p.setConstant(1.0 / static_cast<double>(dim));
        return p;
    }
    const double e0 = eigenvalues_(0);
    for (Eigen::Index i = 0; i < dim; ++i)
        p(i) = std::exp(-(eigenvalues_(i) - e0) / temperature);
    return p / p.sum();
}

DenseSystem build(const ChainSpec& spec, Sector sector) { return DenseSystem(spec, sector); }

double thermal_expectation(const DenseSystem& sys, double temperature, const Eigen::MatrixXd& op) {
    const Eigen::VectorXd p = sys.boltzmann_weights(temperature);
    const Eigen::MatrixXd& v = sys.eigenvectors();
    const Eigen::MatrixXd ov = op * v;
    const Eigen::VectorXd diag = v.cwiseProduct(ov).colwise().sum().transpose();
    return p.dot(diag);
}

double thermal_expectation(const DenseSystem& sys, double temperature, const Operator& op) {
    return thermal_expectation(sys, temperature, op.dense());
}

double energy_variance(const DenseSystem& sys, double temperature) {
    const Eigen::VectorXd p = sys.boltzmann_weights(temperature);
    const Eigen::VectorXd& e = sys.eigenvalues();
    const double mean = p.dot(e);
    return p.dot((e.array() - mean).square().matrix());
}

double oracle_qfi(const DenseSystem& sys, double temperature) {
    const double t2 = temperature * temperature;
    return energy_variance(sys, temperature) / (t2 * t2);
}

double majorana_contraction(const DenseSystem& sys, double temperature, MajoranaOp left, MajoranaOp right) {
    const int n = sys.sites();
    Operator op(n);
    op.add(majorana(left.kind, left.site, n) * majorana(right.kind, right.site, n));
    return thermal_expectation(sys, temperature, op);
}

double xx_correlation(const DenseSystem& sys, double temperature, int r) {
    const int n = sys.sites();
    if (r < 0 || r >= n)
        throw std::out_of_range("site distance out of range");
    Operator op(n);
    op.add(pauli_x(0) * pauli_x(r));
    return thermal_expectation(sys, temperature, op);
}

Moments collective_moments(const DenseSystem& sys, double temperature, Modulation m) {
    const int n = sys.sites();
    const Eigen::VectorXd p = sys.boltzmann_weights(temperature);
    const Eigen::MatrixXd& v = sys.eigenvectors();

    Operator jx(n);
    Operator wsum(n);
    for (int l = 0; l < n; ++l) {
        jx.add(pauli_x(l));
        wsum.add(Term{1.0, {{l, Factor::W}}});
    }
    const Eigen::MatrixXd jx_eig = v.transpose() * (jx.dense() * v);
    const Eigen::MatrixXd jx2_eig = jx_eig * jx_eig;
    const Eigen::MatrixXd w_eig = v.transpose() * (wsum.dense() * v);

    Moments out;
    out.mean_jx = p.dot(jx_eig.diagonal());
    const double jx2 = p.dot(jx2_eig.diagonal());
    out.var_jx = jx2 - out.mean_jx * out.mean_jx;
    out.fourth_jx = p.dot(jx2_eig.colwise().squaredNorm().transpose());
    // J_y = i sum_l W_l, so J_y^2 = -(sum W)^2 = (sum W)^T (sum W).
    out.var_jy = p.dot(w_eig.colwise().squaredNorm().transpose());

    // J_z is diagonal in the computational basis.
    const auto weights = modulation_weights(m, n);
    const Eigen::Index dim = v.rows();
    Eigen::VectorXd jz(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        double z = 0.0;
        for (int l = 0; l < n; ++l)
            z += weights[static_cast<std::size_t>(l)] * ((s >> l) & 1 ? -1.0 : 1.0);
        jz(s) = z;
    }
    const Eigen::MatrixXd v2 = v.cwiseProduct(v);
    out.mean_jz = p.dot(v2.transpose() * jz);
    const Eigen::VectorXd dev2 = (jz.array() - out.mean_jz).square().matrix();
    out.var_jz = p.dot(v2.transpose() * dev2);
    return out;
}

} // namespace xythermo::oracle
