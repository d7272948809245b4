#include "xythermo/pfaffian.hpp"

#include <cmath>
#include <stdexcept>

namespace xythermo {

double pfaffian(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n)
        throw std::invalid_argument("pfaffian needs a square matrix");
    if (n == 0)
        return 1.0;
    if (n % 2 != 0)
        return 0.0;

    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j)
            a(j, i) = -a(i, j);
    }

    double result = 1.0;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp = k + 1;
        a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
        kp += k + 1;

        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            result = -result;
        }

        const double pivot = a(k, k + 1);
        if (pivot == 0.0)
            return 0.0;
        result *= pivot;

        const Eigen::Index m = n - k - 2;
        if (m > 0) {
            const Eigen::VectorXd tau = a.row(k).segment(k + 2, m).transpose() / pivot;
            const Eigen::VectorXd col = a.col(k + 1).segment(k + 2, m);
            a.block(k + 2, k + 2, m, m).noalias() += tau * col.transpose() - col * tau.transpose();
        }
    }
    return result;
}

double skew_defect(const Eigen::MatrixXd& a) {
    if (a.size() == 0)
        return 0.0;
    return (a + a.transpose()).cwiseAbs().maxCoeff();
}

} // namespace xythermo
