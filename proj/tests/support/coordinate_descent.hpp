#pragma once

// Independent fixed-lambda LASSO solver used only as a test oracle for the
// homotopy path. Minimizes 0.5*||y - X b||^2 + lambda*||b||_1 (the same
// internal lambda scale as lasso_path) by cyclic coordinate descent, run to
// a tight KKT tolerance.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace testsupport {

struct CdOptions {
    double kkt_tol = 1e-9;      // relative to lambda_max
    int max_sweeps = 500000;
};

inline Eigen::VectorXd cd_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                double lambda,
                                const std::vector<Eigen::Index>& excluded = {},
                                const Eigen::VectorXd* warm = nullptr,
                                CdOptions opt = {}) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (y.size() != n) throw std::invalid_argument("cd_lasso: size mismatch");
    std::vector<bool> excl(static_cast<std::size_t>(p), false);
    for (Eigen::Index j : excluded) excl[static_cast<std::size_t>(j)] = true;

    Eigen::VectorXd norms(p);
    for (Eigen::Index j = 0; j < p; ++j) norms[j] = X.col(j).squaredNorm();

    Eigen::VectorXd beta = warm ? *warm : Eigen::VectorXd::Zero(p);
    for (Eigen::Index j = 0; j < p; ++j)
        if (excl[static_cast<std::size_t>(j)]) beta[j] = 0.0;
    Eigen::VectorXd r = y - X * beta;

    const double scale = (X.transpose() * y).cwiseAbs().maxCoeff();
    const double tol = opt.kkt_tol * std::max(scale, 1.0);

    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (excl[static_cast<std::size_t>(j)] || norms[j] == 0.0) continue;
            const double old = beta[j];
            const double rho = X.col(j).dot(r) + norms[j] * old;
            double next = 0.0;
            if (rho > lambda) next = (rho - lambda) / norms[j];
            else if (rho < -lambda) next = (rho + lambda) / norms[j];
            if (next != old) {
                r += X.col(j) * (old - next);
                beta[j] = next;
            }
        }
        // KKT residual: |x_j' r| <= lambda + tol for zeros, == lambda*sign
        // within tol for the rest
        double worst = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (excl[static_cast<std::size_t>(j)] || norms[j] == 0.0) continue;
            const double c = X.col(j).dot(r);
            if (beta[j] == 0.0) {
                worst = std::max(worst, std::abs(c) - lambda);
            } else {
                worst = std::max(worst, std::abs(c - lambda * (beta[j] > 0 ? 1.0 : -1.0)));
            }
        }
        if (worst <= tol) return beta;
    }
    throw std::runtime_error("cd_lasso: no convergence");
}

}  // namespace testsupport
