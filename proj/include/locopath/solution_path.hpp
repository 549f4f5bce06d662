#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace locopath {

// Piecewise-linear LASSO path. knots are strictly decreasing, knots[0] is the
// entry value of the first variable (beta there is 0) and knots.back() is 0
// unless the homotopy stopped early. Column k of coefs is beta(knots[k]).
struct SolutionPath {
    Eigen::VectorXd knots;              // size K, descending
    Eigen::MatrixXd coefs;              // p x K
    std::vector<Eigen::Index> excluded; // columns pinned at zero
    bool terminated_early = false;

    Eigen::Index p() const { return coefs.rows(); }
    double lambda_max() const { return knots.size() ? knots[0] : 0.0; }
};

inline double soft_threshold(double x, double lambda) {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

// beta(lambda): linear interpolation between adjacent knots, zero above the
// first knot, constant extension below the last.
inline Eigen::VectorXd eval_path(const SolutionPath& path, double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) throw std::invalid_argument("eval_path: bad lambda");
    const Eigen::Index K = path.knots.size();
    if (K == 0) return Eigen::VectorXd::Zero(path.p());
    if (lambda >= path.knots[0]) {
        return lambda > path.knots[0] ? Eigen::VectorXd::Zero(path.p())
                                      : Eigen::VectorXd(path.coefs.col(0));
    }
    if (lambda <= path.knots[K - 1]) return path.coefs.col(K - 1);
    // descending knots: first k with knots[k+1] <= lambda < knots[k]
    const double* begin = path.knots.data();
    const double* pos = std::upper_bound(begin, begin + K, lambda, std::greater<double>());
    const Eigen::Index k = static_cast<Eigen::Index>(pos - begin) - 1;  // knots[k] > lambda >= knots[k+1]
    const double hi = path.knots[k], lo = path.knots[k + 1];
    const double w = (hi - lambda) / (hi - lo);
    return path.coefs.col(k) * (1.0 - w) + path.coefs.col(k + 1) * w;
}

}  // namespace locopath
