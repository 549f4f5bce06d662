#include "locopath/cross_validation.hpp"

#include "locopath/homotopy.hpp"
#include "locopath/rng.hpp"
#include "locopath/solution_path.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace locopath {

CvResult cv_lasso(const Dataset& data, int folds, int grid_size, std::uint64_t seed,
                  CvRule rule) {
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    if (folds < 2) throw std::invalid_argument("cv_lasso: folds must be >= 2");
    if (n < folds) throw std::invalid_argument("cv_lasso: n too small for fold count");
    if (grid_size < 1) throw std::invalid_argument("cv_lasso: grid_size must be >= 1");

    CvResult out;
    out.grid.setZero(grid_size);
    out.cv_error.setZero(grid_size);
    out.cv_se.setZero(grid_size);

    const double lambda_max = (data.X.transpose() * data.y).cwiseAbs().maxCoeff();
    if (lambda_max <= 0.0) {  // response orthogonal to the design: null fit
        out.beta = VectorXd::Zero(p);
        return out;
    }
    for (int g = 0; g < grid_size; ++g) {
        const double frac = grid_size == 1 ? 0.0 : static_cast<double>(g) / (grid_size - 1);
        out.grid[g] = lambda_max * std::pow(1e-3, frac);
    }

    // seeded shuffle, then fold f = position mod folds
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    rng::Stream stream(seed);
    stream.shuffle(perm);
    std::vector<int> fold_of(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < perm.size(); ++i)
        fold_of[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % static_cast<std::size_t>(folds));

    MatrixXd fold_mse(grid_size, folds);
    for (int f = 0; f < folds; ++f) {
        Eigen::Index n_ho = 0;
        for (Eigen::Index i = 0; i < n; ++i) n_ho += fold_of[static_cast<std::size_t>(i)] == f;
        const Eigen::Index n_tr = n - n_ho;

        MatrixXd Xtr(n_tr, p), Xho(n_ho, p);
        VectorXd ytr(n_tr), yho(n_ho);
        Eigen::Index it = 0, ih = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (fold_of[static_cast<std::size_t>(i)] == f) {
                Xho.row(ih) = data.X.row(i);
                yho[ih++] = data.y[i];
            } else {
                Xtr.row(it) = data.X.row(i);
                ytr[it++] = data.y[i];
            }
        }

        const MatrixXd gram_tr = Xtr.transpose() * Xtr;
        const SolutionPath path = lasso_path(Xtr, ytr, {}, nullptr, &gram_tr);
        for (int g = 0; g < grid_size; ++g) {
            const VectorXd beta = eval_path(path, out.grid[g]);
            fold_mse(g, f) = (yho - Xho * beta).squaredNorm() / static_cast<double>(n_ho);
        }
    }

    for (int g = 0; g < grid_size; ++g) {
        const double mean = fold_mse.row(g).mean();
        out.cv_error[g] = mean;
        const double var =
            (fold_mse.row(g).array() - mean).square().sum() / std::max(folds - 1, 1);
        out.cv_se[g] = std::sqrt(var / folds);
    }

    int best = 0;
    for (int g = 1; g < grid_size; ++g)
        if (out.cv_error[g] < out.cv_error[best]) best = g;
    int chosen = best;
    if (rule == CvRule::one_se) {
        // largest lambda (grid is descending, so smallest index) whose mean
        // error sits within one SE of the minimum
        const double bar = out.cv_error[best] + out.cv_se[best];
        for (int g = 0; g <= best; ++g) {
            if (out.cv_error[g] <= bar) {
                chosen = g;
                break;
            }
        }
    }
    out.lambda_cv = out.grid[chosen];

    const MatrixXd gram = data.X.transpose() * data.X;
    const SolutionPath full = lasso_path(data.X, data.y, {}, nullptr, &gram);
    out.beta = eval_path(full, out.lambda_cv);
    return out;
}

AdaptiveFit adaptive_lasso(const Dataset& data, int folds, std::uint64_t seed, CvRule rule) {
    const Eigen::Index p = data.p();
    const CvResult stage1 = cv_lasso(data, folds, 100, rng::substream_seed(seed, 0), rule);

    AdaptiveFit fit;
    fit.lambda_cv = stage1.lambda_cv;
    fit.weights.setConstant(p, std::numeric_limits<double>::infinity());
    fit.beta_tilde = VectorXd::Zero(p);

    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (stage1.beta[j] != 0.0) {
            kept.push_back(j);
            fit.weights[j] = 1.0 / std::abs(stage1.beta[j]);
        }
    }
    if (kept.empty()) return fit;  // null model: beta_tilde stays zero

    Dataset scaled;
    scaled.X.resize(data.n(), static_cast<Eigen::Index>(kept.size()));
    scaled.y = data.y;
    for (std::size_t k = 0; k < kept.size(); ++k)
        scaled.X.col(static_cast<Eigen::Index>(k)) =
            data.X.col(kept[k]) * std::abs(stage1.beta[kept[k]]);

    const CvResult stage2 = cv_lasso(scaled, folds, 100, rng::substream_seed(seed, 1), rule);
    fit.gamma_cv = stage2.lambda_cv;
    for (std::size_t k = 0; k < kept.size(); ++k)
        fit.beta_tilde[kept[k]] =
            stage2.beta[static_cast<Eigen::Index>(k)] * std::abs(stage1.beta[kept[k]]);
    return fit;
}

AdaptiveFit least_squares_fit(const Dataset& data) {
    if (data.p() >= data.n())
        throw std::invalid_argument("least_squares_fit: needs p < n");
    AdaptiveFit fit;
    fit.beta_tilde = data.X.colPivHouseholderQr().solve(data.y);
    fit.weights = VectorXd::Ones(data.p());
    return fit;
}

}  // namespace locopath
