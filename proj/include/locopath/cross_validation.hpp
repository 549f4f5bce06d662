#pragma once

#include "locopath/types.hpp"

#include <cstdint>

namespace locopath {

// Grid-point selection from the CV curve. `min` takes the error minimizer;
// `one_se` takes the largest lambda whose mean error is within one standard
// error of the minimum (the R cross-validation convention, and the one that
// keeps the bootstrap test's size at the nominal level -- see README notes).
enum class CvRule { min, one_se };

struct CvResult {
    double lambda_cv = 0.0;
    VectorXd beta;      // full-data coefficients at lambda_cv
    VectorXd grid;      // the shared lambda grid, descending
    VectorXd cv_error;  // mean held-out MSE per grid point
    VectorXd cv_se;     // standard error of the fold MSEs per grid point
};

// 10-fold-style cross-validated LASSO: shared geometric grid from lambda_max
// down to lambda_max*1e-3, seeded shuffle + round-robin fold assignment,
// held-out MSE averaged across folds.
CvResult cv_lasso(const Dataset& data, int folds, int grid_size, std::uint64_t seed,
                  CvRule rule = CvRule::one_se);

struct AdaptiveFit {
    VectorXd beta_tilde;  // the initial estimator for the bootstrap
    double lambda_cv = 0.0;
    double gamma_cv = 0.0;
    VectorXd weights;  // 1/|beta_L_j|, +inf for zeros (those stay excluded)
};

// Two-stage adaptive LASSO: CV lasso for beta_L, weights 1/|beta_L_j|,
// second CV lasso on the weight-rescaled surviving columns, unscale.
AdaptiveFit adaptive_lasso(const Dataset& data, int folds, std::uint64_t seed,
                           CvRule rule = CvRule::one_se);

// Plain least-squares fit packaged as an AdaptiveFit (for p << n use and the
// orthonormal-design oracle checks).
AdaptiveFit least_squares_fit(const Dataset& data);

}  // namespace locopath
