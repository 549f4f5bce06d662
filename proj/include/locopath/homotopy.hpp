#pragma once

#include "locopath/solution_path.hpp"
#include "locopath/types.hpp"

namespace locopath {

// Exact LASSO homotopy (LARS with the lasso modification) under the internal
// lambda scale: stationarity on the active set reads X^T(residual) = lambda *
// sign(beta). Knots are every active-set change from the first entry down to
// lambda = 0, or until the active set saturates at min(n-1, p - #excluded).
//
// `excluded` columns are pinned at zero for the whole path. `offset`, when
// present, replaces the response by y - offset (the constrained-path device:
// fitting y - X_A beta_0A with A excluded). `gram`, when present, must be
// X^T X for this exact X; callers running many paths against one design
// (bootstrap, cross-validation) precompute it once.
SolutionPath lasso_path(const MatrixXd& X, const VectorXd& y,
                        const std::vector<Eigen::Index>& excluded = {},
                        const VectorXd* offset = nullptr,
                        const MatrixXd* gram = nullptr);

inline SolutionPath lasso_path(const Dataset& data,
                               const std::vector<Eigen::Index>& excluded = {},
                               const VectorXd* offset = nullptr,
                               const MatrixXd* gram = nullptr) {
    return lasso_path(data.X, data.y, excluded, offset, gram);
}

}  // namespace locopath
