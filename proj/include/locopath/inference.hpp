#pragma once

#include "locopath/cross_validation.hpp"
#include "locopath/parallel.hpp"
#include "locopath/path_metric.hpp"
#include "locopath/types.hpp"

#include <cstdint>

namespace locopath {

enum class Initial { adaptive_lasso, least_squares };

struct BootstrapConfig {
    int B = 500;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int folds = 10;
    bool center_residuals = true;
    Initial initial = Initial::adaptive_lasso;
    CvRule cv_rule = CvRule::one_se;
    bool keep_replicates = false;
    Exec exec = Exec::serial;
};

struct TestOutcome {
    double statistic = 0.0;  // observed T_0(s,t)
    double pvalue = 1.0;
    double critical = 0.0;  // floor(B(1-alpha)) order statistic of the T*
    bool reject = false;
    VectorXd replicates;  // stored when keep_replicates is on
};

struct PermutationInterval {
    Eigen::Index j = 0;
    double level = 0.95;
    int M = 100;
    double lo = 0.0, hi = 0.0;  // on the normalized-importance scale
};

// Residuals of the initial fit, mean-centered unless disabled.
VectorXd residuals_from_initial(const Dataset& data, const AdaptiveFit& fit, bool center);

// One bootstrap draw of the null statistic: resample residuals, synthesize a
// response whose tested coefficients are exactly the hypothesized values,
// then recompute the observed statistic on it (full path vs constrained
// path with the hypothesized contribution as a fixed offset).
double bootstrap_replicate(const Dataset& data, const AdaptiveFit& fit,
                           const VectorXd& residuals, const Hypothesis& h, NormSpec spec,
                           std::uint64_t replicate_seed);

// Full bootstrap-calibrated test of H_0: beta_A = beta_0A.
TestOutcome bootstrap_test(const Dataset& data, const Hypothesis& h, NormSpec spec,
                           const BootstrapConfig& cfg);

// Convenience wrapper: H_0: beta_j = 0.
TestOutcome single_coefficient_test(const Dataset& data, Eigen::Index j, NormSpec spec,
                                    const BootstrapConfig& cfg);

// Permutation uncertainty interval for variable j's normalized importance.
PermutationInterval permutation_interval(const Dataset& data, Eigen::Index j, NormSpec spec,
                                         int M, double level, std::uint64_t seed);

// Importance report with a permutation interval per coordinate; the shared
// full path and normalization are computed once.
ImportanceReport importance_with_intervals(const Dataset& data, NormSpec spec, int M,
                                           double level, std::uint64_t seed,
                                           Exec exec = Exec::serial);

}  // namespace locopath
