#pragma once

#include "locopath/inference.hpp"
#include "locopath/screening.hpp"
#include "locopath/types.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace locopath::sim {

struct Covariance {
    enum class Kind { identity, ar1, equicorr } kind = Kind::identity;
    double rho = 0.0;

    static Covariance identity() { return {Kind::identity, 0.0}; }
    static Covariance ar1(double rho) { return {Kind::ar1, rho}; }
    static Covariance equicorr(double rho) { return {Kind::equicorr, rho}; }
};

struct SimDesign {
    Eigen::Index n = 100;
    Eigen::Index p = 80;
    VectorXd beta;  // length p
    double sigma = 1.0;
    Covariance cov;
    int reps = 200;
    std::uint64_t seed = 0;
};

struct RepRecord {
    double statistic = 0.0;
    double pvalue = 1.0;
};

struct SimResult {
    double rate = 0.0;  // rejection or containment proportion
    double se = 0.0;    // binomial standard error of `rate`
    int reps = 0;
    // baselines; NaN when not applicable
    double t_rate = std::numeric_limits<double>::quiet_NaN();
    double f_rate = std::numeric_limits<double>::quiet_NaN();
    double sis_rate = std::numeric_limits<double>::quiet_NaN();
    std::vector<RepRecord> records;
};

// Deterministic cell identity: a hash of every design parameter, so equal
// designs share replicate seeds no matter which experiment spawned them.
std::uint64_t cell_hash(const SimDesign& design);

// Row i of X ~ N(0, Sigma) per the design's covariance; y = X beta + sigma*z.
// Deterministic in (design, rep_index).
Dataset gen_dataset(const SimDesign& design, int rep_index);

// Classical least-squares baselines (p < n, full rank).
double t_test_pvalue(const Dataset& data, Eigen::Index j);
double f_test_pvalue(const Dataset& data, const Hypothesis& h);

// Marginal-correlation screening baseline: |x_j^T y| descending, ties by
// ascending index.
std::vector<Eigen::Index> sis_rank(const Dataset& data);

// Rejection proportion of the bootstrap test of `h` across design replicates,
// with t/F baselines at the same level when p < n. cfg.seed is ignored;
// replicate seeds come from the design cell.
SimResult experiment_size(const SimDesign& design, const Hypothesis& h, NormSpec spec,
                          const BootstrapConfig& cfg);

// experiment_size along a grid of true beta_1 values (the hypothesis stays
// fixed; the design's first coefficient moves).
std::vector<std::pair<double, SimResult>> experiment_power(const SimDesign& design,
                                                           const Hypothesis& h, NormSpec spec,
                                                           const BootstrapConfig& cfg,
                                                           const std::vector<double>& beta1_grid);

// Proportion of replicates whose kept set contains the true support, for the
// LOCO rule and for an equally sized SIS baseline.
SimResult experiment_screening(const SimDesign& design, NormSpec spec, ScreenRule rule,
                               Exec exec = Exec::serial);

}  // namespace locopath::sim
