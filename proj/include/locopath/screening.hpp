#pragma once

#include "locopath/parallel.hpp"
#include "locopath/path_metric.hpp"
#include "locopath/types.hpp"

#include <vector>

namespace locopath {

// Keep-rule for screening: either every T_j above a threshold or the top K.
struct ScreenRule {
    enum class Kind { threshold, topk } kind = Kind::threshold;
    double epsilon = 0.0;
    int K = 1;

    static ScreenRule threshold(double eps) { return {Kind::threshold, eps, 1}; }
    static ScreenRule topk(int k) { return {Kind::topk, 0.0, k}; }
};

struct ScreeningReport {
    VectorXd stats;                    // T_j for every column
    std::vector<Eigen::Index> kept;    // descending by stat, ties by index
    ScreenRule rule;
};

// LOCO-path screening: full path once, one LOCO path per covariate.
ScreeningReport screen(const Dataset& data, NormSpec spec, ScreenRule rule,
                       Exec exec = Exec::serial);

}  // namespace locopath
