#pragma once

#include "locopath/parallel.hpp"
#include "locopath/solution_path.hpp"
#include "locopath/types.hpp"

#include <string>
#include <vector>

namespace locopath {

// Exponent for the ||f||_{s,t} functional; only 1, 2 and infinity admit the
// exact closed-form integration this module promises.
enum class Exp { one = 1, two = 2, inf = 3 };

struct NormSpec {
    Exp s = Exp::one;
    Exp t = Exp::one;
};

std::string to_string(Exp e);

struct ImportanceReport {
    VectorXd raw;         // T_1..T_p
    VectorXd normalized;  // raw / sum(raw), all zero when degenerate
    bool degenerate = false;
    // permutation intervals on the normalized scale, filled on request
    std::vector<std::pair<double, double>> intervals;
};

// Sorted-descending union of the two knot sets (exact-value dedup). Every
// coordinate of both paths is affine in lambda between consecutive entries.
std::vector<double> merged_knots(const SolutionPath& p1, const SolutionPath& p2);

// Exact integral of |a + b*lambda|^q over [lo, hi], q in {1, 2}.
double segment_abs_power_integral(double a, double b, double lo, double hi, int q);

// ||p1 - p2||_{s,t} over lambda in (0, infinity), exact.
double path_distance(const SolutionPath& p1, const SolutionPath& p2, NormSpec spec);

// LOCO statistic T_j(s,t): full path versus the path with column j removed.
double loco_statistic(const Dataset& data, Eigen::Index j, NormSpec spec);

// Null statistic T_0(s,t): full path on y versus the constrained path (the
// hypothesized columns excluded, their contribution moved into the offset).
double null_statistic(const Dataset& data, const Hypothesis& h, NormSpec spec);

// All-coordinate importances, normalized to sum to one.
ImportanceReport normalized_importance(const Dataset& data, NormSpec spec,
                                       Exec exec = Exec::serial);

}  // namespace locopath
