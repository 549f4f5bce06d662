#include "locopath/path_metric.hpp"

#include "locopath/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locopath {

std::string to_string(Exp e) {
    switch (e) {
        case Exp::one: return "1";
        case Exp::two: return "2";
        case Exp::inf: return "inf";
    }
    return "?";
}

std::vector<double> merged_knots(const SolutionPath& p1, const SolutionPath& p2) {
    if (p1.p() != p2.p()) throw std::invalid_argument("merged_knots: dimension mismatch");
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(p1.knots.size() + p2.knots.size()));
    all.insert(all.end(), p1.knots.data(), p1.knots.data() + p1.knots.size());
    all.insert(all.end(), p2.knots.data(), p2.knots.data() + p2.knots.size());
    std::sort(all.begin(), all.end(), std::greater<double>());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

double segment_abs_power_integral(double a, double b, double lo, double hi, int q) {
    if (hi <= lo) return 0.0;
    const double f0 = a + b * lo, f1 = a + b * hi;
    if (q == 2) {
        // exact for an affine integrand squared
        return (hi - lo) * (f0 * f0 + f0 * f1 + f1 * f1) / 3.0;
    }
    if (q != 1) throw std::invalid_argument("segment_abs_power_integral: q must be 1 or 2");
    if (f0 * f1 < 0.0) {
        // sign change inside: two triangles on either side of the root
        const double h = hi - lo;
        return h * (f0 * f0 + f1 * f1) / (2.0 * (std::abs(f0) + std::abs(f1)));
    }
    return 0.5 * (std::abs(f0) + std::abs(f1)) * (hi - lo);
}

namespace {

// per-coordinate inner norms accumulated over segments of the merged grid
struct InnerAccum {
    Exp s;
    double acc = 0.0;
    void add_segment(double d0, double d1, double lo, double hi) {
        switch (s) {
            case Exp::one:
            case Exp::two: {
                const double h = hi - lo;
                if (h <= 0.0) return;
                const double b = (d1 - d0) / h;
                const double a = d0 - b * lo;
                acc += segment_abs_power_integral(a, b, lo, hi, s == Exp::one ? 1 : 2);
                break;
            }
            case Exp::inf:
                acc = std::max({acc, std::abs(d0), std::abs(d1)});
                break;
        }
    }
    double finish() const { return s == Exp::two ? std::sqrt(acc) : acc; }
};

}  // namespace

double path_distance(const SolutionPath& p1, const SolutionPath& p2, NormSpec spec) {
    if (p1.p() != p2.p()) throw std::invalid_argument("path_distance: dimension mismatch");
    const Eigen::Index p = p1.p();

    std::vector<double> grid = merged_knots(p1, p2);
    if (grid.empty() || grid.back() > 0.0) grid.push_back(0.0);
    std::reverse(grid.begin(), grid.end());  // ascending for integration
    const std::size_t G = grid.size();

    // both paths evaluated on the common grid; beyond either path's own
    // range its extension rule applies (zero above, constant below)
    MatrixXd D(p, static_cast<Eigen::Index>(G));
    for (std::size_t g = 0; g < G; ++g)
        D.col(static_cast<Eigen::Index>(g)) = eval_path(p1, grid[g]) - eval_path(p2, grid[g]);

    std::vector<InnerAccum> inner(static_cast<std::size_t>(p), InnerAccum{spec.s});
    for (std::size_t g = 0; g + 1 < G; ++g) {
        for (Eigen::Index k = 0; k < p; ++k) {
            inner[static_cast<std::size_t>(k)].add_segment(
                D(k, static_cast<Eigen::Index>(g)), D(k, static_cast<Eigen::Index>(g + 1)),
                grid[g], grid[g + 1]);
        }
    }
    if (G == 1) {
        // single-knot degenerate paths: only the sup norm sees the point value
        for (Eigen::Index k = 0; k < p; ++k)
            inner[static_cast<std::size_t>(k)].add_segment(D(k, 0), D(k, 0), 0.0, 0.0);
    }

    double outer = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
        const double w = inner[static_cast<std::size_t>(k)].finish();
        switch (spec.t) {
            case Exp::one: outer += w; break;
            case Exp::two: outer += w * w; break;
            case Exp::inf: outer = std::max(outer, w); break;
        }
    }
    return spec.t == Exp::two ? std::sqrt(outer) : outer;
}

double loco_statistic(const Dataset& data, Eigen::Index j, NormSpec spec) {
    if (j < 0 || j >= data.p()) throw std::invalid_argument("loco_statistic: index out of range");
    const SolutionPath full = lasso_path(data);
    const SolutionPath loco = lasso_path(data, {j});
    return path_distance(full, loco, spec);
}

namespace {

VectorXd hypothesis_offset(const Dataset& data, const Hypothesis& h) {
    VectorXd off = VectorXd::Zero(data.n());
    for (std::size_t k = 0; k < h.constrained.size(); ++k)
        off += data.X.col(h.constrained[k]) * h.values[static_cast<Eigen::Index>(k)];
    return off;
}

}  // namespace

double null_statistic(const Dataset& data, const Hypothesis& h, NormSpec spec) {
    validate(h, data.p());
    const SolutionPath full = lasso_path(data);
    const VectorXd off = hypothesis_offset(data, h);
    const SolutionPath constrained = lasso_path(data.X, data.y, h.constrained, &off);
    return path_distance(full, constrained, spec);
}

ImportanceReport normalized_importance(const Dataset& data, NormSpec spec, Exec exec) {
    const Eigen::Index p = data.p();
    const SolutionPath full = lasso_path(data);

    ImportanceReport rep;
    rep.raw.resize(p);
    parallel_for(exec, static_cast<std::size_t>(p), [&](std::size_t j) {
        const SolutionPath loco = lasso_path(data, {static_cast<Eigen::Index>(j)});
        rep.raw[static_cast<Eigen::Index>(j)] = path_distance(full, loco, spec);
    });

    const double total = rep.raw.sum();
    if (total > 0.0) {
        rep.normalized = rep.raw / total;
    } else {
        rep.normalized = VectorXd::Zero(p);
        rep.degenerate = true;
    }
    return rep;
}

}  // namespace locopath
