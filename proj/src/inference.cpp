#include "locopath/inference.hpp"

#include "locopath/homotopy.hpp"
#include "locopath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace locopath {

VectorXd residuals_from_initial(const Dataset& data, const AdaptiveFit& fit, bool center) {
    if (fit.beta_tilde.size() != data.p())
        throw std::invalid_argument("residuals_from_initial: fit dimension mismatch");
    VectorXd r = data.y - data.X * fit.beta_tilde;
    if (center) r.array() -= r.mean();
    return r;
}

namespace {

// Offsets that impose the null on the resampled response. ystar carries the
// initial estimate on every column; subtracting `full` replaces the tested
// columns' coefficients with exactly the hypothesized values, so the
// unconstrained replicate path mirrors the fit on the raw response, while
// subtracting `constrained` removes the tested signal entirely, mirroring
// the observed constrained fit. For all-zero hypothesized values the two
// offsets coincide.
struct ReplicateOffsets {
    VectorXd full;
    VectorXd constrained;
};

ReplicateOffsets replicate_offsets(const Dataset& data, const Hypothesis& h,
                                   const VectorXd& beta_tilde) {
    ReplicateOffsets off{VectorXd::Zero(data.n()), VectorXd::Zero(data.n())};
    for (std::size_t k = 0; k < h.constrained.size(); ++k) {
        const Eigen::Index j = h.constrained[k];
        const double value = h.values[static_cast<Eigen::Index>(k)];
        off.full += data.X.col(j) * (beta_tilde[j] - value);
        off.constrained += data.X.col(j) * beta_tilde[j];
    }
    return off;
}

double replicate_impl(const Dataset& data, const VectorXd& mean_fit, const ReplicateOffsets& off,
                      const VectorXd& residuals, const Hypothesis& h, NormSpec spec,
                      std::uint64_t replicate_seed, const MatrixXd* gram) {
    const Eigen::Index n = data.n();
    rng::Stream stream(replicate_seed);
    VectorXd ystar(n);
    for (Eigen::Index i = 0; i < n; ++i)
        ystar[i] = mean_fit[i] +
                   residuals[static_cast<Eigen::Index>(stream.uniform_int(static_cast<std::uint64_t>(n)))];
    const SolutionPath full = lasso_path(data.X, ystar, {}, &off.full, gram);
    const SolutionPath constrained = lasso_path(data.X, ystar, h.constrained, &off.constrained, gram);
    return path_distance(full, constrained, spec);
}

}  // namespace

double bootstrap_replicate(const Dataset& data, const AdaptiveFit& fit,
                           const VectorXd& residuals, const Hypothesis& h, NormSpec spec,
                           std::uint64_t replicate_seed) {
    validate(h, data.p());
    if (residuals.size() != data.n())
        throw std::invalid_argument("bootstrap_replicate: residual length mismatch");
    const VectorXd mean_fit = data.X * fit.beta_tilde;
    const ReplicateOffsets off = replicate_offsets(data, h, fit.beta_tilde);
    return replicate_impl(data, mean_fit, off, residuals, h, spec, replicate_seed, nullptr);
}

TestOutcome bootstrap_test(const Dataset& data, const Hypothesis& h, NormSpec spec,
                           const BootstrapConfig& cfg) {
    validate(h, data.p());
    if (cfg.B < 1) throw std::invalid_argument("bootstrap_test: B must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("bootstrap_test: alpha must be in (0,1)");

    const MatrixXd gram = data.X.transpose() * data.X;

    TestOutcome out;
    {
        const SolutionPath full = lasso_path(data.X, data.y, {}, nullptr, &gram);
        VectorXd off = VectorXd::Zero(data.n());
        for (std::size_t k = 0; k < h.constrained.size(); ++k)
            off += data.X.col(h.constrained[k]) * h.values[static_cast<Eigen::Index>(k)];
        const SolutionPath constrained = lasso_path(data.X, data.y, h.constrained, &off, &gram);
        out.statistic = path_distance(full, constrained, spec);
    }

    const AdaptiveFit fit =
        cfg.initial == Initial::adaptive_lasso
            ? adaptive_lasso(data, cfg.folds, rng::substream_seed(cfg.seed, 0), cfg.cv_rule)
            : least_squares_fit(data);
    const VectorXd residuals = residuals_from_initial(data, fit, cfg.center_residuals);
    const VectorXd mean_fit = data.X * fit.beta_tilde;
    const ReplicateOffsets off = replicate_offsets(data, h, fit.beta_tilde);

    VectorXd ts(cfg.B);
    parallel_for(cfg.exec, static_cast<std::size_t>(cfg.B), [&](std::size_t b) {
        ts[static_cast<Eigen::Index>(b)] =
            replicate_impl(data, mean_fit, off, residuals, h, spec,
                           rng::substream_seed(cfg.seed, 1 + static_cast<std::uint64_t>(b)), &gram);
    });

    VectorXd sorted = ts;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    Eigen::Index rank = static_cast<Eigen::Index>(
        std::floor(static_cast<double>(cfg.B) * (1.0 - cfg.alpha)));
    rank = std::clamp<Eigen::Index>(rank, 1, cfg.B);
    out.critical = sorted[rank - 1];
    out.pvalue = static_cast<double>((ts.array() > out.statistic).count()) / cfg.B;
    out.reject = out.statistic > out.critical;
    if (cfg.keep_replicates) out.replicates = ts;
    return out;
}

TestOutcome single_coefficient_test(const Dataset& data, Eigen::Index j, NormSpec spec,
                                    const BootstrapConfig& cfg) {
    if (j < 0 || j >= data.p())
        throw std::invalid_argument("single_coefficient_test: index out of range");
    Hypothesis h;
    h.constrained = {j};
    h.values = VectorXd::Zero(1);
    return bootstrap_test(data, h, spec, cfg);
}

namespace {

double quantile_type7(std::vector<double> v, double prob) {
    std::sort(v.begin(), v.end());
    const double h = prob * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

namespace {

PermutationInterval interval_impl(const Dataset& data, const SolutionPath& full, double denom,
                                  Eigen::Index j, NormSpec spec, int M, double level,
                                  std::uint64_t seed) {
    std::vector<double> stats(static_cast<std::size_t>(M));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.n()));
    Dataset permuted = data;
    for (int m = 0; m < M; ++m) {
        rng::Stream stream(rng::substream_seed(seed, static_cast<std::uint64_t>(m)));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        stream.shuffle(order);
        for (Eigen::Index i = 0; i < data.n(); ++i)
            permuted.X(i, j) = data.X(order[static_cast<std::size_t>(i)], j);
        // surrogate LOCO path: the association is broken instead of the
        // column removed
        const SolutionPath surrogate = lasso_path(permuted);
        const double t = path_distance(full, surrogate, spec);
        stats[static_cast<std::size_t>(m)] = denom > 0.0 ? t / denom : 0.0;
    }

    PermutationInterval out;
    out.j = j;
    out.level = level;
    out.M = M;
    out.lo = quantile_type7(stats, (1.0 - level) / 2.0);
    out.hi = quantile_type7(stats, (1.0 + level) / 2.0);
    return out;
}

void validate_interval_args(const Dataset& data, Eigen::Index j, int M, double level) {
    if (j < 0 || j >= data.p())
        throw std::invalid_argument("permutation_interval: index out of range");
    if (M < 2) throw std::invalid_argument("permutation_interval: M must be >= 2");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("permutation_interval: level must be in (0,1)");
}

}  // namespace

PermutationInterval permutation_interval(const Dataset& data, Eigen::Index j, NormSpec spec,
                                         int M, double level, std::uint64_t seed) {
    validate_interval_args(data, j, M, level);
    const ImportanceReport rep = normalized_importance(data, spec);
    const SolutionPath full = lasso_path(data);
    return interval_impl(data, full, rep.raw.sum(), j, spec, M, level, seed);
}

ImportanceReport importance_with_intervals(const Dataset& data, NormSpec spec, int M,
                                           double level, std::uint64_t seed, Exec exec) {
    validate_interval_args(data, 0, M, level);
    ImportanceReport rep = normalized_importance(data, spec, exec);
    const SolutionPath full = lasso_path(data);
    const double denom = rep.raw.sum();

    rep.intervals.resize(static_cast<std::size_t>(data.p()));
    parallel_for(exec, static_cast<std::size_t>(data.p()), [&](std::size_t j) {
        const PermutationInterval pi =
            interval_impl(data, full, denom, static_cast<Eigen::Index>(j), spec, M, level,
                          rng::substream_seed(seed, j));
        rep.intervals[j] = {pi.lo, pi.hi};
    });
    return rep;
}

}  // namespace locopath
