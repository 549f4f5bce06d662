#include "locopath/sim.hpp"

#include "locopath/rng.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace locopath::sim {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    return rng::splitmix64(h ^ rng::splitmix64(v));
}

std::uint64_t mix_double(std::uint64_t h, double v) {
    return mix(h, std::bit_cast<std::uint64_t>(v));
}

void validate_design(const SimDesign& d) {
    if (d.n < 1 || d.p < 1 || d.reps < 1) throw std::invalid_argument("sim: n, p, reps must be >= 1");
    if (!(d.sigma > 0.0)) throw std::invalid_argument("sim: sigma must be > 0");
    if (!(d.cov.rho >= 0.0 && d.cov.rho < 1.0)) throw std::invalid_argument("sim: need 0 <= rho < 1");
    if (d.beta.size() != d.p) throw std::invalid_argument("sim: beta length != p");
}

}  // namespace

std::uint64_t cell_hash(const SimDesign& d) {
    std::uint64_t h = 0x10c0c0de5eedULL;
    h = mix(h, static_cast<std::uint64_t>(d.n));
    h = mix(h, static_cast<std::uint64_t>(d.p));
    for (Eigen::Index j = 0; j < d.beta.size(); ++j) h = mix_double(h, d.beta[j]);
    h = mix_double(h, d.sigma);
    h = mix(h, static_cast<std::uint64_t>(d.cov.kind));
    h = mix_double(h, d.cov.rho);
    h = mix(h, d.seed);
    return h;
}

Dataset gen_dataset(const SimDesign& design, int rep_index) {
    validate_design(design);
    const Eigen::Index n = design.n, p = design.p;
    rng::Stream stream(
        rng::substream_seed(cell_hash(design), 2 * static_cast<std::uint64_t>(rep_index)));

    Dataset data;
    data.X.resize(n, p);
    const double rho = design.cov.rho;
    switch (design.cov.kind) {
        case Covariance::Kind::identity:
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = stream.normal();
            break;
        case Covariance::Kind::ar1: {
            const double fresh = std::sqrt(1.0 - rho * rho);
            for (Eigen::Index i = 0; i < n; ++i) {
                data.X(i, 0) = stream.normal();
                for (Eigen::Index j = 1; j < p; ++j)
                    data.X(i, j) = rho * data.X(i, j - 1) + fresh * stream.normal();
            }
            break;
        }
        case Covariance::Kind::equicorr: {
            const double shared = std::sqrt(rho), fresh = std::sqrt(1.0 - rho);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double g = stream.normal();
                for (Eigen::Index j = 0; j < p; ++j)
                    data.X(i, j) = shared * g + fresh * stream.normal();
            }
            break;
        }
    }
    data.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        data.y[i] = data.X.row(i).dot(design.beta) + design.sigma * stream.normal();
    data.names = default_names(p);
    return data;
}

namespace {

struct OlsFit {
    VectorXd beta;
    double rss;
    Eigen::Index rank;
};

OlsFit ols(const MatrixXd& X, const VectorXd& y) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
    OlsFit fit;
    fit.rank = qr.rank();
    fit.beta = qr.solve(y);
    fit.rss = (y - X * fit.beta).squaredNorm();
    return fit;
}

}  // namespace

double t_test_pvalue(const Dataset& data, Eigen::Index j) {
    const Eigen::Index n = data.n(), p = data.p();
    if (j < 0 || j >= p) throw std::invalid_argument("t_test_pvalue: index out of range");
    if (p >= n) throw std::invalid_argument("t_test_pvalue: needs p < n");
    const OlsFit fit = ols(data.X, data.y);
    if (fit.rank < p) throw std::invalid_argument("t_test_pvalue: rank-deficient design");
    const double dof = static_cast<double>(n - p);
    const double sigma2 = fit.rss / dof;
    const MatrixXd xtx_inv =
        (data.X.transpose() * data.X).ldlt().solve(MatrixXd::Identity(p, p));
    const double se = std::sqrt(sigma2 * xtx_inv(j, j));
    const double t = fit.beta[j] / se;
    boost::math::students_t_distribution<double> dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double f_test_pvalue(const Dataset& data, const Hypothesis& h) {
    const Eigen::Index n = data.n(), p = data.p();
    validate(h, p);
    if (p >= n) throw std::invalid_argument("f_test_pvalue: needs p < n");
    const OlsFit full = ols(data.X, data.y);
    if (full.rank < p) throw std::invalid_argument("f_test_pvalue: rank-deficient design");

    // restricted model: substitute the hypothesized values and regress the
    // remainder on the unconstrained columns
    std::vector<bool> constrained(static_cast<std::size_t>(p), false);
    VectorXd y_r = data.y;
    for (std::size_t k = 0; k < h.constrained.size(); ++k) {
        constrained[static_cast<std::size_t>(h.constrained[k])] = true;
        y_r -= data.X.col(h.constrained[k]) * h.values[static_cast<Eigen::Index>(k)];
    }
    const Eigen::Index q = static_cast<Eigen::Index>(h.constrained.size());
    MatrixXd X_r(n, p - q);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < p; ++j)
        if (!constrained[static_cast<std::size_t>(j)]) X_r.col(c++) = data.X.col(j);

    const double rss_r = p - q == 0 ? y_r.squaredNorm() : ols(X_r, y_r).rss;
    const double dof = static_cast<double>(n - p);
    const double f = ((rss_r - full.rss) / static_cast<double>(q)) / (full.rss / dof);
    boost::math::fisher_f_distribution<double> dist(static_cast<double>(q), dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(f, 0.0)));
}

std::vector<Eigen::Index> sis_rank(const Dataset& data) {
    const VectorXd score = (data.X.transpose() * data.y).cwiseAbs();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.p()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    return order;
}

SimResult experiment_size(const SimDesign& design, const Hypothesis& h, NormSpec spec,
                          const BootstrapConfig& cfg) {
    validate_design(design);
    validate(h, design.p);
    const std::uint64_t cell = cell_hash(design);
    const bool low_dim = design.p < design.n;
    const bool single_zero =
        h.constrained.size() == 1 && h.values[0] == 0.0 && low_dim;

    SimResult res;
    res.reps = design.reps;
    res.records.resize(static_cast<std::size_t>(design.reps));
    std::vector<unsigned char> rej(static_cast<std::size_t>(design.reps), 0);
    std::vector<unsigned char> rej_t(static_cast<std::size_t>(design.reps), 0);
    std::vector<unsigned char> rej_f(static_cast<std::size_t>(design.reps), 0);

    parallel_for(cfg.exec, static_cast<std::size_t>(design.reps), [&](std::size_t r) {
        const Dataset data = gen_dataset(design, static_cast<int>(r));
        BootstrapConfig rep_cfg = cfg;
        rep_cfg.seed = rng::substream_seed(cell, 2 * static_cast<std::uint64_t>(r) + 1);
        rep_cfg.keep_replicates = false;
        const TestOutcome outcome = bootstrap_test(data, h, spec, rep_cfg);
        res.records[r] = {outcome.statistic, outcome.pvalue};
        rej[r] = outcome.reject ? 1 : 0;
        if (single_zero) rej_t[r] = t_test_pvalue(data, h.constrained[0]) <= cfg.alpha ? 1 : 0;
        if (low_dim) rej_f[r] = f_test_pvalue(data, h) <= cfg.alpha ? 1 : 0;
    });

    const double nr = static_cast<double>(design.reps);
    res.rate = std::accumulate(rej.begin(), rej.end(), 0.0) / nr;
    res.se = std::sqrt(std::max(res.rate * (1.0 - res.rate), 0.0) / nr);
    if (single_zero) res.t_rate = std::accumulate(rej_t.begin(), rej_t.end(), 0.0) / nr;
    if (low_dim) res.f_rate = std::accumulate(rej_f.begin(), rej_f.end(), 0.0) / nr;
    return res;
}

std::vector<std::pair<double, SimResult>> experiment_power(const SimDesign& design,
                                                           const Hypothesis& h, NormSpec spec,
                                                           const BootstrapConfig& cfg,
                                                           const std::vector<double>& beta1_grid) {
    std::vector<std::pair<double, SimResult>> out;
    out.reserve(beta1_grid.size());
    for (double b1 : beta1_grid) {
        SimDesign d = design;
        d.beta[0] = b1;
        out.emplace_back(b1, experiment_size(d, h, spec, cfg));
    }
    return out;
}

SimResult experiment_screening(const SimDesign& design, NormSpec spec, ScreenRule rule,
                               Exec exec) {
    validate_design(design);
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < design.p; ++j)
        if (design.beta[j] != 0.0) support.push_back(j);

    SimResult res;
    res.reps = design.reps;
    std::vector<unsigned char> hit(static_cast<std::size_t>(design.reps), 0);
    std::vector<unsigned char> hit_sis(static_cast<std::size_t>(design.reps), 0);

    auto contains_support = [&](const std::vector<Eigen::Index>& kept) {
        std::vector<bool> in(static_cast<std::size_t>(design.p), false);
        for (Eigen::Index j : kept) in[static_cast<std::size_t>(j)] = true;
        for (Eigen::Index j : support)
            if (!in[static_cast<std::size_t>(j)]) return false;
        return true;
    };

    parallel_for(exec, static_cast<std::size_t>(design.reps), [&](std::size_t r) {
        const Dataset data = gen_dataset(design, static_cast<int>(r));
        const ScreeningReport rep = screen(data, spec, rule, Exec::serial);
        hit[r] = contains_support(rep.kept) ? 1 : 0;
        const std::vector<Eigen::Index> sis = sis_rank(data);
        const std::size_t k = rep.kept.size();
        const std::vector<Eigen::Index> sis_kept(sis.begin(),
                                                 sis.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                                   k, sis.size())));
        hit_sis[r] = contains_support(sis_kept) ? 1 : 0;
    });

    const double nr = static_cast<double>(design.reps);
    res.rate = std::accumulate(hit.begin(), hit.end(), 0.0) / nr;
    res.se = std::sqrt(std::max(res.rate * (1.0 - res.rate), 0.0) / nr);
    res.sis_rate = std::accumulate(hit_sis.begin(), hit_sis.end(), 0.0) / nr;
    return res;
}

}  // namespace locopath::sim
