#include "locopath/screening.hpp"

#include "locopath/homotopy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace locopath {

ScreeningReport screen(const Dataset& data, NormSpec spec, ScreenRule rule, Exec exec) {
    if (rule.kind == ScreenRule::Kind::threshold && rule.epsilon < 0.0)
        throw std::invalid_argument("screen: threshold must be >= 0");
    if (rule.kind == ScreenRule::Kind::topk && rule.K < 1)
        throw std::invalid_argument("screen: K must be >= 1");

    const Eigen::Index p = data.p();
    const MatrixXd gram = data.X.transpose() * data.X;
    const SolutionPath full = lasso_path(data.X, data.y, {}, nullptr, &gram);

    ScreeningReport rep;
    rep.rule = rule;
    rep.stats.resize(p);
    parallel_for(exec, static_cast<std::size_t>(p), [&](std::size_t j) {
        const SolutionPath loco =
            lasso_path(data.X, data.y, {static_cast<Eigen::Index>(j)}, nullptr, &gram);
        rep.stats[static_cast<Eigen::Index>(j)] = path_distance(full, loco, spec);
    });

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (rep.stats[a] != rep.stats[b]) return rep.stats[a] > rep.stats[b];
        return a < b;
    });

    if (rule.kind == ScreenRule::Kind::topk) {
        const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(rule.K),
                                                       static_cast<std::size_t>(p));
        rep.kept.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    } else {
        for (Eigen::Index j : order) {
            if (rep.stats[j] > rule.epsilon) rep.kept.push_back(j);
        }
    }
    return rep;
}

}  // namespace locopath
