#include "locopath/sim.hpp"

#include <boost/math/distributions/fisher_f.hpp>

#include <doctest.h>

#include <cmath>

using namespace locopath;

namespace {

sim::SimDesign tiny_design() {
    sim::SimDesign d;
    d.n = 30;
    d.p = 6;
    d.beta = VectorXd::Zero(6);
    d.beta[1] = 1.0;
    d.sigma = 1.0;
    d.reps = 12;
    d.seed = 404;
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("sim");

TEST_CASE("dataset generation is deterministic per (design, rep)") {
    const sim::SimDesign d = tiny_design();
    const Dataset a = sim::gen_dataset(d, 3);
    const Dataset b = sim::gen_dataset(d, 3);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);

    const Dataset c = sim::gen_dataset(d, 4);
    CHECK((a.X - c.X).cwiseAbs().maxCoeff() > 0.0);

    sim::SimDesign d2 = d;
    d2.seed = 405;
    const Dataset e = sim::gen_dataset(d2, 3);
    CHECK((a.X - e.X).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("cell hash keys on design parameters, not call sites") {
    const sim::SimDesign a = tiny_design();
    sim::SimDesign b = tiny_design();
    CHECK(sim::cell_hash(a) == sim::cell_hash(b));
    b.beta[0] = 0.25;
    CHECK(sim::cell_hash(a) != sim::cell_hash(b));
    b = tiny_design();
    b.cov = sim::Covariance::ar1(0.5);
    CHECK(sim::cell_hash(a) != sim::cell_hash(b));
}

TEST_CASE("ar1 rows show the requested autocorrelation") {
    sim::SimDesign d = tiny_design();
    d.n = 4000;
    d.p = 8;
    d.beta = VectorXd::Zero(8);
    d.cov = sim::Covariance::ar1(0.6);
    const Dataset data = sim::gen_dataset(d, 0);

    // adjacent-column empirical correlation near rho; lag-2 near rho^2
    auto corr = [&](Eigen::Index a, Eigen::Index b) {
        const VectorXd u = (data.X.col(a).array() - data.X.col(a).mean()).matrix();
        const VectorXd v = (data.X.col(b).array() - data.X.col(b).mean()).matrix();
        return u.dot(v) / std::sqrt(u.squaredNorm() * v.squaredNorm());
    };
    CHECK(std::abs(corr(2, 3) - 0.6) < 0.05);
    CHECK(std::abs(corr(2, 4) - 0.36) < 0.05);
    // unit variance columns
    CHECK(std::abs(data.X.col(5).squaredNorm() / 4000.0 - 1.0) < 0.1);
}

TEST_CASE("equicorrelated rows show a flat off-diagonal correlation") {
    sim::SimDesign d = tiny_design();
    d.n = 4000;
    d.p = 6;
    d.beta = VectorXd::Zero(6);
    d.cov = sim::Covariance::equicorr(0.4);
    const Dataset data = sim::gen_dataset(d, 1);
    auto corr = [&](Eigen::Index a, Eigen::Index b) {
        const VectorXd u = (data.X.col(a).array() - data.X.col(a).mean()).matrix();
        const VectorXd v = (data.X.col(b).array() - data.X.col(b).mean()).matrix();
        return u.dot(v) / std::sqrt(u.squaredNorm() * v.squaredNorm());
    };
    CHECK(std::abs(corr(0, 3) - 0.4) < 0.05);
    CHECK(std::abs(corr(1, 5) - 0.4) < 0.05);
}

TEST_CASE("t and F baselines agree with closed-form checks") {
    const sim::SimDesign d = tiny_design();
    const Dataset data = sim::gen_dataset(d, 7);

    // F test of all coefficients zero vs direct computation
    Hypothesis h;
    h.constrained = {0, 1, 2, 3, 4, 5};
    h.values = VectorXd::Zero(6);
    const double p_f = sim::f_test_pvalue(data, h);

    const VectorXd bhat = data.X.colPivHouseholderQr().solve(data.y);
    const double rss = (data.y - data.X * bhat).squaredNorm();
    const double rss0 = data.y.squaredNorm();
    const double f = ((rss0 - rss) / 6.0) / (rss / (30.0 - 6.0));
    boost::math::fisher_f_distribution<double> dist(6.0, 24.0);
    CHECK(p_f == doctest::Approx(boost::math::cdf(boost::math::complement(dist, f))));

    // single-coefficient t and F agree: t^2 = F so p-values match
    Hypothesis h1;
    h1.constrained = {1};
    h1.values = VectorXd::Zero(1);
    CHECK(sim::t_test_pvalue(data, 1) == doctest::Approx(sim::f_test_pvalue(data, h1)));

    // the true nonzero coordinate should be detected at this signal size
    CHECK(sim::t_test_pvalue(data, 1) < 0.05);
}

TEST_CASE("sis ranks by absolute marginal correlation, ties by index") {
    Dataset data;
    data.X.resize(4, 3);
    data.X << 1, 0, 1,
              0, 2, 0,
              0, 0, 0,
              0, 0, -1;
    data.y.resize(4);
    data.y << 1.0, 1.0, 0.0, 1.0;
    // |X^T y| = (1, 2, 0): order 1, 0, 2
    const std::vector<Eigen::Index> order = sim::sis_rank(data);
    CHECK(order == std::vector<Eigen::Index>{1, 0, 2});
}

TEST_CASE("size experiment fills records and baselines; rerun is identical") {
    const sim::SimDesign d = tiny_design();
    Hypothesis h;
    h.constrained = {0};
    h.values = VectorXd::Zero(1);
    BootstrapConfig cfg;
    cfg.B = 25;
    cfg.folds = 5;

    const sim::SimResult a = sim::experiment_size(d, h, {Exp::one, Exp::one}, cfg);
    CHECK(a.reps == 12);
    CHECK(a.records.size() == 12);
    CHECK(a.rate >= 0.0);
    CHECK(a.rate <= 1.0);
    CHECK(std::isfinite(a.t_rate));  // single zero coefficient, p < n
    CHECK(std::isfinite(a.f_rate));
    CHECK(a.se == doctest::Approx(std::sqrt(a.rate * (1 - a.rate) / 12.0)));

    const sim::SimResult b = sim::experiment_size(d, h, {Exp::one, Exp::one}, cfg);
    CHECK(a.rate == b.rate);
    for (std::size_t r = 0; r < a.records.size(); ++r) {
        CHECK(a.records[r].statistic == b.records[r].statistic);
        CHECK(a.records[r].pvalue == b.records[r].pvalue);
    }

    BootstrapConfig par = cfg;
    par.exec = Exec::parallel;
    const sim::SimResult c = sim::experiment_size(d, h, {Exp::one, Exp::one}, par);
    CHECK(a.rate == c.rate);
    for (std::size_t r = 0; r < a.records.size(); ++r)
        CHECK(a.records[r].statistic == c.records[r].statistic);
}

TEST_CASE("power grid at beta1 = 0 reproduces the size cell exactly") {
    sim::SimDesign d = tiny_design();
    d.beta[0] = 0.7;  // the grid overwrites this
    Hypothesis h;
    h.constrained = {0};
    h.values = VectorXd::Zero(1);
    BootstrapConfig cfg;
    cfg.B = 20;
    cfg.folds = 5;

    const auto cells = sim::experiment_power(d, h, {Exp::one, Exp::one}, cfg, {0.0, 1.5});
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].first == 0.0);

    sim::SimDesign d0 = d;
    d0.beta[0] = 0.0;
    const sim::SimResult size_cell = sim::experiment_size(d0, h, {Exp::one, Exp::one}, cfg);
    CHECK(cells[0].second.rate == size_cell.rate);
    for (std::size_t r = 0; r < size_cell.records.size(); ++r)
        CHECK(cells[0].second.records[r].statistic == size_cell.records[r].statistic);

    // strong signal rejects much more often than none
    CHECK(cells[1].second.rate >= cells[0].second.rate);
}

TEST_CASE("screening experiment reports containment for both methods") {
    sim::SimDesign d;
    d.n = 20;
    d.p = 40;
    d.beta = VectorXd::Zero(40);
    d.beta.head(3).setConstant(3.0);
    d.sigma = 1.0;
    d.reps = 10;
    d.seed = 31;

    const sim::SimResult res =
        sim::experiment_screening(d, {Exp::one, Exp::one}, ScreenRule::topk(19));
    CHECK(res.rate >= 0.0);
    CHECK(res.rate <= 1.0);
    CHECK(std::isfinite(res.sis_rate));
    // strong signal, modest dimension: both methods should mostly succeed
    CHECK(res.rate >= 0.5);

    const sim::SimResult again =
        sim::experiment_screening(d, {Exp::one, Exp::one}, ScreenRule::topk(19), Exec::parallel);
    CHECK(res.rate == again.rate);
    CHECK(res.sis_rate == again.sis_rate);
}

TEST_CASE("design validation") {
    sim::SimDesign d = tiny_design();
    d.sigma = 0.0;
    CHECK_THROWS_AS(sim::gen_dataset(d, 0), std::invalid_argument);
    d = tiny_design();
    d.beta = VectorXd::Zero(2);
    CHECK_THROWS_AS(sim::gen_dataset(d, 0), std::invalid_argument);
    d = tiny_design();
    d.cov = sim::Covariance::ar1(1.0);
    CHECK_THROWS_AS(sim::gen_dataset(d, 0), std::invalid_argument);
}

TEST_SUITE_END();
