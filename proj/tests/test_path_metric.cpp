#include "locopath/path_metric.hpp"

#include "locopath/homotopy.hpp"
#include "support/instances.hpp"
#include "support/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace locopath;
using testsupport::random_instance;

namespace {

const NormSpec all_specs[] = {
    {Exp::one, Exp::one}, {Exp::one, Exp::two}, {Exp::one, Exp::inf},
    {Exp::two, Exp::one}, {Exp::two, Exp::two}, {Exp::two, Exp::inf},
    {Exp::inf, Exp::one}, {Exp::inf, Exp::two}, {Exp::inf, Exp::inf}};

}  // namespace

TEST_SUITE_BEGIN("path_metric");

TEST_CASE("segment integral closed forms") {
    // |3 - t| over [0, 5]: triangle areas 4.5 + 2 = 6.5
    CHECK(segment_abs_power_integral(3.0, -1.0, 0.0, 5.0, 1) == doctest::Approx(6.5));
    // (3 - t)^2 over [0, 5]: [-(3-t)^3/3] = (27 + 8)/3
    CHECK(segment_abs_power_integral(3.0, -1.0, 0.0, 5.0, 2) == doctest::Approx(35.0 / 3.0));
    // constant
    CHECK(segment_abs_power_integral(-2.0, 0.0, 1.0, 4.0, 1) == doctest::Approx(6.0));
    CHECK(segment_abs_power_integral(-2.0, 0.0, 1.0, 4.0, 2) == doctest::Approx(12.0));
    // empty interval
    CHECK(segment_abs_power_integral(1.0, 1.0, 2.0, 2.0, 1) == 0.0);
    CHECK_THROWS_AS(segment_abs_power_integral(1.0, 1.0, 0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("merged knots: sorted descending union without duplicates") {
    SolutionPath a, b;
    a.knots.resize(3);
    a.knots << 5.0, 2.0, 0.0;
    a.coefs = MatrixXd::Zero(2, 3);
    b.knots.resize(2);
    b.knots << 3.0, 2.0;
    b.coefs = MatrixXd::Zero(2, 2);

    const std::vector<double> m = merged_knots(a, b);
    REQUIRE(m.size() == 4);
    CHECK(m[0] == 5.0);
    CHECK(m[1] == 3.0);
    CHECK(m[2] == 2.0);
    CHECK(m[3] == 0.0);
}

TEST_CASE("distance against the numeric quadrature oracle") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Dataset data = random_instance(30, 12, 500 + seed, 0.3);
        const SolutionPath full = lasso_path(data);
        const SolutionPath loco = lasso_path(data, {static_cast<Eigen::Index>(seed % 12)});
        for (const NormSpec spec : all_specs) {
            const double exact = path_distance(full, loco, spec);
            const double numeric = testsupport::numeric_path_distance(full, loco, spec);
            CHECK(exact == doctest::Approx(numeric).epsilon(1e-7));
        }
    }
}

TEST_CASE("nonnegativity and zero law") {
    const Dataset data = random_instance(25, 8, 321);
    const SolutionPath full = lasso_path(data);
    const SolutionPath loco = lasso_path(data, {2});
    for (const NormSpec spec : all_specs) {
        CHECK(path_distance(full, full, spec) == 0.0);
        CHECK(path_distance(full, loco, spec) >= 0.0);
    }
}

TEST_CASE("lambda rescaling scales T(q,q) by c^(1/q) and leaves (inf,inf) alone") {
    const Dataset data = random_instance(30, 10, 99, 0.4);
    const SolutionPath full = lasso_path(data);
    const SolutionPath loco = lasso_path(data, {1});

    const double c = 3.5;
    auto scale_lambda = [&](SolutionPath path) {
        path.knots *= c;  // same coefficient values met at stretched lambdas
        return path;
    };
    const SolutionPath fs = scale_lambda(full), ls = scale_lambda(loco);

    // stretching the lambda axis multiplies integrals dlambda by c:
    // T(q,q)^q -> c * T^q, so T -> c^(1/q) * T; the sup norm is unchanged
    const double t11 = path_distance(full, loco, {Exp::one, Exp::one});
    CHECK(path_distance(fs, ls, {Exp::one, Exp::one}) == doctest::Approx(c * t11));
    const double t22 = path_distance(full, loco, {Exp::two, Exp::two});
    CHECK(path_distance(fs, ls, {Exp::two, Exp::two}) ==
          doctest::Approx(std::sqrt(c) * t22));
    const double tii = path_distance(full, loco, {Exp::inf, Exp::inf});
    CHECK(path_distance(fs, ls, {Exp::inf, Exp::inf}) == doctest::Approx(tii));
}

TEST_CASE("rank orderings are invariant to the lambda scale") {
    Dataset data = random_instance(40, 8, 3, 0.2);
    const ImportanceReport base = normalized_importance(data, {Exp::one, Exp::one});
    Dataset scaled = data;
    scaled.y *= 4.0;  // scales the whole path, and so every T_j, by the same factor
    const ImportanceReport after = normalized_importance(scaled, {Exp::one, Exp::one});
    CHECK((base.normalized - after.normalized).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("outer-norm monotonicity: T(q,inf) <= T(q,q)") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Dataset data = random_instance(30, 10, 700 + seed, 0.5);
        const SolutionPath full = lasso_path(data);
        const SolutionPath loco = lasso_path(data, {0});
        CHECK(path_distance(full, loco, {Exp::one, Exp::inf}) <=
              path_distance(full, loco, {Exp::one, Exp::one}) + 1e-12);
        CHECK(path_distance(full, loco, {Exp::two, Exp::inf}) <=
              path_distance(full, loco, {Exp::two, Exp::two}) + 1e-12);
    }
}

TEST_CASE("column permutation permutes raw importance") {
    const Dataset data = random_instance(35, 6, 44, 0.1);
    const ImportanceReport base = normalized_importance(data, {Exp::one, Exp::one});

    std::vector<Eigen::Index> perm = {3, 0, 5, 1, 4, 2};
    Dataset shuffled = data;
    for (Eigen::Index j = 0; j < 6; ++j) shuffled.X.col(j) = data.X.col(perm[static_cast<std::size_t>(j)]);
    const ImportanceReport after = normalized_importance(shuffled, {Exp::one, Exp::one});

    for (Eigen::Index j = 0; j < 6; ++j)
        CHECK(after.raw[j] == doctest::Approx(base.raw[perm[static_cast<std::size_t>(j)]]));
}

TEST_CASE("degenerate importance is flagged, not NaN") {
    Dataset data;
    data.X = MatrixXd::Identity(4, 2);
    data.y = VectorXd::Zero(4);
    data.y[3] = 2.0;  // orthogonal to both columns
    const ImportanceReport rep = normalized_importance(data, {Exp::one, Exp::one});
    CHECK(rep.degenerate);
    CHECK(rep.normalized.isZero());
    CHECK(rep.raw.isZero());
}

TEST_CASE("null statistic vanishes when the hypothesis is exactly true (noiseless)") {
    VectorXd beta(4);
    beta << 1.5, 0.0, -2.0, 0.0;
    const Dataset data = testsupport::orthonormal_instance(20, 4, 8, beta, 0.0);

    Hypothesis h;
    h.constrained = {1, 3};
    h.values = VectorXd::Zero(2);
    // constraining two truly-zero coordinates to zero leaves the path alone
    CHECK(null_statistic(data, h, {Exp::one, Exp::one}) < 1e-12);

    Hypothesis wrong;
    wrong.constrained = {0};
    wrong.values = VectorXd::Zero(1);
    CHECK(null_statistic(data, wrong, {Exp::one, Exp::one}) > 0.1);
}

TEST_CASE("parallel importance equals serial importance exactly") {
    const Dataset data = random_instance(40, 16, 202, 0.4);
    const ImportanceReport serial = normalized_importance(data, {Exp::two, Exp::two}, Exec::serial);
    const ImportanceReport parallel =
        normalized_importance(data, {Exp::two, Exp::two}, Exec::parallel);
    CHECK((serial.raw - parallel.raw).cwiseAbs().maxCoeff() == 0.0);
}

TEST_SUITE_END();
