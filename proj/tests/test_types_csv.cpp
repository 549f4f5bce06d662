#include "locopath/csv.hpp"
#include "locopath/types.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace locopath;

TEST_SUITE_BEGIN("types");

TEST_CASE("dataset validation rejects malformed inputs") {
    Dataset d;
    d.X = MatrixXd::Random(5, 3);
    d.y = VectorXd::Random(5);
    CHECK_NOTHROW(validate(d));

    Dataset bad = d;
    bad.y = VectorXd::Random(4);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = d;
    bad.X(2, 1) = std::nan("");
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = d;
    bad.names = {"a", "b"};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = d;
    bad.X.resize(1, 3);
    bad.y.resize(1);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("preprocess centers and standardizes") {
    Dataset d;
    d.X = MatrixXd::Random(40, 4) * 3.0;
    d.X.col(2).array() += 10.0;
    d.y = VectorXd::Random(40).array() + 5.0;

    const Dataset c = preprocess(d, true, true);
    CHECK(std::abs(c.y.mean()) < 1e-12);
    for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(std::abs(c.X.col(j).mean()) < 1e-12);
        const double sd = std::sqrt(c.X.col(j).squaredNorm() / 40.0);
        CHECK(sd == doctest::Approx(1.0).epsilon(1e-10));
    }

    // constant column survives standardization untouched
    Dataset k = d;
    k.X.col(1).setConstant(2.0);
    const Dataset ks = preprocess(k, false, true);
    CHECK(ks.X.col(1).isApproxToConstant(2.0));
}

TEST_CASE("hypothesis validation") {
    Hypothesis h;
    h.constrained = {0, 3};
    h.values = VectorXd::Zero(2);
    CHECK_NOTHROW(validate(h, 5));
    CHECK_THROWS_AS(validate(h, 3), std::invalid_argument);  // index 3 out of range

    Hypothesis dup;
    dup.constrained = {1, 1};
    dup.values = VectorXd::Zero(2);
    CHECK_THROWS_AS(validate(dup, 5), std::invalid_argument);

    Hypothesis empty;
    CHECK_THROWS_AS(validate(empty, 5), std::invalid_argument);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("csv");

TEST_CASE("round trip preserves values and names") {
    Dataset d;
    d.X = MatrixXd::Random(6, 3);
    d.y = VectorXd::Random(6);
    d.names = {"alpha", "beta", "gamma"};

    std::ostringstream out;
    write_csv(out, d, "resp");
    std::istringstream in(out.str());
    const Dataset back = ingest_csv_stream(in, "resp", "mem");

    CHECK(back.names == d.names);
    CHECK((back.X - d.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.y - d.y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("response column may sit anywhere; quoting and CRLF handled") {
    std::istringstream in("a,\"y\",\"b,c\"\r\n1,2,3\r\n4,5,6\r\n");
    const Dataset d = ingest_csv_stream(in, "y", "mem");
    REQUIRE(d.p() == 2);
    CHECK(d.names[0] == "a");
    CHECK(d.names[1] == "b,c");
    CHECK(d.y[0] == 2.0);
    CHECK(d.y[1] == 5.0);
    CHECK(d.X(1, 0) == 4.0);
    CHECK(d.X(1, 1) == 6.0);
}

TEST_CASE("parse errors carry row and column context") {
    std::istringstream bad("x,y\n1,2\n1,oops\n");
    try {
        ingest_csv_stream(bad, "y", "mem");
        FAIL("expected throw");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("oops") != std::string::npos);
        CHECK(msg.find("column 'y'") != std::string::npos);
        CHECK(msg.find("row 2") != std::string::npos);
    }

    std::istringstream missing("a,b\n1,2\n3,4\n");
    CHECK_THROWS_WITH_AS(ingest_csv_stream(missing, "y", "mem"),
                         doctest::Contains("response column 'y' not found"), std::runtime_error);

    std::istringstream ragged("x,y\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(ingest_csv_stream(ragged, "y", "mem"),
                         doctest::Contains("expected 2 fields"), std::runtime_error);

    std::istringstream dup("y,y\n1,2\n3,4\n");
    CHECK_THROWS_WITH_AS(ingest_csv_stream(dup, "y", "mem"),
                         doctest::Contains("duplicate response"), std::runtime_error);

    std::istringstream tiny("x,y\n1,2\n");
    CHECK_THROWS_WITH_AS(ingest_csv_stream(tiny, "y", "mem"),
                         doctest::Contains("at least 2 data rows"), std::runtime_error);
}

TEST_SUITE_END();
