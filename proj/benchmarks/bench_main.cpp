// Timing comparison of the serial and OpenMP execution modes for the
// embarrassingly parallel kernels, plus a bit-identity check between them.

#include "locopath/inference.hpp"
#include "locopath/path_metric.hpp"
#include "locopath/rng.hpp"
#include "locopath/screening.hpp"
#include "locopath/types.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace locopath;

namespace {

Dataset make_data(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    rng::Stream stream(seed);
    Dataset data;
    data.X.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = stream.normal();
    VectorXd beta = VectorXd::Zero(p);
    beta.head(4).setConstant(1.0);
    data.y = data.X * beta;
    for (Eigen::Index i = 0; i < n; ++i) data.y[i] += stream.normal();
    data.names = default_names(p);
    return data;
}

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-24s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   max|diff| %g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; parallel mode falls back to serial\n");
#endif

    {
        const Dataset data = make_data(150, 120, 1);
        ImportanceReport s, p;
        const double ts = time_ms([&] { s = normalized_importance(data, {Exp::one, Exp::one}, Exec::serial); });
        const double tp = time_ms([&] { p = normalized_importance(data, {Exp::one, Exp::one}, Exec::parallel); });
        report("importance (150x120)", ts, tp, (s.raw - p.raw).cwiseAbs().maxCoeff());
    }

    {
        const Dataset data = make_data(120, 100, 2);
        const ScreeningReport s = [&] {
            ScreeningReport r;
            const double t = time_ms([&] { r = screen(data, {Exp::two, Exp::two}, ScreenRule::topk(20), Exec::serial); });
            std::printf("%-24s serial %8.1f ms   ", "screen (120x100)", t);
            return r;
        }();
        ScreeningReport p;
        const double tp = time_ms([&] { p = screen(data, {Exp::two, Exp::two}, ScreenRule::topk(20), Exec::parallel); });
        std::printf("parallel %8.1f ms   max|diff| %g\n", tp,
                    (s.stats - p.stats).cwiseAbs().maxCoeff());
    }

    {
        const Dataset data = make_data(100, 60, 3);
        Hypothesis h;
        h.constrained = {0};
        h.values = VectorXd::Zero(1);
        BootstrapConfig cfg;
        cfg.B = 200;
        cfg.seed = 7;
        TestOutcome s, p;
        const double ts = time_ms([&] { s = bootstrap_test(data, h, {Exp::one, Exp::one}, cfg); });
        cfg.exec = Exec::parallel;
        const double tp = time_ms([&] { p = bootstrap_test(data, h, {Exp::one, Exp::one}, cfg); });
        report("bootstrap B=200 (100x60)", ts, tp, std::abs(s.pvalue - p.pvalue));
    }
    return 0;
}
