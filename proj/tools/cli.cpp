#include "cli.hpp"

#include "locopath/csv.hpp"
#include "locopath/inference.hpp"
#include "locopath/path_metric.hpp"
#include "locopath/rng.hpp"
#include "locopath/screening.hpp"
#include "locopath/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace locopath::cli {

namespace {

using json = nlohmann::ordered_json;

Exp parse_exp(const std::string& s) {
    if (s == "1") return Exp::one;
    if (s == "2") return Exp::two;
    if (s == "inf") return Exp::inf;
    throw CLI::ValidationError("norm exponent must be one of 1, 2, inf");
}

// "1=1,11=0,12=0" -> Hypothesis with 0-based indices
Hypothesis parse_hypothesis(const std::string& text) {
    Hypothesis h;
    std::vector<double> values;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= pair.size())
            throw CLI::ValidationError("--null", "malformed pair '" + pair +
                                                     "' (expected index=value)");
        std::size_t used = 0;
        long idx = 0;
        double val = 0.0;
        try {
            idx = std::stol(pair.substr(0, eq), &used);
            if (used != eq) throw std::invalid_argument("trailing");
            val = std::stod(pair.substr(eq + 1), &used);
            if (used != pair.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw CLI::ValidationError("--null", "malformed pair '" + pair + "'");
        }
        if (idx < 1) throw CLI::ValidationError("--null", "indices are 1-based");
        h.constrained.push_back(static_cast<Eigen::Index>(idx - 1));
        values.push_back(val);
    }
    if (h.constrained.empty()) throw CLI::ValidationError("--null", "empty hypothesis");
    h.values = Eigen::Map<VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return h;
}

// "2=1,3=1" -> dense beta of length p (1-based sparse syntax)
VectorXd parse_beta(const std::string& text, Eigen::Index p) {
    VectorXd beta = VectorXd::Zero(p);
    if (text.empty()) return beta;
    const Hypothesis sparse = parse_hypothesis(text);
    for (std::size_t k = 0; k < sparse.constrained.size(); ++k) {
        if (sparse.constrained[k] >= p)
            throw CLI::ValidationError("--beta", "index exceeds p");
        beta[sparse.constrained[k]] = sparse.values[static_cast<Eigen::Index>(k)];
    }
    return beta;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw CLI::ValidationError("--beta1-grid", "malformed value '" + tok + "'");
        }
    }
    if (grid.empty()) throw CLI::ValidationError("--beta1-grid", "empty grid");
    return grid;
}

std::string fmt(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

json hypothesis_json(const Hypothesis& h) {
    json arr = json::array();
    for (std::size_t k = 0; k < h.constrained.size(); ++k) {
        arr.push_back({{"index", static_cast<long long>(h.constrained[k] + 1)},
                       {"value", h.values[static_cast<Eigen::Index>(k)]}});
    }
    return arr;
}

void emit(std::ostream& out, const std::string& text_body, const json& record,
          const std::string& format, const std::string& output_path) {
    if (format == "json") {
        out << record.dump(2) << '\n';
    } else {
        out << text_body;
    }
    if (!output_path.empty()) {
        std::ofstream f(output_path);
        if (!f) throw std::runtime_error("cannot open output file '" + output_path + "'");
        f << record.dump(2) << '\n';
    }
}

struct CommonOpts {
    std::string input;
    std::string response = "y";
    std::string s = "1", t = "1";
    std::string format = "text";
    std::string output;
    bool center = false;
    bool standardize = false;
    std::uint64_t seed = 0;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input) {
    if (needs_input) {
        cmd->add_option("input", o.input, "CSV file with a header row")->required();
        cmd->add_option("--response", o.response, "response column name (default y)");
        cmd->add_flag("--center", o.center, "center y and the columns of X");
        cmd->add_flag("--standardize", o.standardize, "scale columns of X to unit sd");
    }
    cmd->add_option("--s", o.s, "inner norm exponent: 1, 2, inf")
        ->check(CLI::IsMember({"1", "2", "inf"}));
    cmd->add_option("--t", o.t, "outer norm exponent: 1, 2, inf")
        ->check(CLI::IsMember({"1", "2", "inf"}));
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--output", o.output, "also write the JSON record to this file");
    cmd->add_option("--threads", o.threads, "worker threads (0 = library default)");
}

Dataset load(const CommonOpts& o) {
    Dataset data = ingest_csv(o.input, o.response);
    if (o.center || o.standardize) data = preprocess(std::move(data), o.center, o.standardize);
    return data;
}

Exec pick_exec(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    return Exec::parallel;
#else
    (void)threads;
    return Exec::serial;
#endif
}

std::string name_of(const Dataset& data, Eigen::Index j) {
    return data.names.empty() ? "x" + std::to_string(j + 1)
                              : data.names[static_cast<std::size_t>(j)];
}

int cmd_importance(const CommonOpts& o, int M, double level, bool want_intervals,
                   bool want_pvalues, int B, double alpha, int folds, std::ostream& out) {
    const Dataset data = load(o);
    const NormSpec spec{parse_exp(o.s), parse_exp(o.t)};
    const Exec exec = pick_exec(o.threads);

    ImportanceReport rep =
        want_intervals
            ? importance_with_intervals(data, spec, M, level, rng::substream_seed(o.seed, 1), exec)
            : normalized_importance(data, spec, exec);

    VectorXd pvals;
    if (want_pvalues) {
        pvals.resize(data.p());
        BootstrapConfig cfg;
        cfg.B = B;
        cfg.alpha = alpha;
        cfg.folds = folds;
        cfg.exec = exec;
        for (Eigen::Index j = 0; j < data.p(); ++j) {
            cfg.seed = rng::substream_seed(rng::substream_seed(o.seed, 2),
                                           static_cast<std::uint64_t>(j));
            pvals[j] = single_coefficient_test(data, j, spec, cfg).pvalue;
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.p()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (rep.raw[a] != rep.raw[b]) return rep.raw[a] > rep.raw[b];
        return a < b;
    });

    json rec;
    rec["command"] = "importance";
    rec["spec"] = {{"s", o.s}, {"t", o.t}};
    rec["n"] = static_cast<long long>(data.n());
    rec["p"] = static_cast<long long>(data.p());
    rec["seed"] = o.seed;
    rec["degenerate"] = rep.degenerate;
    json rows = json::array();

    std::ostringstream text;
    text << "variable importance (s=" << o.s << ", t=" << o.t << ")\n";
    text << "  rank  name                    raw       percent";
    if (want_intervals) text << "   lo%      hi%";
    if (want_pvalues) text << "   pvalue";
    text << '\n';
    int rank = 1;
    for (Eigen::Index j : order) {
        json row;
        row["name"] = name_of(data, j);
        row["raw"] = rep.raw[j];
        row["normalized"] = rep.normalized[j];
        char line[256];
        std::snprintf(line, sizeof(line), "  %4d  %-20s %9.4g  %7.1f", rank,
                      name_of(data, j).c_str(), rep.raw[j], 100.0 * rep.normalized[j]);
        text << line;
        if (want_intervals) {
            const auto [lo, hi] = rep.intervals[static_cast<std::size_t>(j)];
            row["lo"] = lo;
            row["hi"] = hi;
            std::snprintf(line, sizeof(line), "  %6.1f  %6.1f", 100.0 * lo, 100.0 * hi);
            text << line;
        }
        if (want_pvalues) {
            row["pvalue"] = pvals[j];
            std::snprintf(line, sizeof(line), "  %7.4f", pvals[j]);
            text << line;
        }
        text << '\n';
        rows.push_back(row);
        ++rank;
    }
    rec["rows"] = rows;
    emit(out, text.str(), rec, o.format, o.output);
    return 0;
}

int cmd_test(const CommonOpts& o, const std::string& null_text, int B, double alpha, int folds,
             const std::string& initial, std::ostream& out) {
    const Dataset data = load(o);
    const NormSpec spec{parse_exp(o.s), parse_exp(o.t)};
    const Hypothesis h = parse_hypothesis(null_text);

    BootstrapConfig cfg;
    cfg.B = B;
    cfg.alpha = alpha;
    cfg.folds = folds;
    cfg.seed = o.seed;
    cfg.initial = initial == "ls" ? Initial::least_squares : Initial::adaptive_lasso;
    cfg.exec = pick_exec(o.threads);
    const TestOutcome res = bootstrap_test(data, h, spec, cfg);

    json rec;
    rec["command"] = "test";
    rec["hypothesis"] = hypothesis_json(h);
    rec["spec"] = {{"s", o.s}, {"t", o.t}};
    rec["B"] = B;
    rec["alpha"] = alpha;
    rec["seed"] = o.seed;
    rec["statistic"] = res.statistic;
    rec["critical"] = res.critical;
    rec["pvalue"] = res.pvalue;
    rec["reject"] = res.reject;

    std::ostringstream text;
    text << "bootstrap test of H0:";
    for (std::size_t k = 0; k < h.constrained.size(); ++k) {
        text << (k ? ", " : " ") << "beta_" << (h.constrained[k] + 1) << " = "
             << fmt(h.values[static_cast<Eigen::Index>(k)]);
    }
    text << "  (s=" << o.s << ", t=" << o.t << ", B=" << B << ", alpha=" << fmt(alpha) << ")\n";
    text << "  statistic  " << fmt(res.statistic) << '\n';
    text << "  critical   " << fmt(res.critical) << '\n';
    text << "  pvalue     " << fmt(res.pvalue) << '\n';
    text << "  decision   " << (res.reject ? "reject" : "fail to reject") << '\n';
    emit(out, text.str(), rec, o.format, o.output);
    return 0;
}

int cmd_screen(const CommonOpts& o, int topk, double epsilon, bool has_topk, std::ostream& out) {
    const Dataset data = load(o);
    const NormSpec spec{parse_exp(o.s), parse_exp(o.t)};
    const ScreenRule rule = has_topk ? ScreenRule::topk(topk) : ScreenRule::threshold(epsilon);
    const ScreeningReport rep = screen(data, spec, rule, pick_exec(o.threads));

    json rec;
    rec["command"] = "screen";
    rec["spec"] = {{"s", o.s}, {"t", o.t}};
    if (has_topk) {
        rec["rule"] = {{"kind", "topk"}, {"K", topk}};
    } else {
        rec["rule"] = {{"kind", "threshold"}, {"epsilon", epsilon}};
    }
    json kept = json::array();
    for (Eigen::Index j : rep.kept) {
        kept.push_back({{"name", name_of(data, j)},
                        {"index", static_cast<long long>(j + 1)},
                        {"stat", rep.stats[j]}});
    }
    rec["kept"] = kept;

    std::ostringstream text;
    text << "screening kept " << rep.kept.size() << " of " << data.p() << " variables\n";
    text << "  rank  name                    stat\n";
    int rank = 1;
    for (Eigen::Index j : rep.kept) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %4d  %-20s %9.4g\n", rank, name_of(data, j).c_str(),
                      rep.stats[j]);
        text << line;
        ++rank;
    }
    emit(out, text.str(), rec, o.format, o.output);
    return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& experiment, Eigen::Index n,
                 Eigen::Index p, const std::string& beta_text, double sigma,
                 const std::string& cov_name, double rho, int reps, int B, double alpha, int folds,
                 const std::string& null_text, const std::string& grid_text, int topk,
                 const std::string& records_path, std::ostream& out) {
    std::ofstream records;
    if (!records_path.empty()) {
        records.open(records_path);
        if (!records)
            throw std::runtime_error("cannot open records file '" + records_path + "'");
        records.precision(17);
        records << "beta1,rep,statistic,pvalue\n";
    }
    auto dump_records = [&](double b1, const sim::SimResult& r) {
        if (!records.is_open()) return;
        for (std::size_t i = 0; i < r.records.size(); ++i)
            records << b1 << ',' << i << ',' << r.records[i].statistic << ','
                    << r.records[i].pvalue << '\n';
    };
    sim::SimDesign design;
    design.n = n;
    design.p = p;
    design.beta = parse_beta(beta_text, p);
    design.sigma = sigma;
    design.reps = reps;
    design.seed = o.seed;
    if (cov_name == "identity") {
        design.cov = sim::Covariance::identity();
    } else if (cov_name == "ar1") {
        design.cov = sim::Covariance::ar1(rho);
    } else {
        design.cov = sim::Covariance::equicorr(rho);
    }

    const NormSpec spec{parse_exp(o.s), parse_exp(o.t)};
    const Exec exec = pick_exec(o.threads);

    json rec;
    rec["command"] = "simulate";
    rec["experiment"] = experiment;
    rec["design"] = {{"n", static_cast<long long>(n)},   {"p", static_cast<long long>(p)},
                     {"beta", beta_text},                {"sigma", sigma},
                     {"cov", cov_name},                  {"rho", rho},
                     {"reps", reps},                     {"seed", o.seed}};
    rec["spec"] = {{"s", o.s}, {"t", o.t}};

    std::ostringstream text;
    auto cell_json = [](const sim::SimResult& r) {
        json c;
        c["rate"] = r.rate;
        c["se"] = r.se;
        c["reps"] = r.reps;
        if (!std::isnan(r.t_rate)) c["t_rate"] = r.t_rate;
        if (!std::isnan(r.f_rate)) c["f_rate"] = r.f_rate;
        if (!std::isnan(r.sis_rate)) c["sis_rate"] = r.sis_rate;
        return c;
    };

    if (experiment == "screening") {
        const sim::SimResult res = sim::experiment_screening(design, spec, ScreenRule::topk(topk), exec);
        rec["rule"] = {{"kind", "topk"}, {"K", topk}};
        rec["result"] = cell_json(res);
        text << "screening containment: rate " << fmt(res.rate) << " (se " << fmt(res.se)
             << "), SIS baseline " << fmt(res.sis_rate) << ", reps " << res.reps << '\n';
    } else {
        if (null_text.empty())
            throw CLI::ValidationError("--null", "size/power experiments need a hypothesis");
        const Hypothesis h = parse_hypothesis(null_text);
        rec["hypothesis"] = hypothesis_json(h);
        rec["B"] = B;
        rec["alpha"] = alpha;
        BootstrapConfig cfg;
        cfg.B = B;
        cfg.alpha = alpha;
        cfg.folds = folds;
        cfg.exec = exec;

        if (experiment == "size") {
            const sim::SimResult res = sim::experiment_size(design, h, spec, cfg);
            dump_records(design.beta.size() ? design.beta[0] : 0.0, res);
            rec["result"] = cell_json(res);
            text << "empirical size: " << fmt(res.rate) << " (se " << fmt(res.se) << ") over "
                 << res.reps << " replicates\n";
            if (!std::isnan(res.t_rate)) text << "  t-test baseline: " << fmt(res.t_rate) << '\n';
            if (!std::isnan(res.f_rate)) text << "  F-test baseline: " << fmt(res.f_rate) << '\n';
        } else {  // power
            const std::vector<double> grid =
                grid_text.empty() ? std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0}
                                  : parse_grid(grid_text);
            const auto cells = sim::experiment_power(design, h, spec, cfg, grid);
            json arr = json::array();
            text << "empirical power along beta1 grid:\n";
            text << "  beta1   rate     se";
            const bool has_t = !cells.empty() && !std::isnan(cells.front().second.t_rate);
            const bool has_f = !cells.empty() && !std::isnan(cells.front().second.f_rate);
            if (has_t) text << "       t-test";
            if (has_f) text << "   F-test";
            text << '\n';
            for (const auto& [b1, res] : cells) {
                dump_records(b1, res);
                json c = cell_json(res);
                c["beta1"] = b1;
                arr.push_back(c);
                char line[160];
                std::snprintf(line, sizeof(line), "  %5.2f  %6.3f  %6.3f", b1, res.rate, res.se);
                text << line;
                if (has_t) {
                    std::snprintf(line, sizeof(line), "   %6.3f", res.t_rate);
                    text << line;
                }
                if (has_f) {
                    std::snprintf(line, sizeof(line), "   %6.3f", res.f_rate);
                    text << line;
                }
                text << '\n';
            }
            rec["cells"] = arr;
        }
    }
    emit(out, text.str(), rec, o.format, o.output);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"LOCO LASSO-path variable importance, screening and bootstrap tests"};
    app.require_subcommand(1);

    CommonOpts io, to, so, mo;
    int M = 100, B = 500, folds = 10, topk = 1, sim_topk = 19;
    double level = 0.95, alpha = 0.05, epsilon = 0.0;
    bool want_intervals = false, want_pvalues = false;
    std::string null_text, initial = "adaptive", experiment = "size";
    std::string beta_text, cov_name = "identity", grid_text, records_path;
    double sigma = 1.0, rho = 0.0;
    long long sim_n = 100, sim_p = 80;
    int reps = 200, sim_B = 200;

    CLI::App* imp = app.add_subcommand("importance", "normalized LOCO importance for every covariate");
    add_common(imp, io, true);
    imp->add_flag("--intervals", want_intervals, "add permutation intervals");
    imp->add_option("--permutations", M, "permutation count for the intervals")->check(CLI::PositiveNumber);
    imp->add_option("--level", level, "interval coverage level");
    imp->add_flag("--pvalues", want_pvalues, "add a bootstrap p-value per covariate");
    imp->add_option("--B", B, "bootstrap replicates for --pvalues")->check(CLI::PositiveNumber);
    imp->add_option("--alpha", alpha, "significance level");
    imp->add_option("--folds", folds, "CV folds for the initial estimator");

    CLI::App* tst = app.add_subcommand("test", "bootstrap-calibrated test of a linear-null hypothesis");
    add_common(tst, to, true);
    tst->add_option("--null", null_text, "hypothesis, e.g. \"1=1,11=0,12=0\" (1-based)")->required();
    tst->add_option("--B", B, "bootstrap replicates")->check(CLI::PositiveNumber);
    tst->add_option("--alpha", alpha, "significance level");
    tst->add_option("--folds", folds, "CV folds for the initial estimator");
    tst->add_option("--initial", initial, "initial estimator")
        ->check(CLI::IsMember({"adaptive", "ls"}));

    CLI::App* scr = app.add_subcommand("screen", "keep covariates by LOCO statistic");
    add_common(scr, so, true);
    CLI::Option* opt_topk = scr->add_option("--topk", topk, "keep the top K covariates")
                                ->check(CLI::PositiveNumber);
    scr->add_option("--epsilon", epsilon, "keep covariates with statistic > epsilon");

    CLI::App* simc = app.add_subcommand("simulate", "run seeded size/power/screening experiments");
    add_common(simc, mo, false);
    simc->add_option("--experiment", experiment, "experiment kind")
        ->check(CLI::IsMember({"size", "power", "screening"}));
    simc->add_option("--n", sim_n, "rows per replicate")->check(CLI::PositiveNumber);
    simc->add_option("--p", sim_p, "covariates")->check(CLI::PositiveNumber);
    simc->add_option("--beta", beta_text, "true coefficients, e.g. \"2=1,3=1\" (1-based, rest 0)");
    simc->add_option("--sigma", sigma, "noise standard deviation");
    simc->add_option("--cov", cov_name, "covariance family")
        ->check(CLI::IsMember({"identity", "ar1", "equicorr"}));
    simc->add_option("--rho", rho, "correlation parameter");
    simc->add_option("--reps", reps, "Monte-Carlo replicates")->check(CLI::PositiveNumber);
    simc->add_option("--B", sim_B, "bootstrap replicates per test")->check(CLI::PositiveNumber);
    simc->add_option("--alpha", alpha, "significance level");
    simc->add_option("--folds", folds, "CV folds for the initial estimator");
    simc->add_option("--null", null_text, "hypothesis under test (size/power)");
    simc->add_option("--beta1-grid", grid_text, "comma-separated beta1 values (power)");
    simc->add_option("--topk", sim_topk, "screening keep count")->check(CLI::PositiveNumber);
    simc->add_option("--records", records_path, "write per-replicate statistic/pvalue CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (imp->parsed())
            return cmd_importance(io, M, level, want_intervals, want_pvalues, B, alpha, folds, out);
        if (tst->parsed()) return cmd_test(to, null_text, B, alpha, folds, initial, out);
        if (scr->parsed()) return cmd_screen(so, topk, epsilon, static_cast<bool>(*opt_topk), out);
        if (simc->parsed())
            return cmd_simulate(mo, experiment, static_cast<Eigen::Index>(sim_n),
                                static_cast<Eigen::Index>(sim_p), beta_text, sigma, cov_name, rho,
                                reps, sim_B, alpha, folds, null_text, grid_text, sim_topk,
                                records_path, out);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace locopath::cli
