#include "locopath/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace locopath {

namespace {

enum class EventKind { drop, entry };

struct Event {
    double lambda;
    EventKind kind;
    Eigen::Index index;  // column (entry) or active-position (drop)
    double sign;         // entry sign of the correlation
};

// Ordering for event selection: largest lambda first; at a tie (within tol)
// drops beat entries, then lower column index.
struct EventPicker {
    double tol;
    const std::vector<Eigen::Index>* active;
    bool better(const Event& a, const Event& b) const {
        if (a.lambda > b.lambda + tol) return true;
        if (b.lambda > a.lambda + tol) return false;
        if (a.kind != b.kind) return a.kind == EventKind::drop;
        const Eigen::Index ca =
            a.kind == EventKind::drop ? (*active)[static_cast<std::size_t>(a.index)] : a.index;
        const Eigen::Index cb =
            b.kind == EventKind::drop ? (*active)[static_cast<std::size_t>(b.index)] : b.index;
        return ca < cb;
    }
};

}  // namespace

SolutionPath lasso_path(const MatrixXd& X, const VectorXd& y,
                        const std::vector<Eigen::Index>& excluded,
                        const VectorXd* offset, const MatrixXd* gram) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (y.size() != n) throw std::invalid_argument("lasso_path: X/y size mismatch");
    if (offset && offset->size() != n) throw std::invalid_argument("lasso_path: offset size mismatch");
    if (gram && (gram->rows() != p || gram->cols() != p))
        throw std::invalid_argument("lasso_path: gram size mismatch");
    if (!X.allFinite() || !y.allFinite() || (offset && !offset->allFinite()))
        throw std::invalid_argument("lasso_path: non-finite input");

    std::vector<bool> excl(static_cast<std::size_t>(p), false);
    Eigen::Index n_excl = 0;
    for (Eigen::Index j : excluded) {
        if (j < 0 || j >= p) throw std::invalid_argument("lasso_path: excluded index out of range");
        if (!excl[static_cast<std::size_t>(j)]) {
            excl[static_cast<std::size_t>(j)] = true;
            ++n_excl;
        }
    }

    SolutionPath out;
    out.excluded.assign(excluded.begin(), excluded.end());
    std::sort(out.excluded.begin(), out.excluded.end());
    out.excluded.erase(std::unique(out.excluded.begin(), out.excluded.end()), out.excluded.end());

    const VectorXd y_eff = offset ? VectorXd(y - *offset) : y;
    const VectorXd Xty = X.transpose() * y_eff;

    double lambda_max = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (!excl[static_cast<std::size_t>(j)]) lambda_max = std::max(lambda_max, std::abs(Xty[j]));
    }

    std::vector<double> knot_vals;
    std::vector<VectorXd> knot_betas;
    auto push_knot = [&](double lam, const VectorXd& beta) {
        knot_vals.push_back(lam);
        knot_betas.push_back(beta);
    };

    if (lambda_max <= 0.0) {
        // Response orthogonal to every admissible column: path is the single
        // knot at lambda = 0 with beta = 0.
        push_knot(0.0, VectorXd::Zero(p));
    } else {
        const double tie = 1e-12 * lambda_max;
        const Eigen::Index cap = std::min<Eigen::Index>(n - 1, p - n_excl);
        const Eigen::Index bufk = std::max<Eigen::Index>(cap, 1);

        // Active-set state, entry-ordered: signs, X^T y restricted to the
        // active columns, and a Cholesky factor of X_A^T X_A maintained
        // incrementally (append via triangular solve, recompute after drops).
        // Without a precomputed gram the Gram products go through X_A itself;
        // with one they use gathered gram columns GA.
        std::vector<Eigen::Index> active;
        VectorXd sgn(bufk);
        VectorXd XAty(bufk);
        MatrixXd L(bufk, bufk);
        MatrixXd XA;
        MatrixXd GA;
        if (gram) {
            GA.resize(p, bufk);
        } else {
            XA.resize(n, bufk);
        }

        // full correlation vector X^T X_A x for an active-set vector x
        auto corr_all = [&](Eigen::Index k, const VectorXd& x) -> VectorXd {
            if (gram) return GA.leftCols(k) * x;
            return X.transpose() * (XA.leftCols(k) * x);
        };

        auto chol_solve = [&](Eigen::Index k, const VectorXd& rhs) {
            auto Lk = L.topLeftCorner(k, k);
            VectorXd x = Lk.triangularView<Eigen::Lower>().solve(rhs);
            x = Lk.transpose().triangularView<Eigen::Upper>().solve(x);
            // one iterative-refinement pass against the exact Gram
            VectorXd gx = corr_all(k, x);
            VectorXd r = rhs;
            for (Eigen::Index i = 0; i < k; ++i) r[i] -= gx[active[static_cast<std::size_t>(i)]];
            VectorXd d = Lk.triangularView<Eigen::Lower>().solve(r);
            x += Lk.transpose().triangularView<Eigen::Upper>().solve(d);
            return x;
        };

        auto refactor = [&](Eigen::Index k) {
            if (k == 0) return true;
            MatrixXd G(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
                for (Eigen::Index j2 = 0; j2 <= i; ++j2) {
                    const Eigen::Index ci = active[static_cast<std::size_t>(i)];
                    const Eigen::Index cj = active[static_cast<std::size_t>(j2)];
                    G(i, j2) = G(j2, i) = gram ? (*gram)(ci, cj) : X.col(ci).dot(X.col(cj));
                }
            }
            Eigen::LLT<MatrixXd> llt(G);
            if (llt.info() != Eigen::Success) return false;
            L.topLeftCorner(k, k) = llt.matrixL();
            return true;
        };

        double lam_cur = lambda_max;
        push_knot(lambda_max, VectorXd::Zero(p));

        std::vector<Eigen::Index> just_dropped;
        bool done = false;
        // generous safety bound; ordinary paths use far fewer events
        const int max_events = 64 * static_cast<int>(std::max(n, p)) + 64;
        int n_events = 0;

        VectorXd u, v, a(p), b(p);
        std::vector<Event> events;
        events.reserve(static_cast<std::size_t>(2 * p));
        std::vector<bool> in_active(static_cast<std::size_t>(p), false);

        while (!done) {
            if (++n_events > max_events) {  // numerical livelock guard
                out.terminated_early = true;
                break;
            }
            const Eigen::Index k = static_cast<Eigen::Index>(active.size());

            // Segment parametrization beta_A(lam) = u - lam*v; inactive
            // correlations c_j(lam) = a_j + lam*b_j.
            if (k > 0) {
                u = chol_solve(k, XAty.head(k));
                v = chol_solve(k, sgn.head(k));
                a = Xty - corr_all(k, u);
                b = corr_all(k, v);
            } else {
                u.resize(0);
                v.resize(0);
                a = Xty;
                b.setZero();
            }

            auto beta_at = [&](double lam) {
                VectorXd beta = VectorXd::Zero(p);
                for (Eigen::Index i = 0; i < k; ++i)
                    beta[active[static_cast<std::size_t>(i)]] = u[i] - lam * v[i];
                return beta;
            };

            events.clear();
            std::fill(in_active.begin(), in_active.end(), false);
            for (Eigen::Index c : active) in_active[static_cast<std::size_t>(c)] = true;

            for (Eigen::Index i = 0; i < k; ++i) {
                if (v[i] == 0.0) continue;
                const double lam_d = u[i] / v[i];
                if (lam_d > tie && lam_d < lam_cur - tie)
                    events.push_back({lam_d, EventKind::drop, i, 0.0});
            }
            for (Eigen::Index j = 0; j < p; ++j) {
                if (excl[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
                const bool dropped_here =
                    std::find(just_dropped.begin(), just_dropped.end(), j) != just_dropped.end();
                const double roots[2] = {a[j] / (1.0 - b[j]), -a[j] / (1.0 + b[j])};
                const double signs[2] = {1.0, -1.0};
                for (int r = 0; r < 2; ++r) {
                    const double lam_e = roots[r];
                    if (!std::isfinite(lam_e) || lam_e <= tie || lam_e > lam_cur + tie) continue;
                    if (dropped_here && lam_e >= lam_cur - tie) continue;  // no instant re-entry
                    events.push_back({lam_e, EventKind::entry, j, signs[r]});
                }
            }
            just_dropped.clear();

            const EventPicker pick{tie, &active};
            bool skipped_any = false;
            double skip_lam = 0.0;

            for (;;) {
                auto best = events.end();
                for (auto it = events.begin(); it != events.end(); ++it) {
                    if (best == events.end() || pick.better(*it, *best)) best = it;
                }

                if (best == events.end()) {
                    if (skipped_any) {
                        // every remaining step was numerically singular: the
                        // path is only valid down to the largest skipped
                        // event; stop there
                        out.terminated_early = true;
                        if (skip_lam < lam_cur - tie) push_knot(skip_lam, beta_at(skip_lam));
                    } else if (lam_cur > 0.0) {
                        push_knot(0.0, beta_at(0.0));
                    }
                    done = true;
                    break;
                }

                const Event ev = *best;
                const double lam_next = std::min(ev.lambda, lam_cur);
                const bool new_knot = lam_next < lam_cur - tie;

                if (ev.kind == EventKind::entry) {
                    if (k == cap) {
                        // saturation with a pending entry: some inactive
                        // correlation still reaches the boundary
                        out.terminated_early = true;
                        if (new_knot) push_knot(lam_next, beta_at(lam_next));
                        done = true;
                        break;
                    }
                    // rank test for the appended Gram column
                    const double gjj = gram ? (*gram)(ev.index, ev.index) : X.col(ev.index).squaredNorm();
                    VectorXd w(k), gAj(k);
                    if (gram) {
                        for (Eigen::Index i = 0; i < k; ++i) gAj[i] = GA(ev.index, i);
                    } else if (k > 0) {
                        gAj = XA.leftCols(k).transpose() * X.col(ev.index);
                    }
                    double d2 = gjj;
                    if (k > 0) {
                        w = L.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(gAj);
                        d2 -= w.squaredNorm();
                    }
                    if (!(d2 > 1e-10 * gjj)) {
                        skipped_any = true;
                        skip_lam = std::max(skip_lam, lam_next);
                        events.erase(best);
                        continue;
                    }
                    if (new_knot) push_knot(lam_next, beta_at(lam_next));
                    if (gram) {
                        GA.col(k) = gram->col(ev.index);
                    } else {
                        XA.col(k) = X.col(ev.index);
                    }
                    XAty[k] = Xty[ev.index];
                    sgn[k] = ev.sign;
                    if (k > 0) L.row(k).head(k) = w;
                    L(k, k) = std::sqrt(d2);
                    active.push_back(ev.index);
                } else {
                    VectorXd beta = beta_at(lam_next);
                    const Eigen::Index col = active[static_cast<std::size_t>(ev.index)];
                    beta[col] = 0.0;  // exact zero at the crossing
                    if (new_knot) {
                        push_knot(lam_next, beta);
                    } else if (!knot_betas.empty()) {
                        knot_betas.back()[col] = 0.0;
                    }
                    just_dropped.push_back(col);
                    const Eigen::Index pos = ev.index;
                    for (Eigen::Index i = pos; i + 1 < k; ++i) {
                        if (gram) {
                            GA.col(i) = GA.col(i + 1);
                        } else {
                            XA.col(i) = XA.col(i + 1);
                        }
                        XAty[i] = XAty[i + 1];
                        sgn[i] = sgn[i + 1];
                    }
                    active.erase(active.begin() + pos);
                    if (!refactor(k - 1)) {
                        out.terminated_early = true;
                        done = true;
                    }
                }
                lam_cur = lam_next;
                break;
            }
        }
    }

    const Eigen::Index K = static_cast<Eigen::Index>(knot_vals.size());
    out.knots.resize(K);
    out.coefs.resize(p, K);
    for (Eigen::Index c = 0; c < K; ++c) {
        out.knots[c] = knot_vals[static_cast<std::size_t>(c)];
        out.coefs.col(c) = knot_betas[static_cast<std::size_t>(c)];
    }
    return out;
}

}  // namespace locopath
