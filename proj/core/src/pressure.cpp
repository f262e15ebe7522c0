#include "qdim/pressure.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qdim {

namespace {

constexpr double kLog3 = 1.0986122886681098;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Online log-sum-exp accumulator. Pending-run weights and closed weights can
// differ by factors far beyond double range at depth 2000, so the DP runs
// entirely in the log domain.
struct LogSum {
    double m = kNegInf;
    double s = 0.0;
    void add(double x) {
        if (x == kNegInf) return;
        if (x <= m) {
            s += std::exp(x - m);
        } else {
            s = s * std::exp(m - x) + 1.0;
            m = x;
        }
    }
    double value() const { return m == kNegInf ? kNegInf : m + std::log(s); }
};

double log_add(double a, double b) {
    LogSum acc;
    acc.add(a);
    acc.add(b);
    return acc.value();
}

}  // namespace

std::vector<double> log_partition_sums(const PotentialContext& ctx, double t, int n,
                                       bool hat) {
    if (n < 1) throw std::invalid_argument("partition sums require n >= 1");
    if (t < 0.0) throw std::invalid_argument("partition sums require t >= 0");
    if (hat && !ctx.p().standing_assumption_holds())
        throw std::domain_error("hat partition sums require p3 <= p1");

    const double lp1 = std::log(ctx.p().p1());
    const double lp3 = std::log(ctx.p().p3());

    // lf0[j]: close a run of j ones with a 0 (good block of length j+1),
    // lf3[j]: break it with a 3, lterm[j]: leave it pending at the end.
    std::vector<double> lf0(static_cast<std::size_t>(n) + 1);
    std::vector<double> lf3(static_cast<std::size_t>(n) + 1);
    std::vector<double> lterm(static_cast<std::size_t>(n) + 1);
    lterm[0] = 0.0;
    for (int j = 0; j <= n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        lf0[jj] = t * ctx.log_a_value(jj + 1);
        lf3[jj] = t * (j * lp1 + lp3);
        if (j >= 1) {
            const double log_run = j * lp1;
            lterm[jj] = t * (hat ? std::max(log_run, ctx.log_a_value(jj)) : log_run);
        }
    }

    // State after m letters: la = log weight with last digit 0, lb = last
    // digit 3 (or the start), lrun[s] = log weight of the pending 1-run
    // opened at step s+1 (length m-s). Entries age in place.
    double la = kNegInf, lb = 0.0;
    std::vector<double> lrun;
    lrun.reserve(static_cast<std::size_t>(n));

    std::vector<double> out(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        LogSum to0, to3;
        to0.add(la + lf0[0]);
        to0.add(lb + lf0[0]);
        to3.add(lb + lf3[0]);
        const int prev = m - 1;
        for (int s = 0; s < prev; ++s) {
            const auto jj = static_cast<std::size_t>(prev - s);  // run length
            const double w = lrun[static_cast<std::size_t>(s)];
            to0.add(w + lf0[jj]);
            to3.add(w + lf3[jj]);
        }
        const double opened = log_add(la, lb);
        la = to0.value();
        lb = to3.value();
        lrun.push_back(opened);

        LogSum z;
        z.add(la);
        z.add(lb);
        for (int s = 0; s < m; ++s)
            z.add(lrun[static_cast<std::size_t>(s)] + lterm[static_cast<std::size_t>(m - s)]);
        out[static_cast<std::size_t>(m - 1)] = z.value();
    }
    return out;
}

std::vector<double> log_partition_sums_mirror(const PotentialContext& ctx, double t,
                                              int n) {
    if (n < 1) throw std::invalid_argument("partition sums require n >= 1");
    if (t < 0.0) throw std::invalid_argument("partition sums require t >= 0");

    // Mirror automaton over U_n: blocks are (0, 3^j) with the same a-weights.
    const double lp1 = std::log(ctx.p().p1());
    const double lp3 = std::log(ctx.p().p3());
    std::vector<double> lf0(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        lf0[static_cast<std::size_t>(j)] =
            t * ctx.log_a_value(static_cast<std::size_t>(j) + 1);

    // ln1 = log weight with last digit 1, ln3 = last digit 3 (or the start),
    // lblk[s] = pending (0,3^j) block opened by the 0 at step s+1, holding
    // j = m-1-s threes after step m.
    double ln1 = kNegInf, ln3 = 0.0;
    std::vector<double> lblk;
    lblk.reserve(static_cast<std::size_t>(n));

    std::vector<double> out(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        LogSum close1, close0;
        const int prev = m - 1;
        for (int s = 0; s < prev; ++s) {
            const auto jj = static_cast<std::size_t>(prev - 1 - s);
            const double w = lblk[static_cast<std::size_t>(s)];
            close1.add(w + lf0[jj] + t * lp1);
            close0.add(w + lf0[jj]);
        }
        const double stay = log_add(ln1, ln3);
        const double new_n1 = log_add(stay + t * lp1, close1.value());
        const double new_n3 = stay + t * lp3;
        const double new_blk = log_add(ln3, close0.value());
        ln1 = new_n1;
        ln3 = new_n3;
        lblk.push_back(new_blk);

        LogSum z;
        z.add(ln1);
        z.add(ln3);
        for (int s = 0; s < m; ++s) {
            const auto jj = static_cast<std::size_t>(m - 1 - s);
            z.add(lblk[static_cast<std::size_t>(s)] + lf0[jj]);
        }
        out[static_cast<std::size_t>(m - 1)] = z.value();
    }
    return out;
}

double partition_sum(const PotentialContext& ctx, double t, int n, bool hat) {
    return log_partition_sums(ctx, t, n, hat).back();
}

PressureEstimate pressure(const PotentialContext& ctx, double t, int depth, bool hat,
                          PressureMethod method) {
    if (depth < 8) throw std::invalid_argument("pressure requires depth >= 8");
    const std::vector<double> logz = log_partition_sums(ctx, t, depth, hat);
    auto at = [&](int m) { return logz[static_cast<std::size_t>(m - 1)]; };
    const int half = depth / 2;
    PressureEstimate est;
    est.t = t;
    est.depth = depth;
    est.method = method;
    if (method == PressureMethod::ratio) {
        est.value = at(depth) - at(depth - 1);
        est.residual = std::abs(est.value - (at(half) - at(half - 1)));
    } else {
        est.value = at(depth) / depth;
        est.residual = std::abs(est.value - at(half) / half);
    }
    return est;
}

double pressure_P(const PotentialContext& ctx, double t, double r, int depth) {
    return pressure(ctx, t, depth, /*hat=*/false).value - r * t * kLog3;
}

DimensionResult solve_t0(const PotentialContext& ctx, double r, int depth, double tol) {
    if (r <= 0.0) throw std::invalid_argument("solve_t0 requires r > 0");
    if (tol <= 0.0) throw std::invalid_argument("solve_t0 requires tol > 0");

    auto P = [&](double t) { return pressure_P(ctx, t, r, depth); };

    double lo = 0.0, hi = 1.0;
    if (!(P(lo) > 0.0) || !(P(hi) < 0.0))
        throw std::runtime_error("solve_t0: no sign change of P on [0,1]");

    for (int iter = 0; iter < 60 && (hi - lo) > 1e-18; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (P(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t0 = 0.5 * (lo + hi);

    const double delta = 10.0 * tol;
    if (t0 - delta > 0.0 && !(P(t0 - delta) > 0.0))
        throw std::runtime_error("solve_t0: P not positive left of the root");
    if (t0 + delta < 1.0 && !(P(t0 + delta) < 0.0))
        throw std::runtime_error("solve_t0: P not negative right of the root");

    DimensionResult res;
    res.r = r;
    res.t0 = t0;
    res.chi_r = chi_from_t0(t0, r);
    res.p_at_t0 = pressure(ctx, t0, depth, /*hat=*/false).value;
    res.depth = depth;
    res.tolerance = tol;
    return res;
}

double chi_from_t0(double t0, double r) {
    if (t0 >= 1.0 - 1e-9) throw std::domain_error("degenerate root: t0 too close to 1");
    return t0 * r / (1.0 - t0);
}

double t0_from_chi(double chi, double r) { return chi / (r + chi); }

double chi_r(const DimensionResult& result) { return chi_from_t0(result.t0, result.r); }

double hausdorff_dim(int depth) {
    // t = 0 kills the weights, so any probability vector gives #T_n.
    PotentialContext ctx(ProbabilityVector(1.0 / 3, 1.0 / 3, 1.0 / 3));
    return pressure(ctx, 0.0, depth, /*hat=*/false).value / kLog3;
}

std::vector<PressureCurveRow> pressure_curve(const PotentialContext& ctx,
                                             const std::vector<double>& t_grid, double r,
                                             int depth) {
    std::vector<PressureCurveRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < 0.0 || t > 1.5)
            throw std::invalid_argument("pressure_curve grid must lie in [0, 1.5]");
        PressureCurveRow row;
        row.t = t;
        row.p_t = pressure(ctx, t, depth, /*hat=*/false).value;
        row.rt_log3 = r * t * kLog3;
        row.P_t = row.p_t - row.rt_log3;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qdim
