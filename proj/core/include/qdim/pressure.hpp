#pragma once

#include <vector>

#include "qdim/potential.hpp"

namespace qdim {

enum class PressureMethod { ratio, slope };

struct PressureEstimate {
    double t = 0.0;
    int depth = 0;
    double value = 0.0;  // nats per symbol
    PressureMethod method = PressureMethod::ratio;
    // |estimate(depth) - estimate(depth/2)|, a convergence diagnostic.
    double residual = 0.0;
};

struct DimensionResult {
    double r = 0.0;
    double t0 = 0.0;
    double chi_r = 0.0;
    double p_at_t0 = 0.0;
    int depth = 0;
    double tolerance = 0.0;
};

namespace defaults {
inline constexpr int kSolveDepth = 400;
inline constexpr int kHausdorffDepth = 48;
inline constexpr double kSolveTol = 1e-6;
}  // namespace defaults

// log Z_n(t) where Z_n(t) = sum over T_n of psi(i)^t (or psi_hat^t).
//
// Computed by a run-length dynamic program, never by enumeration: scanning
// left to right, the state is the length j of the trailing run of 1s (its
// letter weights pending) plus, at j = 0, whether the last digit was 0.
// Appending 0 closes a good block of length j+1 and prices it a_{j+1}^t;
// appending 3 is barred after a 0 and prices the pending run p1^{jt} p3^t;
// a run pending at length n prices p1^{jt}, or max(p1^j, a_j)^t in the hat
// variant, which realizes psi_hat = psi(star(i)). Accumulation is in a
// scaled linear domain with per-step renormalization, so depth 2000 does
// not underflow. O(n^2) time, O(n) space.
double partition_sum(const PotentialContext& ctx, double t, int n, bool hat);

// log Z_m for every m = 1..n in one pass.
std::vector<double> log_partition_sums(const PotentialContext& ctx, double t, int n,
                                       bool hat);

// The same partition sums evaluated over the mirror branch U_n (forbidden
// factor (1,0), blocks (0,3^m)). Both branches index the identical family
// of overlap classes, so this must agree with the T_n evaluator; it exists
// as a cross-check and for p3 > p1 inputs.
std::vector<double> log_partition_sums_mirror(const PotentialContext& ctx, double t,
                                              int n);

// Pressure p(t) (hat=false) or the psi_hat variant. The ratio method uses
// the difference quotient log Z_depth - log Z_{depth-1}, which converges
// geometrically; the slope method uses log Z_depth / depth.
PressureEstimate pressure(const PotentialContext& ctx, double t, int depth, bool hat,
                          PressureMethod method = PressureMethod::ratio);

// P(t) = p(t) - r t log 3, the pressure of (psi(i) 3^{-|i| r})^t.
double pressure_P(const PotentialContext& ctx, double t, double r, int depth);

// Bisection for the unique root t0 of P on (0,1); chi_r = t0 r / (1 - t0).
// The sign change P(0) > 0 > P(1) is verified, as is the sign pattern at
// t0 +- 10 tol.
DimensionResult solve_t0(const PotentialContext& ctx, double r,
                         int depth = defaults::kSolveDepth,
                         double tol = defaults::kSolveTol);

double chi_from_t0(double t0, double r);
double t0_from_chi(double chi, double r);
// chi recomputed from the result's (t0, r); throws on a degenerate root.
double chi_r(const DimensionResult& result);

// p(0) / log 3 = dim_H of the attractor, 0.876036... (the growth rate of
// #T_n divided by log 3); independent of the probability vector.
double hausdorff_dim(int depth = defaults::kHausdorffDepth);

struct PressureCurveRow {
    double t = 0.0;
    double p_t = 0.0;
    double P_t = 0.0;
    double rt_log3 = 0.0;
};

// Rows (t, p(t), P(t), r t log 3) on a grid in [0, 1.5].
std::vector<PressureCurveRow> pressure_curve(const PotentialContext& ctx,
                                             const std::vector<double>& t_grid, double r,
                                             int depth);

}  // namespace qdim
