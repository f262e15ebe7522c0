#pragma once

#include <cstddef>
#include <vector>

#include "qdim/antichain.hpp"
#include "qdim/measure.hpp"

namespace qdim {

// An n-point quantizer for a discrete measure, with its distortion of
// order r (cost = sum of weight * distance^r to the nearest point).
struct Codebook {
    std::vector<double> points;       // sorted
    std::vector<double> cell_masses;  // mass assigned to each point
    double cost = 0.0;
    double r = 0.0;
    bool exact = false;    // DP-optimal vs heuristic
    bool clamped = false;  // n >= atom count, zero-cost codebook of all atoms
};

// Distortion of a codebook: sum_k w_k min_j |x_k - c_j|^r, two-pointer sweep.
double cost(const DiscreteMeasure& m, const std::vector<double>& points, double r);

// Distortion against the codebook extended by the hull boundary: the
// distance becomes min(min_j |x - c_j|, x, 9/2 - x).
double modified_cost(const DiscreteMeasure& m, const std::vector<double>& points,
                     double r);

// Exact optimal n-point quantizer for r in {1, 2}. In one dimension the
// optimal cells are contiguous atom ranges; the layered DP prices a cell in
// O(1) via prefix sums (variance decomposition for r = 2, weighted-median
// partial sums for r = 1) and locates splits by divide and conquer on the
// monotone argmin. When n >= atom count the codebook of all atoms is
// returned with cost 0 and the clamped flag set.
Codebook optimal_quantizer(const DiscreteMeasure& m, std::size_t n, double r);

// V_{k,r} for every k = 1..n_max in one layered DP run (values only).
std::vector<double> quantization_errors(const DiscreteMeasure& m, std::size_t n_max,
                                        double r);

// u_{k,r} for k = 0..n_max: the same DP with the hull boundary {0, 9/2}
// available as free codepoints at the ends.
std::vector<double> modified_quantization_errors(const DiscreteMeasure& m,
                                                 std::size_t n_max, double r);

// Lloyd iteration for arbitrary r >= 1: midpoint Voronoi reassignment
// alternating with the per-cell 1D minimizer (analytic for r in {1,2},
// golden-section otherwise). Cost is nonincreasing across iterations; an
// emptied cell is re-seeded at the mass median of the costliest cell.
Codebook lloyd_refine(const DiscreteMeasure& m, const Codebook& initial, double r,
                      int max_iter = 100, double tol = 1e-12);

// The upper-bound construction: an optimal m_inner-point codebook beta for
// the depth-discretized measure, copied through S_i for every antichain
// member i (dedup). Cost is evaluated against the same measure.
Codebook antichain_codebook(const PotentialContext& ctx, const Antichain& gamma_E,
                            std::size_t m_inner, double r, int depth,
                            std::size_t cap = 10'000'000);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |log n - fit| over the grid
};

// Least squares of log n against -log e.
LogLogFit fit_loglog(const std::vector<std::size_t>& ns, const std::vector<double>& es);

struct DimensionFit {
    std::vector<std::size_t> n_grid;
    std::vector<double> errors_e;  // e_{n,r} = V^{1/r}
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double residual = 0.0;
    // Fixed rule: when the full-grid residual exceeds 0.02, the two smallest
    // n are discarded from the fit (transient regime) and this is set.
    bool transient_discarded = false;
};

// Empirical quantization dimension: V_{n,r} on the grid, e = V^{1/r}, then
// the log-log slope. Requires r in {1,2} and every n < atom count / 4.
DimensionFit estimate_dimension(const DiscreteMeasure& m, double r,
                                const std::vector<std::size_t>& n_grid);

struct ScalingRow {
    std::size_t n = 0;
    double e = 0.0;
    double u = 0.0;
    double n_e_chi = 0.0;    // n e^chi: bounded band when chi is the dimension
    double n_e_below = 0.0;  // n e^{0.9 chi}: upward trend
    double n_e_above = 0.0;  // n e^{1.1 chi}: downward trend
    double n_u_pow = 0.0;    // n u^{0.9 chi / r}: bounded away from 0
};

struct ScalingDiagnostics {
    std::vector<ScalingRow> rows;
    double chi = 0.0;
    double band_ratio = 0.0;  // max/min of the n e^chi column
    double band_limit = 0.0;
    bool flagged = false;
    double spearman_below = 0.0;  // rank trend of the n e^{0.9 chi} column
    double spearman_above = 0.0;
};

ScalingDiagnostics scaling_diagnostics(const DiscreteMeasure& m, const DimensionFit& fit,
                                       double chi, double band_limit = 20.0);

// Spearman rank correlation; ties get average ranks.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace qdim
