#include "qdim/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qdim/symbolic.hpp"

namespace qdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_r(double x, double r) {
    if (r == 2.0) return x * x;
    if (r == 1.0) return x;
    return std::pow(x, r);
}

// Prefix sums over the atoms; cell costs for contiguous ranges in O(1)
// (r = 2) or O(log) (r = 1, binary search for the weighted median).
class CellCost {
public:
    CellCost(const DiscreteMeasure& m, double r) : m_(&m), r_(r) {
        const std::size_t n = m.size();
        w_.assign(n + 1, 0.0);
        wx_.assign(n + 1, 0.0);
        wx2_.assign(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            w_[k + 1] = w_[k] + m.weights[k];
            wx_[k + 1] = wx_[k] + m.weights[k] * m.atoms[k];
            wx2_[k + 1] = wx2_[k] + m.weights[k] * m.atoms[k] * m.atoms[k];
        }
    }

    // Optimal single-point cost of atoms [i, j), half-open, 0-based.
    double operator()(std::size_t i, std::size_t j) const {
        if (i >= j) return 0.0;
        if (r_ == 2.0) {
            const double w = w_[j] - w_[i];
            const double sx = wx_[j] - wx_[i];
            const double sx2 = wx2_[j] - wx2_[i];
            return std::max(0.0, sx2 - sx * sx / w);
        }
        const std::size_t k = median_index(i, j);
        return cost_to_point(i, j, m_->atoms[k]);
    }

    // Cost of atoms [i, j) against a fixed point c (r in {1,2}).
    double cost_to_point(std::size_t i, std::size_t j, double c) const {
        if (i >= j) return 0.0;
        if (r_ == 2.0) {
            const double w = w_[j] - w_[i];
            const double sx = wx_[j] - wx_[i];
            const double sx2 = wx2_[j] - wx2_[i];
            return std::max(0.0, sx2 - 2.0 * c * sx + c * c * w);
        }
        // split [i,j) at c
        const auto& atoms = m_->atoms;
        const std::size_t mid = static_cast<std::size_t>(
            std::upper_bound(atoms.begin() + static_cast<std::ptrdiff_t>(i),
                             atoms.begin() + static_cast<std::ptrdiff_t>(j), c) -
            atoms.begin());
        const double wl = w_[mid] - w_[i];
        const double sxl = wx_[mid] - wx_[i];
        const double wr = w_[j] - w_[mid];
        const double sxr = wx_[j] - wx_[mid];
        return (c * wl - sxl) + (sxr - c * wr);
    }

    // Weighted median atom index of [i, j).
    std::size_t median_index(std::size_t i, std::size_t j) const {
        const double half = 0.5 * (w_[i] + w_[j]);
        // least k with cumulative weight through atom k >= half
        std::size_t lo = i, hi = j - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (w_[mid + 1] >= half) hi = mid;
            else lo = mid + 1;
        }
        return lo;
    }

    double mass(std::size_t i, std::size_t j) const { return w_[j] - w_[i]; }
    double mean(std::size_t i, std::size_t j) const {
        return (wx_[j] - wx_[i]) / (w_[j] - w_[i]);
    }
    double optimal_point(std::size_t i, std::size_t j) const {
        return r_ == 2.0 ? mean(i, j) : m_->atoms[median_index(i, j)];
    }

private:
    const DiscreteMeasure* m_;
    double r_;
    std::vector<double> w_, wx_, wx2_;
};

void require_dp_order(double r) {
    if (r != 1.0 && r != 2.0)
        throw std::invalid_argument(
            "the exact quantizer supports r in {1,2}; use lloyd_refine for other orders");
}

// One DP layer by divide and conquer over the monotone optimal split.
// prev[j] = best cost of atoms [0,j) with k-1 cells; cur[i] gets the best
// with k cells, split at opt[i] which is nondecreasing in i.
template <typename Cost>
void dp_layer(const std::vector<double>& prev, std::vector<double>& cur,
              std::vector<std::uint32_t>* splits, const Cost& cell, std::size_t lo,
              std::size_t hi, std::size_t opt_lo, std::size_t opt_hi) {
    if (lo > hi) return;
    const std::size_t i = (lo + hi) / 2;
    double best = kInf;
    std::size_t arg = opt_lo;
    const std::size_t jmax = std::min(opt_hi, i == 0 ? 0 : i - 1);
    for (std::size_t j = opt_lo; j <= jmax; ++j) {
        if (prev[j] == kInf) continue;
        const double c = prev[j] + cell(j, i);
        if (c < best) {
            best = c;
            arg = j;
        }
    }
    cur[i] = best;
    if (splits) (*splits)[i] = static_cast<std::uint32_t>(arg);
    if (i > lo) dp_layer(prev, cur, splits, cell, lo, i - 1, opt_lo, arg);
    if (i < hi) dp_layer(prev, cur, splits, cell, i + 1, hi, arg, opt_hi);
}

}  // namespace

double cost(const DiscreteMeasure& m, const std::vector<double>& points, double r) {
    if (points.empty()) throw std::invalid_argument("cost requires a nonempty codebook");
    if (r <= 0.0) throw std::invalid_argument("cost requires r > 0");
    std::vector<double> c = points;
    std::sort(c.begin(), c.end());
    double total = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double x = m.atoms[k];
        while (j + 1 < c.size() && std::abs(c[j + 1] - x) <= std::abs(c[j] - x)) ++j;
        total += m.weights[k] * pow_r(std::abs(x - c[j]), r);
    }
    return total;
}

double modified_cost(const DiscreteMeasure& m, const std::vector<double>& points,
                     double r) {
    if (points.empty())
        throw std::invalid_argument("modified_cost requires a nonempty codebook");
    if (r <= 0.0) throw std::invalid_argument("modified_cost requires r > 0");
    std::vector<double> c = points;
    std::sort(c.begin(), c.end());
    double total = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double x = m.atoms[k];
        while (j + 1 < c.size() && std::abs(c[j + 1] - x) <= std::abs(c[j] - x)) ++j;
        double d = std::abs(x - c[j]);
        d = std::min(d, x - system::kHullLeft);
        d = std::min(d, system::kHullRight - x);
        total += m.weights[k] * pow_r(d, r);
    }
    return total;
}

Codebook optimal_quantizer(const DiscreteMeasure& m, std::size_t n, double r) {
    require_dp_order(r);
    if (n < 1) throw std::invalid_argument("optimal_quantizer requires n >= 1");

    const std::size_t atoms = m.size();
    Codebook cb;
    cb.r = r;
    cb.exact = true;
    if (n >= atoms) {
        cb.points = m.atoms;
        cb.cell_masses = m.weights;
        cb.cost = 0.0;
        cb.clamped = true;
        return cb;
    }

    const CellCost cell(m, r);
    std::vector<double> prev(atoms + 1, kInf), cur(atoms + 1, kInf);
    prev[0] = 0.0;
    std::vector<std::vector<std::uint32_t>> splits(
        n, std::vector<std::uint32_t>(atoms + 1, 0));
    for (std::size_t k = 0; k < n; ++k) {
        dp_layer(prev, cur, &splits[k], cell, 0, atoms, 0, atoms);
        cur[0] = 0.0;  // zero atoms, empty cells
        std::swap(prev, cur);
    }

    // traceback
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::size_t end = atoms;
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t begin = splits[k][end];
        if (begin < end) cells.emplace_back(begin, end);
        end = begin;
    }
    std::reverse(cells.begin(), cells.end());

    for (const auto& [i, j] : cells) {
        cb.points.push_back(cell.optimal_point(i, j));
        cb.cell_masses.push_back(cell.mass(i, j));
    }
    cb.cost = prev[atoms];
    return cb;
}

std::vector<double> quantization_errors(const DiscreteMeasure& m, std::size_t n_max,
                                        double r) {
    require_dp_order(r);
    if (n_max < 1) throw std::invalid_argument("quantization_errors requires n_max >= 1");
    const std::size_t atoms = m.size();
    const CellCost cell(m, r);
    std::vector<double> prev(atoms + 1, kInf), cur(atoms + 1, kInf);
    prev[0] = 0.0;
    std::vector<double> out;
    out.reserve(n_max);
    for (std::size_t k = 0; k < n_max; ++k) {
        if (k + 1 >= atoms) {
            out.push_back(0.0);  // one point per atom already reaches zero cost
            continue;
        }
        dp_layer(prev, cur, nullptr, cell, 0, atoms, 0, atoms);
        cur[0] = 0.0;
        std::swap(prev, cur);
        out.push_back(prev[atoms] == kInf ? 0.0 : prev[atoms]);
    }
    return out;
}

std::vector<double> modified_quantization_errors(const DiscreteMeasure& m,
                                                 std::size_t n_max, double r) {
    require_dp_order(r);
    const std::size_t atoms = m.size();
    const CellCost cell(m, r);

    // Layer 0: a prefix assigned to the left boundary point 0. The final
    // answer adds the right-boundary cost of the remaining suffix.
    std::vector<double> prev(atoms + 1, kInf), cur(atoms + 1, kInf);
    for (std::size_t i = 0; i <= atoms; ++i)
        prev[i] = cell.cost_to_point(0, i, system::kHullLeft);

    auto close = [&](const std::vector<double>& layer) {
        double best = kInf;
        for (std::size_t i = 0; i <= atoms; ++i)
            best = std::min(best, layer[i] + cell.cost_to_point(i, atoms, system::kHullRight));
        return best;
    };

    std::vector<double> out;
    out.reserve(n_max + 1);
    out.push_back(close(prev));
    for (std::size_t k = 0; k < n_max; ++k) {
        if (k + 1 >= atoms) {
            out.push_back(0.0);
            continue;
        }
        dp_layer(prev, cur, nullptr, cell, 0, atoms, 0, atoms);
        cur[0] = 0.0;
        // a layer may also leave its cell unused
        for (std::size_t i = 0; i <= atoms; ++i) cur[i] = std::min(cur[i], prev[i]);
        std::swap(prev, cur);
        out.push_back(close(prev));
    }
    return out;
}

Codebook lloyd_refine(const DiscreteMeasure& m, const Codebook& initial, double r,
                      int max_iter, double tol) {
    if (r < 1.0) throw std::invalid_argument("lloyd_refine requires r >= 1");
    if (initial.points.empty())
        throw std::invalid_argument("lloyd_refine requires a nonempty initial codebook");

    std::vector<double> pts = initial.points;
    std::sort(pts.begin(), pts.end());
    const std::size_t n = pts.size();
    const std::size_t atoms = m.size();

    // 1D golden-section over [lo, hi]; the cell cost is convex for r >= 1.
    auto cell_minimize = [&](std::size_t i, std::size_t j) {
        double lo = m.atoms[i], hi = m.atoms[j - 1];
        auto f = [&](double c) {
            double s = 0.0;
            for (std::size_t k = i; k < j; ++k)
                s += m.weights[k] * pow_r(std::abs(m.atoms[k] - c), r);
            return s;
        };
        if (r == 2.0) {
            double w = 0.0, sx = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                w += m.weights[k];
                sx += m.weights[k] * m.atoms[k];
            }
            return sx / w;
        }
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        while (b - a > 1e-12 * std::max(1.0, std::abs(b) + std::abs(a))) {
            if (f1 > f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(x1);
            }
        }
        return 0.5 * (a + b);
    };

    double prev_cost = cost(m, pts, r);
    std::vector<std::size_t> begin(n + 1, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        // Voronoi cells by midpoint boundaries
        begin[0] = 0;
        for (std::size_t c = 1; c < n; ++c) {
            const double boundary = 0.5 * (pts[c - 1] + pts[c]);
            begin[c] = static_cast<std::size_t>(
                std::lower_bound(m.atoms.begin() + static_cast<std::ptrdiff_t>(begin[c - 1]),
                                 m.atoms.end(), boundary) -
                m.atoms.begin());
        }
        begin[n] = atoms;

        // re-seed empty cells at the mass median of the costliest cell
        bool reseeded = false;
        for (std::size_t c = 0; c < n; ++c) {
            if (begin[c] < begin[c + 1]) continue;
            double worst = -1.0;
            std::size_t worst_cell = n;
            CellCost cc(m, r == 2.0 ? 2.0 : 1.0);
            for (std::size_t d = 0; d < n; ++d) {
                if (begin[d] >= begin[d + 1]) continue;
                double cd = 0.0;
                for (std::size_t k = begin[d]; k < begin[d + 1]; ++k)
                    cd += m.weights[k] * pow_r(std::abs(m.atoms[k] - pts[d]), r);
                if (cd > worst) {
                    worst = cd;
                    worst_cell = d;
                }
            }
            if (worst_cell == n) break;
            pts[c] = m.atoms[cc.median_index(begin[worst_cell], begin[worst_cell + 1])];
            reseeded = true;
        }
        if (reseeded) {
            std::sort(pts.begin(), pts.end());
            continue;  // recompute cells next sweep
        }

        for (std::size_t c = 0; c < n; ++c)
            if (begin[c] < begin[c + 1]) pts[c] = cell_minimize(begin[c], begin[c + 1]);
        std::sort(pts.begin(), pts.end());

        const double now = cost(m, pts, r);
        if (prev_cost - now < tol) {
            prev_cost = std::min(prev_cost, now);
            break;
        }
        prev_cost = now;
    }

    Codebook cb;
    cb.points = pts;
    cb.r = r;
    cb.exact = false;
    cb.cost = cost(m, pts, r);
    cb.cell_masses.assign(n, 0.0);
    std::size_t j = 0;
    for (std::size_t k = 0; k < atoms; ++k) {
        const double x = m.atoms[k];
        while (j + 1 < n && std::abs(pts[j + 1] - x) <= std::abs(pts[j] - x)) ++j;
        cb.cell_masses[j] += m.weights[k];
    }
    return cb;
}

Codebook antichain_codebook(const PotentialContext& ctx, const Antichain& gamma_E,
                            std::size_t m_inner, double r, int depth, std::size_t cap) {
    if (m_inner < 1) throw std::invalid_argument("antichain_codebook requires m_inner >= 1");
    if (gamma_E.members.empty())
        throw std::invalid_argument("antichain_codebook requires a nonempty antichain");
    if (m_inner * gamma_E.members.size() > cap)
        throw std::length_error("antichain_codebook: size exceeds the cap " +
                                std::to_string(cap));

    const DiscreteMeasure m = discretize(ctx, depth);
    const Codebook beta = optimal_quantizer(m, m_inner, r);

    std::vector<double> points;
    points.reserve(m_inner * gamma_E.members.size());
    for (const auto& w : gamma_E.members) {
        const double left = project(w);
        const double scale = std::pow(3.0, -static_cast<double>(w.size()));
        for (double b : beta.points) points.push_back(left + scale * b);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    Codebook cb;
    cb.points = std::move(points);
    cb.r = r;
    cb.exact = false;
    cb.cost = cost(m, cb.points, r);
    cb.cell_masses.assign(cb.points.size(), 0.0);
    std::size_t j = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double x = m.atoms[k];
        while (j + 1 < cb.points.size() &&
               std::abs(cb.points[j + 1] - x) <= std::abs(cb.points[j] - x))
            ++j;
        cb.cell_masses[j] += m.weights[k];
    }
    return cb;
}

LogLogFit fit_loglog(const std::vector<std::size_t>& ns, const std::vector<double>& es) {
    if (ns.size() != es.size() || ns.size() < 2)
        throw std::invalid_argument("fit_loglog requires at least two (n, e) pairs");
    const std::size_t k = ns.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(es[i] > 0.0)) throw std::invalid_argument("fit_loglog requires e > 0");
        const double x = -std::log(es[i]);
        const double y = std::log(static_cast<double>(ns[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    LogLogFit fit;
    const double denom = k * sxx - sx * sx;
    fit.slope = (k * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / k;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = -std::log(es[i]);
        const double y = std::log(static_cast<double>(ns[i]));
        fit.residual = std::max(fit.residual, std::abs(y - (fit.slope * x + fit.intercept)));
    }
    return fit;
}

DimensionFit estimate_dimension(const DiscreteMeasure& m, double r,
                                const std::vector<std::size_t>& n_grid) {
    require_dp_order(r);
    if (n_grid.size() < 3)
        throw std::invalid_argument("estimate_dimension requires a grid of >= 3 sizes");
    std::vector<std::size_t> grid = n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::size_t n_max = 0;
    for (std::size_t n : grid) {
        if (4 * n >= m.size())
            throw std::invalid_argument(
                "estimate_dimension requires every n < atom count / 4; discretize to depth >= " +
                std::to_string(m.depth + 1) + " or shrink the grid");
        n_max = std::max(n_max, n);
    }

    const std::vector<double> V = quantization_errors(m, n_max, r);
    DimensionFit fit;
    fit.n_grid = grid;
    fit.r = r;
    for (std::size_t n : grid) fit.errors_e.push_back(std::pow(V[n - 1], 1.0 / r));

    LogLogFit ll = fit_loglog(fit.n_grid, fit.errors_e);
    if (ll.residual > 0.02 && grid.size() > 4) {
        std::vector<std::size_t> ns(fit.n_grid.begin() + 2, fit.n_grid.end());
        std::vector<double> es(fit.errors_e.begin() + 2, fit.errors_e.end());
        ll = fit_loglog(ns, es);
        fit.transient_discarded = true;
    }
    fit.slope = ll.slope;
    fit.intercept = ll.intercept;
    fit.residual = ll.residual;
    return fit;
}

ScalingDiagnostics scaling_diagnostics(const DiscreteMeasure& m, const DimensionFit& fit,
                                       double chi, double band_limit) {
    ScalingDiagnostics diag;
    diag.chi = chi;
    diag.band_limit = band_limit;

    std::size_t n_max = 0;
    for (std::size_t n : fit.n_grid) n_max = std::max(n_max, n);
    const std::vector<double> u = modified_quantization_errors(m, n_max, fit.r);

    std::vector<double> below, above;
    double band_min = kInf, band_max = 0.0;
    for (std::size_t i = 0; i < fit.n_grid.size(); ++i) {
        ScalingRow row;
        row.n = fit.n_grid[i];
        row.e = fit.errors_e[i];
        row.u = u[row.n];
        const double nn = static_cast<double>(row.n);
        row.n_e_chi = nn * std::pow(row.e, chi);
        row.n_e_below = nn * std::pow(row.e, 0.9 * chi);
        row.n_e_above = nn * std::pow(row.e, 1.1 * chi);
        row.n_u_pow = nn * std::pow(row.u, 0.9 * chi / fit.r);
        band_min = std::min(band_min, row.n_e_chi);
        band_max = std::max(band_max, row.n_e_chi);
        below.push_back(row.n_e_below);
        above.push_back(row.n_e_above);
        diag.rows.push_back(row);
    }
    diag.band_ratio = band_max / band_min;
    diag.flagged = diag.band_ratio > band_limit;

    std::vector<double> ns;
    for (std::size_t n : fit.n_grid) ns.push_back(static_cast<double>(n));
    diag.spearman_below = spearman(ns, below);
    diag.spearman_above = spearman(ns, above);
    return diag;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("spearman requires two equal-length series");
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return v[a] < v[b];
        });
        std::vector<double> rk(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t k = i; k <= j; ++k) rk[idx[k]] = avg;
            i = j + 1;
        }
        return rk;
    };
    const std::vector<double> rx = ranks(xs), ry = ranks(ys);
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace qdim
