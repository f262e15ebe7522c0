// Command-line surface for the quantization-dimension pipeline.
//
// Subcommands:
//   dim        analytic dimension: t0 root of the pressure, chi_r (JSON)
//   pressure   p(t) / P(t) curve on a t-grid (CSV)
//   empirical  exact quantizer slope vs the analytic chi_r (JSON or CSV)
//   antichain  first-passage antichain statistics (JSON)
//   verify     cross-module invariant suite (pass/fail report)
//
// Exit codes: 0 success, 1 verification failure, 2 argument errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdim/antichain.hpp"
#include "qdim/measure.hpp"
#include "qdim/potential.hpp"
#include "qdim/pressure.hpp"
#include "qdim/quantizer.hpp"
#include "qdim/symbolic.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

qdim::ProbabilityVector parse_p(const std::string& text) {
    std::vector<double> vals;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (vals.size() != 3)
        throw CLI::ValidationError("--p", "expected three comma-separated probabilities");
    const double sum = vals[0] + vals[1] + vals[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw CLI::ValidationError("--p", "probabilities sum to " + fmt17(sum) +
                                             ", more than 1e-9 away from 1");
    return {vals[0] / sum, vals[1] / sum, vals[2] / sum};
}

std::vector<double> parse_t_grid(const std::string& text) {
    // start:end:step
    double start = 0.0, end = 1.0, step = 0.05;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &end, &step) != 3 || step <= 0.0)
        throw CLI::ValidationError("--t-grid", "expected start:end:step with step > 0");
    std::vector<double> grid;
    for (double t = start; t <= end + 0.5 * step; t += step)
        grid.push_back(std::min(t, end));
    if (!grid.empty() && grid.back() < end) grid.push_back(end);
    return grid;
}

std::vector<std::size_t> parse_n_grid(const std::string& text) {
    std::vector<std::size_t> grid;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const long v = std::stol(item);
        if (v < 1) throw CLI::ValidationError("--n-grid", "sizes must be >= 1");
        grid.push_back(static_cast<std::size_t>(v));
    }
    if (grid.size() < 3) throw CLI::ValidationError("--n-grid", "need at least 3 sizes");
    return grid;
}

json p_to_json(const qdim::ProbabilityVector& p) {
    return json::array({p.p0(), p.p1(), p.p3()});
}

int run_dim(const qdim::ProbabilityVector& p, double r, int depth, double tol) {
    const qdim::PotentialContext ctx(p);
    const qdim::DimensionResult res = qdim::solve_t0(ctx, r, depth, tol);
    const qdim::PressureEstimate pe = qdim::pressure(ctx, res.t0, depth, /*hat=*/false);

    json diag;
    diag["pressure_residual"] = pe.residual;
    diag["hausdorff_dim"] = qdim::hausdorff_dim();
    diag["p_zero"] = qdim::pressure(ctx, 0.0, depth, false).value;
    diag["standing_assumption"] = p.standing_assumption_holds() ? "holds" : "mirrored";
    if (!p.standing_assumption_holds())
        diag["note"] = "standing-assumption: mirrored";
    diag["defaults"] = {{"depth", qdim::defaults::kSolveDepth},
                        {"tol", qdim::defaults::kSolveTol},
                        {"hausdorff_depth", qdim::defaults::kHausdorffDepth}};

    json out;
    out["p"] = p_to_json(p);
    out["r"] = res.r;
    out["t0"] = res.t0;
    out["chi_r"] = res.chi_r;
    out["p_at_t0"] = res.p_at_t0;
    out["depth"] = res.depth;
    out["tolerance"] = res.tolerance;
    out["diagnostics"] = diag;
    std::cout << out.dump() << "\n";
    return 0;
}

int run_pressure(const qdim::ProbabilityVector& p, double r, int depth,
                 const std::vector<double>& grid) {
    const qdim::PotentialContext ctx(p);
    const auto rows = qdim::pressure_curve(ctx, grid, r, depth);
    std::cout << "t,p_t,P_t,rt_log3\n";
    for (const auto& row : rows)
        std::cout << fmt17(row.t) << ',' << fmt17(row.p_t) << ',' << fmt17(row.P_t) << ','
                  << fmt17(row.rt_log3) << "\n";
    return 0;
}

int run_empirical(const qdim::ProbabilityVector& p, double r, int depth, int t0_depth,
                  const std::vector<std::size_t>& n_grid, const std::string& output,
                  double band, const std::string& dump_measure) {
    const qdim::PotentialContext ctx(p);
    const qdim::DimensionResult res = qdim::solve_t0(ctx, r, t0_depth);
    const qdim::DiscreteMeasure m = qdim::discretize(ctx, depth);
    if (!dump_measure.empty()) {
        std::ofstream out(dump_measure);
        if (!out) throw std::runtime_error("cannot write " + dump_measure);
        out << qdim::measure_to_csv(m);
    }
    const qdim::DimensionFit fit = qdim::estimate_dimension(m, r, n_grid);
    const qdim::ScalingDiagnostics diag = qdim::scaling_diagnostics(m, fit, res.chi_r, band);

    if (output == "csv") {
        std::cout << "n,V,e,n_e_chi\n";
        for (const auto& row : diag.rows)
            std::cout << row.n << ',' << fmt17(std::pow(row.e, r)) << ',' << fmt17(row.e)
                      << ',' << fmt17(row.n_e_chi) << "\n";
        return 0;
    }

    json out;
    out["r"] = r;
    out["slope"] = fit.slope;
    out["chi_r"] = res.chi_r;
    out["abs_gap"] = std::abs(fit.slope - res.chi_r);
    out["t0"] = res.t0;
    out["depth"] = depth;
    out["t0_depth"] = t0_depth;
    out["fit_residual"] = fit.residual;
    out["transient_discarded"] = fit.transient_discarded;
    out["band_ratio"] = diag.band_ratio;
    out["band_flagged"] = diag.flagged;
    out["spearman_below"] = diag.spearman_below;
    out["spearman_above"] = diag.spearman_above;
    std::cout << out.dump() << "\n";
    return 0;
}

int run_antichain(const qdim::ProbabilityVector& p, double r, double epsilon,
                  const std::string& kind, int t0_depth) {
    const qdim::PotentialContext ctx(p);
    const qdim::DimensionResult res = qdim::solve_t0(ctx, r, t0_depth);

    qdim::Antichain a = qdim::build_gamma_hat(ctx, epsilon, r, res.t0);
    if (kind == "gamma_E" || kind == "gamma_sigma_tilde") a = qdim::extend_to_E(a);
    if (kind == "gamma_sigma_tilde") a = qdim::project_to_full_shift(ctx, a);

    const qdim::AntichainStats stats = qdim::antichain_stats(ctx, a);
    json out;
    out["epsilon"] = a.epsilon;
    out["count"] = stats.count;
    out["min_len"] = stats.min_len;
    out["max_len"] = stats.max_len;
    out["sum_phi_hat"] = stats.sum_phi_hat;
    out["kind"] = qdim::to_string(a.kind);
    out["t0"] = a.t0;
    out["sum_phi_hat_parents"] = stats.sum_phi_hat_parents;
    out["sum_cylinder_mass"] = stats.sum_cylinder_mass;
    std::cout << out.dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify: cross-module invariant suite
// ---------------------------------------------------------------------------

struct Verifier {
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

int run_verify(const qdim::ProbabilityVector& p, int depth, std::uint64_t seed) {
    using namespace qdim;
    Verifier v;
    const PotentialContext ctx(p);
    const auto n = static_cast<std::size_t>(depth);

    // canonicalize: length, projection class, admissibility, idempotence
    {
        bool ok = true;
        const auto words = enumerate_words(n, Branch::Full);
        for (const auto& w : words) {
            const Word c = canonicalize(w);
            if (c.size() != w.size() || !word_admissible(Branch::A, c) ||
                canonicalize(c) != c) {
                ok = false;
                break;
            }
        }
        v.check("canonicalize maps A^n into T_n idempotently (n=" + std::to_string(n) + ")",
                ok);
    }
    // fibers partition A^n and psi matches the enumeration sum
    {
        bool ok = true;
        double worst = 0.0;
        const auto canon = enumerate_words(n, Branch::A);
        std::size_t fiber_total = 0;
        for (const auto& i : canon) {
            const auto fiber = ctx.enumerate_class(i);
            fiber_total += fiber.size();
            double sum = 0.0;
            for (const auto& eta : fiber) {
                if (canonicalize(eta) != i) ok = false;
                double mass = 1.0;
                for (auto d : eta) mass *= p.of(d);
                sum += mass;
            }
            worst = std::max(worst, std::abs(sum - ctx.psi(i)));
        }
        std::size_t full = 1;
        for (std::size_t k = 0; k < n; ++k) full *= 3;
        ok = ok && fiber_total == full && worst <= 1e-12;
        v.check("psi equals its fiber-enumeration sum and fibers partition A^n", ok,
                "max deviation " + fmt17(worst));
    }
    // partition of unity via the DP
    {
        const double z = partition_sum(ctx, 1.0, 200, false);
        v.check("Z_n(1) = 1 (depth 200)", std::abs(z) <= 1e-10, fmt17(z));
    }
    // DP vs enumeration at several t
    {
        bool ok = true;
        const auto canon = enumerate_words(n, Branch::A);
        for (double t : {0.0, 0.5, 1.3}) {
            double direct = 0.0;
            for (const auto& i : canon) direct += std::pow(ctx.psi(i), t);
            const double dp = std::exp(partition_sum(ctx, t, depth, false));
            if (std::abs(dp - direct) > 1e-10 * direct) ok = false;
        }
        v.check("partition_sum matches direct enumeration", ok);
    }
    // interval stabbing <= 2
    {
        const auto canon = enumerate_words(n, Branch::A);
        std::vector<Interval> ivs;
        ivs.reserve(canon.size());
        for (const auto& w : canon) ivs.push_back(cylinder_interval(w));
        std::vector<double> probes;
        for (const auto& iv : ivs) {
            probes.push_back(iv.left);
            probes.push_back(iv.right);
        }
        std::sort(probes.begin(), probes.end());
        std::vector<double> pts = probes;
        for (std::size_t k = 0; k + 1 < probes.size(); ++k)
            pts.push_back(0.5 * (probes[k] + probes[k + 1]));
        bool ok = true;
        for (double x : pts) {
            int hits = 0;
            for (const auto& iv : ivs)
                if (iv.left <= x && x <= iv.right) ++hits;
            if (hits > 2) ok = false;
        }
        v.check("every point meets at most 2 cylinder intervals of T_n", ok);
    }
    // pressure root and chi roundtrip
    {
        const DimensionResult res = solve_t0(ctx, 2.0, 200, 1e-6);
        const bool ok = res.t0 > 0.0 && res.t0 < 1.0 &&
                        std::abs(res.p_at_t0 - 2.0 * res.t0 * std::log(3.0)) < 1e-4 &&
                        std::abs(t0_from_chi(res.chi_r, 2.0) - res.t0) < 1e-12;
        v.check("solve_t0 satisfies p(t0) = r t0 log 3 and the chi roundtrip", ok);
    }
    // measure self-similarity
    {
        const auto report = self_similarity_check(ctx, std::min(depth, 6));
        v.check("discretize obeys the self-similarity mixture", report.ok(1e-12),
                fmt17(report.max_weight_discrepancy));
    }
    // quantizer: DP vs brute force on a small random measure
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ad(0.0, 4.5), wd(0.1, 1.0);
        bool ok = true;
        for (int rep = 0; rep < 10 && ok; ++rep) {
            std::vector<double> atoms, weights;
            for (int k = 0; k < 9; ++k) atoms.push_back(ad(rng));
            std::sort(atoms.begin(), atoms.end());
            atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
            if (atoms.size() < 4) continue;
            double mass = 0.0;
            for (std::size_t k = 0; k < atoms.size(); ++k) {
                weights.push_back(wd(rng));
                mass += weights.back();
            }
            for (auto& w : weights) w /= mass;
            const DiscreteMeasure m(atoms, weights);
            for (double r : {1.0, 2.0}) {
                const Codebook cb = optimal_quantizer(m, 3, r);
                // brute force over contiguous 3-partitions
                double best = std::numeric_limits<double>::infinity();
                const std::size_t N = atoms.size();
                for (std::size_t i = 1; i < N; ++i)
                    for (std::size_t j = i + 1; j < N; ++j) {
                        auto piece = [&](std::size_t a, std::size_t b) {
                            std::vector<double> xs(atoms.begin() + (long)a, atoms.begin() + (long)b);
                            std::vector<double> ws(weights.begin() + (long)a, weights.begin() + (long)b);
                            double bestc = std::numeric_limits<double>::infinity();
                            for (double c : xs) {
                                double s = 0.0;
                                for (std::size_t q = 0; q < xs.size(); ++q)
                                    s += ws[q] * std::pow(std::abs(xs[q] - c), r);
                                bestc = std::min(bestc, s);
                            }
                            if (r == 2.0) {
                                double w = 0, sx = 0, s = 0;
                                for (std::size_t q = 0; q < xs.size(); ++q) {
                                    w += ws[q];
                                    sx += ws[q] * xs[q];
                                }
                                const double mean = sx / w;
                                for (std::size_t q = 0; q < xs.size(); ++q)
                                    s += ws[q] * (xs[q] - mean) * (xs[q] - mean);
                                bestc = std::min(bestc, s);
                            }
                            return bestc;
                        };
                        best = std::min(best, piece(0, i) + piece(i, j) + piece(j, N));
                    }
                if (std::abs(cb.cost - best) > 1e-9) ok = false;
            }
        }
        v.check("optimal_quantizer matches contiguous brute force (n=3)", ok);
    }
    // u <= V
    {
        const DiscreteMeasure m = discretize(ctx, std::min(depth, 8));
        const auto V = quantization_errors(m, 8, 2.0);
        const auto U = modified_quantization_errors(m, 8, 2.0);
        bool ok = true;
        for (std::size_t k = 1; k <= 8; ++k)
            if (U[k] > V[k - 1] + 1e-15) ok = false;
        v.check("modified error u_{n,r} never exceeds V_{n,r}", ok);
    }
    // antichain maximality on sampled words
    {
        const DimensionResult res = solve_t0(ctx, 2.0, 200, 1e-6);
        const Antichain g = build_gamma_hat(ctx, 1e-3, 2.0, res.t0);
        std::vector<Word> sorted = g.members;
        bool ok = std::is_sorted(sorted.begin(), sorted.end());
        std::mt19937_64 rng(seed ^ 0x5eedULL);
        for (int rep = 0; rep < 2000 && ok; ++rep) {
            Word w;
            int last = -1;
            for (int k = 0; k < 40; ++k) {
                int d;
                do {
                    const int pick = static_cast<int>(rng() % 3);
                    d = system::kTranslations[static_cast<std::size_t>(pick)];
                } while (last == 0 && d == 3);
                w.push_back(d);
                last = d;
            }
            int hits = 0;
            for (std::size_t len = 1; len <= w.size(); ++len) {
                if (std::binary_search(sorted.begin(), sorted.end(), w.prefix(len))) ++hits;
            }
            if (hits != 1) ok = false;
        }
        v.check("gamma_hat is a maximal antichain on sampled admissible words", ok);
    }

    if (v.failures > 0) {
        std::cout << v.failures << " check(s) failed\n";
        return 1;
    }
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantization dimension of the overlapping IFS x/3 + {0,1,3}"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string p_text = "0.4,0.35,0.25";
    double r = 2.0;
    int depth = qdim::defaults::kSolveDepth;
    double tol = qdim::defaults::kSolveTol;
    std::string t_grid_text = "0:1.2:0.05";
    std::string n_grid_text = "16,32,64,128,256,512";
    int m_depth = 12;
    int t0_depth = qdim::defaults::kSolveDepth;
    std::string output = "json";
    std::string dump_measure;
    double epsilon = 1e-3;
    std::string kind = "gamma_hat";
    double band = 20.0;
    std::uint64_t seed = 20240901ULL;
    int verify_depth = 6;

    auto* dim = app.add_subcommand("dim", "analytic quantization dimension chi_r");
    dim->add_option("--p", p_text, "probability vector p0,p1,p3")->required();
    dim->add_option("--r", r, "distortion order r > 0")->required();
    dim->add_option("--depth", depth, "pressure DP depth (default 400)");
    dim->add_option("--tol", tol, "bisection tolerance in t (default 1e-6)");

    auto* pres = app.add_subcommand("pressure", "pressure curve CSV");
    pres->add_option("--p", p_text, "probability vector p0,p1,p3")->required();
    pres->add_option("--r", r, "distortion order r > 0")->required();
    pres->add_option("--depth", depth, "pressure DP depth (default 400)");
    pres->add_option("--t-grid", t_grid_text, "grid start:end:step in [0,1.5]");

    auto* emp = app.add_subcommand("empirical", "empirical slope vs analytic chi_r");
    emp->add_option("--p", p_text, "probability vector p0,p1,p3")->required();
    emp->add_option("--r", r, "distortion order, 1 or 2")->required();
    emp->add_option("--depth", m_depth, "discretization depth (default 12)");
    emp->add_option("--t0-depth", t0_depth, "pressure DP depth for t0 (default 400)");
    emp->add_option("--n-grid", n_grid_text, "codebook sizes, comma separated");
    emp->add_option("--output", output, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    emp->add_option("--band", band, "allowed max/min ratio of n e^chi (default 20)");
    emp->add_option("--dump-measure", dump_measure,
                    "write the discretized measure as atom,weight CSV to this path");

    auto* anti = app.add_subcommand("antichain", "first-passage antichain stats");
    anti->add_option("--p", p_text, "probability vector p0,p1,p3")->required();
    anti->add_option("--r", r, "distortion order r > 0")->required();
    anti->add_option("--epsilon", epsilon, "threshold in (0, epsilon_zero)")->required();
    anti->add_option("--kind", kind, "gamma_hat, gamma_E or gamma_sigma_tilde")
        ->check(CLI::IsMember({"gamma_hat", "gamma_E", "gamma_sigma_tilde"}));
    anti->add_option("--t0-depth", t0_depth, "pressure DP depth for t0 (default 400)");

    auto* ver = app.add_subcommand("verify", "run the cross-module invariant suite");
    ver->add_option("--p", p_text, "probability vector p0,p1,p3");
    ver->add_option("--depth", verify_depth, "exhaustive word length (default 6)");
    ver->add_option("--seed", seed, "seed for sampled checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const qdim::ProbabilityVector p = parse_p(p_text);
        if (dim->parsed()) return run_dim(p, r, depth, tol);
        if (pres->parsed()) return run_pressure(p, r, depth, parse_t_grid(t_grid_text));
        if (emp->parsed())
            return run_empirical(p, r, m_depth, t0_depth, parse_n_grid(n_grid_text),
                                 output, band, dump_measure);
        if (anti->parsed()) return run_antichain(p, r, epsilon, kind, t0_depth);
        if (ver->parsed()) return run_verify(p, verify_depth, seed);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
