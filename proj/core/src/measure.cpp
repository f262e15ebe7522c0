#include "qdim/measure.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "qdim/symbolic.hpp"

namespace qdim {

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms_, std::vector<double> weights_,
                                 int depth_, AtomPlacement placement_)
    : atoms(std::move(atoms_)), weights(std::move(weights_)), depth(depth_),
      placement(placement_) {
    if (atoms.size() != weights.size())
        throw std::invalid_argument("atom and weight counts differ");
    if (atoms.empty()) throw std::invalid_argument("measure must have at least one atom");
    double mass = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (k > 0 && !(atoms[k - 1] < atoms[k]))
            throw std::invalid_argument("atoms must be strictly increasing");
        if (!(weights[k] > 0.0)) throw std::invalid_argument("weights must be positive");
        mass += weights[k];
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("weights must sum to 1");
}

double DiscreteMeasure::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < size(); ++k) m += weights[k] * atoms[k];
    return m;
}

double DiscreteMeasure::second_moment() const {
    double s = 0.0;
    for (std::size_t k = 0; k < size(); ++k) s += weights[k] * atoms[k] * atoms[k];
    return s;
}

double DiscreteMeasure::variance() const {
    const double m = mean();
    return second_moment() - m * m;
}

DiscreteMeasure discretize(const PotentialContext& ctx, int depth,
                           AtomPlacement placement) {
    if (depth < 1 || depth > static_cast<int>(system::kEnumerationCap))
        throw std::invalid_argument("discretize requires 1 <= depth <= " +
                                    std::to_string(system::kEnumerationCap));

    const double shift_half =
        placement == AtomPlacement::midpoint
            ? 0.5 * system::kHullWidth * std::pow(3.0, -depth)
            : 0.0;

    std::vector<double> atoms, weights;
    const auto expected = static_cast<std::size_t>(count_words(static_cast<std::size_t>(depth), Branch::A));
    atoms.reserve(expected);
    weights.reserve(expected);

    // Depth-first over T_depth in lexicographic order (which is projection
    // order), carrying the committed psi factor, the pending 1-run length
    // and the partial projection.
    struct Frame {
        double committed;  // psi factor of everything before the pending run
        double proj;       // projection of the prefix
        int run;           // pending trailing 1-run length
        int len;
        int next_digit;    // 0, 1, 3 encoded as index 0,1,2
        bool last_zero;
    };
    const double p1 = ctx.p().p1(), p3 = ctx.p().p3();
    const int n = depth;

    std::vector<Frame> stack;
    stack.push_back({1.0, 0.0, 0, 0, 0, false});
    std::vector<double> pow3(static_cast<std::size_t>(n) + 1);
    std::vector<double> p1pow(static_cast<std::size_t>(n) + 1);
    pow3[0] = 1.0;
    p1pow[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        pow3[static_cast<std::size_t>(k)] = pow3[static_cast<std::size_t>(k - 1)] / 3.0;
        p1pow[static_cast<std::size_t>(k)] = p1pow[static_cast<std::size_t>(k - 1)] * p1;
    }

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.len == n) {
            atoms.push_back(f.proj + shift_half);
            weights.push_back(f.committed * p1pow[static_cast<std::size_t>(f.run)]);
            stack.pop_back();
            continue;
        }
        if (f.next_digit >= 3) {
            stack.pop_back();
            continue;
        }
        const int digit = system::kTranslations[static_cast<std::size_t>(f.next_digit)];
        ++f.next_digit;
        if (f.last_zero && digit == 3) continue;

        Frame child = f;
        child.next_digit = 0;
        ++child.len;
        child.proj = f.proj + digit * pow3[static_cast<std::size_t>(f.len)];
        if (digit == 0) {
            child.committed = f.committed * ctx.a_value(static_cast<std::size_t>(f.run) + 1);
            child.run = 0;
            child.last_zero = true;
        } else if (digit == 1) {
            child.run = f.run + 1;
            child.last_zero = false;
        } else {
            child.committed = f.committed * p1pow[static_cast<std::size_t>(f.run)] * p3;
            child.run = 0;
            child.last_zero = false;
        }
        stack.push_back(child);
    }

    return DiscreteMeasure(std::move(atoms), std::move(weights), depth, placement);
}

std::vector<double> sample(const PotentialContext& ctx, std::size_t count, int depth,
                           std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample requires count >= 1");
    if (depth < 1) throw std::invalid_argument("sample requires depth >= 1");

    // splitmix64; self-contained so streams are reproducible across stdlibs.
    auto next_u64 = [state = seed]() mutable {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    auto next_unit = [&]() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; };

    const double c0 = ctx.p().p0();
    const double c1 = c0 + ctx.p().p1();
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double x = 0.0;
        double scale = 1.0;
        for (int k = 0; k < depth; ++k) {
            const double u = next_unit();
            const int digit = u < c0 ? 0 : (u < c1 ? 1 : 3);
            x += digit * scale;
            scale /= 3.0;
        }
        out.push_back(x);
    }
    return out;
}

SelfSimilarityReport self_similarity_check(const PotentialContext& ctx, int depth) {
    if (depth < 1 || depth > 15)
        throw std::invalid_argument("self_similarity_check requires 1 <= depth <= 15");

    const auto coarse = enumerate_words(static_cast<std::size_t>(depth), Branch::A);
    std::map<Word, double> mixture;
    for (int d : system::kTranslations) {
        const double pd = ctx.p().of(d);
        for (const auto& w : coarse) {
            Word ext;
            ext.push_back(d);
            ext = ext.concat(w);
            mixture[canonicalize(ext)] += pd * ctx.psi(w);
        }
    }

    const auto fine = enumerate_words(static_cast<std::size_t>(depth) + 1, Branch::A);
    SelfSimilarityReport report;
    report.depth = depth;
    report.atoms_match = mixture.size() == fine.size();
    for (const auto& u : fine) {
        const auto it = mixture.find(u);
        if (it == mixture.end()) {
            report.atoms_match = false;
            continue;
        }
        report.max_weight_discrepancy =
            std::max(report.max_weight_discrepancy, std::abs(it->second - ctx.psi(u)));
    }
    return report;
}

std::string measure_to_csv(const DiscreteMeasure& m) {
    std::string out = "atom,weight\n";
    char buf[96];
    for (std::size_t k = 0; k < m.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", m.atoms[k], m.weights[k]);
        out += buf;
    }
    return out;
}

}  // namespace qdim
