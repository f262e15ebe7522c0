#pragma once

#include <cstdint>
#include <vector>

#include "qdim/potential.hpp"

namespace qdim {

enum class AtomPlacement { left, midpoint };

// A finite approximation of the self-similar measure: one atom per overlap
// class of depth n, weighted by the class potential. Also usable as a plain
// sorted weighted point set for the quantizer.
struct DiscreteMeasure {
    std::vector<double> atoms;    // strictly increasing
    std::vector<double> weights;  // positive, summing to 1
    int depth = 0;
    AtomPlacement placement = AtomPlacement::left;

    DiscreteMeasure() = default;
    // Validates ordering, positivity and total mass.
    DiscreteMeasure(std::vector<double> atoms_, std::vector<double> weights_,
                    int depth_ = 0, AtomPlacement placement_ = AtomPlacement::left);

    std::size_t size() const { return atoms.size(); }
    double mean() const;
    double second_moment() const;
    double variance() const;
};

// Atoms at project(i) (plus half the cylinder width under midpoint
// placement) with weights psi(i), for i in T_depth, in increasing order.
// Built by the same run-length recursion as the pressure DP; overlap merging
// is symbolic (one atom per class), never float-tolerance based.
// Wasserstein-infinity distance to the true measure is at most
// (9/2) 3^{-depth}. Requires 1 <= depth <= 16.
DiscreteMeasure discretize(const PotentialContext& ctx, int depth,
                           AtomPlacement placement = AtomPlacement::midpoint);

// i.i.d. draws from the depth-truncated measure: random digit strings of
// the given length with letter law p, mapped through the projection.
// Deterministic for a fixed seed.
std::vector<double> sample(const PotentialContext& ctx, std::size_t count, int depth,
                           std::uint64_t seed);

struct SelfSimilarityReport {
    int depth = 0;
    double max_weight_discrepancy = 0.0;
    bool atoms_match = false;
    bool ok(double tol) const { return atoms_match && max_weight_discrepancy <= tol; }
};

// Verifies that discretize(depth+1) equals the p-weighted mixture of the
// three affine images of discretize(depth), after symbolic merging of the
// overlap atoms. Requires depth <= 15.
SelfSimilarityReport self_similarity_check(const PotentialContext& ctx, int depth);

// CSV rows "atom,weight" with a header, 17 significant digits.
std::string measure_to_csv(const DiscreteMeasure& m);

}  // namespace qdim
