#pragma once

#include <cstddef>
#include <vector>

#include "qdim/potential.hpp"

namespace qdim {

enum class AntichainKind { gamma_hat, gamma_minus, theta, gamma_E, gamma_sigma_tilde };

const char* to_string(AntichainKind kind);

// A finite family of words harvested at a phi_hat threshold. For the kinds
// gamma_hat and gamma_sigma_tilde the members are pairwise
// prefix-incomparable and cover every admissible infinite word exactly once.
struct Antichain {
    double epsilon = 0.0;
    double r = 0.0;
    double t0 = 0.0;
    std::vector<Word> members;  // sorted lexicographically
    AntichainKind kind = AntichainKind::gamma_hat;
};

// min over digits of (p_i 3^{-r})^{t0}; thresholds must stay below this so
// that single letters are never harvested.
double epsilon_zero(const ProbabilityVector& p, double r, double t0);

// First-passage antichain of phi_hat = (psi_hat(i) 3^{-|i| r})^{t0}:
// depth-first descent through the branch-A words from the root, extending
// while phi_hat >= epsilon and harvesting a word the first time its value
// drops below. Every member has length >= 2. Requires 0 < epsilon <
// epsilon_zero; throws std::length_error when the member count exceeds the
// cap. t0 is an input (from the pressure module), never recomputed here.
Antichain build_gamma_hat(const PotentialContext& ctx, double epsilon, double r,
                          double t0, std::size_t cap = 10'000'000);

// The deduplicated parent set {i^- : i in gamma_hat}. Every admissible
// stream has at least one prefix in it, but it need not be an antichain:
// first passage can happen at different depths on sibling branches, leaving
// comparable parents.
Antichain parent_antichain(const Antichain& gamma_hat);

// {i^-0 : i in gamma_hat, i ends in 1}, deduplicated.
Antichain theta_set(const Antichain& gamma_hat);

// Adds, for every member ending in 1, its sibling i^-0 (set union). All
// added members still satisfy phi_hat < epsilon.
Antichain extend_to_E(const Antichain& gamma_hat);

// Expands every member to its full canonicalization fiber and prunes any
// word with a proper prefix in the expanded set, yielding a finite maximal
// antichain of the full shift.
Antichain project_to_full_shift(const PotentialContext& ctx, const Antichain& gamma_E,
                                std::size_t cap = 10'000'000);

struct AntichainStats {
    std::size_t count = 0;
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    // phi_hat evaluated on the canonical representative of each member (the
    // identity for branch-A members).
    double sum_phi_hat = 0.0;
    // Multiset sum of phi_hat over the members' parents.
    double sum_phi_hat_parents = 0.0;
    double parent_ratio = 0.0;  // sum_phi_hat / sum_phi_hat_parents
    // Total p-mass of the members' cylinders (raw letter products).
    double sum_cylinder_mass = 0.0;
};

AntichainStats antichain_stats(const PotentialContext& ctx, const Antichain& a);

}  // namespace qdim
