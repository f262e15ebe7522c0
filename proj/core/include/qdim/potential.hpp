#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <vector>

#include "qdim/symbolic.hpp"
#include "qdim/word.hpp"

namespace qdim {

// Strictly positive letter probabilities (p0, p1, p3) summing to 1.
class ProbabilityVector {
public:
    ProbabilityVector(double p0, double p1, double p3);

    double p0() const { return p0_; }
    double p1() const { return p1_; }
    double p3() const { return p3_; }
    // Probability of a digit in {0,1,3}.
    double of(int digit) const;
    double min() const;
    double max() const;

    // The hat machinery (psi_hat, star, q_zero) requires p3 <= p1; the
    // plain class potential and the pressure pipeline do not.
    bool standing_assumption_holds() const { return p3_ <= p1_; }

private:
    double p0_, p1_, p3_;
};

// Evaluator for the class potential psi and its hat correction.
//
// psi(i) is the total p-mass of all words inducing the same map as i, i.e.
// of the canonicalization fiber of i. It factors over the maximal good
// blocks of i: each block of length w contributes
//     a_w = p0 * sum_{l=0}^{w-1} p1^{w-1-l} p3^l,
// and every position outside a good block contributes its letter
// probability. psi_hat(i) = max{psi(i), psi(i^-0)} when i ends in 1, else
// psi(i); equivalently psi(star(i)).
class PotentialContext {
public:
    explicit PotentialContext(ProbabilityVector p);

    const ProbabilityVector& p() const { return p_; }

    // a_w for w >= 1; a_1 = p0. Horner evaluation of the division-free sum.
    double a_value(std::size_t w) const;
    double log_a_value(std::size_t w) const;

    // Least q >= 1 with sum_{l<q} (p3/p1)^l > p1/p0, or nullopt when no such
    // q exists (p1 - p3 >= p0). Requires the standing assumption.
    std::optional<int> q_zero() const;

    // Closed-form class potential; requires i branch-A admissible.
    // psi(empty) = 1.
    double psi(const Word& i) const;
    double log_psi(const Word& i) const;

    // psi_hat via the max form; requires the standing assumption.
    double psi_hat(const Word& i) const;
    double log_psi_hat(const Word& i) const;

    // i^-0 when the trailing 1-run is long enough to flip the max (length
    // n - xi(i) >= q_zero), else i itself. Always lands in T_n.
    Word star(const Word& i) const;

    // (psi(i) 3^{-|i| r})^t, or the psi_hat variant.
    double phi_t(const Word& i, double t, double r, bool hat) const;

    // All words of the fiber of i (canonicalize(eta) = i), built from the
    // block structure; contains i. Requires i in T_n, n <= cap.
    std::vector<Word> enumerate_class(const Word& i,
                                      std::size_t cap = system::kEnumerationCap) const;

    // Fiber size: product of the maximal good block lengths.
    unsigned long long class_size(const Word& i) const;

private:
    void require_admissible(const Word& i) const;
    void require_standing_assumption(const char* op) const;

    ProbabilityVector p_;
    std::optional<int> q0_;
    double log_p_[4];
    mutable std::vector<double> a_cache_;      // a_cache_[w-1] = a_w
    mutable std::vector<double> log_a_cache_;
    mutable std::mutex cache_mutex_;
};

// Length of i minus its trailing run of 1s: the least k such that all later
// digits are 1.
std::size_t xi(const Word& i);

}  // namespace qdim
