#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "qdim/word.hpp"

namespace qdim {

// The system is hard-wired: S_i(x) = x/3 + i for i in {0,1,3}. The attractor
// hull is [0, 9/2]. The complete overlap S_1 S_0 = S_0 S_3 makes the length-2
// cylinders I_10 and I_03 coincide.
namespace system {
inline constexpr double kContraction = 1.0 / 3.0;
inline constexpr std::array<int, 3> kTranslations{0, 1, 3};
inline constexpr double kHullLeft = 0.0;
inline constexpr double kHullRight = 4.5;
inline constexpr double kHullWidth = kHullRight - kHullLeft;
// Largest n for which full word lists are materialized.
inline constexpr std::size_t kEnumerationCap = 16;
}  // namespace system

// Two one-sided subshifts carry the canonical representatives of the overlap
// classes: branch A forbids the factor (0,3), branch B forbids (1,0).
enum class Branch { A, B, Full };

// 0/1 transition matrix of a branch, rows/columns indexed by the digits
// 0, 1, 3 in increasing order. Branch A has its single zero at (0,3),
// branch B at (1,0).
std::array<std::array<int, 3>, 3> adjacency_matrix(Branch branch);

// True when the two-digit step a -> b is admissible in the given branch.
bool step_allowed(Branch branch, int a, int b);
// True when w contains no forbidden factor of the branch.
bool word_admissible(Branch branch, const Word& w);

struct Interval {
    double left = 0.0;
    double right = 0.0;
    double width() const { return right - left; }
    bool intersects(const Interval& o) const {
        return left <= o.right && o.left <= right;
    }
};

// An index range [k, l], 1-based and inclusive, of length >= 2.
struct IndexRange {
    int k = 0;
    int l = 0;
    int length() const { return l - k + 1; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Maximal good blocks (1,...,1,0) and maximal bad blocks (0,3,...,3) of a
// word, plus the derived index partitions. A block at the end of a finite
// word counts as maximal. All index sets are sorted, 1-based.
struct BlockPartition {
    std::vector<IndexRange> good;
    std::vector<IndexRange> bad;
    std::vector<int> a_good, b_good, c_good, d_good;
    std::vector<int> a_bad, b_bad, c_bad, d_bad;
    // Right endpoint of the last maximal good block, 0 if there is none.
    int chi_block = 0;
};

// Left endpoint of the cylinder interval of w: sum_k w_k 3^{-(k-1)}.
// The empty word projects to 0.
double project(const Word& w);

// I_w = S_w([0, 9/2]); left = project(w), width = (9/2) 3^{-|w|}.
Interval cylinder_interval(const Word& w);

// All admissible length-n words of the branch in lexicographic order.
// Branch A yields T_n, branch B yields U_n, Full yields all 3^n words.
// Throws std::length_error above the cap.
std::vector<Word> enumerate_words(std::size_t n, Branch branch,
                                  std::size_t cap = system::kEnumerationCap);

// Number of admissible length-n words without materializing them.
// For branch A this follows #T_n = Fibonacci(2n+2).
unsigned long long count_words(std::size_t n, Branch branch);

BlockPartition decompose_blocks(const Word& w);

// The canonicalization map: rewrites every maximal bad block (0,3^m) into
// the good block (1^m,0), preserving length and projection. The result
// contains no (0,3) factor and is the unique branch-A representative of the
// projection class of w. Branch B performs the mirror rewrite
// (1^m,0) -> (0,3^m) and lands in U_n.
Word canonicalize(const Word& w, Branch branch = Branch::A);

// The unique pair of length-n words with equal projection and no agreeing
// proper prefix pair: (1^{n-1} 0, 0 3^{n-1}). Requires n >= 2.
std::pair<Word, Word> full_overlap_pair(std::size_t n);

// For w in T_n, the unique other T_n word whose cylinder interval meets
// I_w, if any. The two words share a length-(n-1) prefix and end in {0,1};
// words ending in 3 have no neighbor. Throws std::domain_error if w is not
// branch-A admissible.
std::optional<Word> interval_neighbor(const Word& w);

}  // namespace qdim
