#include "qdim/symbolic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdim {

std::array<std::array<int, 3>, 3> adjacency_matrix(Branch branch) {
    std::array<std::array<int, 3>, 3> m{{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
    // Digit order 0,1,3: (0,3) sits at row 0, column 2; (1,0) at row 1, column 0.
    if (branch == Branch::A) m[0][2] = 0;
    if (branch == Branch::B) m[1][0] = 0;
    return m;
}

bool step_allowed(Branch branch, int a, int b) {
    switch (branch) {
        case Branch::A: return !(a == 0 && b == 3);
        case Branch::B: return !(a == 1 && b == 0);
        case Branch::Full: return true;
    }
    return true;
}

bool word_admissible(Branch branch, const Word& w) {
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        if (!step_allowed(branch, w[k], w[k + 1])) return false;
    return true;
}

double project(const Word& w) {
    double x = 0.0;
    for (std::size_t k = w.size(); k-- > 0;) x = x / 3.0 + w[k];
    return x;
}

Interval cylinder_interval(const Word& w) {
    const double left = project(w);
    const double width =
        system::kHullWidth * std::pow(3.0, -static_cast<double>(w.size()));
    return {left, left + width};
}

std::vector<Word> enumerate_words(std::size_t n, Branch branch, std::size_t cap) {
    if (n < 1) throw std::invalid_argument("enumerate_words requires n >= 1");
    if (n > cap)
        throw std::length_error("enumerate_words: n = " + std::to_string(n) +
                                " exceeds the enumeration cap " + std::to_string(cap));
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(count_words(n, branch)));
    Word w;
    // Depth-first in digit order 0,1,3 produces lexicographic order.
    auto descend = [&](auto&& self, std::size_t depth) -> void {
        if (depth == n) {
            out.push_back(w);
            return;
        }
        for (int d : system::kTranslations) {
            if (depth > 0 && !step_allowed(branch, w.back(), d)) continue;
            w.push_back(d);
            self(self, depth + 1);
            w.pop_back();
        }
    };
    descend(descend, 0);
    return out;
}

unsigned long long count_words(std::size_t n, Branch branch) {
    if (n < 1) throw std::invalid_argument("count_words requires n >= 1");
    const auto m = adjacency_matrix(branch);
    std::array<unsigned long long, 3> cnt{1, 1, 1};
    for (std::size_t step = 1; step < n; ++step) {
        std::array<unsigned long long, 3> next{0, 0, 0};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                if (m[a][b]) next[b] += cnt[a];
        cnt = next;
    }
    return cnt[0] + cnt[1] + cnt[2];
}

BlockPartition decompose_blocks(const Word& w) {
    BlockPartition bp;
    const int n = static_cast<int>(w.size());

    // Maximal bad blocks: a 0 followed by a nonempty maximal run of 3s.
    for (int k = 1; k <= n; ++k) {
        if (w[k - 1] != 0) continue;
        int l = k;
        while (l < n && w[l] == 3) ++l;
        if (l > k) bp.bad.push_back({k, l});
    }
    // Maximal good blocks: a nonempty maximal run of 1s closed by a 0.
    for (int k = 1; k <= n; ++k) {
        if (w[k - 1] != 1) continue;
        if (k > 1 && w[k - 2] == 1) continue;  // not maximal
        int l = k;
        while (l < n && w[l] == 1) ++l;
        if (l < n && w[l] == 0) {
            bp.good.push_back({k, l + 1});
        }
    }

    auto fill_sets = [n](const std::vector<IndexRange>& blocks, std::vector<int>& a,
                         std::vector<int>& b, std::vector<int>& c, std::vector<int>& d) {
        std::vector<bool> in_block(static_cast<std::size_t>(n) + 1, false);
        std::vector<bool> right_end(static_cast<std::size_t>(n) + 1, false);
        for (const auto& r : blocks) {
            for (int z = r.k; z <= r.l; ++z) in_block[static_cast<std::size_t>(z)] = true;
            right_end[static_cast<std::size_t>(r.l)] = true;
        }
        for (int z = 1; z <= n; ++z) {
            const auto zz = static_cast<std::size_t>(z);
            if (!in_block[zz]) a.push_back(z);
            if (right_end[zz]) b.push_back(z);
            if (in_block[zz] && !right_end[zz]) c.push_back(z);
            if (!in_block[zz] || right_end[zz]) d.push_back(z);
        }
    };
    fill_sets(bp.good, bp.a_good, bp.b_good, bp.c_good, bp.d_good);
    fill_sets(bp.bad, bp.a_bad, bp.b_bad, bp.c_bad, bp.d_bad);

    for (const auto& r : bp.good) bp.chi_block = std::max(bp.chi_block, r.l);
    return bp;
}

Word canonicalize(const Word& w, Branch branch) {
    if (branch == Branch::Full)
        throw std::invalid_argument("canonicalize requires branch A or B");
    const BlockPartition bp = decompose_blocks(w);
    std::vector<std::uint8_t> digits(w.begin(), w.end());
    if (branch == Branch::A) {
        // (0, 3^m) -> (1^m, 0). Maximal bad blocks are disjoint and the
        // rewrite cannot create a new (0,3) factor, so one pass suffices.
        for (const auto& r : bp.bad) {
            for (int z = r.k; z < r.l; ++z) digits[static_cast<std::size_t>(z - 1)] = 1;
            digits[static_cast<std::size_t>(r.l - 1)] = 0;
        }
    } else {
        // Mirror rewrite (1^m, 0) -> (0, 3^m) lands in the B-subshift.
        for (const auto& r : bp.good) {
            digits[static_cast<std::size_t>(r.k - 1)] = 0;
            for (int z = r.k + 1; z <= r.l; ++z) digits[static_cast<std::size_t>(z - 1)] = 3;
        }
    }
    return Word(digits);
}

std::pair<Word, Word> full_overlap_pair(std::size_t n) {
    if (n < 2) throw std::invalid_argument("full_overlap_pair requires n >= 2");
    Word ones_zero, zero_threes;
    for (std::size_t k = 0; k + 1 < n; ++k) ones_zero.push_back(1);
    ones_zero.push_back(0);
    zero_threes.push_back(0);
    for (std::size_t k = 0; k + 1 < n; ++k) zero_threes.push_back(3);
    return {ones_zero, zero_threes};
}

std::optional<Word> interval_neighbor(const Word& w) {
    if (w.empty()) throw std::domain_error("interval_neighbor requires a nonempty word");
    if (!word_admissible(Branch::A, w))
        throw std::domain_error("interval_neighbor: word " + w.str() +
                                " contains the forbidden factor (0,3)");
    // Distinct intersecting T_n intervals share a length-(n-1) prefix and end
    // in {0,1}; S_0(I) and S_1(I) always overlap, so the sibling always
    // qualifies. A word ending in 3 has no intersecting partner.
    if (w.back() == 3) return std::nullopt;
    Word sibling = w.parent();
    sibling.push_back(w.back() == 0 ? 1 : 0);
    return sibling;
}

}  // namespace qdim
