#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracle.hpp"
#include "qdim/antichain.hpp"
#include "qdim/pressure.hpp"

using namespace qdim;

namespace {
const ProbabilityVector kP(0.4, 0.35, 0.25);

struct Pipeline {
    PotentialContext ctx{kP};
    double r = 2.0;
    double t0;
    Pipeline() { t0 = solve_t0(ctx, r, 200, 1e-6).t0; }
};

Pipeline& pipe() {
    static Pipeline p;
    return p;
}

// number of prefixes of w present in the sorted member list
int prefix_hits(const std::vector<Word>& sorted, const Word& w) {
    int hits = 0;
    for (std::size_t len = 1; len <= w.size(); ++len)
        if (std::binary_search(sorted.begin(), sorted.end(), w.prefix(len))) ++hits;
    return hits;
}
}  // namespace

TEST_CASE("epsilon_zero") {
    const ProbabilityVector uniform(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(epsilon_zero(uniform, 2.0, 0.5) ==
          doctest::Approx(std::sqrt(1.0 / 27.0)).epsilon(1e-12));
    // attained at the smallest letter probability
    CHECK(epsilon_zero(kP, 2.0, 0.4) ==
          doctest::Approx(std::pow(0.25 / 9.0, 0.4)).epsilon(1e-12));
    // single letters stay above the threshold
    auto& P = pipe();
    const double eps0 = epsilon_zero(kP, P.r, P.t0);
    for (int d : {0, 1, 3})
        CHECK(P.ctx.phi_t(Word{d}, P.t0, P.r, true) >= eps0 * (1.0 - 1e-12));
}

TEST_CASE("build_gamma_hat structure") {
    auto& P = pipe();
    const double eps0 = epsilon_zero(kP, P.r, P.t0);
    CHECK_THROWS_AS(build_gamma_hat(P.ctx, eps0, P.r, P.t0), std::invalid_argument);
    CHECK_THROWS_AS(build_gamma_hat(P.ctx, 0.0, P.r, P.t0), std::invalid_argument);
    CHECK_THROWS_AS(build_gamma_hat(P.ctx, 1e-3, P.r, P.t0, /*cap=*/10), std::length_error);

    const Antichain g = build_gamma_hat(P.ctx, 1e-2, P.r, P.t0);
    CHECK(g.kind == AntichainKind::gamma_hat);
    CHECK(std::is_sorted(g.members.begin(), g.members.end()));
    for (const auto& w : g.members) {
        CHECK(w.size() >= 2);
        CHECK(word_admissible(Branch::A, w));
        // first passage: member below, every proper prefix at or above
        CHECK(P.ctx.phi_t(w, P.t0, P.r, true) < g.epsilon);
        for (std::size_t len = 1; len < w.size(); ++len)
            CHECK(P.ctx.phi_t(w.prefix(len), P.t0, P.r, true) >= g.epsilon);
    }
}

TEST_CASE("gamma_hat is deterministic") {
    auto& P = pipe();
    const Antichain a = build_gamma_hat(P.ctx, 1e-3, P.r, P.t0);
    const Antichain b = build_gamma_hat(P.ctx, 1e-3, P.r, P.t0);
    CHECK(a.members == b.members);
}

TEST_CASE("gamma_hat maximality via the prefix-scan oracle") {
    auto& P = pipe();
    std::mt19937_64 rng(4242);
    for (double eps : {1e-2, 1e-3}) {
        const Antichain g = build_gamma_hat(P.ctx, eps, P.r, P.t0);
        for (int rep = 0; rep < 2000; ++rep) {
            const Word w = oracle::random_branch_a_word(rng, kP, 40);
            CHECK(prefix_hits(g.members, w) == 1);
        }
    }
}

TEST_CASE("epsilon monotonicity of the first passage") {
    auto& P = pipe();
    const Antichain coarse = build_gamma_hat(P.ctx, 1e-2, P.r, P.t0);
    const Antichain fine = build_gamma_hat(P.ctx, 1e-3, P.r, P.t0);
    CHECK(fine.members.size() > coarse.members.size());
    for (const auto& w : fine.members) CHECK(prefix_hits(coarse.members, w) == 1);
}

TEST_CASE("epsilon-count scaling stays in a band") {
    auto& P = pipe();
    std::vector<double> products;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const Antichain g = build_gamma_hat(P.ctx, eps, P.r, P.t0);
        products.push_back(eps * static_cast<double>(g.members.size()));
    }
    const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
    CHECK(*hi / *lo <= 10.0);
}

TEST_CASE("extend_to_E") {
    auto& P = pipe();
    const Antichain g = build_gamma_hat(P.ctx, 1e-2, P.r, P.t0);
    const Antichain gE = extend_to_E(g);
    CHECK(gE.kind == AntichainKind::gamma_E);
    CHECK(gE.members.size() <= 2 * g.members.size());
    CHECK(std::is_sorted(gE.members.begin(), gE.members.end()));
    CHECK_THROWS_AS(extend_to_E(gE), std::invalid_argument);

    std::set<Word> base(g.members.begin(), g.members.end());
    // every member ending in 1 spawned its sibling
    for (const auto& w : g.members)
        if (w.back() == 1)
            CHECK(std::binary_search(gE.members.begin(), gE.members.end(),
                                     w.parent().append(0)));
    // every extended member still sits below the threshold
    for (const auto& w : gE.members)
        CHECK(P.ctx.phi_t(w, P.t0, P.r, true) < gE.epsilon);
}

TEST_CASE("project_to_full_shift covers the full shift exactly once") {
    auto& P = pipe();
    std::mt19937_64 rng(31337);
    for (double eps : {1e-2, 1e-3}) {
        const Antichain gE = extend_to_E(build_gamma_hat(P.ctx, eps, P.r, P.t0));
        const Antichain gs = project_to_full_shift(P.ctx, gE);
        CHECK(gs.kind == AntichainKind::gamma_sigma_tilde);
        CHECK(std::is_sorted(gs.members.begin(), gs.members.end()));

        // pairwise prefix-incomparable (sorted scan)
        for (std::size_t k = 0; k + 1 < gs.members.size(); ++k)
            CHECK_FALSE(gs.members[k].is_proper_prefix_of(gs.members[k + 1]));

        // total cylinder mass 1
        double mass = 0.0;
        for (const auto& w : gs.members) mass += oracle::word_mass(kP, w);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

        // unique prefix on unconstrained digit streams
        for (int rep = 0; rep < 2000; ++rep) {
            const Word w = oracle::random_full_word(rng, kP, 40);
            CHECK(prefix_hits(gs.members, w) == 1);
        }

        // covering before pruning: >= 1 prefix in the expanded set
        std::vector<Word> expanded;
        for (const auto& w : gE.members) {
            const auto fiber = P.ctx.enumerate_class(w, w.size());
            expanded.insert(expanded.end(), fiber.begin(), fiber.end());
        }
        std::sort(expanded.begin(), expanded.end());
        for (int rep = 0; rep < 500; ++rep) {
            const Word w = oracle::random_full_word(rng, kP, 40);
            CHECK(prefix_hits(expanded, w) >= 1);
        }
    }
}

TEST_CASE("antichain_stats") {
    auto& P = pipe();
    const Antichain g = build_gamma_hat(P.ctx, 1e-3, P.r, P.t0);
    const AntichainStats s = antichain_stats(P.ctx, g);
    CHECK(s.count == g.members.size());
    CHECK(s.min_len >= 2);
    CHECK(s.max_len >= s.min_len);
    CHECK(s.sum_phi_hat > 0.0);
    CHECK(s.parent_ratio > 0.0);
    CHECK(s.parent_ratio < 1.0);  // parents sit above the threshold

    // parent values at or above epsilon
    for (const auto& w : g.members)
        CHECK(P.ctx.phi_t(w.parent(), P.t0, P.r, true) >= g.epsilon);

    // empirical band for the phi-hat sum across the sweep (regression bound)
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const AntichainStats se =
            antichain_stats(P.ctx, build_gamma_hat(P.ctx, eps, P.r, P.t0));
        CHECK(se.sum_phi_hat >= 0.1);
        CHECK(se.sum_phi_hat <= 10.0);
        CHECK(se.parent_ratio > 0.05);
    }
}

TEST_CASE("parent set covers every admissible stream but is not an antichain") {
    auto& P = pipe();
    std::mt19937_64 rng(2718);
    const Antichain g = build_gamma_hat(P.ctx, 1e-3, P.r, P.t0);
    const Antichain parents = parent_antichain(g);
    CHECK(parents.kind == AntichainKind::gamma_minus);
    CHECK(parents.members.size() < g.members.size());
    for (int rep = 0; rep < 2000; ++rep) {
        const Word w = oracle::random_branch_a_word(rng, kP, 40);
        CHECK(prefix_hits(parents.members, w) >= 1);
    }
    // Pinned discrepancy with the literature: first passage can happen at
    // different depths on sibling branches, so comparable parents exist and
    // the covering is not exactly-once. The gamma_hat set itself, and the
    // full-shift projection, are genuine maximal antichains (tested above).
    std::size_t comparable = 0;
    std::vector<const Word*> chain;
    for (const auto& w : parents.members) {
        while (!chain.empty() && !chain.back()->is_proper_prefix_of(w)) chain.pop_back();
        if (!chain.empty()) ++comparable;
        chain.push_back(&w);
    }
    CHECK(comparable > 0);
}

TEST_CASE("theta set holds exactly the 0-siblings of 1-ending members") {
    auto& P = pipe();
    const Antichain g = build_gamma_hat(P.ctx, 1e-2, P.r, P.t0);
    const Antichain theta = theta_set(g);
    CHECK(theta.kind == AntichainKind::theta);
    std::size_t ending_in_1 = 0;
    for (const auto& w : g.members)
        if (w.back() == 1) ++ending_in_1;
    CHECK(theta.members.size() <= ending_in_1);
    CHECK(!theta.members.empty());
    for (const auto& w : theta.members) CHECK(w.back() == 0);
}
