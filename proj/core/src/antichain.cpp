#include "qdim/antichain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdim {

namespace {
constexpr double kLog3 = 1.0986122886681098;
}

const char* to_string(AntichainKind kind) {
    switch (kind) {
        case AntichainKind::gamma_hat: return "gamma_hat";
        case AntichainKind::gamma_minus: return "gamma_minus";
        case AntichainKind::theta: return "theta";
        case AntichainKind::gamma_E: return "gamma_E";
        case AntichainKind::gamma_sigma_tilde: return "gamma_sigma_tilde";
    }
    return "?";
}

double epsilon_zero(const ProbabilityVector& p, double r, double t0) {
    if (!(r > 0.0)) throw std::invalid_argument("epsilon_zero requires r > 0");
    if (!(t0 > 0.0 && t0 < 1.0)) throw std::invalid_argument("epsilon_zero requires t0 in (0,1)");
    return std::exp(t0 * (std::log(p.min()) - r * kLog3));
}

Antichain build_gamma_hat(const PotentialContext& ctx, double epsilon, double r,
                          double t0, std::size_t cap) {
    const double eps0 = epsilon_zero(ctx.p(), r, t0);
    if (!(epsilon > 0.0) || epsilon >= eps0)
        throw std::invalid_argument(
            "build_gamma_hat requires 0 < epsilon < epsilon_zero = min_i (p_i 3^-r)^t0 = " +
            std::to_string(eps0) + "; single letters must stay above the threshold");
    if (!ctx.p().standing_assumption_holds())
        throw std::domain_error("build_gamma_hat requires p3 <= p1");

    const double lp1 = std::log(ctx.p().p1());
    const double lp3 = std::log(ctx.p().p3());
    const double log_eps = std::log(epsilon);

    Antichain out;
    out.epsilon = epsilon;
    out.r = r;
    out.t0 = t0;
    out.kind = AntichainKind::gamma_hat;

    std::vector<std::uint8_t> word;
    // committed = log psi of everything before the pending trailing 1-run.
    auto log_phi_hat = [&](double committed, int run, std::size_t len) {
        double lpsi_hat = committed;
        if (run >= 1)
            lpsi_hat += std::max(run * lp1, ctx.log_a_value(static_cast<std::size_t>(run)));
        return t0 * (lpsi_hat - static_cast<double>(len) * r * kLog3);
    };

    auto descend = [&](auto&& self, double committed, int run, bool last_zero) -> void {
        for (int d : system::kTranslations) {
            if (last_zero && d == 3) continue;
            double child_committed = committed;
            int child_run = run;
            if (d == 0) {
                child_committed += ctx.log_a_value(static_cast<std::size_t>(run) + 1);
                child_run = 0;
            } else if (d == 1) {
                child_run = run + 1;
            } else {
                child_committed += run * lp1 + lp3;
                child_run = 0;
            }
            word.push_back(static_cast<std::uint8_t>(d));
            if (log_phi_hat(child_committed, child_run, word.size()) < log_eps) {
                if (out.members.size() >= cap)
                    throw std::length_error(
                        "build_gamma_hat: member count exceeds the cap " +
                        std::to_string(cap));
                out.members.emplace_back(std::span<const std::uint8_t>(word));
            } else {
                self(self, child_committed, child_run, d == 0);
            }
            word.pop_back();
        }
    };
    descend(descend, 0.0, 0, false);
    // depth-first in digit order already yields lexicographic members
    return out;
}

namespace {
void sort_unique(std::vector<Word>& words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
}

void require_kind(const Antichain& a, AntichainKind kind, const char* op) {
    if (a.kind != kind)
        throw std::invalid_argument(std::string(op) + " expects a " +
                                    to_string(kind) + " antichain");
}
}  // namespace

Antichain parent_antichain(const Antichain& gamma_hat) {
    require_kind(gamma_hat, AntichainKind::gamma_hat, "parent_antichain");
    Antichain out = gamma_hat;
    out.kind = AntichainKind::gamma_minus;
    out.members.clear();
    for (const auto& w : gamma_hat.members) out.members.push_back(w.parent());
    sort_unique(out.members);
    return out;
}

Antichain theta_set(const Antichain& gamma_hat) {
    require_kind(gamma_hat, AntichainKind::gamma_hat, "theta_set");
    Antichain out = gamma_hat;
    out.kind = AntichainKind::theta;
    out.members.clear();
    for (const auto& w : gamma_hat.members)
        if (w.back() == 1) out.members.push_back(w.parent().append(0));
    sort_unique(out.members);
    return out;
}

Antichain extend_to_E(const Antichain& gamma_hat) {
    require_kind(gamma_hat, AntichainKind::gamma_hat, "extend_to_E");
    Antichain out = gamma_hat;
    out.kind = AntichainKind::gamma_E;
    const Antichain theta = theta_set(gamma_hat);
    out.members.insert(out.members.end(), theta.members.begin(), theta.members.end());
    sort_unique(out.members);
    return out;
}

Antichain project_to_full_shift(const PotentialContext& ctx, const Antichain& gamma_E,
                                std::size_t cap) {
    if (gamma_E.kind != AntichainKind::gamma_E)
        throw std::invalid_argument("project_to_full_shift expects a gamma_E antichain");

    std::size_t total = 0;
    for (const auto& w : gamma_E.members) {
        total += static_cast<std::size_t>(ctx.class_size(w));
        if (total > cap)
            throw std::length_error("project_to_full_shift: fiber expansion exceeds the cap " +
                                    std::to_string(cap));
    }

    std::vector<Word> expanded;
    expanded.reserve(total);
    for (const auto& w : gamma_E.members) {
        // Antichain members may exceed the global enumeration cap in length;
        // the fiber sizes were already budgeted above, so lift the cap here.
        auto fiber = ctx.enumerate_class(w, /*cap=*/w.size());
        expanded.insert(expanded.end(), std::make_move_iterator(fiber.begin()),
                        std::make_move_iterator(fiber.end()));
    }
    std::sort(expanded.begin(), expanded.end());
    expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());

    // Prune words with a proper prefix in the expanded set. In lex order the
    // kept prefixes of the current word form a chain tracked by the stack.
    Antichain out;
    out.epsilon = gamma_E.epsilon;
    out.r = gamma_E.r;
    out.t0 = gamma_E.t0;
    out.kind = AntichainKind::gamma_sigma_tilde;
    std::vector<const Word*> chain;
    for (const auto& w : expanded) {
        while (!chain.empty() && !chain.back()->is_proper_prefix_of(w)) chain.pop_back();
        if (!chain.empty()) continue;  // pruned
        out.members.push_back(w);
        chain.push_back(&w);
    }
    return out;
}

AntichainStats antichain_stats(const PotentialContext& ctx, const Antichain& a) {
    AntichainStats s;
    s.count = a.members.size();
    if (a.members.empty()) return s;
    s.min_len = a.members.front().size();
    s.max_len = s.min_len;
    for (const auto& w : a.members) {
        s.min_len = std::min(s.min_len, w.size());
        s.max_len = std::max(s.max_len, w.size());
        const Word canon = canonicalize(w);
        s.sum_phi_hat += ctx.phi_t(canon, a.t0, a.r, /*hat=*/true);
        s.sum_phi_hat_parents += ctx.phi_t(canonicalize(w.parent()), a.t0, a.r, /*hat=*/true);
        double mass = 1.0;
        for (std::uint8_t d : w) mass *= ctx.p().of(d);
        s.sum_cylinder_mass += mass;
    }
    s.parent_ratio = s.sum_phi_hat / s.sum_phi_hat_parents;
    return s;
}

}  // namespace qdim
