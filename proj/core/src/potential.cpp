#include "qdim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdim {

ProbabilityVector::ProbabilityVector(double p0, double p1, double p3)
    : p0_(p0), p1_(p1), p3_(p3) {
    if (!(p0 > 0.0 && p1 > 0.0 && p3 > 0.0))
        throw std::invalid_argument("probability vector entries must be strictly positive");
    if (std::abs(p0 + p1 + p3 - 1.0) > 1e-12)
        throw std::invalid_argument("probability vector must sum to 1 within 1e-12");
}

double ProbabilityVector::of(int digit) const {
    switch (digit) {
        case 0: return p0_;
        case 1: return p1_;
        case 3: return p3_;
    }
    throw std::invalid_argument("digit must be 0, 1 or 3");
}

double ProbabilityVector::min() const { return std::min({p0_, p1_, p3_}); }
double ProbabilityVector::max() const { return std::max({p0_, p1_, p3_}); }

PotentialContext::PotentialContext(ProbabilityVector p) : p_(p) {
    log_p_[0] = std::log(p_.p0());
    log_p_[1] = std::log(p_.p1());
    log_p_[3] = std::log(p_.p3());
    log_p_[2] = 0.0;
    if (p_.standing_assumption_holds() && p_.p1() - p_.p3() < p_.p0()) {
        const double ratio = p_.p3() / p_.p1();
        const double target = p_.p1() / p_.p0();
        double sum = 0.0, term = 1.0;
        int q = 0;
        while (true) {
            sum += term;
            ++q;
            if (sum > target) break;
            term *= ratio;
        }
        q0_ = q;
    }
}

double PotentialContext::a_value(std::size_t w) const {
    if (w < 1) throw std::invalid_argument("a_value requires w >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    while (a_cache_.size() < w) {
        const std::size_t m = a_cache_.size() + 1;
        // sum_{l=0}^{m-1} p1^{m-1-l} p3^l, division-free Horner.
        double s = 0.0, q = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            s = s * p_.p3() + q;
            q *= p_.p1();
        }
        a_cache_.push_back(p_.p0() * s);
    }
    return a_cache_[w - 1];
}

double PotentialContext::log_a_value(std::size_t w) const {
    if (w < 1) throw std::invalid_argument("log_a_value requires w >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    while (log_a_cache_.size() < w) {
        const std::size_t m = log_a_cache_.size() + 1;
        // log a_m = log p0 + (m-1) log max(p1,p3) + log sum (min/max)^l;
        // the geometric sum stays in [1, m], so this never underflows.
        const double hi = std::max(p_.p1(), p_.p3());
        const double lo = std::min(p_.p1(), p_.p3());
        const double ratio = lo / hi;
        double s = 0.0, term = 1.0;
        for (std::size_t l = 0; l < m; ++l) {
            s += term;
            term *= ratio;
        }
        log_a_cache_.push_back(log_p_[0] + static_cast<double>(m - 1) * std::log(hi) +
                               std::log(s));
    }
    return log_a_cache_[w - 1];
}

std::optional<int> PotentialContext::q_zero() const {
    require_standing_assumption("q_zero");
    return q0_;
}

void PotentialContext::require_admissible(const Word& i) const {
    if (!word_admissible(Branch::A, i))
        throw std::domain_error("word " + i.str() +
                                " contains the factor (0,3); canonicalize first");
}

void PotentialContext::require_standing_assumption(const char* op) const {
    if (!p_.standing_assumption_holds())
        throw std::domain_error(std::string(op) +
                                " requires p3 <= p1; the dimension pipeline "
                                "(pressure module) works without it");
}

double PotentialContext::psi(const Word& i) const {
    require_admissible(i);
    const BlockPartition bp = decompose_blocks(i);
    double value = 1.0;
    for (int z : bp.a_good) value *= p_.of(i[static_cast<std::size_t>(z - 1)]);
    for (const auto& r : bp.good) value *= a_value(static_cast<std::size_t>(r.length()));
    return value;
}

double PotentialContext::log_psi(const Word& i) const {
    require_admissible(i);
    const BlockPartition bp = decompose_blocks(i);
    double value = 0.0;
    for (int z : bp.a_good) value += log_p_[i[static_cast<std::size_t>(z - 1)]];
    for (const auto& r : bp.good) value += log_a_value(static_cast<std::size_t>(r.length()));
    return value;
}

double PotentialContext::psi_hat(const Word& i) const {
    require_standing_assumption("psi_hat");
    if (i.empty() || i.back() != 1) return psi(i);
    return std::max(psi(i), psi(i.parent().append(0)));
}

double PotentialContext::log_psi_hat(const Word& i) const {
    require_standing_assumption("psi_hat");
    if (i.empty() || i.back() != 1) return log_psi(i);
    return std::max(log_psi(i), log_psi(i.parent().append(0)));
}

Word PotentialContext::star(const Word& i) const {
    require_standing_assumption("star");
    require_admissible(i);
    const std::size_t run = i.size() - xi(i);
    if (run >= 1 && q0_ && run >= static_cast<std::size_t>(*q0_))
        return i.parent().append(0);
    return i;
}

double PotentialContext::phi_t(const Word& i, double t, double r, bool hat) const {
    if (t < 0.0) throw std::invalid_argument("phi_t requires t >= 0");
    if (r <= 0.0) throw std::invalid_argument("phi_t requires r > 0");
    const double lg = hat ? log_psi_hat(i) : log_psi(i);
    return std::exp(t * (lg - static_cast<double>(i.size()) * r * std::log(3.0)));
}

std::vector<Word> PotentialContext::enumerate_class(const Word& i, std::size_t cap) const {
    require_admissible(i);
    if (i.size() > cap)
        throw std::length_error("enumerate_class: word length " + std::to_string(i.size()) +
                                " exceeds the enumeration cap " + std::to_string(cap));
    const BlockPartition bp = decompose_blocks(i);
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(class_size(i)));
    std::vector<std::uint8_t> digits(i.begin(), i.end());
    // Each maximal good block (1^{w-1},0) over [k,l] is independently
    // replaced by (1^{w-1-j}, 0, 3^j) for j = 0..w-1.
    auto fill = [&](auto&& self, std::size_t block_idx) -> void {
        if (block_idx == bp.good.size()) {
            out.emplace_back(digits);
            return;
        }
        const IndexRange r = bp.good[block_idx];
        const int w = r.length();
        for (int j = 0; j < w; ++j) {
            for (int z = r.k; z <= r.l; ++z) {
                const int off = z - r.k;
                std::uint8_t d;
                if (off < w - 1 - j) d = 1;
                else if (off == w - 1 - j) d = 0;
                else d = 3;
                digits[static_cast<std::size_t>(z - 1)] = d;
            }
            self(self, block_idx + 1);
        }
        // restore the canonical block
        for (int z = r.k; z < r.l; ++z) digits[static_cast<std::size_t>(z - 1)] = 1;
        digits[static_cast<std::size_t>(r.l - 1)] = 0;
    };
    fill(fill, 0);
    std::sort(out.begin(), out.end());
    return out;
}

unsigned long long PotentialContext::class_size(const Word& i) const {
    require_admissible(i);
    const BlockPartition bp = decompose_blocks(i);
    unsigned long long size = 1;
    for (const auto& r : bp.good) size *= static_cast<unsigned long long>(r.length());
    return size;
}

std::size_t xi(const Word& i) {
    std::size_t run = 0;
    for (std::size_t k = i.size(); k-- > 0;) {
        if (i[k] != 1) break;
        ++run;
    }
    return i.size() - run;
}

}  // namespace qdim
