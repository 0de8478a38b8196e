#pragma once

#include "hitasym/distribution.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hitasym {

/// The cycle x -> x + 1 on {1, ..., q} (q -> 1) with uniform measure and a
/// marked set U. Residues are 1-based.
class CyclicSystem {
  public:
    CyclicSystem(std::uint64_t q, std::vector<std::uint64_t> marked) : q_(q), marked_(std::move(marked)) {
        if (q_ == 0) throw std::invalid_argument("CyclicSystem: q must be positive");
        if (marked_.empty()) throw std::invalid_argument("CyclicSystem: marked set is empty");
        std::sort(marked_.begin(), marked_.end());
        for (std::size_t i = 0; i < marked_.size(); ++i) {
            if (marked_[i] < 1 || marked_[i] > q_)
                throw std::invalid_argument("CyclicSystem: residue " + std::to_string(marked_[i]) +
                                            " outside 1.." + std::to_string(q_));
            if (i > 0 && marked_[i] == marked_[i - 1])
                throw std::invalid_argument("CyclicSystem: duplicate residue " + std::to_string(marked_[i]));
        }
    }

    [[nodiscard]] std::uint64_t q() const { return q_; }
    /// Sorted marked residues.
    [[nodiscard]] const std::vector<std::uint64_t>& marked() const { return marked_; }
    [[nodiscard]] Rational measure() const { return make_rational(marked_.size(), q_); }

    /// Return time of each marked residue, in sorted residue order: the
    /// forward distance to the next marked residue, cyclically.
    [[nodiscard]] std::vector<std::uint64_t> gaps() const {
        std::vector<std::uint64_t> g(marked_.size());
        for (std::size_t i = 0; i + 1 < marked_.size(); ++i) g[i] = marked_[i + 1] - marked_[i];
        g.back() = marked_.front() + q_ - marked_.back();
        return g;
    }

    friend bool operator==(const CyclicSystem&, const CyclicSystem&) = default;

  private:
    std::uint64_t q_;
    std::vector<std::uint64_t> marked_;
};

inline CyclicSystem make_cyclic(std::uint64_t q, std::vector<std::uint64_t> marked) {
    return CyclicSystem(q, std::move(marked));
}

/// counts[k-1] = number of points x with hitting time k.
struct HittingHistogram {
    std::vector<std::uint64_t> counts;

    [[nodiscard]] std::uint64_t at(std::uint64_t k) const {
        return k >= 1 && k <= counts.size() ? counts[k - 1] : 0;
    }
    [[nodiscard]] std::uint64_t max_time() const { return counts.size(); }
    friend bool operator==(const HittingHistogram&, const HittingHistogram&) = default;
};

/// Hitting-time histogram. The points between two consecutive marked
/// residues (starting at the first one) have hitting times gap, gap-1, ...,
/// 1, so count(k) is the number of gaps >= k.
inline HittingHistogram hitting_times(const CyclicSystem& sys) {
    auto g = sys.gaps();
    std::uint64_t longest = *std::max_element(g.begin(), g.end());
    std::vector<std::uint64_t> at_least(longest + 1, 0);
    for (auto gap : g) ++at_least[gap];
    HittingHistogram h;
    h.counts.assign(longest, 0);
    std::uint64_t running = 0;
    for (std::uint64_t k = longest; k >= 1; --k) {
        running += at_least[k];
        h.counts[k - 1] = running;
    }
    return h;
}

/// F_U(t) = mu({mu(U) tau_U <= t}).
inline StepCDF hitting_cdf(const CyclicSystem& sys) {
    auto h = hitting_times(sys);
    Rational mu = sys.measure();
    mpz_class q = from_u64(sys.q());
    std::vector<Jump> jumps;
    jumps.reserve(h.counts.size());
    for (std::size_t k = 1; k <= h.counts.size(); ++k)
        jumps.push_back({Rational(static_cast<unsigned long>(k)) * mu, Rational(from_u64(h.counts[k - 1]), q)});
    return StepCDF(std::move(jumps));
}

/// Multiplicity of each return time, ascending.
inline std::map<std::uint64_t, std::uint64_t> return_time_counts(const CyclicSystem& sys) {
    std::map<std::uint64_t, std::uint64_t> out;
    for (auto gap : sys.gaps()) ++out[gap];
    return out;
}

/// Normalized return-time law on U: jumps at mu(U) * gap, weight 1/|U| each.
inline StepCDF return_cdf(const CyclicSystem& sys) {
    Rational mu = sys.measure();
    mpz_class p = from_u64(sys.marked().size());
    std::vector<Jump> jumps;
    for (auto [gap, n] : return_time_counts(sys))
        jumps.push_back({Rational(from_u64(gap)) * mu, Rational(from_u64(n), p)});
    return StepCDF(std::move(jumps));
}

/// Sum over t of t * mu(U ∩ {tau_U = t}); always 1.
inline Rational kac_expectation(const CyclicSystem& sys) {
    Rational sum;
    mpz_class q = from_u64(sys.q());
    for (auto [gap, n] : return_time_counts(sys)) sum += Rational(from_u64(gap) * from_u64(n), q);
    return sum;
}

struct Skyscraper {
    std::uint64_t height;
    Rational base_width;
    friend bool operator==(const Skyscraper&, const Skyscraper&) = default;
};

/// Kac's town over U: one skyscraper per distinct return time.
struct KacTown {
    std::vector<Skyscraper> skyscrapers;
    Rational ground_mass;

    [[nodiscard]] Rational total_floor_mass() const {
        Rational sum;
        for (const auto& s : skyscrapers) sum += Rational(from_u64(s.height)) * s.base_width;
        return sum;
    }
};

inline KacTown kac_town(const CyclicSystem& sys) {
    KacTown town;
    mpz_class q = from_u64(sys.q());
    for (auto [gap, n] : return_time_counts(sys)) town.skyscrapers.push_back({gap, Rational(from_u64(n), q)});
    town.ground_mass = sys.measure();
    return town;
}

} // namespace hitasym
