#pragma once

#include "hitasym/conditions.hpp"
#include "hitasym/cyclic_system.hpp"
#include "hitasym/distance.hpp"
#include "hitasym/rationalize.hpp"
#include "hitasym/stamp_machine.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hitasym {

// The dyadic odometer (add one with carry on binary sequences) permutes the
// 2^m cylinders of length m as ℓ -> ℓ + 1 mod 2^m, where ℓ reads the first m
// digits least-significant first. Its level-0 cylinder therefore carries an
// exact Rohlin tower of height 2^m, and hitting times to any union of
// m-cylinders are those of the cyclic factor Z/2^m. Everything below works
// in that factor; residue i stands for the cylinder with index i - 1.

inline constexpr unsigned kMaxTowerExponent = 40;

/// A height-2^m odometer tower cut into r = floor(2^m / q) subtowers of
/// height q, each marked with the stamp; the top `leftover` floors stay
/// unmarked.
struct TowerStamping {
    unsigned m = 0;
    StampParams params;
    Stamp stamp;
    std::uint64_t r = 0;
    std::uint64_t leftover = 0;

    [[nodiscard]] std::uint64_t height() const { return std::uint64_t{1} << m; }

    /// r p / 2^m.
    [[nodiscard]] Rational measure() const {
        return Rational(from_u64(r) * from_u64(params.p), from_u64(height()));
    }

    [[nodiscard]] CyclicSystem system() const {
        std::vector<std::uint64_t> U;
        U.reserve(r * stamp.marked_offsets.size());
        for (std::uint64_t j = 0; j < r; ++j)
            for (auto off : stamp.marked_offsets) U.push_back(j * params.q + off + 1);
        return CyclicSystem(height(), std::move(U));
    }
};

inline TowerStamping make_tower_stamping(unsigned m, const StampParams& sp) {
    sp.validate();
    if (m > kMaxTowerExponent) throw std::invalid_argument("stamp_tower: m = " + std::to_string(m) + " too large");
    TowerStamping ts;
    ts.m = m;
    ts.params = sp;
    ts.stamp = make_stamp(sp);
    if (ts.height() < sp.q)
        throw std::invalid_argument("stamp_tower: 2^" + std::to_string(m) + " < q = " + std::to_string(sp.q));
    ts.r = ts.height() / sp.q;
    ts.leftover = ts.height() % sp.q;
    return ts;
}

inline CyclicSystem stamp_tower(unsigned m, const StampParams& sp) {
    return make_tower_stamping(m, sp).system();
}

/// For every subtower with another one above it (and the top one too when
/// `include_top`), the law of alpha * tau_U restricted to its q floors must
/// equal F exactly on ]-inf, k_s alpha]. Hitting times come from a reverse
/// sweep over all 2^m levels of the tower.
inline bool subtower_exactness_check(const TowerStamping& ts, bool include_top = false) {
    if (!include_top && ts.r < 2)
        throw std::invalid_argument("subtower_exactness_check: needs r >= 2, got r = " + std::to_string(ts.r));
    const std::uint64_t n = ts.height();
    const std::uint64_t q = ts.params.q;
    const std::uint64_t K = ts.params.k.back();
    const std::uint64_t checked = include_top ? ts.r : ts.r - 1;

    std::vector<std::uint8_t> marked(n, 0);
    for (std::uint64_t j = 0; j < ts.r; ++j)
        for (auto off : ts.stamp.marked_offsets) marked[j * q + off] = 1;

    // expected[k-1] = q * beta_k
    std::vector<std::uint64_t> expected;
    expected.reserve(K);
    for (std::size_t j = 0, k = 1; k <= K; ++k) {
        while (ts.params.k[j] < k) ++j;
        expected.push_back(ts.params.pvals[j]);
    }

    std::uint64_t first = 0;
    while (!marked[first]) ++first;
    std::uint64_t next = n + first;
    std::vector<std::uint64_t> counts(K + 1, 0);  // counts[K] collects tau > K
    // Levels above the checked block only feed `next`.
    std::uint64_t top = checked * q;
    for (std::uint64_t level = n; level-- > top;)
        if (marked[level]) next = level;
    for (std::uint64_t j = checked; j-- > 0;) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint64_t level = (j + 1) * q; level-- > j * q;) {
            std::uint64_t tau = next - level;
            ++counts[std::min(tau, K + 1) - 1];
            if (marked[level]) next = level;
        }
        for (std::uint64_t k = 0; k < K; ++k)
            if (counts[k] != expected[k]) return false;
    }
    return true;
}

struct RealizationStage {
    Rational eps;
    std::uint64_t N = 0;
    RationalF rational;
    TowerStamping tower;
    StepCDF hitting;
    Rational measure;  // mu(U_n)
    Rational levy;     // Lévy distance from hitting to the target
};

struct RealizationTrace {
    std::vector<RealizationStage> stages;
    unsigned margin = 0;
};

/// Smallest m with 2^m >= q / eps.
inline unsigned tower_exponent(std::uint64_t q, const Rational& eps) {
    Rational need = Rational(from_u64(q)) / eps;
    unsigned m = 0;
    while (Rational(from_u64(std::uint64_t{1} << m)) < need) ++m;
    return m;
}

/// Rationalize the target at each eps, stamp the result on an odometer tower
/// of height 2^m with m = ceil(log2(q / eps)) + margin, and record how far
/// the resulting hitting CDF is from the target.
inline RealizationTrace realize(const TargetF& f0, const std::vector<Rational>& eps_schedule, unsigned margin = 2) {
    if (eps_schedule.empty()) throw std::invalid_argument("realize: empty eps schedule");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (eps_schedule[i].sign() <= 0) throw std::invalid_argument("realize: eps must be positive");
        if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
            throw std::invalid_argument("realize: eps schedule must be strictly decreasing");
    }
    RealizationTrace trace;
    trace.margin = margin;
    for (const auto& eps : eps_schedule) {
        auto rz = rationalize_target(f0, eps);
        auto sp = derive_params(rz.f);
        unsigned m = tower_exponent(sp.q, eps) + margin;
        auto ts = make_tower_stamping(m, sp);
        auto sys = ts.system();
        StepCDF hit = hitting_cdf(sys);
        Rational levy = levy_distance(hit, f0);
        trace.stages.push_back({eps, rz.N, std::move(rz.f), std::move(ts), std::move(hit), sys.measure(),
                                std::move(levy)});
    }
    return trace;
}

} // namespace hitasym
