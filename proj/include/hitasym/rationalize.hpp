#pragma once

#include "hitasym/conditions.hpp"
#include "hitasym/distance.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hitasym {

/// Decides exactly whether for every t in [0, 1/eps] there is an s with
/// |s - t| < eps and |f0(t) - f(s)| <= eps.
///
/// The values f takes on the window ]t - eps, t + eps[ are the levels of a
/// contiguous range of its steps. Between consecutive events (breakpoints
/// of f0, jump locations of f shifted by ±eps) that range is fixed and f0 is
/// monotone, so each open piece reduces to "is [f0(t1), f0(t2-)] inside one
/// connected component of the union of [v_j - eps, v_j + eps]". Event
/// points are checked individually.
template <CdfLike F0>
bool check_star(const F0& f0, const StepCDF& f, const Rational& eps) {
    if (eps.sign() <= 0) throw std::invalid_argument("check_star: eps must be positive");
    const Rational horizon = Rational(1) / eps;
    const Rational two_eps = eps + eps;

    // levels[j] = value of f on its j-th step (step 0 is before the first jump)
    std::vector<Rational> levels{Rational(0)};
    for (std::size_t i = 0; i < f.size(); ++i) levels.push_back(f.cumulative(i));
    // component_end[j]: last step reachable from j through level gaps <= 2 eps
    std::vector<std::size_t> component_end(levels.size());
    component_end.back() = levels.size() - 1;
    for (std::size_t j = levels.size() - 1; j-- > 0;)
        component_end[j] = levels[j + 1] - levels[j] <= two_eps ? component_end[j + 1] : j;

    auto covered = [&](std::size_t lo, std::size_t hi, const Rational& ylo, const Rational& yhi) {
        Rational need = ylo - eps;
        auto first = std::lower_bound(levels.begin() + static_cast<std::ptrdiff_t>(lo),
                                      levels.begin() + static_cast<std::ptrdiff_t>(hi) + 1, need);
        auto j = static_cast<std::size_t>(first - levels.begin());
        if (j > hi) return false;
        if (levels[j] - eps > ylo) return false;
        std::size_t e = std::min(component_end[j], hi);
        return levels[e] + eps >= yhi;
    };
    // steps meeting ]t - eps, t + eps[
    auto window = [&](const Rational& t) {
        return std::pair{f.count_le(t - eps), f.count_lt(t + eps)};
    };

    std::vector<Rational> events{Rational(0), horizon};
    for (const auto& b : f0.breakpoints())
        if (b.sign() >= 0 && b <= horizon) events.push_back(b);
    for (const auto& j : f.jumps()) {
        for (const auto& e : {j.t - eps, j.t + eps})
            if (e.sign() >= 0 && e <= horizon) events.push_back(e);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    for (std::size_t i = 0; i < events.size(); ++i) {
        const Rational& t = events[i];
        auto [lo, hi] = window(t);
        Rational y = f0.eval(t);
        if (!covered(lo, hi, y, y)) return false;
        if (i + 1 == events.size()) break;
        const Rational& t2 = events[i + 1];
        auto [mlo, mhi] = window((t + t2) / Rational(2));
        Rational y1 = f0.eval(t);
        Rational y2 = f0.left_limit(t2);
        if (!covered(mlo, mhi, min(y1, y2), max(y1, y2))) return false;
    }
    return true;
}

template <CdfLike F0>
bool check_star(const F0& f0, const RationalF& f, const Rational& eps) {
    return check_star(f0, f.step_cdf(), eps);
}

/// A rational approximation together with the mesh parameter N that
/// produced it (jumps of the result live on the 1/N grid for targets).
struct Rationalization {
    RationalF f;
    std::uint64_t N;
};

/// Smallest integer N with N > 1/eps.
inline std::uint64_t star_mesh(const Rational& eps) {
    if (eps.sign() <= 0) throw std::invalid_argument("eps must be positive");
    return to_u64((Rational(1) / eps).floor() + 1);
}

namespace detail {

inline Rational ceil_to_grid(const Rational& x, const mpz_class& denom) {
    return Rational((x * Rational(denom)).ceil(), denom);
}

// Appends a jump of size `b`, trimmed so the cumulative lands exactly on 1
// when it would overshoot.
inline void push_capped(std::vector<Rational>& betas, Rational& cum, const Rational& b) {
    if (cum + b >= Rational(1)) {
        betas.push_back(Rational(1) - cum);
        cum = Rational(1);
    } else {
        betas.push_back(b);
        cum += b;
    }
}

// Finishes a nonincreasing jump list at mass 1: equal jumps of the last
// size, then one smaller remainder.
inline void complete_tail(std::vector<Rational>& betas, Rational& cum) {
    if (cum >= Rational(1)) return;
    const Rational b = betas.back();
    const Rational rest = Rational(1) - cum;
    auto count = to_u64((rest / b).floor());
    betas.reserve(betas.size() + count + 1);
    for (std::uint64_t i = 0; i < count; ++i) betas.push_back(b);
    Rational remainder = rest - Rational(from_u64(count)) * b;
    if (remainder.sign() > 0) betas.push_back(remainder);
    cum = Rational(1);
}

// The mesh construction at a fixed N: jumps at k/N, first jump 1/N, later
// jumps the target increments over [k/N, (k+1)/N] rounded up onto the
// 1/N^3 grid (never below one grid step), capped at total mass 1 and
// completed past N.
template <CdfLike F0>
RationalF star_construction(const F0& f0, std::uint64_t N) {
    const mpz_class n = from_u64(N);
    const mpz_class n3 = n * n * n;
    const Rational step(mpz_class(1), n);
    const Rational grid(mpz_class(1), n3);
    const std::uint64_t cells = N * N;

    std::vector<Rational> betas{step};
    Rational cum = step;
    Rational prev = f0.eval(step);
    for (std::uint64_t k = 1; k < cells && cum < Rational(1); ++k) {
        Rational next = f0.eval(Rational(from_u64(k + 1), n));
        Rational b = max(ceil_to_grid(next - prev, n3), grid);
        b = min(b, betas.back());
        push_capped(betas, cum, b);
        prev = std::move(next);
    }
    complete_tail(betas, cum);
    return RationalF(step, std::move(betas));
}

} // namespace detail

/// Rational F within the (eps, eps) window of a class member f0 on
/// [0, 1/eps]. Starts from the smallest N > 1/eps and moves to finer meshes
/// only if the check fails at that N.
inline Rationalization rationalize_target(const TargetF& f0, const Rational& eps) {
    if (eps.sign() <= 0) throw std::invalid_argument("rationalize_target: eps must be positive");
    auto report = check_class_f(f0);
    if (!report.pass())
        throw std::invalid_argument("rationalize_target: target not in class (" +
                                    report.violations.front().condition + ": " +
                                    report.violations.front().witness + ")");
    const std::uint64_t first = star_mesh(eps);
    for (std::uint64_t N = first; N < 4 * first + 16; ++N) {
        RationalF f = detail::star_construction(f0, N);
        if (check_star(f0, f, eps)) return {std::move(f), N};
    }
    throw std::runtime_error("rationalize_target: no mesh satisfied the closeness check");
}

/// Rational approximation of a (possibly sub-probability, possibly long)
/// hitting CDF. Inputs that are already rational with common denominator
/// at most N^3 come back unchanged. Otherwise the jumps up to
/// 1/eps + eps + alpha are snapped up onto a 1/Q grid (Q = N^3, or the
/// input's own denominator when smaller), padded with grid-sized jumps up to
/// that horizon, and completed to mass 1; Q is doubled until the closeness
/// check holds.
inline Rationalization rationalize_step(const StepCDF& f, const Rational& eps) {
    if (eps.sign() <= 0) throw std::invalid_argument("rationalize_step: eps must be positive");
    auto report = check_conditions_c(f);
    if (!report.pass())
        throw std::invalid_argument("rationalize_step: condition " + report.violations.front().condition +
                                    " fails: " + report.violations.front().witness);
    const std::uint64_t N = star_mesh(eps);
    const mpz_class n3 = from_u64(N) * from_u64(N) * from_u64(N);
    const Rational alpha = f.jumps().front().t;
    const Rational reach = Rational(1) / eps + eps + alpha;

    auto lcm_upto = [&](std::size_t count) {
        mpz_class l = alpha.den();
        for (std::size_t i = 0; i < count; ++i)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), f.jumps()[i].size.den().get_mpz_t());
        return l;
    };
    if (f.total_mass() == Rational(1) && lcm_upto(f.size()) <= n3) return {to_rational_f(f), N};

    const std::size_t kept = f.count_le(reach);
    const mpz_class own = lcm_upto(kept);
    mpz_class Q = own <= n3 ? own : n3;
    for (int attempt = 0; attempt < 64; ++attempt, Q *= 2) {
        const Rational grid(mpz_class(1), Q);
        const Rational spacing = detail::ceil_to_grid(alpha, Q);
        std::vector<Rational> betas;
        Rational cum;
        for (std::size_t i = 0; i < kept && cum < Rational(1); ++i)
            detail::push_capped(betas, cum, detail::ceil_to_grid(f.jumps()[i].size, Q));
        while (cum < Rational(1) && Rational(from_u64(betas.size() + 1)) * spacing <= reach)
            detail::push_capped(betas, cum, min(betas.back(), grid));
        detail::complete_tail(betas, cum);
        RationalF out(spacing, std::move(betas));
        if (check_star(f, out, eps)) return {std::move(out), N};
    }
    throw std::runtime_error("rationalize_step: no grid satisfied the closeness check");
}

} // namespace hitasym
