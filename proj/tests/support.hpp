#pragma once

// Generators and reference implementations shared by the test binaries. The
// references deliberately avoid the library's own algorithms: hitting times
// come from walking the cycle, Lévy distances from bisection on the envelope
// condition, integrals from summing rectangles.

#include "hitasym/hitasym.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace hitasym {
inline void PrintTo(const Rational& r, std::ostream* os) { *os << r.str(); }
} // namespace hitasym

namespace hitasym::testing {

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline Rational R(std::int64_t p, std::uint64_t q = 1) { return Rational(p, q); }

inline std::vector<Rational> fracs(std::initializer_list<std::int64_t> nums, std::uint64_t q) {
    std::vector<Rational> out;
    for (auto n : nums) out.push_back(R(n, q));
    return out;
}

// ---- generators ------------------------------------------------------------

/// Random cycle length in [1, qmax] and a random nonempty marked set. The
/// size of the set is drawn log-uniformly so both sparse and dense sets show up.
inline CyclicSystem random_cyclic(Rng& rng, std::uint64_t qmax) {
    std::uint64_t q = uniform(rng, 1, qmax);
    double lg = std::uniform_real_distribution<double>(0.0, std::log(static_cast<double>(q)))(rng);
    auto size = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::exp(lg)), 1, q);
    std::set<std::uint64_t> marked;
    if (size * 2 > q) {
        std::vector<std::uint64_t> all(q);
        std::iota(all.begin(), all.end(), 1);
        std::shuffle(all.begin(), all.end(), rng);
        marked.insert(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
    } else {
        while (marked.size() < size) marked.insert(uniform(rng, 1, q));
    }
    return CyclicSystem(q, {marked.begin(), marked.end()});
}

/// Jump numerators over a common denominator, built from runs: s runs with
/// distinct end indices k_1 < ... < k_s and values p_1 > ... > p_s. The
/// denominator is whatever the runs add up to, so the identity holds by
/// construction.
struct RunShape {
    std::vector<std::uint64_t> k;
    std::vector<std::uint64_t> p;
    std::uint64_t q = 0;
};

inline RunShape random_runs(Rng& rng, std::uint64_t qmax) {
    for (;;) {
        RunShape s;
        auto runs = uniform(rng, 1, 4);
        std::uint64_t k = 0;
        for (std::uint64_t j = 0; j < runs; ++j) {
            k += uniform(rng, 1, j == 0 ? 12 : 40);
            s.k.push_back(k);
        }
        std::vector<std::uint64_t> drops(runs);
        for (auto& d : drops) d = uniform(rng, 1, 30);
        s.p.assign(runs, 0);
        std::uint64_t acc = 0;
        for (std::size_t j = runs; j-- > 0;) {
            acc += drops[j];
            s.p[j] = acc;
        }
        for (std::size_t j = 0; j < runs; ++j) s.q += s.k[j] * drops[j];
        if (s.q <= qmax) return s;
    }
}

inline RationalF random_rational_f(Rng& rng, std::uint64_t qmax) {
    auto s = random_runs(rng, qmax);
    std::vector<Rational> betas;
    std::uint64_t start = 0;
    for (std::size_t j = 0; j < s.k.size(); ++j) {
        for (std::uint64_t i = start; i < s.k[j]; ++i) betas.push_back(make_rational(s.p[j], s.q));
        start = s.k[j];
    }
    return RationalF(make_rational(s.p.front(), s.q), std::move(betas));
}

/// Calls `visit` once for every nonincreasing positive integer sequence that
/// sums to `total` and whose gcd with `total` is 1; each one is the numerator
/// list of a distinct rational F with denominator exactly `total`.
inline void for_each_primitive_partition(std::uint64_t total,
                                         const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
    std::vector<std::uint64_t> parts;
    std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t left,
                                                                               std::uint64_t cap, std::uint64_t g) {
        if (left == 0) {
            if (g == 1) visit(parts);
            return;
        }
        for (std::uint64_t x = std::min(cap, left); x >= 1; --x) {
            parts.push_back(x);
            rec(left - x, x, std::gcd(g, x));
            parts.pop_back();
        }
    };
    rec(total, total, total);
}

/// Random step CDF with arbitrary (not necessarily condition-abiding) jumps.
inline StepCDF random_step(Rng& rng, std::size_t max_jumps, bool full_mass) {
    std::size_t n = uniform(rng, 1, max_jumps);
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = uniform(rng, 1, 9);
    std::uint64_t total = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
    if (!full_mass) total += uniform(rng, 0, 9);
    std::vector<Jump> jumps;
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        t += uniform(rng, 1, 6);
        jumps.push_back({make_rational(t, 4), make_rational(w[i], total)});
    }
    return StepCDF(std::move(jumps));
}

/// Random concave piecewise-linear candidate with F(t) <= t: slopes are a
/// nonincreasing sequence starting at most 1.
inline TargetF random_target(Rng& rng, std::size_t max_segments) {
    std::size_t n = uniform(rng, 1, max_segments);
    std::vector<std::uint64_t> slope_num(n);
    for (auto& s : slope_num) s = uniform(rng, 0, 8);
    std::sort(slope_num.rbegin(), slope_num.rend());
    std::vector<Breakpoint> pts{{Rational(0), Rational(0)}};
    Rational t(0), v(0);
    for (std::size_t i = 0; i < n; ++i) {
        Rational len = make_rational(uniform(rng, 1, 8), 8);
        Rational slope = make_rational(slope_num[i], 8);
        if (v + slope * len > Rational(1)) len = (Rational(1) - v) / (slope.sign() ? slope : Rational(1));
        t = t + len;
        v = min(Rational(1), v + slope * len);
        pts.push_back({t, v});
        if (v == Rational(1)) break;
    }
    return TargetF(std::move(pts));
}

// ---- oracles ---------------------------------------------------------------

/// tau(x) for every x in {1..q}, by walking forward from each point. Quadratic
/// in the worst case; keep q small.
inline std::vector<std::uint64_t> walk_hitting_times(const CyclicSystem& sys) {
    std::vector<bool> in(sys.q() + 1, false);
    for (auto u : sys.marked()) in[u] = true;
    std::vector<std::uint64_t> tau(sys.q() + 1, 0);
    for (std::uint64_t x = 1; x <= sys.q(); ++x) {
        std::uint64_t y = x, k = 0;
        do {
            y = y == sys.q() ? 1 : y + 1;
            ++k;
        } while (!in[y]);
        tau[x] = k;
    }
    return tau;
}

/// Histogram of tau by two passes of a reverse sweep over the cycle: the
/// first pass learns the distance from the top of the cycle to the first
/// marked point, the second assigns every point its forward distance.
inline std::map<std::uint64_t, std::uint64_t> sweep_hitting_histogram(const CyclicSystem& sys) {
    const std::uint64_t q = sys.q();
    std::vector<bool> in(q + 1, false);
    for (auto u : sys.marked()) in[u] = true;
    std::uint64_t next = 0;
    for (std::uint64_t x = q; x >= 1; --x) next = in[x] ? 1 : next + 1;
    std::map<std::uint64_t, std::uint64_t> h;
    std::uint64_t d = next;  // tau(q), the position of the first marked point
    for (std::uint64_t x = q; x >= 1; --x) {
        ++h[d];
        d = in[x] ? 1 : d + 1;
    }
    return h;
}

/// Jump list of the hitting CDF assembled from raw hitting times.
inline StepCDF hitting_cdf_from_times(const CyclicSystem& sys, const std::vector<std::uint64_t>& tau) {
    std::map<std::uint64_t, std::uint64_t> h;
    for (std::uint64_t x = 1; x <= sys.q(); ++x) ++h[tau[x]];
    std::vector<Jump> jumps;
    for (auto [k, n] : h) jumps.push_back({Rational(from_u64(k)) * sys.measure(), make_rational(n, sys.q())});
    return StepCDF(std::move(jumps));
}

/// Return times of the marked points, by walking.
inline std::vector<std::uint64_t> walk_return_times(const CyclicSystem& sys) {
    auto tau = walk_hitting_times(sys);
    std::vector<std::uint64_t> out;
    for (auto u : sys.marked()) out.push_back(tau[u]);
    return out;
}

/// Integral of (1 - F) over [0, inf) summed rectangle by rectangle.
inline Rational rectangle_tail_integral(const StepCDF& f) {
    Rational area(0), prev_t(0), level(0);
    for (const auto& j : f.jumps()) {
        area += (Rational(1) - level) * (j.t - prev_t);
        level += j.size;
        prev_t = j.t;
    }
    return area;
}

/// Whether f(t - e) - e <= g(t) <= f(t + e) + e for every real t. Both sides
/// are piecewise linear between the points collected below, so checking
/// values and left limits there, plus one point beyond either end, decides
/// the condition exactly.
template <CdfLike F, CdfLike G>
bool levy_envelope_holds(const F& f, const G& g, const Rational& e) {
    std::vector<Rational> pts;
    for (const auto& b : g.breakpoints()) pts.push_back(b);
    for (const auto& b : f.breakpoints()) {
        pts.push_back(b + e);
        pts.push_back(b - e);
    }
    Rational hi(1), lo(-1);
    for (const auto& p : pts) {
        hi = max(hi, p + Rational(1));
        lo = min(lo, p - Rational(1));
    }
    pts.push_back(hi);
    pts.push_back(lo);
    auto fe = [&](const Rational& t) { return t.sign() < 0 ? Rational(0) : f.eval(t); };
    auto fl = [&](const Rational& t) { return t.sign() <= 0 ? Rational(0) : f.left_limit(t); };
    auto ge = [&](const Rational& t) { return t.sign() < 0 ? Rational(0) : g.eval(t); };
    auto gl = [&](const Rational& t) { return t.sign() <= 0 ? Rational(0) : g.left_limit(t); };
    for (const auto& t : pts) {
        if (fe(t - e) - e > ge(t) || fl(t - e) - e > gl(t)) return false;
        if (ge(t) > fe(t + e) + e || gl(t) > fl(t + e) + e) return false;
    }
    return true;
}

/// Lévy distance by bisection on the envelope condition, to within 2^-bits.
template <CdfLike F, CdfLike G>
std::pair<Rational, Rational> levy_bracket(const F& f, const G& g, int bits) {
    Rational lo(0), hi(1);
    if (levy_envelope_holds(f, g, Rational(0))) return {Rational(0), Rational(0)};
    for (int i = 0; i < bits; ++i) {
        Rational mid = (lo + hi) / Rational(2);
        if (levy_envelope_holds(f, g, mid)) hi = mid;
        else lo = mid;
    }
    return {lo, hi};
}

/// Largest |f - g| found by evaluating at every breakpoint of either
/// function and at a uniform grid of the given step over [0, horizon].
template <CdfLike F, CdfLike G>
Rational grid_sup(const F& f, const G& g, const Rational& horizon, const Rational& step) {
    Rational best(0);
    auto probe = [&](const Rational& t) {
        if (t.sign() >= 0 && t <= horizon) best = max(best, abs(f.eval(t) - g.eval(t)));
    };
    for (Rational t(0); t <= horizon; t += step) probe(t);
    for (const auto& b : f.breakpoints()) probe(b);
    for (const auto& b : g.breakpoints()) probe(b);
    return best;
}

/// (★) necessity check on a grid: for each grid t in [0, 1/eps], some value
/// taken by f on the open window (t - eps, t + eps) must be eps-close to
/// f0(t). The values a step function takes on a window are its value at the
/// left end and at every jump inside.
template <CdfLike F0>
bool star_on_grid(const F0& f0, const StepCDF& f, const Rational& eps, const Rational& step) {
    Rational horizon = Rational(1) / eps;
    for (Rational t(0); t <= horizon; t += step) {
        Rational target = f0.eval(t);
        Rational lo = max(Rational(0), t - eps);
        std::vector<Rational> values{f.eval(lo)};
        for (const auto& j : f.jumps())
            if (j.t > lo && j.t < t + eps) values.push_back(f.eval(j.t));
        bool ok = std::any_of(values.begin(), values.end(),
                              [&](const Rational& v) { return abs(v - target) <= eps; });
        if (!ok) return false;
    }
    return true;
}

/// Exact law of the first k >= 1 at which a given word occurs (starting at
/// index k) in an i.i.d. symbol stream, up to `horizon`. The matcher state is
/// the longest suffix of the text read so far that is a prefix of the word,
/// recomputed by direct comparison.
inline std::vector<double> word_hitting_law(const std::vector<double>& probs, const std::vector<unsigned>& word,
                                            std::uint64_t horizon) {
    const std::size_t L = word.size();
    auto next_state = [&](std::size_t state, unsigned s) {
        std::vector<unsigned> text(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(state));
        text.push_back(s);
        for (std::size_t len = std::min(L, text.size()); len > 0; --len)
            if (std::equal(text.end() - static_cast<std::ptrdiff_t>(len), text.end(), word.begin())) return len;
        return std::size_t{0};
    };
    std::vector<std::vector<std::size_t>> delta(L + 1, std::vector<std::size_t>(probs.size()));
    for (std::size_t st = 0; st <= L; ++st)
        for (unsigned s = 0; s < probs.size(); ++s) delta[st][s] = next_state(st, s);

    std::vector<double> mass(L + 1, 0.0), law(horizon + 1, 0.0);
    mass[0] = 1.0;
    // reading symbol i completes a match starting at i - L + 1
    for (std::uint64_t i = 0; i < horizon + L; ++i) {
        std::vector<double> nxt(L + 1, 0.0);
        for (std::size_t st = 0; st <= L; ++st) {
            if (mass[st] == 0.0) continue;
            for (unsigned s = 0; s < probs.size(); ++s) nxt[delta[st][s]] += mass[st] * probs[s];
        }
        if (i + 1 >= L + 1) {
            law[i + 1 - L] = nxt[L];
            nxt[L] = 0.0;
        }
        mass = std::move(nxt);
    }
    return law;
}

/// Step CDF of mu * tau from a pointwise law of tau (entries at k >= 1).
inline StepCDF law_to_step(const std::vector<double>& law, const Rational& mu) {
    std::vector<Jump> jumps;
    Rational total(0);
    for (std::size_t k = 1; k < law.size(); ++k) {
        if (law[k] <= 0.0) continue;
        Rational size{mpq_class(law[k])};
        if (total + size > Rational(1)) size = Rational(1) - total;
        if (size.sign() <= 0) break;
        total += size;
        jumps.push_back({Rational(from_u64(k)) * mu, size});
    }
    return StepCDF(std::move(jumps));
}

} // namespace hitasym::testing
