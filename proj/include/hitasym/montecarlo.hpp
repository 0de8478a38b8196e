#pragma once

#include "hitasym/cyclic_system.hpp"
#include "hitasym/distance.hpp"
#include "hitasym/distribution.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace hitasym {

/// Cylinder target [w_0 ... w_{L-1}] in a one-sided shift.
struct Cylinder {
    std::vector<unsigned> word;
};

/// i.i.d. symbols with the given law.
struct BernoulliShift {
    std::vector<Rational> probabilities;
    Cylinder target;
};

/// Stationary Markov chain.
struct MarkovShift {
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> stationary;
    Cylinder target;
};

using Fixed128 = unsigned __int128;

/// x -> x + angle mod 1, positions held as 128-bit binary fractions of a
/// turn, so orbit points are exact multiples of 2^-128 and addition never
/// drifts. Target is the arc [a, b).
struct Rotation {
    Fixed128 angle = 0;
    Rational arc_lo;
    Rational arc_hi;
    std::string angle_text;  // as given, for echoing
};

struct CyclicTarget {
    CyclicSystem system;
};

namespace detail {

inline Fixed128 fixed_ceil(const Rational& x, bool& saturated) {
    // ceil(x * 2^128) for x in [0, 1]
    mpz_class v = (x * Rational(mpz_class(mpz_class(1) << 128))).ceil();
    saturated = v == (mpz_class(1) << 128);
    if (saturated) return 0;
    Fixed128 out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

inline Fixed128 fixed_floor(const Rational& x) {
    mpz_class v = (x * Rational(mpz_class(mpz_class(1) << 128))).floor();
    Fixed128 out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

// KMP failure table for incremental word matching.
inline std::vector<std::size_t> failure_table(const std::vector<unsigned>& w) {
    std::vector<std::size_t> fail(w.size() + 1, 0);
    for (std::size_t i = 1, k = 0; i < w.size(); ++i) {
        while (k > 0 && w[i] != w[k]) k = fail[k];
        if (w[i] == w[k]) ++k;
        fail[i + 1] = k;
    }
    return fail;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
    std::vector<double> out;
    for (const auto& r : v) out.push_back(r.to_double());
    return out;
}

} // namespace detail

/// Angle given as "golden" ((sqrt 5 - 1)/2, computed to 256 bits), a
/// fraction "p/q", or a decimal; reduced mod 1.
inline Fixed128 parse_angle(const std::string& text) {
    if (text == "golden") {
        mpfr_t x;
        mpfr_init2(x, 256);
        mpfr_sqrt_ui(x, 5, MPFR_RNDN);
        mpfr_sub_ui(x, x, 1, MPFR_RNDN);
        mpfr_div_2ui(x, x, 1, MPFR_RNDN);
        mpfr_mul_2ui(x, x, 128, MPFR_RNDN);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDD);
        mpfr_clear(x);
        Fixed128 out = 0;
        mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, z.get_mpz_t());
        return out;
    }
    Rational r = Rational::parse(text);
    r -= Rational(r.floor());
    return detail::fixed_floor(r);
}

/// A measure-preserving system with a target set, sampled under its
/// invariant law.
class SystemSpec {
  public:
    using Kind = std::variant<BernoulliShift, MarkovShift, Rotation, CyclicTarget>;

    static SystemSpec bernoulli(std::vector<Rational> probabilities, std::vector<unsigned> word) {
        check_law(probabilities, "bernoulli: probabilities");
        check_word(word, probabilities.size());
        Rational mu(1);
        for (auto s : word) mu *= probabilities[s];
        return SystemSpec(BernoulliShift{std::move(probabilities), {std::move(word)}}, mu);
    }

    static SystemSpec markov(std::vector<std::vector<Rational>> matrix, std::vector<Rational> stationary,
                             std::vector<unsigned> word) {
        const std::size_t n = matrix.size();
        if (n == 0 || stationary.size() != n) throw std::invalid_argument("markov: dimension mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (matrix[i].size() != n) throw std::invalid_argument("markov: matrix is not square");
            check_law(matrix[i], "markov: row " + std::to_string(i), true);
        }
        check_law(stationary, "markov: stationary vector", true);
        for (std::size_t j = 0; j < n; ++j) {
            Rational col;
            for (std::size_t i = 0; i < n; ++i) col += stationary[i] * matrix[i][j];
            if (col != stationary[j])
                throw std::invalid_argument("markov: stationary vector is not invariant at state " +
                                            std::to_string(j));
        }
        check_word(word, n);
        Rational mu = stationary[word.front()];
        for (std::size_t i = 1; i < word.size(); ++i) mu *= matrix[word[i - 1]][word[i]];
        if (mu.sign() == 0) throw std::invalid_argument("markov: target cylinder has measure 0");
        return SystemSpec(MarkovShift{std::move(matrix), std::move(stationary), {std::move(word)}}, mu);
    }

    static SystemSpec rotation(const std::string& angle, Rational a, Rational b) {
        if (a.sign() < 0 || b > Rational(1) || !(a < b))
            throw std::invalid_argument("rotation: arc [a, b) must satisfy 0 <= a < b <= 1");
        Rational length = b - a;
        if (length >= Rational(1)) throw std::invalid_argument("rotation: arc length must be < 1");
        Rotation rot{parse_angle(angle), std::move(a), std::move(b), angle};
        return SystemSpec(std::move(rot), length);
    }

    static SystemSpec cyclic(CyclicSystem sys) {
        Rational mu = sys.measure();
        return SystemSpec(CyclicTarget{std::move(sys)}, mu);
    }

    [[nodiscard]] const Kind& kind() const { return kind_; }
    [[nodiscard]] const Rational& measure() const { return measure_; }

  private:
    SystemSpec(Kind k, Rational mu) : kind_(std::move(k)), measure_(std::move(mu)) {
        if (measure_.sign() <= 0) throw std::invalid_argument("target set has measure 0");
    }

    static void check_law(const std::vector<Rational>& p, const std::string& what, bool allow_zero = false) {
        if (p.empty()) throw std::invalid_argument(what + " is empty");
        Rational total;
        for (const auto& x : p) {
            if (x.sign() < 0 || (!allow_zero && x.sign() == 0))
                throw std::invalid_argument(what + " has a nonpositive entry " + x.str());
            total += x;
        }
        if (total != Rational(1)) throw std::invalid_argument(what + " sums to " + total.str());
    }
    static void check_word(const std::vector<unsigned>& w, std::size_t alphabet) {
        if (w.empty()) throw std::invalid_argument("target cylinder word is empty");
        for (auto s : w)
            if (s >= alphabet) throw std::invalid_argument("target word symbol " + std::to_string(s) + " out of range");
    }

    Kind kind_;
    Rational measure_;
};

/// Sample of normalized hitting times mu(U) * tau. Times are stored as the
/// integer tau, sorted; trajectories that did not hit within `horizon` steps
/// are only counted.
struct EmpiricalCDF {
    Rational scale;
    std::vector<std::uint64_t> times;
    std::uint64_t count = 0;
    std::uint64_t censored = 0;
    std::uint64_t horizon = 0;

    [[nodiscard]] bool all_censored() const { return times.empty(); }
    [[nodiscard]] double censored_fraction() const {
        return count == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(count);
    }

    /// Fraction of all trajectories with mu(U) tau <= t.
    [[nodiscard]] Rational eval(const Rational& t) const {
        if (t.sign() < 0 || count == 0) return Rational(0);
        mpz_class limit = (t / scale).floor();
        auto n = static_cast<std::uint64_t>(
            std::upper_bound(times.begin(), times.end(), limit,
                             [](const mpz_class& x, std::uint64_t v) { return x < from_u64(v); }) -
            times.begin());
        return make_rational(n, count);
    }
    [[nodiscard]] Rational left_limit(const Rational& t) const {
        if (t.sign() <= 0 || count == 0) return Rational(0);
        Rational steps = t / scale;
        mpz_class limit = steps.ceil() - 1;  // tau < t / scale
        auto n = static_cast<std::uint64_t>(
            std::upper_bound(times.begin(), times.end(), limit,
                             [](const mpz_class& x, std::uint64_t v) { return x < from_u64(v); }) -
            times.begin());
        return make_rational(n, count);
    }
    [[nodiscard]] std::vector<Rational> breakpoints() const {
        std::vector<Rational> out;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (i == 0 || times[i] != times[i - 1]) out.push_back(Rational(from_u64(times[i])) * scale);
        return out;
    }

    /// The law of the uncensored sample as a StepCDF (mass 1).
    [[nodiscard]] StepCDF normalized() const {
        if (times.empty()) throw std::domain_error("empirical CDF has no uncensored samples");
        return grouped(from_u64(times.size()));
    }

    /// Same jumps as eval(): fractions of all trajectories, so the mass is
    /// the uncensored fraction.
    [[nodiscard]] StepCDF as_step_cdf() const { return grouped(from_u64(count)); }

    friend bool operator==(const EmpiricalCDF&, const EmpiricalCDF&) = default;

  private:
    [[nodiscard]] StepCDF grouped(const mpz_class& total) const {
        std::vector<Jump> jumps;
        for (std::size_t i = 0; i < times.size();) {
            std::size_t j = i;
            while (j < times.size() && times[j] == times[i]) ++j;
            jumps.push_back({Rational(from_u64(times[i])) * scale, Rational(from_u64(j - i), total)});
            i = j;
        }
        return StepCDF(std::move(jumps));
    }
};

inline std::vector<GraphVertex> graph_vertices(const EmpiricalCDF& e) { return graph_vertices(e.as_step_cdf()); }

namespace detail {

// Hitting time of one trajectory, or 0 when it exceeds the horizon.
class TrajectorySampler {
  public:
    TrajectorySampler(const SystemSpec& spec, std::uint64_t horizon) : spec_(spec), horizon_(horizon) {
        std::visit([this](const auto& k) { prepare(k); }, spec_.kind());
    }

    std::uint64_t operator()(std::mt19937_64& rng) const {
        return std::visit([&](const auto& k) { return run(k, rng); }, spec_.kind());
    }

  private:
    void prepare(const BernoulliShift& b) {
        auto w = to_doubles(b.probabilities);
        symbol_ = std::discrete_distribution<unsigned>(w.begin(), w.end());
        fail_ = failure_table(b.target.word);
    }
    void prepare(const MarkovShift& m) {
        auto w = to_doubles(m.stationary);
        symbol_ = std::discrete_distribution<unsigned>(w.begin(), w.end());
        for (const auto& row : m.matrix) {
            auto r = to_doubles(row);
            rows_.emplace_back(r.begin(), r.end());
        }
        fail_ = failure_table(m.target.word);
    }
    void prepare(const Rotation& r) {
        bool sat = false;
        lo_ = fixed_ceil(r.arc_lo, sat);
        hi_ = fixed_ceil(r.arc_hi, hi_is_end_);
        (void)sat;
    }
    void prepare(const CyclicTarget& c) {
        is_marked_.assign(c.system.q() + 1, 0);
        for (auto u : c.system.marked()) is_marked_[u] = 1;
    }

    // Streams symbols through the KMP matcher; a match starting at index
    // k >= 1 is the hit.
    template <typename NextSymbol>
    std::uint64_t match(const std::vector<unsigned>& word, NextSymbol&& next) const {
        const std::size_t L = word.size();
        std::size_t state = 0;
        for (std::uint64_t i = 0;; ++i) {
            if (i + 1 > horizon_ + L) return 0;  // a match now would start past the horizon
            unsigned s = next();
            while (state > 0 && (state == L || word[state] != s)) state = fail_[state];
            if (word[state] == s) ++state;
            if (state == L && i + 1 >= L + 1) return i + 1 - L;
        }
    }

    std::uint64_t run(const BernoulliShift& b, std::mt19937_64& rng) const {
        auto dist = symbol_;
        return match(b.target.word, [&] { return dist(rng); });
    }
    std::uint64_t run(const MarkovShift& m, std::mt19937_64& rng) const {
        auto start = symbol_;
        auto rows = rows_;
        bool first = true;
        unsigned cur = 0;
        return match(m.target.word, [&] {
            cur = first ? start(rng) : rows[cur](rng);
            first = false;
            return cur;
        });
    }
    std::uint64_t run(const Rotation& r, std::mt19937_64& rng) const {
        Fixed128 x = (static_cast<Fixed128>(rng()) << 64) | rng();
        for (std::uint64_t k = 1; k <= horizon_; ++k) {
            x += r.angle;
            if (x >= lo_ && (hi_is_end_ || x < hi_)) return k;
        }
        return 0;
    }
    std::uint64_t run(const CyclicTarget& c, std::mt19937_64& rng) const {
        const std::uint64_t q = c.system.q();
        std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(1, q)(rng);
        for (std::uint64_t k = 1; k <= horizon_; ++k) {
            x = x == q ? 1 : x + 1;
            if (is_marked_[x]) return k;
        }
        return 0;
    }

    const SystemSpec& spec_;
    std::uint64_t horizon_;
    std::discrete_distribution<unsigned> symbol_;
    std::vector<std::discrete_distribution<unsigned>> rows_;
    std::vector<std::size_t> fail_;
    Fixed128 lo_ = 0, hi_ = 0;
    bool hi_is_end_ = false;
    std::vector<std::uint8_t> is_marked_;
};

} // namespace detail

/// Generator for trajectory `index`; depends only on (seed, index).
inline std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Draws `samples` stationary starts and records the first k >= 1 with
/// T^k x in the target. Deterministic in (spec, samples, seed, horizon);
/// `workers` only splits the index range.
inline EmpiricalCDF simulate_hitting(const SystemSpec& spec, std::uint64_t samples, std::uint64_t seed,
                                     std::uint64_t horizon, unsigned workers = 1) {
    if (samples == 0) throw std::invalid_argument("simulate_hitting: samples must be >= 1");
    if (horizon == 0) throw std::invalid_argument("simulate_hitting: horizon must be >= 1");
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(samples, 256))));

    detail::TrajectorySampler sampler(spec, horizon);
    std::vector<std::uint64_t> raw(samples);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            auto rng = trajectory_rng(seed, i);
            raw[i] = sampler(rng);
        }
    };
    if (workers == 1) {
        work(0, samples);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, samples * w / workers, samples * (w + 1) / workers);
    }

    EmpiricalCDF out;
    out.scale = spec.measure();
    out.count = samples;
    out.horizon = horizon;
    for (auto t : raw) {
        if (t == 0) ++out.censored;
        else out.times.push_back(t);
    }
    std::sort(out.times.begin(), out.times.end());
    return out;
}

/// Kolmogorov-Smirnov distance between the sample and a reference law.
/// With censoring the comparison stops at the horizon, where the empirical
/// CDF is still exact; the censored fraction is reported by the sample
/// itself.
template <CdfLike Ref>
Rational ks_distance(const EmpiricalCDF& e, const Ref& ref) {
    if (e.all_censored()) throw std::domain_error("ks_distance: empty sample after censoring");
    if (e.censored == 0) return sup_distance_all(e, ref);
    return sup_distance(e, ref, Rational(from_u64(e.horizon)) * e.scale);
}

} // namespace hitasym
