#pragma once

#include "hitasym/rational.hpp"

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hitasym {

struct Jump {
    Rational t;
    Rational size;
    friend bool operator==(const Jump&, const Jump&) = default;
};

/// A finitely supported, right-continuous jump distribution function.
///
/// Jump locations are strictly increasing and positive, sizes are positive,
/// and the total mass never exceeds one. The constructor enforces all of
/// this, so every StepCDF in circulation is valid.
class StepCDF {
  public:
    StepCDF() = default;

    explicit StepCDF(std::vector<Jump> jumps) : jumps_(std::move(jumps)) {
        cumulative_.reserve(jumps_.size());
        Rational total;
        for (std::size_t i = 0; i < jumps_.size(); ++i) {
            const auto& j = jumps_[i];
            if (j.t.sign() <= 0)
                throw std::invalid_argument("StepCDF: jump location " + j.t.str() + " is not positive");
            if (i > 0 && !(jumps_[i - 1].t < j.t))
                throw std::invalid_argument("StepCDF: jump locations not strictly increasing at " + j.t.str());
            if (j.size.sign() <= 0)
                throw std::invalid_argument("StepCDF: jump at " + j.t.str() + " has nonpositive size " +
                                            j.size.str());
            total += j.size;
            cumulative_.push_back(total);
        }
        if (total > Rational(1))
            throw std::invalid_argument("StepCDF: total mass " + total.str() + " exceeds 1");
    }

    [[nodiscard]] const std::vector<Jump>& jumps() const { return jumps_; }
    [[nodiscard]] std::size_t size() const { return jumps_.size(); }
    [[nodiscard]] bool empty() const { return jumps_.empty(); }

    [[nodiscard]] Rational total_mass() const { return cumulative_.empty() ? Rational(0) : cumulative_.back(); }

    /// Value just after the i-th jump.
    [[nodiscard]] const Rational& cumulative(std::size_t i) const { return cumulative_[i]; }

    /// Number of jumps located at or before t.
    [[nodiscard]] std::size_t count_le(const Rational& t) const {
        auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                                   [](const Rational& x, const Jump& j) { return x < j.t; });
        return static_cast<std::size_t>(it - jumps_.begin());
    }
    /// Number of jumps located strictly before t.
    [[nodiscard]] std::size_t count_lt(const Rational& t) const {
        auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                   [](const Jump& j, const Rational& x) { return j.t < x; });
        return static_cast<std::size_t>(it - jumps_.begin());
    }

    [[nodiscard]] Rational eval(const Rational& t) const {
        auto n = count_le(t);
        return n == 0 ? Rational(0) : cumulative_[n - 1];
    }
    [[nodiscard]] Rational left_limit(const Rational& t) const {
        auto n = count_lt(t);
        return n == 0 ? Rational(0) : cumulative_[n - 1];
    }

    [[nodiscard]] std::vector<Rational> breakpoints() const {
        std::vector<Rational> out;
        out.reserve(jumps_.size());
        for (const auto& j : jumps_) out.push_back(j.t);
        return out;
    }

    friend bool operator==(const StepCDF& a, const StepCDF& b) { return a.jumps_ == b.jumps_; }

  private:
    std::vector<Jump> jumps_;
    std::vector<Rational> cumulative_;
};

struct Breakpoint {
    Rational t;
    Rational value;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Continuous piecewise-linear candidate limit law.
///
/// Interpolates linearly between breakpoints, is constant beyond the last
/// one and zero on ]-inf, 0[. Only the structure is enforced here (first
/// breakpoint at t = 0, strictly increasing t); membership in the concave
/// class is the job of check_class_f, which must be able to report on
/// invalid candidates.
///
/// `encodes_jump` marks a candidate whose steep segments stand for a genuine
/// discontinuity; the class checker audits such segments as a slope bound.
class TargetF {
  public:
    TargetF() : points_{{Rational(0), Rational(0)}} {}

    explicit TargetF(std::vector<Breakpoint> points, bool encodes_jump = false)
        : points_(std::move(points)), encodes_jump_(encodes_jump) {
        if (points_.empty()) throw std::invalid_argument("TargetF: no breakpoints");
        if (points_.front().t != Rational(0))
            throw std::invalid_argument("TargetF: first breakpoint must be at t = 0, got " +
                                        points_.front().t.str());
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (!(points_[i - 1].t < points_[i].t))
                throw std::invalid_argument("TargetF: breakpoints not strictly increasing at t = " +
                                            points_[i].t.str());
    }

    [[nodiscard]] const std::vector<Breakpoint>& points() const { return points_; }
    [[nodiscard]] bool encodes_jump() const { return encodes_jump_; }
    [[nodiscard]] const Rational& t_max() const { return points_.back().t; }
    [[nodiscard]] const Rational& final_value() const { return points_.back().value; }

    [[nodiscard]] Rational eval(const Rational& t) const {
        if (t.sign() < 0) return Rational(0);
        if (t >= points_.back().t) return points_.back().value;
        auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](const Rational& x, const Breakpoint& b) { return x < b.t; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        if (lo.t == t) return lo.value;
        return lo.value + (hi.value - lo.value) * (t - lo.t) / (hi.t - lo.t);
    }

    /// Continuous on [0, inf[; the only possible discontinuity is at 0 when
    /// the first value is nonzero.
    [[nodiscard]] Rational left_limit(const Rational& t) const {
        if (t.sign() <= 0) return Rational(0);
        return eval(t);
    }

    [[nodiscard]] std::vector<Rational> breakpoints() const {
        std::vector<Rational> out;
        out.reserve(points_.size());
        for (const auto& b : points_) out.push_back(b.t);
        return out;
    }

    friend bool operator==(const TargetF& a, const TargetF& b) {
        return a.points_ == b.points_ && a.encodes_jump_ == b.encodes_jump_;
    }

  private:
    std::vector<Breakpoint> points_;
    bool encodes_jump_ = false;
};

/// Anything that can be evaluated as a nondecreasing cadlag function with
/// finitely many breakpoints.
template <typename F>
concept CdfLike = requires(const F& f, const Rational& t) {
    { f.eval(t) } -> std::convertible_to<Rational>;
    { f.left_limit(t) } -> std::convertible_to<Rational>;
    { f.breakpoints() } -> std::convertible_to<std::vector<Rational>>;
};

/// A vertex of the completed graph (jumps filled in with vertical segments).
struct GraphVertex {
    Rational t;
    Rational y;
};

/// Vertices of the completed graph, left to right. The graph is the
/// horizontal ray y = 0 up to the first vertex, the polyline through the
/// vertices, then the horizontal ray at the last vertex's height.
inline std::vector<GraphVertex> graph_vertices(const StepCDF& f) {
    std::vector<GraphVertex> out;
    out.reserve(2 * f.size());
    Rational below;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out.push_back({f.jumps()[i].t, below});
        below = f.cumulative(i);
        out.push_back({f.jumps()[i].t, below});
    }
    return out;
}

inline std::vector<GraphVertex> graph_vertices(const TargetF& f) {
    std::vector<GraphVertex> out;
    out.reserve(f.points().size() + 1);
    if (f.points().front().value.sign() != 0) out.push_back({Rational(0), Rational(0)});
    for (const auto& b : f.points()) out.push_back({b.t, b.value});
    return out;
}

} // namespace hitasym
