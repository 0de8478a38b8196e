#pragma once

#include "hitasym/distribution.hpp"

#include <stdexcept>
#include <vector>

namespace hitasym {

namespace detail {

inline void merge_points(std::vector<Rational>& into, const std::vector<Rational>& more) {
    std::vector<Rational> out;
    out.reserve(into.size() + more.size());
    std::merge(into.begin(), into.end(), more.begin(), more.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    into = std::move(out);
}

// The completed graph of a nondecreasing function, reparametrized by
// u = t + y, is a 1-Lipschitz nondecreasing function y(u). Evaluates it at
// a nondecreasing sequence of u values with a forward-only cursor.
class GraphCursor {
  public:
    explicit GraphCursor(std::vector<GraphVertex> v) : vertices_(std::move(v)) {
        u_.reserve(vertices_.size());
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            u_.push_back(vertices_[i].t + vertices_[i].y);
            if (i > 0 && (vertices_[i].y < vertices_[i - 1].y || u_[i] < u_[i - 1]))
                throw std::invalid_argument("levy_distance: function is not nondecreasing");
        }
    }

    [[nodiscard]] const std::vector<Rational>& u_values() const { return u_; }

    Rational at(const Rational& u) {
        if (vertices_.empty()) return Rational(0);
        if (u <= u_.front()) return vertices_.front().y;
        if (u >= u_.back()) return vertices_.back().y;
        while (pos_ + 1 < u_.size() && u_[pos_ + 1] <= u) ++pos_;
        // u_[pos_] <= u < u_[pos_ + 1]
        const auto& a = vertices_[pos_];
        const auto& b = vertices_[pos_ + 1];
        if (u == u_[pos_]) return a.y;
        return a.y + (b.y - a.y) * (u - u_[pos_]) / (u_[pos_ + 1] - u_[pos_]);
    }

  private:
    std::vector<GraphVertex> vertices_;
    std::vector<Rational> u_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Exact sup of |f - g| over [0, horizon]. Both functions are monotone and
/// linear between breakpoints, so it is enough to look at both one-sided
/// limits at every breakpoint plus the two endpoints.
template <CdfLike F, CdfLike G>
Rational sup_distance(const F& f, const G& g, const Rational& horizon) {
    if (horizon.sign() <= 0) throw std::invalid_argument("sup_distance: horizon must be positive");
    std::vector<Rational> pts{Rational(0), horizon};
    auto fb = f.breakpoints();
    auto gb = g.breakpoints();
    detail::merge_points(fb, gb);
    detail::merge_points(pts, fb);
    Rational best;
    for (const auto& t : pts) {
        if (t.sign() < 0 || t > horizon) continue;
        best = max(best, abs(f.eval(t) - g.eval(t)));
        if (t.sign() > 0) best = max(best, abs(f.left_limit(t) - g.left_limit(t)));
    }
    return best;
}

/// Sup of |f - g| over the whole line. Both functions vanish on the
/// negative axis and are constant past their last breakpoint.
template <CdfLike F, CdfLike G>
Rational sup_distance_all(const F& f, const G& g) {
    Rational horizon(1);
    for (const auto& t : f.breakpoints()) horizon = max(horizon, t);
    for (const auto& t : g.breakpoints()) horizon = max(horizon, t);
    return sup_distance(f, g, horizon);
}

/// Lévy distance: the least eps >= 0 such that
/// f(t - eps) - eps <= g(t) <= f(t + eps) + eps for every real t.
///
/// Computed exactly as the sup-norm distance between the completed graphs
/// measured along lines t + y = const; both graphs are piecewise linear in
/// that parametrization, so the sup sits on a vertex of one of them.
template <typename F, typename G>
Rational levy_distance(const F& f, const G& g) {
    detail::GraphCursor cf(graph_vertices(f));
    detail::GraphCursor cg(graph_vertices(g));
    std::vector<Rational> us = cf.u_values();
    detail::merge_points(us, cg.u_values());
    Rational best;
    for (const auto& u : us) best = max(best, abs(cf.at(u) - cg.at(u)));
    return best;
}

/// ∫_0^∞ (1 - f(t)) dt, which for a finitely supported law is its mean.
inline Rational tail_integral(const StepCDF& f) {
    if (f.total_mass() != Rational(1))
        throw std::domain_error("tail_integral: total mass " + f.total_mass().str() +
                                " < 1, integral is infinite");
    Rational sum;
    for (const auto& j : f.jumps()) sum += j.t * j.size;
    return sum;
}

/// f on [0, horizon], frozen at f(horizon) beyond.
inline StepCDF truncate(const StepCDF& f, const Rational& horizon) {
    std::vector<Jump> kept;
    for (const auto& j : f.jumps()) {
        if (j.t > horizon) break;
        kept.push_back(j);
    }
    return StepCDF(std::move(kept));
}

inline TargetF truncate(const TargetF& f, const Rational& horizon) {
    std::vector<Breakpoint> kept;
    for (const auto& b : f.points()) {
        if (b.t >= horizon) break;
        kept.push_back(b);
    }
    if (horizon.sign() > 0) kept.push_back({horizon, f.eval(horizon)});
    else if (kept.empty()) kept.push_back({Rational(0), f.eval(Rational(0))});
    return TargetF(std::move(kept), f.encodes_jump());
}

} // namespace hitasym
