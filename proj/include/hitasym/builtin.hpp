#pragma once

#include "hitasym/distribution.hpp"

#include <mpfr.h>

#include <string>
#include <string_view>
#include <vector>

namespace hitasym {

namespace detail {

// RAII holder for an MPFR float.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

  private:
    mpfr_t v_;
};

inline constexpr mpfr_prec_t kWorkingBits = 256;
// Sampled values are upper-rounded onto this dyadic grid.
inline constexpr unsigned kSampleBits = 60;

inline void set_rational(mpfr_ptr out, const Rational& r, mpfr_rnd_t rnd) {
    mpfr_set_q(out, r.raw().get_mpq_t(), rnd);
}

inline Rational mpfr_to_rational(mpfr_srcptr x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return Rational(q);
}

// Smallest multiple of 2^-bits that is >= x.
inline Rational ceil_dyadic(const Rational& x, unsigned bits) {
    mpz_class scale = mpz_class(1) << bits;
    Rational scaled = x * Rational(scale);
    return Rational(scaled.ceil(), scale);
}

// Least concave majorant of points sorted by t (upper hull).
inline std::vector<Breakpoint> upper_hull(const std::vector<Breakpoint>& pts) {
    std::vector<Breakpoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b unless slope(a,b) > slope(b,p)
            Rational lhs = (b.value - a.value) * (p.t - b.t);
            Rational rhs = (p.value - b.value) * (b.t - a.t);
            if (lhs > rhs) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return hull;
}

} // namespace detail

/// Samples t -> a(1 - e^{-lambda t}) at multiples of `mesh`.
///
/// Each sample is a rational upper bound within 2^-60 of the true value,
/// clamped to min(a, t); the result is the concave majorant of the samples,
/// so it stays concave and below the diagonal. Sampling stops once the
/// remaining gap a e^{-lambda t} drops under 2^-60, where the value is set
/// to a exactly.
inline TargetF sample_scaled_exp(const Rational& a, const Rational& lambda, const Rational& mesh) {
    using detail::Mpfr;
    if (mesh.sign() <= 0) throw std::invalid_argument("scaled_exp: mesh must be positive");
    if (a.sign() <= 0 || a > Rational(1))
        throw std::invalid_argument("scaled_exp: amplitude must lie in ]0,1], got " + a.str());
    if (lambda.sign() <= 0) throw std::invalid_argument("scaled_exp: rate must be positive");
    if (a * lambda > Rational(1))
        throw std::invalid_argument("scaled_exp: a*lambda = " + (a * lambda).str() +
                                    " > 1 violates F(t) <= t near 0");

    Mpfr lam(detail::kWorkingBits), amp(detail::kWorkingBits), x(detail::kWorkingBits),
        e_lo(detail::kWorkingBits), e_hi(detail::kWorkingBits), tmp(detail::kWorkingBits),
        gap_hi(detail::kWorkingBits), tol(detail::kWorkingBits);
    detail::set_rational(lam.get(), lambda, MPFR_RNDN);
    mpfr_set_ui_2exp(tol.get(), 1, -static_cast<mpfr_exp_t>(detail::kSampleBits), MPFR_RNDN);

    constexpr std::size_t kMaxPoints = 20'000'000;
    std::vector<Breakpoint> pts;
    for (std::size_t k = 0;; ++k) {
        if (k > kMaxPoints) throw std::runtime_error("scaled_exp: mesh too fine for this rate");
        Rational t = Rational(static_cast<unsigned long>(k)) * mesh;
        // bracket e^{-lambda t}
        detail::set_rational(x.get(), lambda * t, MPFR_RNDU);
        mpfr_neg(x.get(), x.get(), MPFR_RNDD);
        mpfr_exp(e_lo.get(), x.get(), MPFR_RNDD);
        detail::set_rational(x.get(), lambda * t, MPFR_RNDD);
        mpfr_neg(x.get(), x.get(), MPFR_RNDU);
        mpfr_exp(e_hi.get(), x.get(), MPFR_RNDU);

        // a * e^{-lambda t} upper bound decides termination
        detail::set_rational(amp.get(), a, MPFR_RNDU);
        mpfr_mul(gap_hi.get(), amp.get(), e_hi.get(), MPFR_RNDU);
        if (k > 0 && mpfr_cmp(gap_hi.get(), tol.get()) < 0) {
            pts.push_back({t, min(a, t)});
            break;
        }
        // a (1 - e_lo) is an upper bound of the true value
        mpfr_ui_sub(tmp.get(), 1, e_lo.get(), MPFR_RNDU);
        Rational upper = a * detail::mpfr_to_rational(tmp.get());
        Rational v = k == 0 ? Rational(0) : detail::ceil_dyadic(upper, detail::kSampleBits);
        v = min(v, min(a, t));
        pts.push_back({t, v});
    }
    return TargetF(detail::upper_hull(pts));
}

/// t -> min(c t, 1) with breakpoints on the mesh plus the kink at 1/c.
/// c = 0 gives the zero function.
inline TargetF sample_capped_linear(const Rational& c, const Rational& mesh) {
    if (mesh.sign() <= 0) throw std::invalid_argument("capped_linear: mesh must be positive");
    if (c.sign() < 0) throw std::invalid_argument("capped_linear: slope must be nonnegative");
    if (c > Rational(1))
        throw std::invalid_argument("capped_linear: slope " + c.str() + " > 1 violates F(t) <= t");
    if (c.sign() == 0) return TargetF();
    Rational kink = Rational(1) / c;
    std::vector<Breakpoint> pts;
    for (unsigned long k = 0;; ++k) {
        Rational t = Rational(k) * mesh;
        if (t >= kink) break;
        pts.push_back({t, c * t});
    }
    pts.push_back({kink, Rational(1)});
    return TargetF(std::move(pts));
}

/// Closed-form class members sampled onto a piecewise-linear TargetF.
///   exp1                 1 - e^{-t}
///   capped_linear(c)     min(c t, 1), 0 <= c <= 1
///   scaled_exp(a, l)     a (1 - e^{-l t}), a l <= 1
inline TargetF cdf_from_builtin(std::string_view name, const std::vector<Rational>& params,
                                const Rational& mesh) {
    auto want = [&](std::size_t n) {
        if (params.size() != n)
            throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(n) +
                                        " parameter(s), got " + std::to_string(params.size()));
    };
    if (name == "exp1") {
        want(0);
        return sample_scaled_exp(Rational(1), Rational(1), mesh);
    }
    if (name == "capped_linear") {
        want(1);
        return sample_capped_linear(params[0], mesh);
    }
    if (name == "scaled_exp") {
        want(2);
        return sample_scaled_exp(params[0], params[1], mesh);
    }
    throw std::invalid_argument("unknown builtin '" + std::string(name) + "'");
}

} // namespace hitasym
