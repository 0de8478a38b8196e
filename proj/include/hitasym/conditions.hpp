#pragma once

#include "hitasym/distribution.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hitasym {

/// Outcome of a structural check. `condition` is "1".."4" for the
/// hitting-CDF conditions and a short name for class membership.
struct Violation {
    std::string condition;
    std::string witness;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct CReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool pass() const { return violations.empty(); }
    [[nodiscard]] bool fails(std::string_view condition) const {
        for (const auto& v : violations)
            if (v.condition == condition) return true;
        return false;
    }
};

/// Checks the four necessary conditions for F to be a hitting-time CDF:
///  1. jumps sit exactly at alpha, 2 alpha, ..., K alpha;
///  2. F vanishes before alpha (structural for a StepCDF);
///  3. jump sizes are nonincreasing;
///  4. the first jump equals alpha.
/// alpha is the first jump location.
inline CReport check_conditions_c(const StepCDF& f) {
    CReport report;
    if (f.empty()) {
        report.violations.push_back({"2", "no jumps: F never leaves 0"});
        return report;
    }
    const auto& jumps = f.jumps();
    const Rational& alpha = jumps.front().t;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        Rational expected = Rational(static_cast<unsigned long>(i + 1)) * alpha;
        if (jumps[i].t != expected) {
            report.violations.push_back({"1", "jump #" + std::to_string(i + 1) + " at t = " + jumps[i].t.str() +
                                                  ", expected " + expected.str()});
            break;
        }
    }
    for (std::size_t i = 1; i < jumps.size(); ++i) {
        if (jumps[i].size > jumps[i - 1].size) {
            report.violations.push_back({"3", "jump at t = " + jumps[i].t.str() + " has size " +
                                                  jumps[i].size.str() + " > previous " + jumps[i - 1].size.str()});
            break;
        }
    }
    if (jumps.front().size != alpha)
        report.violations.push_back(
            {"4", "first jump size " + jumps.front().size.str() + " != location " + alpha.str()});
    return report;
}

/// A CDF satisfying the hitting conditions with finitely many rational
/// jumps: jump betas[k-1] at k * alpha, summing to one.
///
/// Besides the raw data it carries the run-length structure of the jumps:
/// run_ends are the indices k_1 < ... < k_s = K where the jump value changes,
/// and run_values are the numerators p_1 > ... > p_s of the run values over
/// the common denominator q.
class RationalF {
  public:
    RationalF(Rational alpha, std::vector<Rational> betas) : alpha_(std::move(alpha)), betas_(std::move(betas)) {
        if (betas_.empty()) throw std::invalid_argument("RationalF: no jumps");
        if (alpha_.sign() <= 0 || alpha_ > Rational(1))
            throw std::invalid_argument("RationalF: alpha " + alpha_.str() + " outside ]0,1]");
        if (betas_.front() != alpha_)
            throw std::invalid_argument("RationalF: first jump " + betas_.front().str() + " != alpha " +
                                        alpha_.str());
        Rational total;
        mpz_class q = alpha_.den();
        for (std::size_t i = 0; i < betas_.size(); ++i) {
            if (betas_[i].sign() <= 0)
                throw std::invalid_argument("RationalF: jump #" + std::to_string(i + 1) + " is not positive");
            if (i > 0 && betas_[i] > betas_[i - 1])
                throw std::invalid_argument("RationalF: jumps increase at #" + std::to_string(i + 1));
            total += betas_[i];
            mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), betas_[i].den().get_mpz_t());
        }
        if (total != Rational(1)) throw std::invalid_argument("RationalF: jumps sum to " + total.str() + ", not 1");

        q_ = to_u64(q);
        p_ = to_u64(alpha_.num() * (q / alpha_.den()));
        for (std::size_t i = 0; i < betas_.size(); ++i) {
            if (i + 1 == betas_.size() || betas_[i + 1] != betas_[i]) {
                run_ends_.push_back(i + 1);
                run_values_.push_back(to_u64(betas_[i].num() * (q / betas_[i].den())));
            }
        }
        if (!q_identity_holds())
            throw std::logic_error("RationalF: q-identity failed for q = " + std::to_string(q_));
    }

    [[nodiscard]] const Rational& alpha() const { return alpha_; }
    [[nodiscard]] const std::vector<Rational>& betas() const { return betas_; }
    [[nodiscard]] std::size_t K() const { return betas_.size(); }
    [[nodiscard]] std::uint64_t q() const { return q_; }
    [[nodiscard]] std::uint64_t p() const { return p_; }
    [[nodiscard]] const std::vector<std::uint64_t>& run_ends() const { return run_ends_; }
    [[nodiscard]] const std::vector<std::uint64_t>& run_values() const { return run_values_; }
    [[nodiscard]] std::size_t runs() const { return run_ends_.size(); }

    /// q = sum_j k_j (p_j - p_{j+1}) with p_{s+1} = 0.
    [[nodiscard]] bool q_identity_holds() const {
        mpz_class sum;
        for (std::size_t j = 0; j < runs(); ++j) {
            std::uint64_t next = j + 1 < runs() ? run_values_[j + 1] : 0;
            if (run_values_[j] <= next) return false;
            sum += from_u64(run_ends_[j]) * from_u64(run_values_[j] - next);
        }
        return sum == from_u64(q_);
    }

    [[nodiscard]] StepCDF step_cdf() const {
        std::vector<Jump> jumps;
        jumps.reserve(betas_.size());
        for (std::size_t k = 1; k <= betas_.size(); ++k)
            jumps.push_back({Rational(static_cast<unsigned long>(k)) * alpha_, betas_[k - 1]});
        return StepCDF(std::move(jumps));
    }

    friend bool operator==(const RationalF& a, const RationalF& b) {
        return a.alpha_ == b.alpha_ && a.betas_ == b.betas_;
    }

  private:
    Rational alpha_;
    std::vector<Rational> betas_;
    std::uint64_t q_ = 0;
    std::uint64_t p_ = 0;
    std::vector<std::uint64_t> run_ends_;
    std::vector<std::uint64_t> run_values_;
};

inline RationalF to_rational_f(const StepCDF& f) {
    auto report = check_conditions_c(f);
    if (!report.pass())
        throw std::invalid_argument("to_rational_f: condition " + report.violations.front().condition +
                                    " fails: " + report.violations.front().witness);
    if (f.total_mass() != Rational(1))
        throw std::invalid_argument("to_rational_f: total mass " + f.total_mass().str() + " < 1");
    std::vector<Rational> betas;
    betas.reserve(f.size());
    for (const auto& j : f.jumps()) betas.push_back(j.size);
    return RationalF(f.jumps().front().t, std::move(betas));
}

/// Membership of a piecewise-linear candidate in the limit class: values in
/// [0,1], F(0) = 0, nondecreasing, concave, F(t) <= t. On piecewise-linear
/// data the last three only need checking at breakpoints and slopes.
/// For jump-encoding candidates, any segment steeper than 1 is reported as a
/// discontinuity.
inline CReport check_class_f(const TargetF& f) {
    CReport report;
    const auto& pts = f.points();
    auto at = [](const Breakpoint& b) { return "(" + b.t.str() + ", " + b.value.str() + ")"; };
    if (pts.front().value.sign() != 0)
        report.violations.push_back({"null_at_zero", "F(0) = " + pts.front().value.str()});
    for (const auto& b : pts) {
        if (b.value.sign() < 0 || b.value > Rational(1)) {
            report.violations.push_back({"range", "value outside [0,1] at " + at(b)});
            break;
        }
    }
    for (const auto& b : pts) {
        if (b.value > b.t) {
            report.violations.push_back({"below_diagonal", "F(t) > t at " + at(b)});
            break;
        }
    }
    std::vector<Rational> slopes;
    for (std::size_t i = 1; i < pts.size(); ++i)
        slopes.push_back((pts[i].value - pts[i - 1].value) / (pts[i].t - pts[i - 1].t));
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (slopes[i].sign() < 0) {
            report.violations.push_back({"increasing", "F decreases after " + at(pts[i])});
            break;
        }
    }
    for (std::size_t i = 1; i < slopes.size(); ++i) {
        if (slopes[i] > slopes[i - 1]) {
            report.violations.push_back({"concave", "slope rises from " + slopes[i - 1].str() + " to " +
                                                        slopes[i].str() + " at " + at(pts[i])});
            break;
        }
    }
    if (f.encodes_jump()) {
        for (std::size_t i = 0; i < slopes.size(); ++i) {
            if (slopes[i] > Rational(1)) {
                report.violations.push_back({"continuity", "segment from " + at(pts[i]) + " has slope " +
                                                               slopes[i].str() + " > 1 (encoded jump)"});
                break;
            }
        }
    }
    return report;
}

/// Checks f(t) - f(s) <= t - s + alpha for all 0 <= s < t. With
/// phi(x) = f(x) - x this is sup_{s<t} phi(t) - phi(s) <= alpha, and the sup
/// is reached with t on a jump and s at 0 or just below a jump.
inline bool check_inequality_I(const StepCDF& f, const Rational& alpha) {
    if (alpha.sign() <= 0) throw std::invalid_argument("check_inequality_I: alpha must be positive");
    Rational lowest_phi;  // phi(0) = 0
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Rational& t = f.jumps()[i].t;
        Rational before = i == 0 ? Rational(0) : f.cumulative(i - 1);
        lowest_phi = min(lowest_phi, before - t);
        if (f.cumulative(i) - t - lowest_phi > alpha) return false;
    }
    return true;
}

} // namespace hitasym
