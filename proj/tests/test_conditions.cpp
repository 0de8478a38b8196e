#include "support.hpp"

#include <gtest/gtest.h>

using namespace hitasym;
using namespace hitasym::testing;

namespace {

RationalF example27_f() { return RationalF(R(5, 27), fracs({5, 5, 5, 3, 3, 3, 3}, 27)); }

TargetF pwl(std::initializer_list<std::pair<Rational, Rational>> pts, bool jump = false) {
    std::vector<Breakpoint> v;
    for (const auto& [t, y] : pts) v.push_back({t, y});
    return TargetF(std::move(v), jump);
}

} // namespace

TEST(ConditionsC, Examples) {
    EXPECT_TRUE(check_conditions_c(hitting_cdf(CyclicSystem(27, {1, 4, 7, 14, 21}))).pass());
    EXPECT_TRUE(check_conditions_c(StepCDF({{Rational(1), Rational(1)}})).pass());

    CReport bad = check_conditions_c(StepCDF({{R(1, 2), R(1, 4)}, {Rational(1), R(3, 4)}}));
    EXPECT_FALSE(bad.pass());
    EXPECT_TRUE(bad.fails("3"));
    EXPECT_TRUE(bad.fails("4"));
    EXPECT_FALSE(bad.fails("1"));

    CReport gap = check_conditions_c(StepCDF({{R(1, 2), R(1, 2)}, {R(3, 2), R(1, 2)}}));
    EXPECT_TRUE(gap.fails("1"));
    EXPECT_FALSE(gap.violations.front().witness.empty());

    EXPECT_FALSE(check_conditions_c(StepCDF(std::vector<Jump>{})).pass());
}

TEST(RationalF, FigureStructure) {
    auto f = example27_f();
    EXPECT_EQ(f.K(), 7u);
    EXPECT_EQ(f.q(), 27u);
    EXPECT_EQ(f.p(), 5u);
    EXPECT_EQ(f.run_ends(), (std::vector<std::uint64_t>{3, 7}));
    EXPECT_EQ(f.run_values(), (std::vector<std::uint64_t>{5, 3}));
    EXPECT_EQ(f.runs(), 2u);
    EXPECT_TRUE(f.q_identity_holds());
    EXPECT_EQ(3 * (5 - 3) + 7 * 3, 27);

    auto back = to_rational_f(hitting_cdf(CyclicSystem(27, {1, 4, 7, 14, 21})));
    EXPECT_EQ(back, f);

    auto unit = to_rational_f(StepCDF({{Rational(1), Rational(1)}}));
    EXPECT_EQ(unit.alpha(), Rational(1));
    EXPECT_EQ(unit.q(), 1u);
    EXPECT_EQ(unit.p(), 1u);
}

TEST(RationalF, Validation) {
    EXPECT_THROW(RationalF(R(1, 2), {R(1, 2)}), std::invalid_argument);
    EXPECT_THROW(RationalF(R(1, 3), {R(1, 3), R(2, 3)}), std::invalid_argument);
    EXPECT_THROW(RationalF(R(1, 2), {R(1, 3), R(2, 3)}), std::invalid_argument);
    EXPECT_THROW(RationalF(R(1, 2), {}), std::invalid_argument);
    EXPECT_THROW(to_rational_f(StepCDF({{Rational(1), R(1, 2)}})), std::invalid_argument);
    EXPECT_THROW(to_rational_f(StepCDF({{R(1, 2), R(1, 4)}, {Rational(1), R(3, 4)}})), std::invalid_argument);
}

TEST(RationalF, RandomIdentityAndRoundTrip) {
    Rng rng(211);
    for (int i = 0; i < 300; ++i) {
        auto f = random_rational_f(rng, 5000);
        EXPECT_TRUE(f.q_identity_holds());
        EXPECT_TRUE(check_conditions_c(f.step_cdf()).pass());
        EXPECT_EQ(to_rational_f(f.step_cdf()), f);
    }
    for (int i = 0; i < 200; ++i) {
        auto sys = random_cyclic(rng, 300);
        auto f = hitting_cdf(sys);
        EXPECT_TRUE(check_conditions_c(f).pass());
        EXPECT_EQ(to_rational_f(f).step_cdf(), f);
    }
}

TEST(ClassF, AcceptsBuiltins) {
    EXPECT_TRUE(check_class_f(cdf_from_builtin("exp1", {}, R(1, 64))).pass());
    EXPECT_TRUE(check_class_f(cdf_from_builtin("capped_linear", {Rational(1)}, R(1, 8))).pass());
    EXPECT_TRUE(check_class_f(cdf_from_builtin("capped_linear", {R(1, 3)}, R(1, 8))).pass());
    EXPECT_TRUE(check_class_f(cdf_from_builtin("capped_linear", {Rational(0)}, R(1, 8))).pass());
    EXPECT_TRUE(check_class_f(cdf_from_builtin("scaled_exp", {R(1, 2), Rational(2)}, R(1, 16))).pass());
    EXPECT_TRUE(check_class_f(cdf_from_builtin("scaled_exp", {R(3, 4), R(1, 3)}, R(1, 16))).pass());
    Rng rng(223);
    for (int i = 0; i < 100; ++i) EXPECT_TRUE(check_class_f(random_target(rng, 6)).pass());
}

TEST(ClassF, RejectsViolations) {
    auto convex = check_class_f(pwl({{R(0), R(0)}, {R(1), R(1, 4)}, {R(2), R(1)}}));
    EXPECT_TRUE(convex.fails("concave"));

    auto above = check_class_f(pwl({{R(0), R(0)}, {R(1, 2), R(3, 4)}, {R(2), R(1)}}));
    EXPECT_TRUE(above.fails("below_diagonal"));

    auto jump = check_class_f(pwl({{R(0), R(0)}, {R(1, 1000), R(1, 2)}, {R(2), R(3, 4)}}, true));
    EXPECT_TRUE(jump.fails("continuity"));

    auto decreasing = check_class_f(pwl({{R(0), R(0)}, {R(1), R(1, 2)}, {R(2), R(1, 4)}}));
    EXPECT_TRUE(decreasing.fails("increasing"));

    auto lifted = check_class_f(pwl({{R(0), R(1, 10)}, {R(1), R(1, 2)}}));
    EXPECT_TRUE(lifted.fails("null_at_zero"));

    auto over = check_class_f(pwl({{R(0), R(0)}, {R(2), R(3, 2)}}));
    EXPECT_TRUE(over.fails("range"));
}

TEST(InequalityI, Examples) {
    EXPECT_FALSE(check_inequality_I(StepCDF({{R(1, 2), Rational(1)}}), R(1, 4)));
    EXPECT_TRUE(check_inequality_I(StepCDF({{Rational(1), Rational(1)}}), Rational(1)));
    EXPECT_THROW(check_inequality_I(StepCDF({{Rational(1), Rational(1)}}), Rational(0)), std::invalid_argument);
}

TEST(InequalityI, HoldsForHittingCdfsAndMatchesPairScan) {
    Rng rng(227);
    for (int i = 0; i < 200; ++i) {
        auto sys = random_cyclic(rng, 200);
        StepCDF f = hitting_cdf(sys);
        EXPECT_TRUE(check_inequality_I(f, sys.measure()));
    }
    // brute force over all pairs of jump indices against random slack
    for (int i = 0; i < 200; ++i) {
        StepCDF f = random_step(rng, 6, i % 2 == 0);
        Rational alpha = make_rational(uniform(rng, 1, 12), 16);
        bool want = true;
        const auto& J = f.jumps();
        for (std::size_t a = 0; a < J.size(); ++a)
            for (std::size_t b = a; b < J.size(); ++b) {
                // s just below J[a].t, t = J[b].t
                Rational rise = f.eval(J[b].t) - f.left_limit(J[a].t);
                if (rise > J[b].t - J[a].t + alpha) want = false;
            }
        EXPECT_EQ(check_inequality_I(f, alpha), want) << i;
    }
}
