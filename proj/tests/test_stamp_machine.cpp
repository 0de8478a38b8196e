#include "support.hpp"

#include <gtest/gtest.h>

using namespace hitasym;
using namespace hitasym::testing;

namespace {

RationalF example27_f() { return RationalF(R(5, 27), fracs({5, 5, 5, 3, 3, 3, 3}, 27)); }

std::map<std::uint64_t, std::uint64_t> gap_multiset(const CyclicSystem& sys) {
    std::map<std::uint64_t, std::uint64_t> out;
    for (auto g : sys.gaps()) ++out[g];
    return out;
}

} // namespace

TEST(DeriveParams, Examples) {
    auto sp = derive_params(example27_f());
    EXPECT_EQ(sp.q, 27u);
    EXPECT_EQ(sp.p, 5u);
    EXPECT_EQ(sp.k, (std::vector<std::uint64_t>{3, 7}));
    EXPECT_EQ(sp.pvals, (std::vector<std::uint64_t>{5, 3}));

    auto one = derive_params(RationalF(Rational(1), {Rational(1)}));
    EXPECT_EQ(one.q, 1u);
    EXPECT_EQ(one.p, 1u);
    EXPECT_EQ(one.k, (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(one.pvals, (std::vector<std::uint64_t>{1}));

    auto half = derive_params(RationalF(R(1, 2), {R(1, 2), R(1, 2)}));
    EXPECT_EQ(half.q, 2u);
    EXPECT_EQ(half.p, 1u);
    EXPECT_EQ(half.k, (std::vector<std::uint64_t>{2}));
    EXPECT_EQ(half.pvals, (std::vector<std::uint64_t>{1}));
}

TEST(DeriveParams, ValidationRejectsBrokenParams) {
    StampParams bad{10, 3, {2, 5}, {3, 1}};
    EXPECT_THROW(bad.validate(), std::invalid_argument);  // 2*2 + 5*1 = 9
    StampParams unsorted{9, 3, {5, 2}, {3, 1}};
    EXPECT_THROW(unsorted.validate(), std::invalid_argument);
    EXPECT_THROW(build_system(bad), std::invalid_argument);
}

TEST(BuildSystem, Examples) {
    auto sys = build_system(derive_params(example27_f()));
    EXPECT_EQ(sys.q(), 27u);
    EXPECT_EQ(sys.marked(), (std::vector<std::uint64_t>{1, 4, 7, 14, 21}));
    EXPECT_EQ(gap_multiset(sys), (std::map<std::uint64_t, std::uint64_t>{{3, 2}, {7, 3}}));

    EXPECT_EQ(build_system(StampParams{1, 1, {1}, {1}}).marked(), (std::vector<std::uint64_t>{1}));
    auto two = build_system(StampParams{2, 1, {2}, {1}});
    EXPECT_EQ(two.marked(), (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(hitting_cdf(two), StepCDF({{R(1, 2), R(1, 2)}, {Rational(1), R(1, 2)}}));
}

TEST(MakeStamp, Examples) {
    auto st = make_stamp(derive_params(example27_f()));
    EXPECT_EQ(st.height, 27u);
    EXPECT_EQ(st.marked_offsets, (std::vector<std::uint64_t>{0, 3, 6, 13, 20}));
    auto one = make_stamp(StampParams{1, 1, {1}, {1}});
    EXPECT_EQ(one.height, 1u);
    EXPECT_EQ(one.marked_offsets, (std::vector<std::uint64_t>{0}));
}

TEST(VerifyRoundtrip, Examples) {
    EXPECT_TRUE(verify_roundtrip(example27_f()));
    EXPECT_TRUE(verify_roundtrip(RationalF(Rational(1), {Rational(1)})));
}

TEST(StampProperties, RandomRationalF) {
    Rng rng(307);
    for (int i = 0; i < 200; ++i) {
        auto f = random_rational_f(rng, 5000);
        auto sp = derive_params(f);
        auto sys = build_system(sp);
        auto st = make_stamp(sp);

        EXPECT_EQ(sys.marked().size(), sp.p);
        EXPECT_EQ(sys.measure(), f.alpha());
        ASSERT_EQ(st.marked_offsets.size(), sys.marked().size());
        for (std::size_t j = 0; j < st.marked_offsets.size(); ++j)
            EXPECT_EQ(st.marked_offsets[j] + 1, sys.marked()[j]);

        std::map<std::uint64_t, std::uint64_t> want;
        for (std::size_t j = 0; j < sp.k.size(); ++j) want[sp.k[j]] = sp.multiplicity(j);
        EXPECT_EQ(gap_multiset(sys), want);

        // exact comparison against hitting times obtained by walking
        if (sys.q() <= 800) EXPECT_EQ(hitting_cdf_from_times(sys, walk_hitting_times(sys)), f.step_cdf());
        else EXPECT_TRUE(verify_roundtrip(f));
    }
}
