#include <gtest/gtest.h>

#include <algorithm>

#include "dsw/orders.hpp"
#include "support.hpp"

using namespace dsw;
using dsw::testing::seq;

namespace {

int sign(std::strong_ordering c) { return c < 0 ? -1 : (c > 0 ? 1 : 0); }

} // namespace

TEST(Orders, Lex1Examples)
{
    EXPECT_TRUE(cmp_lex1(DecSeq{}, seq({1})) < 0);
    EXPECT_TRUE(cmp_lex1(seq({0}), seq({1, 0})) < 0);
    EXPECT_TRUE(cmp_lex1(seq({2, 1}), seq({2})) > 0);
}

TEST(Orders, Lex2Examples)
{
    EXPECT_TRUE(cmp_lex2(seq({1}), DecSeq{}) < 0);
    EXPECT_TRUE(cmp_lex2(seq({0}), seq({1, 0})) < 0);
    EXPECT_TRUE(cmp_lex2(seq({1, 0}), seq({1})) < 0);
}

TEST(Orders, Lex3Examples)
{
    EXPECT_TRUE(cmp_lex3(DecSeq{}, seq({0})) < 0);
    EXPECT_TRUE(cmp_lex3(seq({0}), seq({1})) < 0);
    EXPECT_TRUE(cmp_lex3(seq({2, 1}), seq({2, 0})) < 0);
}

TEST(Orders, StarExamples)
{
    EXPECT_TRUE(leq_star(seq({0}), seq({1})));
    EXPECT_FALSE(leq_star(DecSeq{}, seq({1})));
    EXPECT_TRUE(leq_star(seq({3, 1}), seq({3, 1})));
    EXPECT_EQ(cmp_star(DecSeq{}, seq({1})), std::partial_ordering::unordered);
    EXPECT_EQ(compare_by(OrderKind::Star, seq({0}), seq({1})), std::partial_ordering::less);
}

TEST(Orders, AgreeWithEncodingOracles)
{
    dsw::testing::Rng rng(1);
    for (int i = 0; i < 20000; ++i) {
        const DecSeq a = dsw::testing::random_seq(rng, 6);
        const DecSeq b = dsw::testing::random_seq(rng, 6);
        EXPECT_EQ(sign(cmp_lex1(a, b)), dsw::testing::oracle_lex1(a, b));
        EXPECT_EQ(sign(cmp_lex2(a, b)), dsw::testing::oracle_lex2(a, b));
        EXPECT_EQ(sign(cmp_lex3(a, b)), dsw::testing::oracle_lex3(a, b));
    }
}

TEST(Orders, TotalOrderLaws)
{
    dsw::testing::Rng rng(2);
    using Cmp = std::strong_ordering (*)(const DecSeq&, const DecSeq&);
    for (Cmp cmp : {Cmp{cmp_lex1}, Cmp{cmp_lex2}, Cmp{cmp_lex3}}) {
        for (int i = 0; i < 5000; ++i) {
            const DecSeq a = dsw::testing::random_seq(rng, 5);
            const DecSeq b = dsw::testing::random_seq(rng, 5);
            const DecSeq c = dsw::testing::random_seq(rng, 5);
            EXPECT_EQ(cmp(a, b) == 0, a == b);
            EXPECT_EQ(sign(cmp(a, b)), -sign(cmp(b, a)));
            if (cmp(a, b) < 0 && cmp(b, c) < 0) {
                EXPECT_TRUE(cmp(a, c) < 0);
            }
        }
    }
}

TEST(Orders, StarLaws)
{
    dsw::testing::Rng rng(3);
    for (int i = 0; i < 5000; ++i) {
        const DecSeq a = dsw::testing::random_seq(rng, 4);
        const DecSeq b = dsw::testing::random_seq(rng, 4);
        const DecSeq c = dsw::testing::random_seq(rng, 4);
        if (leq_star(a, b) && leq_star(b, a)) {
            EXPECT_EQ(a, b);
        }
        if (leq_star(a, b) && leq_star(b, c)) {
            EXPECT_TRUE(leq_star(a, c));
        }
        // <* relates exactly the pairs where neither is a proper prefix of the other
        EXPECT_EQ(cmp_star(a, b) == std::partial_ordering::unordered,
                  a.is_proper_prefix_of(b) || b.is_proper_prefix_of(a));
    }
}

TEST(Orders, SameLengthOrdersCoincide)
{
    dsw::testing::Rng rng(4);
    for (int i = 0; i < 5000; ++i) {
        const DecSeq a = dsw::testing::random_seq(rng, 6);
        const DecSeq b = dsw::testing::random_seq(rng, 6);
        if (a.size() != b.size() || a == b) {
            continue;
        }
        EXPECT_EQ(cmp_lex1(a, b), cmp_lex2(a, b));
        if (cmp_lex1(a, b) < 0) {
            EXPECT_TRUE(leq_star(a, b));
        }
    }
}

TEST(Orders, MinExamples)
{
    EXPECT_EQ(min_lex2(std::vector{seq({2, 1}), seq({2}), seq({0})}), seq({0}));
    EXPECT_EQ(min_lex2(std::vector{seq({2, 1}), seq({2})}), seq({2, 1}));
    EXPECT_EQ(min_lex2(std::vector{DecSeq{}}), DecSeq{});
    EXPECT_EQ(min_lex1(std::vector{seq({2, 1}), seq({2})}), seq({2}));
    EXPECT_EQ(min_lex1(std::vector{seq({0}), seq({1}), seq({1, 0})}), seq({0}));
    EXPECT_EQ(min_lex1(std::vector{DecSeq{}, seq({3})}), DecSeq{});
    EXPECT_THROW(min_lex2(std::vector<DecSeq>{}), PreconditionError);
}

TEST(Orders, MinimaAgreeWithSorting)
{
    dsw::testing::Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        std::vector<DecSeq> set;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k) {
            set.push_back(dsw::testing::random_seq(rng, 6));
        }
        auto by = [](auto oracle) {
            return [oracle](const DecSeq& a, const DecSeq& b) { return oracle(a, b) < 0; };
        };
        EXPECT_EQ(min_lex2(set), *std::min_element(set.begin(), set.end(), by(dsw::testing::oracle_lex2)));
        EXPECT_EQ(min_lex1(set), *std::min_element(set.begin(), set.end(), by(dsw::testing::oracle_lex1)));
    }
}

TEST(Orders, TransfiniteEntries)
{
    const DecSeq a({Ordinal::omega(), Ordinal{3}});
    const DecSeq b({Ordinal::omega() + Ordinal{1}});
    EXPECT_TRUE(cmp_lex1(a, b) < 0);
    EXPECT_TRUE(cmp_lex2(a, b) < 0);
    EXPECT_TRUE(cmp_lex3(a, b) < 0);
    EXPECT_EQ(min_lex2(std::vector{b, a}), a);
}

TEST(Orders, ParseKind)
{
    EXPECT_EQ(parse_order_kind("lex3"), OrderKind::Lex3);
    EXPECT_EQ(parse_order_kind("star"), OrderKind::Star);
    EXPECT_FALSE(parse_order_kind("lex4").has_value());
}
