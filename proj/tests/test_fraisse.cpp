#include "support.hpp"

#include <diversity/fraisse.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace diversity;
using namespace testing_support;

namespace {

/// All valid strict tables on n points with grid values, as a set of
/// permutation-closed classes: each class represented by every table in it.
std::size_t naive_age_count(std::size_t n, const std::vector<Rat> & grid)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back("p" + std::to_string(i));
    auto d = FiniteDiversity::zeros(labels);
    std::vector<Mask> big;
    for (Mask m = 0; m <= d.full(); ++m)
        if (popcount(m) >= 2)
            big.push_back(m);
    std::vector<FiniteDiversity> reps;
    std::vector<std::size_t> digit(big.size(), 0);
    for (;;) {
        for (std::size_t i = 0; i < big.size(); ++i)
            d.set(big[i], grid[digit[i]]);
        if (naive_is_diversity(d)) {
            bool known = std::any_of(reps.begin(), reps.end(),
                [&](const FiniteDiversity & r) { return find_isoversity(d, r).has_value(); });
            if (! known)
                reps.push_back(d);
        }
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == grid.size())
            digit[i++] = 0;
        if (i == digit.size())
            break;
    }
    return big.empty() ? 1 : reps.size();
}

} // namespace

TEST(Age, SmallCatalogs)
{
    auto cat = enumerate_age(2, 1, Rat(2));
    ASSERT_EQ(cat.structures.size(), 3u);
    EXPECT_EQ(cat.structures[0].size(), 1u);
    EXPECT_EQ(cat.structures[1][3], Rat(1));
    EXPECT_EQ(cat.structures[2][3], Rat(2));
    EXPECT_EQ(enumerate_age(1, 3, Rat(5)).structures.size(), 1u);
}

TEST(Age, MatchesIsomorphismClassCount)
{
    for (auto [denom, value] : std::vector<std::pair<std::int64_t, Rat>>{{1, Rat(3)}, {2, Rat(2)}, {1, Rat(4)}}) {
        auto cat = enumerate_age(3, denom, value);
        auto grid = value_grid(denom, value);
        for (std::size_t n = 1; n <= 3; ++n) {
            auto count = std::count_if(cat.structures.begin(), cat.structures.end(),
                [&](const FiniteDiversity & d) { return d.size() == n; });
            EXPECT_EQ(static_cast<std::size_t>(count), naive_age_count(n, grid)) << n;
        }
        for (std::size_t i = 0; i < cat.structures.size(); ++i) {
            EXPECT_TRUE(is_valid(cat.structures[i]));
            EXPECT_EQ(canonical_form(cat.structures[i]), cat.structures[i]);
            for (std::size_t j = 0; j < i; ++j)
                EXPECT_FALSE(find_isoversity(cat.structures[i], cat.structures[j]).has_value());
        }
    }
}

TEST(Age, HereditaryWithinBounds)
{
    auto cat = enumerate_age(3, 1, Rat(3));
    for (auto & d : cat.structures)
        for (Mask s = 1; s < d.full(); ++s) {
            auto c = canonical_form(restrict(d, s));
            EXPECT_NE(std::find(cat.structures.begin(), cat.structures.end(), c), cat.structures.end());
        }
}

TEST(Age, RefusesLargeBounds)
{
    try {
        enumerate_age(4, 4, Rat(4));
        FAIL();
    } catch (const DomainError & e) {
        EXPECT_EQ(e.code(), "age-too-large");
    }
    EXPECT_THROW(enumerate_age(5, 1, Rat(1)), DomainError);
}

TEST(Realize, Examples)
{
    auto x = d3();
    Mask b = x.mask_of({"b"});
    auto d = realize_admissible(x, b, {Rat(0), Rat(1)}, "y");
    EXPECT_EQ(d[d.mask_of({"b", "y"})], Rat(1));
    EXPECT_EQ(d[d.mask_of({"a", "y"})], Rat(2));
    EXPECT_TRUE(is_valid(d));

    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto y = random_diversity(seed, 4);
        Mask s = 1 + static_cast<Mask>(seed % y.full());
        auto g = random_admissible(seed, restrict(y, s));
        EXPECT_EQ(realize_admissible(y, s, g.table, "z"), one_point_extension(y, extend_support(y, s, g.table), "z"));
    }

    auto f = kappa(x, "a");
    for (Mask m = 1; m <= x.full(); ++m)
        f.table[m] += Rat(1, 2);
    auto e = realize_admissible(x, x.full(), f.table, "y");
    for (Mask m = 0; m <= x.full(); ++m)
        EXPECT_EQ(e[m | bit(3)], f[m]);
}

TEST(Approximant, Examples)
{
    auto zero = build_approximant(0);
    EXPECT_EQ(zero.diversity.size(), 1u);

    auto one = build_approximant(1, {{1, Rat(2), 1}});
    ASSERT_EQ(one.diversity.size(), 3u);
    std::vector<Rat> pairs{one.diversity[0b011], one.diversity[0b101]};
    EXPECT_EQ(pairs, (std::vector<Rat>{Rat(1), Rat(2)}));
    EXPECT_EQ(one.diversity.label(1), "y1_0");
}

TEST(Approximant, LevelsAreStrictAndNested)
{
    for (auto dedup : {Dedup::exact, Dedup::type}) {
        BuildOptions opt{{1, Rat(2), 2}, dedup};
        auto a = build_approximant(3, opt);
        ASSERT_EQ(a.level_sizes.size(), a.level + 1);
        EXPECT_TRUE(a.truncated || a.level == 3);
        for (std::size_t k = 0; k < a.level_sizes.size(); ++k)
            EXPECT_TRUE(is_valid(a.at_level(k)));
        for (auto & t : a.log) {
            auto pos = a.diversity.require_index(t.label);
            auto x = restrict(a.diversity, full_mask(pos));
            EXPECT_EQ(extension_property_probe(a.diversity, t.support, t.f, Rat(0)).has_value(), true);
            EXPECT_TRUE(admissible(restrict(x, t.support), t.f));
        }
    }
}

TEST(Approximant, DeterministicAndSeedSensitive)
{
    BuildOptions opt{{1, Rat(2), 2}, Dedup::exact, max_points, 0};
    auto a = build_approximant(2, opt), b = build_approximant(2, opt);
    EXPECT_EQ(a.diversity, b.diversity);
    EXPECT_EQ(a.log, b.log);
    opt.seed = 7;
    auto c = build_approximant(2, opt), e = build_approximant(2, opt);
    EXPECT_EQ(c.diversity, e.diversity);
}

TEST(Approximant, TruncatesAtPointCap)
{
    BuildOptions opt{{2, Rat(3), 2}, Dedup::none, 6};
    auto a = build_approximant(3, opt);
    EXPECT_TRUE(a.truncated);
    EXPECT_EQ(a.diversity.size(), 6u);
    EXPECT_TRUE(is_valid(a.diversity));
}

TEST(Approximant, UniversalForSmallAge)
{
    auto cat = enumerate_age(3, 1, Rat(3));
    auto a = build_approximant(3, {{1, Rat(3), 2}, Dedup::type});
    EXPECT_FALSE(a.truncated);
    for (auto & d : cat.structures)
        EXPECT_TRUE(find_embedding(d, a.diversity).has_value()) << to_string(d.total());
}

TEST(Witnesses, JointEmbeddingAndAmalgamation)
{
    auto cat = enumerate_age(3, 1, Rat(2));
    for (auto & p : cat.structures)
        for (auto & q : cat.structures) {
            std::vector<std::string> ql;
            for (std::size_t i = 0; i < q.size(); ++i)
                ql.push_back("q" + std::to_string(i));
            auto qr = relabel(q, ql);
            auto s = disjoint_sum(p, qr, std::max(p.total(), q.total()) + 1);
            EXPECT_TRUE(is_valid(s));
            EXPECT_EQ(restrict(s, p.points()), p);
            EXPECT_EQ(restrict(s, ql), qr);

            for (Mask m = 1; m <= p.full(); ++m) {
                auto emb = find_embedding(restrict(p, m), q);
                if (! emb)
                    continue;
                // rename q so the shared copy carries p's labels
                auto shared = positions(m);
                std::vector<std::string> labels = ql;
                for (std::size_t i = 0; i < shared.size(); ++i)
                    labels[(*emb)[i]] = p.label(shared[i]);
                auto c = relabel(q, labels);
                auto d = free_amalgam(p, c);
                EXPECT_TRUE(is_valid(d));
                EXPECT_EQ(restrict(d, p.points()), p);
                EXPECT_TRUE(same_labeled(restrict(d, c.points()), c));
            }
        }
}

TEST(Homogeneity, Probe)
{
    auto two = build_approximant(1, {{1, Rat(1), 1}});
    ASSERT_EQ(two.diversity.size(), 2u);
    auto id = ultrahomogeneity_probe(two, {{0, 0}}, 0);
    ASSERT_TRUE(id.extended);
    EXPECT_EQ(*id.extended, (PartialIso{{0, 0}, {1, 1}}));

    auto swap = ultrahomogeneity_probe(two, {{0, 1}}, 1);
    ASSERT_TRUE(swap.extended);
    EXPECT_EQ(*swap.extended, (PartialIso{{0, 1}, {1, 0}}));

    auto three = build_approximant(1, {{1, Rat(2), 1}});
    auto stuck = ultrahomogeneity_probe(three, {{2, 1}}, 0);
    EXPECT_FALSE(stuck.extended);
    EXPECT_EQ(stuck.blocking, std::optional<std::size_t>(0));

    EXPECT_THROW(ultrahomogeneity_probe(three, {{1, 2}, {2, 1}, {0, 1}}, 0), DomainError);
}
