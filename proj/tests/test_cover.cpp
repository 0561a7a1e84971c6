#include "support.hpp"

#include <diversity/amalgam.hpp>

#include <gtest/gtest.h>

using namespace diversity;
using namespace testing_support;

namespace {

WeightedBlockFamily family(std::vector<std::string> universe, std::vector<std::pair<Mask, Rat>> blocks)
{
    WeightedBlockFamily f{std::move(universe), {}};
    for (auto & [m, w] : blocks)
        f.blocks.push_back({m, w});
    return f;
}

/// Every index set, no pruning, no bound.
std::optional<Rat> brute_min(const WeightedBlockFamily & f, Mask x)
{
    std::optional<Rat> best;
    std::size_t k = f.blocks.size();
    for (std::size_t s = 1; s < (std::size_t{1} << k); ++s) {
        std::vector<std::size_t> chosen;
        Rat total(0);
        for (std::size_t i = 0; i < k; ++i)
            if ((s >> i) & 1) {
                chosen.push_back(i);
                total += f.blocks[i].weight;
            }
        if (is_connected_cover(f.blocks, chosen, x) && (! best || total < *best))
            best = total;
    }
    return best;
}

} // namespace

TEST(Cover, TriangleExample)
{
    auto f = family({"a", "b", "c"}, {{0b011, Rat(1)}, {0b110, Rat(1)}, {0b111, Rat(3, 2)}});
    for (auto mode : {CoverMode::reduced, CoverMode::exhaustive}) {
        auto [v, cert] = min_connected_cover(f, 0b101, {mode});
        EXPECT_EQ(v, Rat(3, 2));
        EXPECT_EQ(cert.chosen, std::vector<std::size_t>{2});
        EXPECT_EQ(cert.total, Rat(3, 2));
    }
}

TEST(Cover, SingletonAndEmpty)
{
    auto f = family({"a", "b"}, {{0b01, Rat(0)}, {0b11, Rat(1)}});
    EXPECT_EQ(min_connected_cover(f, 0b01).first, Rat(0));
    EXPECT_EQ(min_connected_cover(f, 0).first, Rat(0));
    EXPECT_TRUE(min_connected_cover(f, 0).second.chosen.empty());
}

TEST(Cover, DisconnectedIsInfeasible)
{
    auto f = family({"a", "b", "c", "d"}, {{0b0011, Rat(1)}, {0b1100, Rat(1)}});
    EXPECT_THROW(min_connected_cover(f, 0b1001), DomainError);
    EXPECT_THROW(min_connected_cover(f, 0b1001, {CoverMode::exhaustive}), DomainError);
}

TEST(Cover, TieBreakIsLexicographic)
{
    // {0,1} and {2} both cost 2; {0,1} comes first
    auto f = family({"a", "b", "c"}, {{0b011, Rat(1)}, {0b110, Rat(1)}, {0b111, Rat(2)}});
    for (auto mode : {CoverMode::reduced, CoverMode::exhaustive}) {
        auto [v, cert] = min_connected_cover(f, 0b101, {mode});
        EXPECT_EQ(v, Rat(2));
        EXPECT_EQ(cert.chosen, (std::vector<std::size_t>{0, 1}));
    }
}

TEST(Cover, ModesAgreeWithBruteForce)
{
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Rng rng(seed);
        std::size_t n = 2 + rng.below(4);
        std::size_t k = 1 + rng.below(9);
        WeightedBlockFamily f;
        for (std::size_t i = 0; i < n; ++i)
            f.universe.push_back("u" + std::to_string(i));
        for (std::size_t i = 0; i < k; ++i)
            f.blocks.push_back({static_cast<Mask>(1 + rng.below(full_mask(n))), Rat(rng.between(0, 8), 2)});
        for (Mask x = 0; x <= full_mask(n); ++x) {
            auto oracle = x ? brute_min(f, x) : std::optional<Rat>(Rat(0));
            auto table = min_cover_table(f);
            EXPECT_EQ(table[x], oracle) << seed << " " << x;
            for (auto mode : {CoverMode::reduced, CoverMode::exhaustive}) {
                if (! oracle) {
                    EXPECT_THROW(min_connected_cover(f, x, {mode}), DomainError);
                    continue;
                }
                auto [v, cert] = min_connected_cover(f, x, {mode});
                EXPECT_EQ(v, *oracle);
                EXPECT_TRUE(is_connected_cover(f.blocks, cert.chosen, x));
                Rat sum(0);
                for (auto i : cert.chosen)
                    sum += f.blocks[i].weight;
                EXPECT_EQ(sum, v);
            }
            if (oracle) {
                auto r = min_connected_cover(f, x, {CoverMode::reduced}).second;
                auto e = min_connected_cover(f, x, {CoverMode::exhaustive}).second;
                EXPECT_EQ(r, e);
            }
        }
    }
}

TEST(Cover, OwnSubsetsNeverBeatTheValue)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto d = random_diversity(seed, 4);
        WeightedBlockFamily f{d.points(), {}};
        for (Mask m = 1; m <= d.full(); ++m)
            f.blocks.push_back({m, d[m]});
        auto table = min_cover_table(f);
        for (Mask x = 0; x <= d.full(); ++x)
            EXPECT_EQ(*table[x], d[x]);
        Rng rng(seed);
        for (int k = 0; k < 50; ++k) {
            std::vector<std::size_t> chosen;
            for (std::size_t i = 0; i < f.blocks.size(); ++i)
                if (rng.below(4) == 0)
                    chosen.push_back(i);
            Mask x = static_cast<Mask>(rng.below(d.full() + 1));
            if (! is_connected_cover(f.blocks, chosen, x))
                continue;
            Rat sum(0);
            for (auto i : chosen)
                sum += f.blocks[i].weight;
            EXPECT_LE(d[x], sum);
        }
    }
}
