#include "support.hpp"

#include <diversity/propinquity.hpp>

#include <gtest/gtest.h>

using namespace diversity;
using namespace testing_support;

namespace {

DiversityAssignment assignment(std::size_t n, const std::vector<std::pair<Mask, const char *>> & entries)
{
    DiversityAssignment r{n, std::vector<Rat>(std::size_t{1} << n)};
    for (auto & [m, v] : entries)
        r.table[m] = parse_rat(v);
    return r;
}

DiversityAssignment triple(const char * top)
{
    return assignment(3, {{0b011, "1"}, {0b101, "1"}, {0b110, "1"}, {0b111, top}});
}

/// Mixed value by listing every family of x-side and y-side blocks.
Rat naive_mixed(const DiversityAssignment & r1, const DiversityAssignment & r2, Mask xs, Mask ys, const Rat & half)
{
    std::size_t n = r1.n;
    std::vector<std::pair<Mask, bool>> blocks; // index set, from ρ₂
    for (Mask m = 1; m <= full_mask(n); ++m) {
        blocks.push_back({m, false});
        blocks.push_back({m, true});
    }
    std::optional<Rat> best;
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << blocks.size()); ++pick) {
        Mask ex = 0, fy = 0;
        Rat cost(0);
        std::vector<Mask> sets;
        for (std::size_t j = 0; j < blocks.size(); ++j)
            if ((pick >> j) & 1u) {
                auto [m, right] = blocks[j];
                (right ? fy : ex) |= m;
                cost += right ? r2[m] : r1[m];
                sets.push_back(m);
            }
        if (! is_subset(xs, ex) || ! is_subset(ys, fy) || (best && ! (cost < *best)))
            continue;
        // connectivity of the index sets by repeated merging
        Mask reach = sets[0];
        std::vector<bool> in(sets.size(), false);
        in[0] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t j = 0; j < sets.size(); ++j)
                if (! in[j] && (sets[j] & reach)) {
                    in[j] = true;
                    reach |= sets[j];
                    grew = true;
                }
        }
        if (std::find(in.begin(), in.end(), false) == in.end())
            best = cost;
    }
    return *best + half;
}

/// Per-link value by listing every family of x-blocks, y-blocks and links.
Rat naive_linked(const DiversityAssignment & r1, const DiversityAssignment & r2, Mask s, const Rat & half)
{
    std::size_t n = r1.n;
    std::vector<std::pair<Mask, Rat>> blocks;
    for (Mask m = 1; m <= full_mask(n); ++m) {
        blocks.push_back({m, r1[m]});
        blocks.push_back({m << n, r2[m]});
    }
    for (std::size_t i = 0; i < n; ++i)
        blocks.push_back({bit(i) | bit(i + n), half});
    std::optional<Rat> best;
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << blocks.size()); ++pick) {
        Mask cover = 0;
        Rat cost(0);
        std::vector<Mask> sets;
        for (std::size_t j = 0; j < blocks.size(); ++j)
            if ((pick >> j) & 1u) {
                cover |= blocks[j].first;
                cost += blocks[j].second;
                sets.push_back(blocks[j].first);
            }
        if (! is_subset(s, cover) || (best && ! (cost < *best)))
            continue;
        Mask reach = sets[0];
        std::vector<bool> in(sets.size(), false);
        in[0] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t j = 0; j < sets.size(); ++j)
                if (! in[j] && (sets[j] & reach)) {
                    in[j] = true;
                    reach |= sets[j];
                    grew = true;
                }
        }
        if (std::find(in.begin(), in.end(), false) == in.end())
            best = cost;
    }
    return *best;
}

DiversityAssignment perturbed(std::uint64_t seed, const DiversityAssignment & r)
{
    Rng rng(seed);
    auto d = to_diversity(r);
    for (int step = 0; step < 6; ++step) {
        Mask m = static_cast<Mask>(rng.below(d.full() + 1));
        if (popcount(m) < 2)
            continue;
        Rat old = d[m], v = old + Rat(rng.between(-2, 2), 2);
        if (! (v > 0))
            continue;
        d.set(m, v);
        if (! is_valid(d))
            d.set(m, old);
    }
    return to_assignment(d);
}

} // namespace

TEST(Assignment, AgreesWithDiversityValidator)
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto d = random_diversity(seed, 1 + seed % 4, 2, Rat(3));
        if (seed % 2 == 0 && d.size() >= 2) {
            Rng rng(seed);
            Mask m = static_cast<Mask>(rng.below(d.full() + 1));
            d.set(m, d[m] + Rat(rng.between(-3, 3), 2));
        }
        auto r = to_assignment(d);
        EXPECT_EQ(is_assignment(r), is_valid(d)) << seed;
        EXPECT_EQ(is_assignment(r), naive_is_diversity(d)) << seed;
        EXPECT_EQ(is_assignment(r, Strictness::pseudo), naive_is_diversity(d, false)) << seed;
        EXPECT_EQ(to_assignment(to_diversity(r)), r);
    }
}

TEST(DInfty, Examples)
{
    auto r1 = triple("3/2"), r2 = triple("2");
    EXPECT_EQ(d_infty(r1, r1), Rat(0));
    EXPECT_EQ(d_infty(r1, r2), R("1/2"));
    EXPECT_EQ(d_infty(r2, r1), R("1/2"));
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto a = random_assignment(seed, 3), b = random_assignment(seed + 99, 3);
        EXPECT_EQ(d_infty(a, b), d_infty(b, a));
    }
    EXPECT_THROW(d_infty(r1, assignment(2, {{0b11, "1"}})), DomainError);
}

TEST(Joint, Examples)
{
    auto r1 = triple("3/2"), r2 = triple("2");
    auto j = joint_assignment(r1, r2);
    ASSERT_EQ(j.n, 6u);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(j[bit(i) | bit(i + 3)], R("1/4"));
    for (Mask m = 0; m < 8; ++m) {
        EXPECT_EQ(j[m], r1[m]);
        EXPECT_EQ(j[m << 3], r2[m]);
    }
    EXPECT_TRUE(is_assignment(j));
    // x0 with y1: one link and the pair {0,1} on either side
    EXPECT_EQ(j[bit(0) | bit(4)], R("5/4"));
    EXPECT_EQ(j[0b111000 | bit(0)], Rat(2) + R("1/4"));

    auto same = joint_assignment(r1, r1);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(same[bit(i) | bit(i + 3)], Rat(0));
    EXPECT_FALSE(is_assignment(same));
    EXPECT_TRUE(is_assignment(same, Strictness::pseudo));
}

TEST(Joint, MatchesFamilyEnumeration)
{
    for (std::uint64_t seed = 1; seed <= 22; ++seed) {
        std::size_t n = seed <= 20 ? 1 + seed % 2 : 3;
        auto r1 = random_assignment(seed, n, 2);
        auto r2 = seed % 3 ? perturbed(seed, r1) : random_assignment(seed + 7, n, 2);
        auto linked = joint_assignment(r1, r2);
        auto once = joint_assignment(r1, r2, JointRule::once);
        Rat half = d_infty(r1, r2) / Rat(2);
        for (Mask s = 1; s < linked.table.size(); ++s)
            EXPECT_EQ(linked[s], naive_linked(r1, r2, s, half)) << seed;
        for (Mask xs = 1; xs <= full_mask(n); ++xs)
            for (Mask ys = 1; ys <= full_mask(n); ++ys)
                EXPECT_EQ(once[xs | (ys << n)], naive_mixed(r1, r2, xs, ys, half)) << seed;
    }
}

TEST(Joint, ChargingOnceBreaksMonotonicity)
{
    // x̄ at 3/2 plus free y-singletons undercuts ρ(ȳ) = 2
    auto r1 = triple("3/2"), r2 = triple("2");
    auto once = joint_assignment(r1, r2, JointRule::once);
    EXPECT_EQ(once[0b111000], Rat(2));
    EXPECT_EQ(once[0b111001], R("7/4"));
    EXPECT_FALSE(is_assignment(once, Strictness::pseudo));
    EXPECT_TRUE(is_assignment(joint_assignment(r1, r2)));
}

TEST(Joint, CertifiesTheUpperBound)
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::size_t n = 1 + seed % 3;
        auto r1 = random_assignment(seed, n, 2);
        auto r2 = seed % 2 ? perturbed(seed, r1) : random_assignment(seed + 1000, n, 2);
        Rat c = d_infty(r1, r2);
        auto j = joint_assignment(r1, r2);
        EXPECT_TRUE(is_assignment(j, c > 0 ? Strictness::strict : Strictness::pseudo)) << seed;
        for (Mask m = 0; m <= full_mask(n); ++m) {
            EXPECT_EQ(j[m], r1[m]);
            EXPECT_EQ(j[m << n], r2[m]);
        }
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_EQ(j[bit(i) | bit(i + n)], c / Rat(2)) << seed;
        EXPECT_EQ(vertical_max(j), c / Rat(2));
        // Lipschitz on index sets: |ρ(x̄_I) − ρ(ȳ_I)| ≤ Σ_{i∈I} ρ(xᵢ, yᵢ)
        for (Mask m = 1; m <= full_mask(n); ++m) {
            Rat sum(0);
            for (auto i : positions(m))
                sum += j[bit(i) | bit(i + n)];
            EXPECT_LE(abs(j[m] - j[m << n]), sum) << seed;
        }
        EXPECT_LE(c, Rat(static_cast<std::int64_t>(n)) * vertical_max(j));
    }
}

TEST(Match, Examples)
{
    auto d = d3();
    EXPECT_EQ(propinquity_match(d, {0, 1}, {0, 1}, R("1/100")), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(propinquity_match(d, {0, 1}, {0, 2}, R("1/2")), (std::vector<std::size_t>{0, 2}));
    auto two = make({"p", "q"}, {{{"p", "q"}, "1"}});
    EXPECT_EQ(propinquity_match(two, {0, 1}, {1, 0}, R("1/2")), (std::vector<std::size_t>{1, 0}));

    auto skew = make({"a", "b", "c"}, {{{"a", "b"}, "1"}, {{"a", "c"}, "2"}, {{"b", "c"}, "2"}, {{"a", "b", "c"}, "3"}});
    EXPECT_FALSE(propinquity_match(skew, {0, 1}, {0, 2}, Rat(1)));
    EXPECT_EQ(propinquity_match(skew, {0, 1}, {0, 2}, R("5/2")), (std::vector<std::size_t>{0, 1}));
    EXPECT_THROW(propinquity_match(d, {0}, {0, 1}, Rat(1)), DomainError);
}

TEST(Match, AgreesWithFullSearch)
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto d = random_diversity(seed, 3 + seed % 2, 1, Rat(2));
        Rng rng(seed);
        std::size_t k = 1 + seed % 3;
        std::vector<std::size_t> a(k), b(k);
        for (std::size_t i = 0; i < k; ++i) {
            a[i] = rng.below(d.size());
            b[i] = rng.below(d.size());
        }
        Rat eps(1 + static_cast<std::int64_t>(seed % 3));
        std::optional<std::vector<std::size_t>> want;
        Rat want_dist(0);
        std::size_t total = 1;
        for (std::size_t i = 0; i < k; ++i)
            total *= d.size();
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<std::size_t> t(k);
            for (std::size_t i = 0, x = code; i < k; ++i, x /= d.size())
                t[k - 1 - i] = x % d.size();
            bool same = true;
            for (Mask idx = 1; idx <= full_mask(k); ++idx) {
                Mask ma = 0, mt = 0;
                for (auto i : positions(idx)) {
                    ma |= bit(a[i]);
                    mt |= bit(t[i]);
                }
                same = same && d[ma] == d[mt];
            }
            Rat dist(0);
            for (std::size_t i = 0; i < k; ++i)
                dist = std::max(dist, d[bit(t[i]) | bit(b[i])]);
            if (same && dist < eps && (! want || dist < want_dist)) {
                want = t;
                want_dist = dist;
            }
        }
        EXPECT_EQ(propinquity_match(d, a, b, eps), want) << seed;
    }
}
