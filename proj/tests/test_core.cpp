#include "support.hpp"

#include <gtest/gtest.h>

using namespace diversity;
using namespace testing_support;

TEST(Rational, ParseAndRender)
{
    EXPECT_EQ(parse_rat("3/2"), Rat(3, 2));
    EXPECT_EQ(parse_rat("-4/6"), Rat(-2, 3));
    EXPECT_EQ(parse_rat("7"), Rat(7));
    EXPECT_EQ(to_string(Rat(6, 4)), "3/2");
    EXPECT_EQ(to_string(Rat(-5)), "-5");
    EXPECT_THROW(parse_rat("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rat("x"), std::invalid_argument);
    EXPECT_THROW(parse_rat("1.5"), std::invalid_argument);
}

TEST(Subset, CanonicalOrder)
{
    auto order = canonical_subsets(3);
    std::vector<Mask> expected{0, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
    EXPECT_EQ(order, expected);
}

TEST(Validate, TriangleIsValid)
{
    auto d = d3();
    EXPECT_TRUE(validate(d, Mode::derived).valid);
    EXPECT_TRUE(validate(d, Mode::direct).valid);
}

TEST(Validate, HeavyTripleBreaksSublinearity)
{
    auto d = d3("5/2");
    auto r = validate(d, Mode::derived);
    ASSERT_FALSE(r.valid);
    // every pair of intersecting edges is a witness
    ASSERT_EQ(r.violations.size(), 3u);
    for (auto & v : r.violations)
        EXPECT_EQ(v.axiom, "connected-sublinearity");
    auto ab = d.mask_of({"a", "b"}), bc = d.mask_of({"b", "c"});
    bool seen = false;
    for (auto & v : r.violations)
        seen = seen || v.witness == std::vector<Mask>{ab, bc};
    EXPECT_TRUE(seen);
    EXPECT_EQ(r.violations[0].values, (std::vector<Rat>{Rat(1), Rat(1), Rat(5, 2)}));
    EXPECT_FALSE(validate(d, Mode::direct).valid);
}

TEST(Validate, SinglePoint)
{
    auto d = FiniteDiversity::zeros({"x"});
    EXPECT_TRUE(validate(d, Mode::derived).valid);
    EXPECT_TRUE(validate(d, Mode::direct).valid);
}

TEST(Validate, PseudoAllowsZeroPairs)
{
    auto d = make({"a", "b", "c"}, {{{"a", "c"}, "1"}, {{"b", "c"}, "1"}, {{"a", "b", "c"}, "1"}});
    EXPECT_FALSE(validate(d, Mode::derived, Strictness::strict).valid);
    EXPECT_TRUE(validate(d, Mode::derived, Strictness::pseudo).valid);
    EXPECT_TRUE(validate(d, Mode::direct, Strictness::pseudo).valid);
}

TEST(Validate, MonotonicityViolationReported)
{
    auto d = make({"a", "b", "c"}, {{{"a", "b"}, "2"}, {{"a", "c"}, "1"}, {{"b", "c"}, "1"}, {{"a", "b", "c"}, "3/2"}});
    auto r = validate(d, Mode::derived);
    ASSERT_FALSE(r.valid);
    EXPECT_EQ(r.violations.front().axiom, "monotonicity");
    EXPECT_EQ(r.violations.front().witness, (std::vector<Mask>{d.mask_of({"a", "b"}), d.full()}));
}

TEST(Validate, ThreadCountDoesNotChangeReport)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto d = random_diversity(seed, 5);
        Rng rng(seed);
        d.set(static_cast<Mask>(rng.between(3, 31)), Rat(rng.between(0, 12), 4));
        for (auto mode : {Mode::derived, Mode::direct}) {
            auto one = validate(d, {mode, Strictness::strict, 1});
            auto four = validate(d, {mode, Strictness::strict, 4});
            EXPECT_EQ(one.violations, four.violations);
        }
    }
}

TEST(Validate, AgreesWithNaiveOracle)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto d = random_diversity(seed, 1 + seed % 5);
        Rng rng(seed * 7 + 1);
        if (seed % 2 && d.size() >= 2) {
            Mask m = 0;
            while (popcount(m) < 2)
                m = static_cast<Mask>(rng.below(d.full() + 1));
            d.set(m, Rat(rng.between(0, 16), 4));
        }
        bool naive = naive_is_diversity(d);
        EXPECT_EQ(validate(d, Mode::derived).valid, naive) << seed;
        EXPECT_EQ(validate(d, Mode::direct).valid, naive) << seed;
        EXPECT_EQ(is_valid(d), naive) << seed;
        EXPECT_EQ(is_valid(d, Strictness::pseudo), naive_is_diversity(d, false)) << seed;
    }
}

TEST(Validate, FastVerdictMatchesReportOnLargerTables)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto d = random_diversity(seed, 6 + seed % 2, 3);
        Rng rng(seed + 11);
        if (seed % 3) {
            Mask m = 0;
            while (popcount(m) < 2)
                m = static_cast<Mask>(rng.below(d.full() + 1));
            d.set(m, d[m] + Rat(rng.between(-3, 3), 3));
        }
        EXPECT_EQ(is_valid(d), validate(d, Mode::derived).valid) << seed;
    }
}

TEST(Validate, MissingLabelIsStructural)
{
    EXPECT_THROW(FiniteDiversity({"a", "b"}, {Rat(0), Rat(0), Rat(0)}), StructuralError);
    EXPECT_THROW(FiniteDiversity({"a", "a"}, std::vector<Rat>(4, Rat(0))), StructuralError);
}

TEST(Metric, InducedAndDiameter)
{
    auto m = induced_metric(d3());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ(m.at(i, j), i == j ? Rat(0) : Rat(1));
    EXPECT_TRUE(induced_metric(FiniteDiversity::zeros({"x"})).d == std::vector<Rat>{Rat(0)});
    EXPECT_THROW(induced_metric(d3("5/2")), DomainError);

    auto diam = diameter_diversity(m);
    EXPECT_EQ(diam[diam.full()], Rat(1));

    MetricTable m2{{"a", "b", "c"}, {Rat(0), Rat(1), Rat(2), Rat(1), Rat(0), Rat(2), Rat(2), Rat(2), Rat(0)}};
    EXPECT_EQ(diameter_diversity(m2).total(), Rat(2));

    MetricTable bad{{"a", "b", "c"}, {Rat(0), Rat(1), Rat(3), Rat(1), Rat(0), Rat(1), Rat(3), Rat(1), Rat(0)}};
    EXPECT_THROW(diameter_diversity(bad), DomainError);
}

TEST(Metric, DiameterOfRandomMetricsValidates)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto d = random_diversity(seed, 2 + seed % 5);
        auto diam = diameter_diversity(induced_metric(d));
        EXPECT_TRUE(validate(diam, Mode::derived).valid);
        EXPECT_TRUE(naive_is_diversity(diam));
    }
}

TEST(Restrict, Basics)
{
    auto d = d3();
    auto ab = restrict(d, std::vector<std::string>{"a", "b"});
    EXPECT_EQ(ab.points(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(ab.total(), Rat(1));
    EXPECT_EQ(restrict(d, d.full()), d);
    EXPECT_THROW(restrict(d, std::vector<std::string>{"q"}), StructuralError);
}

TEST(Isoversity, Relabel)
{
    auto d = d3();
    auto e = relabel(d, {"x", "y", "z"});
    auto p = find_isoversity(d, e);
    ASSERT_TRUE(p);
    EXPECT_TRUE(is_isoversity(d, e, *p));
    EXPECT_FALSE(find_isoversity(d, d3("2")));
    PointMap id{0, 1, 2};
    EXPECT_EQ(find_isoversity(d, d, id), id);
    EXPECT_FALSE(find_isoversity(d, restrict(d, Mask{3})));
}

TEST(Isoversity, SymmetricOnRandomPairs)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto a = random_diversity(seed, 4, 1, Rat(2));
        auto b = random_diversity(seed + 1000, 4, 1, Rat(2));
        EXPECT_EQ(find_isoversity(a, b).has_value(), find_isoversity(b, a).has_value());
        // a shuffled copy is always found
        PointMap perm{2, 0, 3, 1};
        auto c = FiniteDiversity::zeros(a.points());
        for (Mask m = 0; m <= a.full(); ++m)
            c.set(map_mask(m, perm), a[m]);
        auto found = find_isoversity(a, c);
        ASSERT_TRUE(found);
        EXPECT_TRUE(is_isoversity(a, c, *found));
    }
}

TEST(EpsilonIsomorphic, Examples)
{
    auto d = d3();
    std::vector<std::size_t> ab{0, 1}, ac{0, 2};
    EXPECT_TRUE(epsilon_isomorphic(d, ab, ab, Rat(1, 100)));
    EXPECT_TRUE(epsilon_isomorphic(d, ab, ac, Rat(1, 2)));
    EXPECT_FALSE(epsilon_isomorphic(d, ab, ac, Rat(0)));
    EXPECT_THROW(epsilon_isomorphic(d, ab, {0}, Rat(1)), StructuralError);
}

TEST(Generator, DeterministicAndValid)
{
    EXPECT_EQ(random_diversity(1, 3), random_diversity(1, 3));
    EXPECT_EQ(random_diversity(1, 1).size(), 1u);
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        auto d = random_diversity(seed, 1 + seed % 5);
        ASSERT_TRUE(validate(d, Mode::derived).valid) << seed;
    }
}

TEST(Generator, BumpsReachBeyondDiameter)
{
    int beyond = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto d = random_diversity(seed, 4);
        auto diam = diameter_diversity(induced_metric(d));
        beyond += d != diam;
    }
    EXPECT_GT(beyond, 25);
}

TEST(Properties, MonotoneOnAllPairs)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto d = random_diversity(seed, 5);
        for (Mask b = 0; b <= d.full(); ++b)
            for_each_subset(b, [&](Mask a) { EXPECT_LE(d[a], d[b]); });
    }
}

TEST(Properties, LipschitzOnTuples)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto d = random_diversity(seed, 5);
        Rng rng(seed);
        for (int k = 0; k < 100; ++k) {
            std::size_t len = 1 + rng.below(5);
            std::vector<std::size_t> x(len), y(len);
            Mask mx = 0, my = 0;
            Rat sum(0);
            for (std::size_t i = 0; i < len; ++i) {
                x[i] = rng.below(5);
                y[i] = rng.below(5);
                mx |= bit(x[i]);
                my |= bit(y[i]);
                sum += d[bit(x[i]) | bit(y[i])];
            }
            EXPECT_LE(abs(d[mx] - d[my]), sum);
        }
    }
}
