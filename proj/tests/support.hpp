#pragma once

#include <diversity/core.hpp>

#include <string>
#include <utility>
#include <vector>

namespace testing_support {

using namespace diversity;

using Entry = std::pair<std::vector<std::string>, std::string>;

/// Diversity from labelled entries; unspecified subsets stay 0.
inline FiniteDiversity make(std::vector<std::string> points, const std::vector<Entry> & entries)
{
    auto d = FiniteDiversity::zeros(std::move(points));
    for (auto & [set, value] : entries)
        d.set(d.mask_of(set), parse_rat(value));
    return d;
}

inline Rat R(const char * s) { return parse_rat(s); }

/// Pairs 1, triple 3/2.
inline FiniteDiversity d3(const char * triple = "3/2")
{
    return make({"a", "b", "c"}, {{{"a", "b"}, "1"}, {{"a", "c"}, "1"}, {{"b", "c"}, "1"}, {{"a", "b", "c"}, triple}});
}

/// Naive D1 + D2 check straight from the axioms, no shortcuts.
inline bool naive_is_diversity(const FiniteDiversity & d, bool strict = true)
{
    Mask full = d.full();
    for (Mask a = 0; a <= full; ++a) {
        int k = std::popcount(a);
        if (d[a] < 0)
            return false;
        if (k <= 1 && d[a] != 0)
            return false;
        if (strict && k >= 2 && d[a] == 0)
            return false;
    }
    for (Mask a = 0; a <= full; ++a)
        for (Mask b = 1; b <= full; ++b)
            for (Mask c = 0; c <= full; ++c)
                if (d[a | b] + d[b | c] < d[a | c])
                    return false;
    return true;
}

} // namespace testing_support
