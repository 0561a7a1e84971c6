#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace diversity {

/// Subset of point positions, bit i set iff position i is a member.
using Mask = std::uint32_t;

inline constexpr std::size_t max_points = 16;

inline int popcount(Mask m) { return std::popcount(m); }
inline Mask full_mask(std::size_t n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline bool contains(Mask set, std::size_t i) { return (set >> i) & 1u; }
inline bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

/// Positions of the set bits, ascending.
inline std::vector<std::size_t> positions(Mask m)
{
    std::vector<std::size_t> out;
    while (m) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

/// Calls fn(sub) for every subset of m, including 0 and m itself.
template <typename Fn>
void for_each_subset(Mask m, Fn && fn)
{
    Mask sub = m;
    while (true) {
        fn(sub);
        if (sub == 0)
            break;
        sub = (sub - 1) & m;
    }
}

/// Order used everywhere a subset order must be canonical: by size, then
/// lexicographically by the ascending list of positions.
inline bool canonical_less(Mask a, Mask b)
{
    int ca = popcount(a), cb = popcount(b);
    if (ca != cb)
        return ca < cb;
    // lexicographic on ascending positions: the first differing position
    // decides, and the set holding the smaller position comes first
    Mask diff = a ^ b;
    if (diff == 0)
        return false;
    Mask lowest = diff & (~diff + 1);
    return (a & lowest) != 0;
}

/// All subsets of {0..n-1} in canonical order.
inline std::vector<Mask> canonical_subsets(std::size_t n)
{
    std::vector<Mask> out(std::size_t{1} << n);
    for (Mask m = 0; m < out.size(); ++m)
        out[m] = m;
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

/// Re-indexes the bits of `m` (positions within `within`) into a dense mask
/// over the members of `within`.
inline Mask compress(Mask m, Mask within)
{
    Mask out = 0;
    std::size_t j = 0;
    for (auto p : positions(within)) {
        if (contains(m, p))
            out |= bit(j);
        ++j;
    }
    return out;
}

/// Inverse of compress: spreads a dense mask back onto the members of `within`.
inline Mask expand(Mask dense, Mask within)
{
    Mask out = 0;
    std::size_t j = 0;
    for (auto p : positions(within)) {
        if (contains(dense, j))
            out |= bit(p);
        ++j;
    }
    return out;
}

/// Image of a subset under a position map.
inline Mask map_mask(Mask m, const std::vector<std::size_t> & perm)
{
    Mask out = 0;
    for (auto p : positions(m))
        out |= bit(perm[p]);
    return out;
}

} // namespace diversity
