#pragma once

#include <diversity/core.hpp>
#include <diversity/cover.hpp>

#include <optional>
#include <string>
#include <vector>

namespace diversity {

/// ρ on index subsets of {0..n-1}.
struct DiversityAssignment
{
    std::size_t n = 0;
    std::vector<Rat> table;

    const Rat & operator[](Mask m) const { return table.at(m); }
    bool operator==(const DiversityAssignment &) const = default;
};

inline DiversityAssignment to_assignment(const FiniteDiversity & d)
{
    return {d.size(), d.table()};
}

/// Labels "0".."n-1".
inline FiniteDiversity to_diversity(const DiversityAssignment & r)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < r.n; ++i)
        labels.push_back(std::to_string(i));
    auto d = FiniteDiversity::zeros(labels);
    for (Mask m = 0; m <= d.full(); ++m)
        d.set(m, r[m]);
    return d;
}

/// ρ(I) = 0 exactly when |I| ≤ 1 (or ρ ≥ 0 in pseudo mode), and
/// ρ(I₁ ∪ I₂) ≤ ρ(I₁ ∪ I) + ρ(I ∪ I₂) for nonempty I.
inline bool is_assignment(const DiversityAssignment & r, Strictness s = Strictness::strict)
{
    if (r.n > max_points || r.table.size() != (std::size_t{1} << r.n))
        return false;
    Mask full = full_mask(r.n);
    for (Mask m = 0; m <= full; ++m) {
        if (popcount(m) <= 1 ? r[m] != 0 : (s == Strictness::strict ? ! (r[m] > 0) : r[m] < 0))
            return false;
    }
    for (Mask a = 0; a <= full; ++a)
        for (Mask c = 0; c <= full; ++c)
            for (Mask i = 1; i <= full; ++i)
                if (r[a | i] + r[i | c] < r[a | c])
                    return false;
    return true;
}

namespace detail {

inline void same_arity(const DiversityAssignment & r1, const DiversityAssignment & r2)
{
    if (r1.n != r2.n)
        throw DomainError("arity-mismatch",
            "assignments have arity " + std::to_string(r1.n) + " and " + std::to_string(r2.n));
}

} // namespace detail

/// sup over index subsets of |ρ₁(I) − ρ₂(I)|.
inline Rat d_infty(const DiversityAssignment & r1, const DiversityAssignment & r2)
{
    detail::same_arity(r1, r2);
    Rat best(0);
    for (Mask m = 0; m < r1.table.size(); ++m)
        best = std::max(best, abs(r1[m] - r2[m]));
    return best;
}

/// How mixed sets pay for crossing between x̄ and ȳ.
enum class JointRule {
    /// Connected covers by x-blocks (ρ₁), y-blocks (ρ₂) and links {xᵢ, yᵢ} at c/2 each.
    per_link,
    /// Blocks meet through shared indices and c/2 is added once. Can break
    /// monotonicity against the pure sides (see tests).
    once,
};

/// Assignment on x̄ then ȳ (indices 0..n-1, n..2n-1) restricting to ρ₁ and ρ₂
/// with ρ(xᵢ, yᵢ) = c/2, where c = d∞(ρ₁, ρ₂). Pure sets get the cover value
/// too; it coincides with ρ₁ or ρ₂.
inline DiversityAssignment joint_assignment(const DiversityAssignment & r1, const DiversityAssignment & r2,
    JointRule rule = JointRule::per_link)
{
    detail::same_arity(r1, r2);
    std::size_t n = r1.n;
    Rat half = d_infty(r1, r2) / Rat(2);
    DiversityAssignment out{2 * n, std::vector<Rat>(std::size_t{1} << (2 * n))};
    Mask side = full_mask(n);

    if (rule == JointRule::per_link) {
        if (2 * n > max_points)
            throw StructuralError("joint assignment needs 2n ≤ " + std::to_string(max_points));
        WeightedBlockFamily f;
        for (auto tag : {"x", "y"})
            for (std::size_t i = 0; i < n; ++i)
                f.universe.push_back(tag + std::to_string(i));
        for (Mask m = 1; m <= side; ++m) {
            f.blocks.push_back({m, r1[m]});
            f.blocks.push_back({m << n, r2[m]});
        }
        for (std::size_t i = 0; i < n; ++i)
            f.blocks.push_back({bit(i) | bit(i + n), half});
        auto cost = min_cover_table(f);
        for (Mask s = 1; s < out.table.size(); ++s)
            out.table[s] = *cost[s];
        return out;
    }

    if (3 * n > max_points)
        throw StructuralError("joint assignment needs 3n ≤ " + std::to_string(max_points));
    // universe: index nodes k, then x nodes, then y nodes; blocks meet through k
    WeightedBlockFamily f;
    for (auto tag : {"k", "x", "y"})
        for (std::size_t i = 0; i < n; ++i)
            f.universe.push_back(tag + std::to_string(i));
    for (Mask m = 1; m <= side; ++m) {
        f.blocks.push_back({m | (m << n), r1[m]});
        f.blocks.push_back({m | (m << (2 * n)), r2[m]});
    }
    auto cost = min_cover_table(f);
    for (Mask s = 1; s < out.table.size(); ++s) {
        Mask xs = s & side, ys = s >> n;
        if (! ys)
            out.table[s] = r1[xs];
        else if (! xs)
            out.table[s] = r2[ys];
        else
            out.table[s] = *cost[(xs << n) | (ys << (2 * n))] + half;
    }
    return out;
}

/// max_i ρ(xᵢ, yᵢ) for an assignment on 2n indices.
inline Rat vertical_max(const DiversityAssignment & joint)
{
    std::size_t n = joint.n / 2;
    Rat best(0);
    for (std::size_t i = 0; i < n; ++i)
        best = std::max(best, joint[bit(i) | bit(i + n)]);
    return best;
}

/// Tuple a′ with the same subset values as a and least max_i δ(a′ᵢ, bᵢ),
/// provided that max is below eps. Ties go to the lexicographically first.
inline std::optional<std::vector<std::size_t>> propinquity_match(const FiniteDiversity & d,
    const std::vector<std::size_t> & a, const std::vector<std::size_t> & b, const Rat & eps)
{
    if (a.size() != b.size())
        throw DomainError("arity-mismatch", "tuples differ in length");
    std::size_t k = a.size();
    if (k > max_points)
        throw StructuralError("tuples longer than " + std::to_string(max_points));
    for (std::size_t j = 0; j < k; ++j)
        if (a[j] >= d.size() || b[j] >= d.size())
            throw StructuralError("tuple entry outside the diversity");
    auto image = [](const std::vector<std::size_t> & t, Mask idx) {
        Mask m = 0;
        for (auto j : positions(idx))
            m |= bit(t[j]);
        return m;
    };
    std::optional<std::vector<std::size_t>> best;
    Rat best_dist(0);
    std::vector<std::size_t> t(k, 0);
    auto rec = [&](auto && self, std::size_t i) -> void {
        if (i == k) {
            Rat dist(0);
            for (std::size_t j = 0; j < k; ++j)
                dist = std::max(dist, d[bit(t[j]) | bit(b[j])]);
            if (dist < eps && (! best || dist < best_dist)) {
                best = t;
                best_dist = dist;
            }
            return;
        }
        for (std::size_t p = 0; p < d.size(); ++p) {
            t[i] = p;
            // subsets whose largest index is i are now fixed
            bool ok = true;
            for (Mask idx = bit(i); idx < bit(i + 1) && ok; ++idx)
                ok = d[image(t, idx)] == d[image(a, idx)];
            if (ok)
                self(self, i + 1);
        }
    };
    rec(rec, 0);
    return best;
}

inline DiversityAssignment random_assignment(std::uint64_t seed, std::size_t n, std::int64_t denom_max = 2,
    const Rat & value_max = Rat(3))
{
    return to_assignment(random_diversity(seed, n, denom_max, value_max));
}

} // namespace diversity
