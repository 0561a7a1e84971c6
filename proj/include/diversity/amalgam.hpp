#pragma once

#include <diversity/core.hpp>
#include <diversity/cover.hpp>

#include <string>
#include <vector>

namespace diversity {

/// Block family whose blocks are the nonempty subsets of each input, placed
/// on the union of their points. Subsets shared by both sides appear once.
struct AmalgamLayout
{
    std::vector<std::string> points;
    Mask left = 0;  // positions of the first input
    Mask right = 0; // positions of the second input
    WeightedBlockFamily family;
};

namespace detail {

inline std::vector<std::size_t> positions_in(const FiniteDiversity & d, const std::vector<std::string> & universe)
{
    std::vector<std::size_t> out;
    for (auto & p : d.points())
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (universe[i] == p)
                out.push_back(i);
    return out;
}

/// First subset (canonical order) of the shared labels where the inputs disagree.
inline std::optional<std::vector<std::string>> shared_mismatch(const FiniteDiversity & b, const FiniteDiversity & c,
    const std::vector<std::string> & shared)
{
    auto rb = restrict(b, shared), rc = restrict(c, shared);
    for (Mask m : canonical_subsets(rb.size())) {
        auto labels = rb.labels_of(m);
        if (rb[m] != rc[rc.mask_of(labels)])
            return labels;
    }
    return std::nullopt;
}

inline AmalgamLayout amalgam_layout(const FiniteDiversity & b, const FiniteDiversity & c)
{
    AmalgamLayout lay;
    lay.points = b.points();
    std::vector<std::string> shared;
    for (auto & p : c.points()) {
        if (b.index_of(p))
            shared.push_back(p);
        else
            lay.points.push_back(p);
    }
    if (shared.empty())
        throw DomainError("empty-intersection", "inputs share no points; use disjoint_sum for joint embedding");
    if (lay.points.size() > max_points)
        throw StructuralError("amalgam would exceed " + std::to_string(max_points) + " points");
    if (auto bad = shared_mismatch(b, c, shared)) {
        std::string w = "{";
        for (std::size_t i = 0; i < bad->size(); ++i)
            w += (i ? "," : "") + (*bad)[i];
        throw DomainError("shared-mismatch", "inputs disagree on the shared subdiversity", w + "}");
    }
    lay.family.universe = lay.points;
    auto pb = positions_in(b, lay.points), pc = positions_in(c, lay.points);
    for (auto i : pb)
        lay.left |= bit(i);
    for (auto i : pc)
        lay.right |= bit(i);
    for (Mask m : canonical_subsets(b.size()))
        if (m)
            lay.family.blocks.push_back({map_mask(m, pb), b[m]});
    for (Mask m : canonical_subsets(c.size())) {
        Mask placed = map_mask(m, pc);
        if (m && ! is_subset(placed, lay.left))
            lay.family.blocks.push_back({placed, c[m]});
    }
    return lay;
}

} // namespace detail

struct AmalgamOptions
{
    CoverMode mode = CoverMode::reduced;
    /// Exhaustive mode: covers of X use at most |X| + |A| + extra_blocks blocks.
    std::size_t extra_blocks = 2;
};

/// Free amalgam of b and c over their shared points.
///
/// δ_D(X) is the least Σδ(E_i) over connected covers of X whose blocks each lie
/// inside b or inside c. Points are ordered as b's, then c's new ones.
inline FiniteDiversity free_amalgam(const FiniteDiversity & b, const FiniteDiversity & c,
    const AmalgamOptions & opt = {})
{
    require_valid(b, Strictness::strict, "first amalgam input");
    require_valid(c, Strictness::strict, "second amalgam input");
    auto lay = detail::amalgam_layout(b, c);
    auto d = FiniteDiversity::zeros(lay.points);

    if (opt.mode == CoverMode::reduced) {
        auto table = min_cover_table(lay.family);
        for (Mask x = 0; x <= d.full(); ++x)
            d.set(x, *table[x]);
        return d;
    }
    std::size_t shared = static_cast<std::size_t>(popcount(lay.left & lay.right));
    for (Mask x = 1; x <= d.full(); ++x) {
        CoverOptions co{CoverMode::exhaustive, static_cast<std::size_t>(popcount(x)) + shared + opt.extra_blocks, false};
        d.set(x, min_connected_cover(lay.family, x, co).first);
    }
    return d;
}

/// Joint embedding of two diversities on disjoint labels: mixed subsets get n.
inline FiniteDiversity disjoint_sum(const FiniteDiversity & a, const FiniteDiversity & b, const Rat & n)
{
    for (auto & p : b.points())
        if (a.index_of(p))
            throw DomainError("shared-label", "disjoint_sum needs disjoint labels", p);
    if (a.size() + b.size() > max_points)
        throw StructuralError("sum would exceed " + std::to_string(max_points) + " points");
    if (! (n > a.total()) || ! (n > b.total()))
        throw DomainError("constant-too-small",
            "mixed value " + to_string(n) + " must exceed both totals " + to_string(a.total()) + " and "
                + to_string(b.total()));
    auto points = a.points();
    points.insert(points.end(), b.points().begin(), b.points().end());
    auto d = FiniteDiversity::zeros(points);
    Mask left = a.full(), right = b.full() << a.size();
    for (Mask m = 1; m <= d.full(); ++m) {
        if (is_subset(m, left))
            d.set(m, a[m]);
        else if (is_subset(m, right))
            d.set(m, b[m >> a.size()]);
        else
            d.set(m, n);
    }
    return d;
}

} // namespace diversity
