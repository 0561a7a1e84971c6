#pragma once

#include <diversity/error.hpp>
#include <diversity/rational.hpp>
#include <diversity/subset.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace diversity {

struct Block
{
    Mask set = 0;
    Rat weight{0};

    bool operator==(const Block &) const = default;
};

/// Weighted subsets of a labelled universe (at most 16 points).
struct WeightedBlockFamily
{
    std::vector<std::string> universe;
    std::vector<Block> blocks;
};

/// Indices of the chosen blocks (ascending) and their total weight.
struct CoverCertificate
{
    std::vector<std::size_t> chosen;
    Rat total{0};

    bool operator==(const CoverCertificate &) const = default;
};

enum class CoverMode { reduced, exhaustive };

struct CoverOptions
{
    CoverMode mode = CoverMode::reduced;
    /// Exhaustive mode only: largest number of blocks in a cover. Defaults to
    /// |X| + |universe|.
    std::optional<std::size_t> block_bound;
    /// Exhaustive mode: when false, only the value is guaranteed minimal and
    /// the certificate is some minimizer rather than the lexicographically
    /// first one.
    bool lexicographic = true;
};

/// Covers X and the intersection graph of the chosen blocks is connected.
inline bool is_connected_cover(const std::vector<Block> & blocks, const std::vector<std::size_t> & chosen, Mask x)
{
    if (chosen.empty())
        return x == 0;
    Mask cover = 0;
    for (auto i : chosen)
        cover |= blocks[i].set;
    if (! is_subset(x, cover))
        return false;
    std::vector<bool> reached(chosen.size(), false);
    reached[0] = true;
    Mask reach = blocks[chosen[0]].set;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t k = 0; k < chosen.size(); ++k)
            if (! reached[k] && (blocks[chosen[k]].set & reach)) {
                reached[k] = true;
                reach |= blocks[chosen[k]].set;
                grew = true;
            }
    }
    for (bool r : reached)
        if (! r)
            return false;
    return true;
}

namespace detail {

inline void check_family(const WeightedBlockFamily & f)
{
    if (f.universe.size() > max_points)
        throw StructuralError("block family universe exceeds " + std::to_string(max_points) + " points");
    for (std::size_t i = 0; i < f.blocks.size(); ++i) {
        auto & b = f.blocks[i];
        if (b.set == 0 || ! is_subset(b.set, full_mask(f.universe.size())))
            throw StructuralError("block " + std::to_string(i) + " is empty or outside the universe");
        if (b.weight < 0)
            throw StructuralError("block " + std::to_string(i) + " has negative weight");
    }
}

/// Blocks not dominated by a superset of no greater weight. Replacing a block
/// by such a superset keeps any cover connected and never costs more.
inline std::vector<Block> undominated(const std::vector<Block> & blocks)
{
    std::vector<Block> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < blocks.size() && ! dominated; ++j) {
            if (i == j || ! is_subset(blocks[i].set, blocks[j].set) || blocks[j].weight > blocks[i].weight)
                continue;
            // equal set and equal weight: keep the first occurrence only
            if (blocks[i].set == blocks[j].set && blocks[i].weight == blocks[j].weight && j > i)
                continue;
            dominated = true;
        }
        if (! dominated)
            out.push_back(blocks[i]);
    }
    return out;
}

/// Cheapest connected family whose union is exactly U, for every U.
///
/// Any connected family can be listed so that each block meets the union of
/// the earlier ones, and a block already inside that union can be dropped
/// without breaking the order. So a shortest-path search over unions, adding
/// one intersecting block at a time, reaches every optimum.
inline std::vector<std::optional<Rat>> union_costs(const std::vector<Block> & blocks, std::size_t n,
    std::optional<Mask> stop_at_superset_of = std::nullopt)
{
    std::size_t states = std::size_t{1} << n;
    std::vector<std::optional<Rat>> cost(states);
    std::vector<bool> done(states, false);
    using Entry = std::pair<Rat, Mask>;
    auto cmp = [](const Entry & a, const Entry & b) { return a.first > b.first || (a.first == b.first && a.second > b.second); };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
    for (auto & b : blocks)
        if (! cost[b.set] || b.weight < *cost[b.set]) {
            cost[b.set] = b.weight;
            queue.push({b.weight, b.set});
        }
    while (! queue.empty()) {
        auto [c, u] = queue.top();
        queue.pop();
        if (done[u])
            continue;
        done[u] = true;
        if (stop_at_superset_of && is_subset(*stop_at_superset_of, u))
            break;
        for (auto & b : blocks) {
            if (! (b.set & u) || is_subset(b.set, u))
                continue;
            Mask v = u | b.set;
            Rat nc = c + b.weight;
            if (! cost[v] || nc < *cost[v]) {
                cost[v] = nc;
                queue.push({nc, v});
            }
        }
    }
    // keep only settled entries when stopping early
    if (stop_at_superset_of)
        for (std::size_t u = 0; u < states; ++u)
            if (! done[u])
                cost[u].reset();
    return cost;
}

/// Lexicographically first block-index set (in preorder of the subset tree)
/// that is a connected cover of x with total exactly `target`.
inline std::optional<CoverCertificate> first_cover_with_total(const std::vector<Block> & blocks, Mask x,
    const Rat & target)
{
    std::vector<std::size_t> chosen;
    std::optional<CoverCertificate> found;
    auto dfs = [&](auto && self, std::size_t next, const Rat & cost) -> void {
        if (found)
            return;
        if (cost == target && is_connected_cover(blocks, chosen, x)) {
            found = CoverCertificate{chosen, cost};
            return;
        }
        for (std::size_t j = next; j < blocks.size() && ! found; ++j) {
            Rat c = cost + blocks[j].weight;
            if (c > target)
                continue;
            chosen.push_back(j);
            self(self, j + 1, c);
            chosen.pop_back();
        }
    };
    dfs(dfs, 0, Rat(0));
    return found;
}

/// Exhaustive search over connected block sets with integer weights (all
/// weights scaled by a common denominator, which keeps the search exact).
class ExhaustiveCover
{
public:
    ExhaustiveCover(const WeightedBlockFamily & f, Mask x, std::size_t bound, bool lexicographic) :
        x_(x), bound_(bound), lex_(lexicographic), k_(f.blocks.size()), n_(f.universe.size())
    {
        std::int64_t scale = 1;
        for (auto & b : f.blocks)
            scale = std::lcm(scale, b.weight.denominator());
        scale_ = scale;
        for (auto & b : f.blocks) {
            sets_.push_back(b.set);
            w_.push_back(b.weight.numerator() * (scale / b.weight.denominator()));
        }
        adj_.resize(k_);
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j)
                if (i != j && (sets_[i] & sets_[j]))
                    adj_[i].push_back(j);

        constexpr std::int64_t none = -1;
        cheapest_.assign(n_, none);
        for (std::size_t i = 0; i < k_; ++i)
            for (auto p : positions(sets_[i]))
                if (cheapest_[p] == none || w_[i] < cheapest_[p])
                    cheapest_[p] = w_[i];
        for (auto p : positions(x_))
            if (cheapest_[p] == none)
                throw DomainError("no-connected-cover", "a query point lies in no block");

        // cover_[S] for S ⊆ X: cheapest plain cover of S, ignoring connectivity
        cover_.assign(std::size_t{1} << n_, 0);
        for (Mask m = 1; m <= x_; ++m) {
            if (! is_subset(m, x_))
                continue;
            std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
            std::int64_t v = -1;
            for (std::size_t i = 0; i < k_; ++i)
                if (contains(sets_[i], low)) {
                    auto c = w_[i] + cover_[m & ~sets_[i]];
                    if (v < 0 || c < v)
                        v = c;
                }
            cover_[m] = v;
        }

        // Without the lexicographic tie-break, singleton blocks can be skipped
        // for |X| ≥ 2: every other block of a connected cover meeting {p}
        // contains p, so dropping {p} keeps the cover connected and covering.
        skip_.assign(k_, false);
        if (! lex_ && popcount(x_) >= 2)
            for (std::size_t i = 0; i < k_; ++i)
                skip_[i] = popcount(sets_[i]) == 1;
    }

    std::optional<CoverCertificate> run()
    {
        // incumbent: cheapest cover by one block or by two intersecting blocks
        for (std::size_t i = 0; i < k_; ++i) {
            if (is_subset(x_, sets_[i]))
                offer({i}, w_[i]);
            for (std::size_t j = i + 1; j < k_ && bound_ >= 2; ++j)
                if ((sets_[i] & sets_[j]) && is_subset(x_, sets_[i] | sets_[j]))
                    offer({i, j}, w_[i] + w_[j]);
        }
        in_set_.assign(k_, false);
        near_.assign(k_, false);
        for (std::size_t v = 0; v < k_; ++v) {
            if (skip_[v] || beaten(w_[v]))
                continue;
            std::vector<std::size_t> ext, marked;
            for (auto u : adj_[v])
                if (u > v && ! skip_[u]) {
                    ext.push_back(u);
                    near_[u] = true;
                    marked.push_back(u);
                }
            in_set_[v] = true;
            chosen_.push_back(v);
            grow(v, std::move(ext), sets_[v], w_[v]);
            chosen_.pop_back();
            in_set_[v] = false;
            for (auto u : marked)
                near_[u] = false;
        }
        if (! found_)
            return std::nullopt;
        return CoverCertificate{best_set_, Rat(best_cost_, scale_)};
    }

private:
    void offer(std::vector<std::size_t> set, std::int64_t cost)
    {
        std::sort(set.begin(), set.end());
        if (! found_ || cost < best_cost_ || (cost == best_cost_ && set < best_set_)) {
            found_ = true;
            best_cost_ = cost;
            best_set_ = std::move(set);
        }
    }

    bool beaten(std::int64_t lower) const
    {
        return found_ && (lower > best_cost_ || (lower == best_cost_ && ! lex_));
    }

    // Each connected block set is visited once: sets grow from their least
    // index, adding only larger-index neighbours not already adjacent to the
    // set (the ESU scheme for enumerating connected subgraphs).
    void grow(std::size_t root, std::vector<std::size_t> ext, Mask covered, std::int64_t cost)
    {
        Mask missing = x_ & ~covered;
        if (missing == 0) {
            offer(chosen_, cost);
            // supersets cost no less; equal-cost ones matter only for ties
            if (! lex_)
                return;
        }
        if (chosen_.size() == bound_)
            return;
        if (beaten(cost + cover_[missing]))
            return;
        std::vector<std::size_t> fresh;
        while (! ext.empty()) {
            auto w = ext.back();
            ext.pop_back();
            auto next = ext;
            fresh.clear();
            for (auto u : adj_[w])
                if (u > root && ! skip_[u] && ! in_set_[u] && ! near_[u]) {
                    next.push_back(u);
                    fresh.push_back(u);
                }
            for (auto u : fresh)
                near_[u] = true;
            in_set_[w] = true;
            chosen_.push_back(w);
            grow(root, std::move(next), covered | sets_[w], cost + w_[w]);
            chosen_.pop_back();
            in_set_[w] = false;
            for (auto u : fresh)
                near_[u] = false;
        }
    }

    Mask x_;
    std::size_t bound_;
    bool lex_;
    std::size_t k_, n_;
    std::int64_t scale_ = 1;
    std::vector<Mask> sets_;
    std::vector<std::int64_t> w_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::int64_t> cheapest_;
    std::vector<std::int64_t> cover_;
    std::vector<bool> skip_, in_set_, near_;
    std::vector<std::size_t> chosen_;
    bool found_ = false;
    std::int64_t best_cost_ = 0;
    std::vector<std::size_t> best_set_;
};

inline std::optional<CoverCertificate> exhaustive_cover(const WeightedBlockFamily & f, Mask x, std::size_t bound,
    bool lexicographic)
{
    return ExhaustiveCover(f, x, bound, lexicographic).run();
}

} // namespace detail

/// Minimum total weight of a connected cover of `x`, with a witness.
///
/// Reduced mode drops dominated blocks and runs a shortest-path search over
/// unions. Exhaustive mode enumerates connected block sets of at most
/// `block_bound` blocks, pruning only by weight bounds no completion can beat.
/// Both return the same value; the certificate is the lexicographically
/// smallest index set among the minimizers.
inline std::pair<Rat, CoverCertificate> min_connected_cover(const WeightedBlockFamily & f, Mask x,
    const CoverOptions & opt = {})
{
    detail::check_family(f);
    auto n = f.universe.size();
    if (! is_subset(x, full_mask(n)))
        throw StructuralError("query set is outside the universe");
    if (x == 0)
        return {Rat(0), CoverCertificate{}};

    if (opt.mode == CoverMode::reduced) {
        auto blocks = detail::undominated(f.blocks);
        auto cost = detail::union_costs(blocks, n, x);
        std::optional<Rat> best;
        for (Mask u = 0; u <= full_mask(n); ++u)
            if (cost[u] && is_subset(x, u) && (! best || *cost[u] < *best))
                best = cost[u];
        if (! best)
            throw DomainError("no-connected-cover", "no connected cover of the query set exists");
        auto cert = detail::first_cover_with_total(f.blocks, x, *best);
        return {*best, *cert};
    }

    std::size_t bound = opt.block_bound.value_or(static_cast<std::size_t>(popcount(x)) + n);
    auto best = detail::exhaustive_cover(f, x, bound, opt.lexicographic);
    if (! best)
        throw DomainError("no-connected-cover", "no connected cover of the query set within the block bound");
    return {best->total, *best};
}

/// Minimum connected-cover value for every subset of the universe (nullopt
/// where no cover exists). The empty set gets 0.
inline std::vector<std::optional<Rat>> min_cover_table(const WeightedBlockFamily & f)
{
    detail::check_family(f);
    auto n = f.universe.size();
    auto blocks = detail::undominated(f.blocks);
    auto best = detail::union_costs(blocks, n);
    // superset minimum: best[x] = min over u ⊇ x of cost[u]
    for (std::size_t i = 0; i < n; ++i)
        for (Mask m = 0; m <= full_mask(n); ++m)
            if (! contains(m, i)) {
                auto & hi = best[m | bit(i)];
                if (hi && (! best[m] || *hi < *best[m]))
                    best[m] = hi;
            }
    best[0] = Rat(0);
    return best;
}

} // namespace diversity
