#pragma once

#include <diversity/amalgam.hpp>
#include <diversity/core.hpp>
#include <diversity/katetov.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace diversity {

/// Positive rationals p/q with q ≤ denom_max and p/q ≤ value_max, ascending.
inline std::vector<Rat> value_grid(std::int64_t denom_max, const Rat & value_max)
{
    if (denom_max < 1)
        throw StructuralError("value grid: denom_max must be positive");
    std::set<Rat> vals;
    for (std::int64_t q = 1; q <= denom_max; ++q) {
        Rat top = value_max * q;
        for (std::int64_t p = 1; p <= top.numerator() / top.denominator(); ++p)
            vals.insert(Rat(p, q));
    }
    return {vals.begin(), vals.end()};
}

/// Least table over all point permutations, on labels p0, p1, ...
inline FiniteDiversity canonical_form(const FiniteDiversity & d)
{
    std::vector<std::size_t> perm(d.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Rat> best;
    std::vector<Rat> t(d.table().size());
    do {
        // perm[i] = old point placed at new position i
        for (Mask m = 0; m <= d.full(); ++m) {
            Mask old = 0;
            for (auto i : positions(m))
                old |= bit(perm[i]);
            t[m] = d[old];
        }
        if (best.empty() || t < best)
            best = t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < d.size(); ++i)
        labels.push_back("p" + std::to_string(i));
    auto out = FiniteDiversity::zeros(labels);
    for (Mask m = 0; m <= out.full(); ++m)
        out.set(m, best.empty() ? Rat(0) : best[m]);
    return out;
}

struct AgeCatalog
{
    std::size_t size_max = 0;
    std::int64_t denom_max = 1;
    Rat value_max;
    /// Sorted by size, then table.
    std::vector<FiniteDiversity> structures;
};

/// Rough count of tables enumerate_age would try.
inline double age_estimate(std::size_t size_max, std::int64_t denom_max, const Rat & value_max)
{
    double g = static_cast<double>(value_grid(denom_max, value_max).size());
    double total = 0;
    for (std::size_t n = 1; n <= size_max; ++n)
        total += std::pow(g, static_cast<double>((std::size_t{1} << n) - n - 1));
    return total;
}

/// Every strict diversity on 1..size_max points with values on the grid, up to
/// isomorphism, each in canonical form.
inline AgeCatalog enumerate_age(std::size_t size_max, std::int64_t denom_max, const Rat & value_max,
    double max_tables = 2e7)
{
    if (size_max < 1)
        throw StructuralError("enumerate_age: size_max must be at least 1");
    auto grid = value_grid(denom_max, value_max);
    double estimate = age_estimate(size_max, denom_max, value_max);
    if (size_max > 4 || estimate > max_tables)
        throw DomainError("age-too-large",
            "about " + std::to_string(static_cast<long long>(estimate)) + " tables to try; bounds refused");

    AgeCatalog cat{size_max, denom_max, value_max, {}};
    for (std::size_t n = 1; n <= size_max; ++n) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i)
            labels.push_back("p" + std::to_string(i));
        auto d = FiniteDiversity::zeros(labels);
        std::vector<Mask> big;
        for (Mask m = 0; m <= d.full(); ++m)
            if (popcount(m) >= 2)
                big.push_back(m);
        if (big.empty()) {
            cat.structures.push_back(d);
            continue;
        }
        std::set<std::vector<Rat>> seen;
        std::vector<std::size_t> digit(big.size(), 0);
        for (;;) {
            for (std::size_t i = 0; i < big.size(); ++i)
                d.set(big[i], grid[digit[i]]);
            if (is_valid(d, Strictness::strict)) {
                seen.insert(canonical_form(d).table());
            }
            std::size_t i = 0;
            while (i < digit.size() && ++digit[i] == grid.size())
                digit[i++] = 0;
            if (i == digit.size())
                break;
        }
        for (auto & t : seen) {
            auto c = FiniteDiversity::zeros(labels);
            for (Mask m = 0; m <= c.full(); ++m)
                c.set(m, t[m]);
            cat.structures.push_back(std::move(c));
        }
    }
    return cat;
}

/// First subset of `host` isomorphic to `d`, with the point map d → host.
inline std::optional<PointMap> find_embedding(const FiniteDiversity & d, const FiniteDiversity & host)
{
    if (d.size() > host.size())
        return std::nullopt;
    for (Mask s : canonical_subsets(host.size())) {
        if (static_cast<std::size_t>(popcount(s)) != d.size())
            continue;
        auto sub = restrict(host, s);
        if (sub[sub.full()] != d[d.full()])
            continue;
        if (auto iso = find_isoversity(d, sub)) {
            auto pos = positions(s);
            PointMap out(d.size());
            for (std::size_t i = 0; i < d.size(); ++i)
                out[i] = pos[(*iso)[i]];
            return out;
        }
    }
    return std::nullopt;
}

/// One-point extension of X realizing f on F exactly: the canonical extension
/// of f to X, then its one-point extension. f is checked on F; the canonical extension is
/// admissible on X whenever f is, so the full check is skipped.
inline FiniteDiversity realize_admissible(const FiniteDiversity & x, Mask f_support, const std::vector<Rat> & f,
    const std::string & label)
{
    auto ext = extend_support(x, f_support, f);
    return extension_table(x, ext.table, label);
}

// ---------------------------------------------------------------------------
// Approximants

struct TaskBounds
{
    std::int64_t denom_max = 1;
    Rat value_max = Rat(2);
    std::size_t support_max = 1;
};

/// exact: skip a task some point already realizes at ε = 0.
/// type: skip a task whose one-point structure F ∪ {y} already occurs in X up
/// to isomorphism.
enum class Dedup { none, exact, type };

struct BuildOptions
{
    TaskBounds bounds;
    Dedup dedup = Dedup::exact;
    std::size_t point_cap = max_points;
    /// 0 keeps the canonical task order; other seeds shuffle it per level.
    std::uint64_t seed = 0;
};

struct ExtensionTask
{
    std::size_t level = 0;
    Mask support = 0;
    std::vector<Rat> f;
    std::string label;

    bool operator==(const ExtensionTask &) const = default;
};

struct Approximant
{
    std::size_t level = 0;
    FiniteDiversity diversity;
    /// Point count at the end of each level; entry 0 is the start.
    std::vector<std::size_t> level_sizes;
    std::vector<ExtensionTask> log;
    bool truncated = false;
    BuildOptions options;

    FiniteDiversity at_level(std::size_t k) const { return restrict(diversity, full_mask(level_sizes.at(k))); }
};

namespace detail {

struct PendingTask
{
    Mask support;
    std::vector<Rat> f;
};

/// All admissible f with grid values on nonempty subsets of F, for every F of
/// size 1..support_max, in (|F|, canonical F, table) order.
inline std::vector<PendingTask> level_tasks(const FiniteDiversity & x, const TaskBounds & b)
{
    auto grid = value_grid(b.denom_max, b.value_max);
    std::vector<PendingTask> out;
    for (Mask s : canonical_subsets(x.size())) {
        auto k = static_cast<std::size_t>(popcount(s));
        if (k == 0 || k > b.support_max)
            continue;
        auto sub = restrict(x, s);
        if (sub.total() > b.value_max)
            continue;
        std::size_t cells = (std::size_t{1} << k) - 1;
        std::vector<std::size_t> digit(cells, 0);
        std::vector<std::vector<Rat>> found;
        std::vector<Rat> f(cells + 1, Rat(0));
        for (;;) {
            for (std::size_t i = 0; i < cells; ++i)
                f[i + 1] = grid[digit[i]];
            if (admissible(sub, f))
                found.push_back(f);
            std::size_t i = 0;
            while (i < cells && ++digit[i] == grid.size())
                digit[i++] = 0;
            if (i == cells)
                break;
        }
        std::sort(found.begin(), found.end());
        for (auto & g : found)
            out.push_back({s, std::move(g)});
    }
    return out;
}

inline bool type_present(const FiniteDiversity & x, Mask s, const std::vector<Rat> & f)
{
    auto t = extension_table(restrict(x, s), f, "\x01y");
    return find_embedding(t, x).has_value();
}

inline void run_levels(Approximant & a, std::size_t levels)
{
    auto & opt = a.options;
    for (std::size_t l = 0; l < levels && ! a.truncated; ++l) {
        std::size_t level = a.level + 1;
        auto tasks = level_tasks(a.diversity, opt.bounds);
        if (opt.seed != 0) {
            Rng rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * level));
            for (std::size_t i = tasks.size(); i > 1; --i)
                std::swap(tasks[i - 1], tasks[rng.below(i)]);
        }
        std::size_t index = 0;
        for (auto & t : tasks) {
            if (opt.dedup == Dedup::exact && extension_property_probe(a.diversity, t.support, t.f, Rat(0)))
                continue;
            if (opt.dedup == Dedup::type && type_present(a.diversity, t.support, t.f))
                continue;
            if (a.diversity.size() + 1 > std::min(opt.point_cap, max_points)) {
                a.truncated = true;
                break;
            }
            std::string label = "y" + std::to_string(level) + "_" + std::to_string(index++);
            a.diversity = realize_admissible(a.diversity, t.support, t.f, label);
            a.log.push_back({level, t.support, t.f, label});
        }
        a.level = level;
        a.level_sizes.push_back(a.diversity.size());
    }
}

} // namespace detail

/// Chain of finite approximants starting from the one-point diversity {p0}.
/// Each level realizes the admissible tasks of the previous level's diversity.
inline Approximant build_approximant(std::size_t levels, const BuildOptions & opt = {})
{
    if (opt.bounds.support_max < 1)
        throw StructuralError("build_approximant: support_max must be at least 1");
    Approximant a{0, FiniteDiversity::zeros({"p0"}), {1}, {}, false, opt};
    detail::run_levels(a, levels);
    return a;
}

/// Continue building an existing approximant with its own options.
inline Approximant extend_approximant(Approximant a, std::size_t levels)
{
    detail::run_levels(a, levels);
    return a;
}

// ---------------------------------------------------------------------------
// Homogeneity

struct HomogeneityProbe
{
    /// p plus one forth pair and one back pair (as far as points remain).
    std::optional<PartialIso> extended;
    /// Point that could not be matched.
    std::optional<std::size_t> blocking;
    Approximant grown;
};

/// One back-and-forth step for p after `extra_levels` more levels: the first
/// point outside the domain gets an image, then the first point outside the
/// range gets a preimage.
inline HomogeneityProbe ultrahomogeneity_probe(const Approximant & a, const PartialIso & p, std::size_t extra_levels)
{
    if (! is_partial_isoversity(a.diversity, p))
        throw DomainError("not-partial-isoversity", "map does not preserve values on its domain");
    HomogeneityProbe out{std::nullopt, std::nullopt, extend_approximant(a, extra_levels)};
    auto & d = out.grown.diversity;
    PartialIso q = p;

    auto in_dom = [&](std::size_t x) {
        return std::any_of(q.begin(), q.end(), [&](auto & e) { return e.first == x; });
    };
    auto in_ran = [&](std::size_t y) {
        return std::any_of(q.begin(), q.end(), [&](auto & e) { return e.second == y; });
    };

    for (bool forth : {true, false}) {
        std::optional<std::size_t> pick;
        for (std::size_t x = 0; x < d.size() && ! pick; ++x)
            if (forth ? ! in_dom(x) : ! in_ran(x))
                pick = x;
        if (! pick)
            continue;
        bool found = false;
        for (std::size_t z = 0; z < d.size() && ! found; ++z) {
            if (forth ? in_ran(z) : in_dom(z))
                continue;
            auto trial = q;
            trial.push_back(forth ? std::pair{*pick, z} : std::pair{z, *pick});
            if (is_partial_isoversity(d, trial)) {
                q = std::move(trial);
                found = true;
            }
        }
        if (! found) {
            out.blocking = *pick;
            return out;
        }
    }
    out.extended = std::move(q);
    return out;
}

} // namespace diversity
