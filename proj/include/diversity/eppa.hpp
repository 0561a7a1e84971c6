#pragma once

#include <diversity/core.hpp>
#include <diversity/cover.hpp>

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace diversity {

/// (r, n): value r on n-element sets.
using RelKey = std::pair<Rat, std::size_t>;
using Signature = std::set<RelKey>;

/// Symmetric relations stored as point sets.
struct RelStructure
{
    std::vector<std::string> universe;
    std::map<RelKey, std::set<Mask>> relations;

    std::size_t size() const { return universe.size(); }
    bool holds(const RelKey & k, Mask s) const
    {
        auto it = relations.find(k);
        return it != relations.end() && it->second.count(s);
    }
    void add(const RelKey & k, Mask s)
    {
        if (static_cast<std::size_t>(popcount(s)) != k.second)
            throw StructuralError("relation instance size does not match its arity");
        relations[k].insert(s);
    }
    std::size_t instance_count() const
    {
        std::size_t c = 0;
        for (auto & [k, v] : relations)
            c += v.size();
        return c;
    }
    bool operator==(const RelStructure &) const = default;
};

struct Configuration
{
    RelKey head;
    /// Nondecreasing.
    std::vector<RelKey> body;

    auto operator<=>(const Configuration &) const = default;
};

/// Σ body r < head r and 1 + Σ (n − 1) ≥ head n, with a nonempty body.
inline bool is_configuration(const Configuration & a)
{
    if (a.body.empty())
        return false;
    Rat sum(0);
    std::size_t reach = 1;
    for (auto & [r, n] : a.body) {
        sum += r;
        reach += n - 1;
    }
    return sum < a.head.first && reach >= a.head.second;
}

// ---------------------------------------------------------------------------
// Encoding

/// Every subset of size ≥ 2 becomes an instance of (δ(Y), |Y|).
inline std::pair<Signature, RelStructure> to_relstruct(const FiniteDiversity & d)
{
    RelStructure c{d.points(), {}};
    Signature sig;
    for (Mask m = 0; m <= d.full(); ++m) {
        auto n = static_cast<std::size_t>(popcount(m));
        if (n < 2)
            continue;
        RelKey k{d[m], n};
        sig.insert(k);
        c.add(k, m);
    }
    return {sig, c};
}

inline Signature signature_of(const RelStructure & c)
{
    Signature s;
    for (auto & [k, v] : c.relations)
        if (! v.empty())
            s.insert(k);
    return s;
}

/// All configurations over D, by head, then body length, then body.
/// The body length is bounded by head r / least r.
inline std::vector<Configuration> enumerate_configurations(const Signature & d, std::size_t max_count = 200000)
{
    std::vector<RelKey> keys(d.begin(), d.end());
    for (auto & k : keys)
        if (! (k.first > 0) || k.second < 2)
            throw StructuralError("signature entries need r > 0 and n ≥ 2");
    std::vector<Configuration> out;
    std::vector<RelKey> body;
    for (auto & head : keys) {
        // nondecreasing index sequences with Σ r < head r
        auto rec = [&](auto & self, std::size_t from, const Rat & sum, std::size_t reach) -> void {
            if (! body.empty() && reach >= head.second) {
                out.push_back({head, body});
                if (out.size() > max_count)
                    throw DomainError("too-many-configurations",
                        "more than " + std::to_string(max_count) + " configurations over this signature");
            }
            for (std::size_t i = from; i < keys.size(); ++i) {
                Rat s = sum + keys[i].first;
                if (! (s < head.first))
                    continue;
                body.push_back(keys[i]);
                self(self, i, s, reach + keys[i].second - 1);
                body.pop_back();
            }
        };
        rec(rec, 0, Rat(0), 1);
    }
    std::sort(out.begin(), out.end(), [](const Configuration & a, const Configuration & b) {
        if (a.head != b.head)
            return a.head < b.head;
        if (a.body.size() != b.body.size())
            return a.body.size() < b.body.size();
        return a.body < b.body;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Forbidden structures

/// An α-family Y₀..Y_k over points 0..u−1, and the structure it defines.
struct ForbiddenStructure
{
    Configuration alpha;
    std::vector<Mask> family;
    RelStructure m;
};

inline bool intersection_graph_connected(const std::vector<Mask> & sets)
{
    if (sets.empty())
        return true;
    std::vector<bool> seen(sets.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (! stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < sets.size(); ++j)
            if (! seen[j] && (sets[i] & sets[j])) {
                seen[j] = true;
                stack.push_back(j);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

inline bool is_alpha_family(const Configuration & a, const std::vector<Mask> & family)
{
    if (family.size() != a.body.size() + 1)
        return false;
    if (static_cast<std::size_t>(popcount(family[0])) != a.head.second)
        return false;
    Mask all = 0;
    for (std::size_t i = 0; i < a.body.size(); ++i) {
        if (static_cast<std::size_t>(popcount(family[i + 1])) != a.body[i].second)
            return false;
        all |= family[i + 1];
    }
    return is_subset(family[0], all)
        && intersection_graph_connected(std::vector<Mask>(family.begin() + 1, family.end()));
}

inline RelStructure structure_of(const Configuration & a, const std::vector<Mask> & family)
{
    Mask all = 0;
    for (auto s : family)
        all |= s;
    RelStructure m;
    for (int i = 0; i < std::bit_width(all); ++i)
        m.universe.push_back("m" + std::to_string(i));
    m.add(a.head, family[0]);
    for (std::size_t i = 0; i < a.body.size(); ++i)
        m.add(a.body[i], family[i + 1]);
    return m;
}

namespace detail {

using RelList = std::vector<std::pair<RelKey, Mask>>;

inline RelList relabeled(const RelStructure & m, const std::vector<std::size_t> & to)
{
    RelList out;
    for (auto & [k, sets] : m.relations)
        for (auto s : sets) {
            Mask t = 0;
            for (auto i : positions(s))
                t |= bit(to[i]);
            out.push_back({k, t});
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Canonical relation list: points are grouped by their sorted incidence
/// signature and only permuted within groups.
inline RelList canonical_relations(const RelStructure & m)
{
    auto n = m.size();
    std::vector<std::vector<RelKey>> sig(n);
    for (auto & [k, sets] : m.relations)
        for (auto s : sets)
            for (auto i : positions(s))
                sig[i].push_back(k);
    for (auto & s : sig)
        std::sort(s.begin(), s.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sig[a] < sig[b]; });
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sig[order[j]] == sig[order[i]])
            ++j;
        groups.push_back({i, j});
        i = j;
    }
    std::optional<RelList> best;
    // order[pos] = original point placed at position pos
    auto rec = [&](auto & self, std::size_t g) -> void {
        if (g == groups.size()) {
            std::vector<std::size_t> to(n);
            for (std::size_t p = 0; p < n; ++p)
                to[order[p]] = p;
            auto l = relabeled(m, to);
            if (! best || l < *best)
                best = std::move(l);
            return;
        }
        auto [b, e] = groups[g];
        std::sort(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e));
        do
            self(self, g + 1);
        while (std::next_permutation(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e)));
    };
    rec(rec, 0);
    return *best;
}

} // namespace detail

/// One forbidden structure per α-family up to isomorphism.
///
/// Families are grown set by set, each new body set meeting the points used so
/// far, over every ordering of the body; Y₀ is then any head-sized subset of
/// the union.
inline std::vector<ForbiddenStructure> enumerate_forbidden(const Configuration & a, std::size_t max_count = 100000)
{
    if (! is_configuration(a))
        throw DomainError("not-a-configuration", "body sum must be below the head value and reach its size");
    std::size_t reach = 1;
    for (auto & b : a.body)
        reach += b.second - 1;
    if (reach > max_points)
        throw StructuralError("configuration needs more than " + std::to_string(max_points) + " points");

    std::map<detail::RelList, ForbiddenStructure> found;
    std::vector<std::size_t> perm(a.body.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Mask> sets(a.body.size());
    do {
        bool repeat = false;
        // skip orderings that only swap equal body entries
        for (std::size_t i = 0; i + 1 < perm.size() && ! repeat; ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (a.body[perm[i]] == a.body[perm[j]] && perm[i] > perm[j])
                    repeat = true;
        if (repeat)
            continue;
        auto rec = [&](auto & self, std::size_t i, std::size_t used) -> void {
            if (i == perm.size()) {
                Mask all = full_mask(used);
                for_each_subset(all, [&](Mask y0) {
                    if (static_cast<std::size_t>(popcount(y0)) != a.head.second)
                        return;
                    std::vector<Mask> fam{y0};
                    for (std::size_t t = 0; t < a.body.size(); ++t)
                        fam.push_back(sets[t]);
                    auto m = structure_of(a, fam);
                    auto key = detail::canonical_relations(m);
                    if (! found.count(key)) {
                        found.emplace(key, ForbiddenStructure{a, fam, m});
                        if (found.size() > max_count)
                            throw DomainError("too-many-families", "forbidden structure list exceeds the cap");
                    }
                });
                return;
            }
            std::size_t slot = perm[i];
            std::size_t n = a.body[slot].second;
            if (i == 0) {
                sets[slot] = full_mask(n);
                self(self, 1, n);
                return;
            }
            for_each_subset(full_mask(used), [&](Mask overlap) {
                auto o = static_cast<std::size_t>(popcount(overlap));
                if (o == 0 || o > n)
                    return;
                sets[slot] = overlap | (full_mask(used + n - o) & ~full_mask(used));
                self(self, i + 1, used + n - o);
            });
        };
        rec(rec, 0, 0);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<ForbiddenStructure> out;
    for (auto & [k, v] : found)
        out.push_back(std::move(v));
    return out;
}

// ---------------------------------------------------------------------------
// Weak homomorphisms

/// h with M ⊨ R(Y) ⇒ C ⊨ R(h(Y)), found by backtracking. Each point of M may
/// only go to points of C lying in instances of every relation it lies in, and
/// each partially mapped instance must stay inside some instance of C.
inline std::optional<std::vector<std::size_t>> find_weak_hom(const RelStructure & m, const RelStructure & c)
{
    auto n = m.size();
    if (n == 0)
        return std::vector<std::size_t>{};
    if (c.size() == 0)
        return std::nullopt;
    detail::RelList inst;
    for (auto & [k, sets] : m.relations)
        for (auto s : sets)
            inst.push_back({k, s});

    std::vector<Mask> candidates(n, full_mask(c.size()));
    for (auto & [k, s] : inst) {
        Mask cover = 0;
        auto it = c.relations.find(k);
        if (it != c.relations.end())
            for (auto t : it->second)
                cover |= t;
        for (auto i : positions(s))
            candidates[i] &= cover;
    }
    for (auto cand : candidates)
        if (cand == 0)
            return std::nullopt;

    // most constrained first, then by incidence
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> degree(n, 0);
    for (auto & [k, s] : inst)
        for (auto i : positions(s))
            ++degree[i];
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (popcount(candidates[a]) != popcount(candidates[b]))
            return popcount(candidates[a]) < popcount(candidates[b]);
        return degree[a] > degree[b];
    });

    std::vector<std::size_t> h(n, 0);
    Mask assigned = 0;
    auto consistent = [&]() {
        for (auto & [k, s] : inst) {
            Mask known = s & assigned;
            if (! known)
                continue;
            Mask image = 0;
            for (auto i : positions(known))
                image |= bit(h[i]);
            if (popcount(image) != popcount(known))
                return false;
            auto it = c.relations.find(k);
            if (it == c.relations.end())
                return false;
            if (known == s) {
                if (! it->second.count(image))
                    return false;
                continue;
            }
            bool inside = std::any_of(it->second.begin(), it->second.end(),
                [&](Mask t) { return is_subset(image, t); });
            if (! inside)
                return false;
        }
        return true;
    };
    auto rec = [&](auto & self, std::size_t i) -> bool {
        if (i == n)
            return true;
        auto p = order[i];
        for (auto target : positions(candidates[p])) {
            h[p] = target;
            assigned |= bit(p);
            if (consistent() && self(self, i + 1))
                return true;
            assigned &= ~bit(p);
        }
        return false;
    };
    if (rec(rec, 0))
        return h;
    return std::nullopt;
}

struct TWitness
{
    Configuration alpha;
    std::vector<Mask> family;
    RelStructure m;
    std::vector<std::size_t> h;
};

struct TFreeResult
{
    bool free = true;
    std::optional<TWitness> witness;
};

/// Checks α is a configuration, the family an α-family, M its structure, and
/// h a weak homomorphism M → C.
inline bool verify_t_witness(const TWitness & w, const RelStructure & c)
{
    if (! is_configuration(w.alpha) || ! is_alpha_family(w.alpha, w.family))
        return false;
    if (! (w.m.relations == structure_of(w.alpha, w.family).relations) || w.h.size() != w.m.size())
        return false;
    for (auto & [k, sets] : w.m.relations)
        for (auto s : sets) {
            Mask image = 0;
            for (auto i : positions(s)) {
                if (w.h[i] >= c.size())
                    return false;
                image |= bit(w.h[i]);
            }
            if (! c.holds(k, image))
                return false;
        }
    return true;
}

enum class TRoute { forbidden, cover };

/// T-freeness of C over D.
///
/// forbidden: runs find_weak_hom for every forbidden structure of every
/// configuration. cover: C fails to be T-free exactly when some instance e₀
/// has a connected cover by instances of smaller total value; the cover itself
/// is then an α-family mapped in by inclusion.
inline TFreeResult is_t_free(const RelStructure & c, const Signature & d, TRoute route = TRoute::forbidden)
{
    if (route == TRoute::forbidden) {
        for (auto & a : enumerate_configurations(d))
            for (auto & f : enumerate_forbidden(a))
                if (auto h = find_weak_hom(f.m, c))
                    return {false, TWitness{a, f.family, f.m, *h}};
        return {true, std::nullopt};
    }

    WeightedBlockFamily fam{c.universe, {}};
    std::vector<RelKey> keys;
    for (auto & [k, sets] : c.relations) {
        if (! d.count(k))
            continue;
        for (auto s : sets) {
            fam.blocks.push_back({s, k.first});
            keys.push_back(k);
        }
    }
    for (std::size_t i = 0; i < fam.blocks.size(); ++i) {
        auto [value, cert] = min_connected_cover(fam, fam.blocks[i].set);
        if (! (value < fam.blocks[i].weight))
            continue;
        // inclusion of the cover's points into C
        std::vector<std::pair<RelKey, Mask>> body;
        Mask all = fam.blocks[i].set;
        for (auto j : cert.chosen) {
            body.push_back({keys[j], fam.blocks[j].set});
            all |= fam.blocks[j].set;
        }
        std::sort(body.begin(), body.end());
        auto pts = positions(all);
        TWitness w;
        w.alpha.head = keys[i];
        w.family.push_back(compress(fam.blocks[i].set, all));
        for (auto & [k, s] : body) {
            w.alpha.body.push_back(k);
            w.family.push_back(compress(s, all));
        }
        w.m = structure_of(w.alpha, w.family);
        w.h.assign(pts.begin(), pts.end());
        return {false, std::move(w)};
    }
    return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Recovering δ_B

/// Points of C connected to a point of A through chains of relation instances
/// over D.
inline Mask component_B(const RelStructure & c, Mask a, const Signature & d)
{
    if (popcount(a) < 2)
        throw DomainError("small-base", "the base needs at least two points");
    if (! is_subset(a, full_mask(c.size())))
        throw StructuralError("base outside the universe");
    Mask reached = a;
    // A is itself connected through its pairs
    for (bool grew = true; grew;) {
        grew = false;
        for (auto & [k, sets] : c.relations) {
            if (! d.count(k))
                continue;
            for (auto s : sets)
                if ((s & reached) && ! is_subset(s, reached)) {
                    reached |= s;
                    grew = true;
                }
        }
    }
    return reached;
}

inline Mask component_B(const RelStructure & c, Mask a) { return component_B(c, a, signature_of(c)); }

/// δ_B(X) = least Σ r over connections inside B covering X; 0 on sets of size
/// at most one.
inline FiniteDiversity delta_B_from(const RelStructure & c, Mask b)
{
    if (! is_subset(b, full_mask(c.size())))
        throw StructuralError("B outside the universe");
    std::vector<std::string> labels;
    for (auto i : positions(b))
        labels.push_back(c.universe[i]);
    WeightedBlockFamily fam{labels, {}};
    for (auto & [k, sets] : c.relations)
        for (auto s : sets)
            if (is_subset(s, b))
                fam.blocks.push_back({compress(s, b), k.first});
    auto out = FiniteDiversity::zeros(labels);
    if (fam.blocks.empty()) {
        if (out.size() >= 2)
            throw DomainError("uncoverable", "no relation instances inside B", out.describe(out.full()));
        return out;
    }
    auto table = min_cover_table(fam);
    for (Mask x = 0; x <= out.full(); ++x) {
        if (popcount(x) <= 1)
            continue;
        if (! table[x])
            throw DomainError("uncoverable", "no connection inside B covers the set", out.describe(x));
        out.set(x, *table[x]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// EPPA search

struct EppaCertificate
{
    FiniteDiversity b;
    /// One bijection of B per partial map, in input order.
    std::vector<PointMap> extensions;
};

struct EppaSearch
{
    std::optional<EppaCertificate> certificate;
    std::size_t candidates = 0;
    /// False when the candidate budget ran out before the space was covered.
    bool exhausted = true;
};

namespace detail {

inline std::optional<PointMap> extend_partial(const FiniteDiversity & b, const PartialIso & p)
{
    std::vector<int> forced(b.size(), -1);
    for (auto [x, y] : p)
        forced[x] = static_cast<int>(y);
    return find_isoversity_extending(b, b, forced);
}

} // namespace detail

/// Searches B ⊇ A with at most size_bound new points (labels z1, z2, ...) and
/// new values from the grid, in increasing size and then increasing values,
/// for one where every partial map extends to an autoversity.
inline EppaSearch brute_force_eppa(const FiniteDiversity & a, const std::vector<PartialIso> & partials,
    std::size_t size_bound, std::vector<Rat> grid, std::size_t budget = 5000000)
{
    if (a.size() + size_bound > 6)
        throw StructuralError("brute_force_eppa: |A| + size_bound must be at most 6");
    require_valid(a, Strictness::strict, "EPPA base");
    for (auto & p : partials)
        if (! is_partial_isoversity(a, p))
            throw DomainError("not-partial-isoversity", "a partial map does not preserve values");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    EppaSearch out;
    for (std::size_t extra = 0; extra <= size_bound; ++extra) {
        auto labels = a.points();
        for (std::size_t i = 1; i <= extra; ++i)
            labels.push_back("z" + std::to_string(i));
        auto b = FiniteDiversity::zeros(labels);
        for (Mask m = 0; m <= a.full(); ++m)
            b.set(m, a[m]);
        std::vector<Mask> fresh;
        for (Mask m : canonical_subsets(b.size()))
            if (popcount(m) >= 2 && ! is_subset(m, a.full()))
                fresh.push_back(m);

        // every proper subset of fresh[i] precedes it in canonical order
        auto fits = [&](Mask s) {
            for (auto x : positions(s))
                if (b[s & ~bit(x)] > b[s])
                    return false;
            for (auto x : positions(s)) {
                Mask rest = s & ~bit(x);
                bool ok = true;
                for_each_subset(rest, [&](Mask p) {
                    if (ok && p && p != rest && b[s] > b[p | bit(x)] + b[(rest & ~p) | bit(x)])
                        ok = false;
                });
                if (! ok)
                    return false;
            }
            return true;
        };
        auto rec = [&](auto & self, std::size_t i) -> bool {
            if (i == fresh.size()) {
                if (++out.candidates > budget) {
                    out.exhausted = false;
                    return true;
                }
                std::vector<PointMap> ext;
                for (auto & p : partials) {
                    auto g = detail::extend_partial(b, p);
                    if (! g)
                        return false;
                    ext.push_back(*g);
                }
                out.certificate = EppaCertificate{b, std::move(ext)};
                return true;
            }
            for (auto & v : grid) {
                b.set(fresh[i], v);
                if (fits(fresh[i]) && self(self, i + 1))
                    return true;
            }
            b.set(fresh[i], Rat(0));
            return false;
        };
        if (rec(rec, 0))
            return out;
    }
    return out;
}

struct EppaVerdict
{
    bool ok = true;
    /// "subdiversity", "extension-count", "bijection", "value-preservation" or "agreement".
    std::string failed;
    bool operator==(const EppaVerdict &) const = default;
};

/// Checks A sits in B with its own labels and values, and each extension is an
/// autoversity of B extending its partial map.
inline EppaVerdict verify_eppa(const EppaCertificate & cert, const FiniteDiversity & a,
    const std::vector<PartialIso> & partials)
{
    auto & b = cert.b;
    if (b.size() < a.size())
        return {false, "subdiversity"};
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b.label(i) != a.label(i))
            return {false, "subdiversity"};
    if (! (restrict(b, a.full()) == a))
        return {false, "subdiversity"};
    if (cert.extensions.size() != partials.size())
        return {false, "extension-count"};
    for (std::size_t k = 0; k < partials.size(); ++k) {
        auto & g = cert.extensions[k];
        if (g.size() != b.size())
            return {false, "bijection"};
        std::vector<bool> hit(b.size(), false);
        for (auto y : g) {
            if (y >= b.size() || hit[y])
                return {false, "bijection"};
            hit[y] = true;
        }
        if (! is_autoversity(b, g))
            return {false, "value-preservation"};
        for (auto [x, y] : partials[k])
            if (g[x] != y)
                return {false, "agreement"};
    }
    return {true, ""};
}

} // namespace diversity
