#pragma once

#include <diversity/core.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace diversity {

/// A function on the subsets of a base diversity, stored as a full table
/// indexed like the base's own table.
struct AdmissibleMap
{
    FiniteDiversity base;
    std::vector<Rat> table;

    const Rat & operator[](Mask m) const { return table[m]; }
    bool operator==(const AdmissibleMap &) const = default;
};

namespace detail {

inline void check_total(const FiniteDiversity & x, const std::vector<Rat> & f)
{
    if (f.size() != (std::size_t{1} << x.size()))
        throw StructuralError("map table has " + std::to_string(f.size()) + " entries, expected "
            + std::to_string(std::size_t{1} << x.size()));
}

} // namespace detail

/// Checks conditions (i)–(iv) of admissibility on every instance.
///
/// Tags are "admissible-i" .. "admissible-iv". (iii) instances are keyed by
/// the three sets whose values they compare and reported once per key with a
/// size-minimal witness (A, B, C).
inline ValidationReport is_admissible(const FiniteDiversity & x, const std::vector<Rat> & f)
{
    detail::check_total(x, f);
    ValidationReport r;
    Mask full = x.full();
    if (f[0] != 0)
        r.add({"admissible-i", {0}, {f[0]}});
    for (Mask a = 0; a <= full; ++a)
        if (f[a] < x[a])
            r.add({"admissible-ii", {a}, {f[a], x[a]}});

    using Key = std::tuple<Mask, Mask, Mask>;
    std::map<Key, std::pair<int, std::vector<Mask>>> iii;
    for (Mask c = 1; c <= full; ++c)
        for (Mask a = 0; a <= full; ++a)
            for (Mask b = 0; b <= full; ++b) {
                if (f[a | c] + x[b | c] >= f[a | b])
                    continue;
                Key key{a | c, b | c, a | b};
                int size = popcount(a) + popcount(b) + popcount(c);
                std::vector<Mask> w{a, b, c};
                auto it = iii.find(key);
                if (it == iii.end() || size < it->second.first
                    || (size == it->second.first && detail::witness_less(w, it->second.second)))
                    iii[key] = {size, w};
            }
    for (auto & [key, val] : iii) {
        auto & w = val.second;
        r.add({"admissible-iii", w, {f[w[0] | w[2]], x[w[1] | w[2]], f[w[0] | w[1]]}});
    }

    for (Mask a = 0; a <= full; ++a)
        for (Mask b = a; b <= full; ++b)
            if (f[a] + f[b] < f[a | b])
                r.add({"admissible-iv", {a, b}, {f[a], f[b], f[a | b]}});

    std::stable_sort(r.violations.begin(), r.violations.end(), [](const Violation & p, const Violation & q) {
        if (p.axiom != q.axiom)
            return p.axiom < q.axiom;
        return detail::witness_less(p.witness, q.witness);
    });
    r.valid = r.violations.empty();
    return r;
}

/// Same verdict as is_admissible, stopping at the first violation.
inline bool admissible(const FiniteDiversity & x, const std::vector<Rat> & f)
{
    detail::check_total(x, f);
    Mask full = x.full();
    if (f[0] != 0)
        return false;
    for (Mask a = 0; a <= full; ++a)
        if (f[a] < x[a])
            return false;
    for (Mask a = 0; a <= full; ++a)
        for (Mask b = a; b <= full; ++b)
            if (f[a] + f[b] < f[a | b])
                return false;
    for (Mask c = 1; c <= full; ++c)
        for (Mask a = 0; a <= full; ++a)
            for (Mask b = 0; b <= full; ++b)
                if (f[a | c] + x[b | c] < f[a | b])
                    return false;
    return true;
}

inline ValidationReport is_admissible(const AdmissibleMap & f) { return is_admissible(f.base, f.table); }

/// The table of X ∪ {label}: δ on subsets of X, f(A) on A ∪ {label}. No checks
/// beyond shape; the new point is appended last.
inline FiniteDiversity extension_table(const FiniteDiversity & x, const std::vector<Rat> & f, const std::string & label)
{
    detail::check_total(x, f);
    if (x.index_of(label))
        throw StructuralError("label '" + label + "' is already a point");
    auto points = x.points();
    points.push_back(label);
    auto d = FiniteDiversity::zeros(points);
    Mask y = bit(x.size());
    for (Mask a = 0; a <= x.full(); ++a) {
        d.set(a, x[a]);
        d.set(a | y, f[a]);
    }
    return d;
}

/// One-point extension by an admissible map; rejects non-admissible maps
/// with the first violated condition.
inline FiniteDiversity one_point_extension(const FiniteDiversity & x, const AdmissibleMap & f, const std::string & label)
{
    auto r = is_admissible(x, f.table);
    if (! r.valid) {
        auto & v = r.violations.front();
        std::string w;
        for (auto m : v.witness)
            w += (w.empty() ? "" : " ") + x.describe(m);
        throw DomainError("not-admissible", "map violates " + v.axiom, w);
    }
    return extension_table(x, f.table, label);
}

/// κ_x(A) = δ(A ∪ {x}).
inline AdmissibleMap kappa(const FiniteDiversity & x, std::size_t point)
{
    if (point >= x.size())
        throw StructuralError("kappa: point out of range");
    AdmissibleMap f{x, std::vector<Rat>(std::size_t{1} << x.size())};
    for (Mask a = 0; a <= x.full(); ++a)
        f.table[a] = x[a | bit(point)];
    return f;
}

inline AdmissibleMap kappa(const FiniteDiversity & x, const std::string & label)
{
    return kappa(x, x.require_index(label));
}

/// Canonical extension f_S^X of a map f on the subdiversity S.
///
/// f_S^X(A) = min over nonempty B ⊆ S and assignments A → B of
/// f(B) + Σ_b δ(A_b ∪ {b}); parts may be empty. `f` is indexed by masks over
/// the members of S in point order.
inline AdmissibleMap extend_support(const FiniteDiversity & x, Mask s, const std::vector<Rat> & f)
{
    if (s == 0 || ! is_subset(s, x.full()))
        throw StructuralError("extend_support: support must be a nonempty subset of the points");
    auto sub = restrict(x, s);
    auto r = is_admissible(sub, f);
    if (! r.valid)
        throw DomainError("not-admissible", "map on the support violates " + r.violations.front().axiom,
            sub.describe(r.violations.front().witness.front()));

    // exact integer arithmetic after scaling by the common denominator
    std::int64_t scale = 1;
    for (auto & v : x.table())
        scale = std::lcm(scale, v.denominator());
    for (auto & v : f)
        scale = std::lcm(scale, v.denominator());
    auto scaled = [&](const Rat & v) { return v.numerator() * (scale / v.denominator()); };

    auto size = std::size_t{1} << x.size();
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> xs(size), best(size, inf), h(size), next(size);
    for (Mask a = 0; a < size; ++a)
        xs[a] = scaled(x[a]);
    auto members = positions(s);
    // For each B, split A among the members of B one member at a time.
    for (Mask bd = 1; bd <= sub.full(); ++bd) {
        auto bs = positions(bd);
        for (Mask a = 0; a < size; ++a)
            h[a] = xs[a | bit(members[bs[0]])];
        for (std::size_t j = 1; j < bs.size(); ++j) {
            Mask b = bit(members[bs[j]]);
            for (Mask a = 0; a < size; ++a) {
                std::int64_t m = inf;
                for_each_subset(a, [&](Mask part) { m = std::min(m, h[a & ~part] + xs[part | b]); });
                next[a] = m;
            }
            std::swap(h, next);
        }
        std::int64_t fb = scaled(f[bd]);
        for (Mask a = 0; a < size; ++a)
            best[a] = std::min(best[a], fb + h[a]);
    }
    AdmissibleMap out{x, std::vector<Rat>(size)};
    for (Mask a = 1; a < size; ++a)
        out.table[a] = Rat(best[a], scale);
    out.table[0] = Rat(0);
    return out;
}

/// sup over B of |f1(B) − f2(B)|.
inline Rat hat_delta_pair(const AdmissibleMap & f1, const AdmissibleMap & f2)
{
    if (! (f1.base == f2.base))
        throw StructuralError("hat_delta: maps over different bases");
    Rat best(0);
    for (std::size_t m = 0; m < f1.table.size(); ++m)
        best = std::max(best, abs(f1.table[m] - f2.table[m]));
    return best;
}

/// The general max/sup formula, for any family size.
///
/// For each j, the least Σ_{i≠j} f_i(A_i) over tuples whose union is exactly U
/// is built by successive union-convolutions; the answer is then
/// max_j max_U f_j(U) − that least sum.
inline Rat hat_delta_general(const std::vector<AdmissibleMap> & family)
{
    if (family.size() <= 1)
        return Rat(0);
    auto & x = family.front().base;
    for (auto & f : family)
        if (! (f.base == x))
            throw StructuralError("hat_delta: maps over different bases");
    if (x.size() > 12)
        throw StructuralError("hat_delta: at most 12 base points are supported");
    auto size = std::size_t{1} << x.size();
    Mask full = x.full();
    std::optional<Rat> answer;
    for (std::size_t j = 0; j < family.size(); ++j) {
        std::vector<Rat> acc;
        bool first = true;
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (i == j)
                continue;
            if (first) {
                acc = family[i].table;
                first = false;
                continue;
            }
            std::vector<std::optional<Rat>> next(size);
            for (Mask u = 0; u <= full; ++u)
                // u = w ∪ a with a ⊆ u, w ⊇ u \ a
                for_each_subset(u, [&](Mask a) {
                    Mask forced = u & ~a;
                    for_each_subset(a, [&](Mask extra) {
                        Rat v = acc[forced | extra] + family[i].table[a];
                        if (! next[u] || v < *next[u])
                            next[u] = v;
                    });
                });
            for (Mask u = 0; u <= full; ++u)
                acc[u] = *next[u];
        }
        for (Mask u = 0; u <= full; ++u) {
            Rat v = family[j].table[u] - acc[u];
            if (! answer || v > *answer)
                answer = v;
        }
    }
    return *answer;
}

/// δ̂ of a family of maps over the same base: 0 for at most one map, the
/// pair formula for two, the general formula otherwise.
inline Rat hat_delta(const std::vector<AdmissibleMap> & family)
{
    if (family.size() <= 1)
        return Rat(0);
    if (family.size() == 2)
        return hat_delta_pair(family[0], family[1]);
    return hat_delta_general(family);
}

/// (g·f)(A) = f(g⁻¹A) for an autoversity g of the base.
inline AdmissibleMap pushforward(const PointMap & g, const AdmissibleMap & f)
{
    if (! is_autoversity(f.base, g))
        throw DomainError("not-autoversity", "map does not preserve the base diversity");
    AdmissibleMap out{f.base, std::vector<Rat>(f.table.size())};
    for (Mask a = 0; a <= f.base.full(); ++a)
        out.table[map_mask(a, g)] = f.table[a];
    return out;
}

/// First point x (in point order) with |f(A) − δ(A ∪ {x})| ≤ ε for all A ⊆ F.
/// `f` is indexed by masks over the members of F.
inline std::optional<std::size_t> extension_property_probe(const FiniteDiversity & d, Mask f_support,
    const std::vector<Rat> & f, const Rat & eps)
{
    if (! is_subset(f_support, d.full()))
        throw StructuralError("probe: support outside the points");
    if (f.size() != (std::size_t{1} << popcount(f_support)))
        throw StructuralError("probe: map table does not match the support");
    for (std::size_t x = 0; x < d.size(); ++x) {
        bool ok = true;
        for (Mask a = 0; a < f.size() && ok; ++a)
            ok = abs(f[a] - d[expand(a, f_support) | bit(x)]) <= eps;
        if (ok)
            return x;
    }
    return std::nullopt;
}

/// Random admissible map on X with positive values off ∅.
///
/// Starts from κ_x + c for a random point x and constant c, then tries random
/// upward bumps of the values, each kept only if the one-point extension stays
/// a diversity.
inline AdmissibleMap random_admissible(std::uint64_t seed, const FiniteDiversity & x, std::int64_t denom_max = 4,
    std::int64_t steps = 8)
{
    if (x.size() == 0 || x.size() + 1 > max_points)
        throw StructuralError("random_admissible: base size out of range");
    Rng rng(seed);
    auto k = kappa(x, rng.below(x.size()));
    Rat c(rng.between(1, steps), denom_max);
    for (Mask a = 1; a <= x.full(); ++a)
        k.table[a] += c;
    auto d = extension_table(x, k.table, "\x01y");
    Mask y = bit(x.size());
    std::size_t attempts = 4 * (std::size_t{1} << x.size());
    for (std::size_t i = 0; i < attempts; ++i) {
        Mask a = 1 + static_cast<Mask>(rng.below(x.full()));
        Rat v = d[a | y] + Rat(rng.between(1, steps), denom_max);
        if (detail::bump_is_valid(d, a | y, v))
            d.set(a | y, v);
    }
    for (Mask a = 1; a <= x.full(); ++a)
        k.table[a] = d[a | y];
    return k;
}

} // namespace diversity
