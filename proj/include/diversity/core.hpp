#pragma once

#include <diversity/error.hpp>
#include <diversity/parallel.hpp>
#include <diversity/rational.hpp>
#include <diversity/subset.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace diversity {

/// A finite set of labelled points with a rational value on every subset.
///
/// The table is indexed by position bitmask and is always total (2^n entries).
/// Nothing here forces the table to satisfy the diversity axioms; that is
/// what validate() is for. Constructors only reject structural problems.
class FiniteDiversity
{
public:
    FiniteDiversity() : table_(1, Rat(0)) {}

    FiniteDiversity(std::vector<std::string> points, std::vector<Rat> table) :
        points_(std::move(points)), table_(std::move(table))
    {
        if (points_.size() > max_points)
            throw StructuralError("at most " + std::to_string(max_points) + " points are supported, got "
                + std::to_string(points_.size()));
        if (table_.size() != (std::size_t{1} << points_.size()))
            throw StructuralError("table has " + std::to_string(table_.size()) + " entries, expected "
                + std::to_string(std::size_t{1} << points_.size()));
        std::set<std::string_view> seen;
        for (auto & p : points_)
            if (! seen.insert(p).second)
                throw StructuralError("duplicate point label '" + p + "'");
    }

    /// All-zero table on the given points.
    static FiniteDiversity zeros(std::vector<std::string> points)
    {
        auto n = points.size();
        if (n > max_points)
            throw StructuralError("at most " + std::to_string(max_points) + " points are supported");
        return FiniteDiversity(std::move(points), std::vector<Rat>(std::size_t{1} << n, Rat(0)));
    }

    std::size_t size() const { return points_.size(); }
    Mask full() const { return full_mask(points_.size()); }
    const std::vector<std::string> & points() const { return points_; }
    const std::string & label(std::size_t i) const { return points_.at(i); }
    const std::vector<Rat> & table() const { return table_; }

    const Rat & operator[](Mask m) const { return table_[m]; }
    const Rat & value(Mask m) const { return table_.at(m); }
    void set(Mask m, Rat v) { table_.at(m) = v; }

    /// Value on the whole ground set.
    const Rat & total() const { return table_[full()]; }

    std::optional<std::size_t> index_of(std::string_view label) const
    {
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i] == label)
                return i;
        return std::nullopt;
    }

    std::size_t require_index(std::string_view label) const
    {
        if (auto i = index_of(label))
            return *i;
        throw StructuralError("unknown point label '" + std::string(label) + "'");
    }

    Mask mask_of(const std::vector<std::string> & labels) const
    {
        Mask m = 0;
        for (auto & l : labels)
            m |= bit(require_index(l));
        return m;
    }

    std::vector<std::string> labels_of(Mask m) const
    {
        std::vector<std::string> out;
        for (auto p : positions(m))
            out.push_back(points_[p]);
        return out;
    }

    /// "{a,b,c}" rendering of a subset.
    std::string describe(Mask m) const
    {
        std::string s = "{";
        bool first = true;
        for (auto p : positions(m)) {
            if (! first)
                s += ",";
            s += points_[p];
            first = false;
        }
        return s + "}";
    }

    bool operator==(const FiniteDiversity &) const = default;

private:
    std::vector<std::string> points_;
    std::vector<Rat> table_;
};

/// Equality as labelled diversities: same label set, same value on every
/// labelled subset, point order ignored.
inline bool same_labeled(const FiniteDiversity & a, const FiniteDiversity & b)
{
    if (a.size() != b.size())
        return false;
    std::vector<std::size_t> to_b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto j = b.index_of(a.label(i));
        if (! j)
            return false;
        to_b[i] = *j;
    }
    for (Mask m = 0; m <= a.full(); ++m)
        if (a[m] != b[map_mask(m, to_b)])
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Validation

enum class Mode { derived, direct };
enum class Strictness { strict, pseudo };

struct Violation
{
    /// One of "D1", "monotonicity", "connected-sublinearity", "D2", or a
    /// caller-defined tag (admissibility checks reuse this type).
    std::string axiom;
    std::vector<Mask> witness;
    std::vector<Rat> values;

    bool operator==(const Violation &) const = default;
};

struct ValidationReport
{
    bool valid = true;
    std::vector<Violation> violations;

    void add(Violation v)
    {
        valid = false;
        violations.push_back(std::move(v));
    }
};

namespace detail {

inline int axiom_rank(const std::string & tag)
{
    static const char * order[] = {"D1", "monotonicity", "connected-sublinearity", "D2"};
    for (int i = 0; i < 4; ++i)
        if (tag == order[i])
            return i;
    return 4;
}

inline bool witness_less(const std::vector<Mask> & a, const std::vector<Mask> & b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), canonical_less);
}

inline void sort_report(ValidationReport & r)
{
    std::sort(r.violations.begin(), r.violations.end(), [](const Violation & a, const Violation & b) {
        int ra = axiom_rank(a.axiom), rb = axiom_rank(b.axiom);
        if (ra != rb)
            return ra < rb;
        if (a.axiom != b.axiom)
            return a.axiom < b.axiom;
        return witness_less(a.witness, b.witness);
    });
    r.valid = r.violations.empty();
}

inline void check_d1(const std::vector<Rat> & t, std::size_t n, Strictness s, ValidationReport & r, bool first_only)
{
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
        const Rat & v = t[m];
        bool bad = popcount(m) <= 1 ? v != 0 : (s == Strictness::strict ? v <= 0 : v < 0);
        if (bad) {
            r.add({"D1", {m}, {v}});
            if (first_only)
                return;
        }
    }
}

inline void check_monotone(const std::vector<Rat> & t, std::size_t n, ValidationReport & r, bool first_only)
{
    for (Mask m = 0; m < (Mask{1} << n); ++m)
        for (std::size_t x = 0; x < n; ++x)
            if (! contains(m, x) && t[m] > t[m | bit(x)]) {
                r.add({"monotonicity", {m, Mask(m | bit(x))}, {t[m], t[m | bit(x)]}});
                if (first_only)
                    return;
            }
}

inline void check_sublinear(const std::vector<Rat> & t, std::size_t n, unsigned threads, ValidationReport & r,
    bool first_only)
{
    std::size_t count = std::size_t{1} << n;
    std::vector<std::vector<Violation>> found(std::max(1u, threads));
    parallel_chunks(threads, count, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        for (Mask a = static_cast<Mask>(begin); a < end; ++a)
            for (Mask b = a + 1; b < count; ++b) {
                if ((a & b) == 0 || is_subset(a, b) || is_subset(b, a))
                    continue;
                if (t[a | b] > t[a] + t[b]) {
                    found[chunk].push_back({"connected-sublinearity", {a, b}, {t[a], t[b], t[a | b]}});
                    if (first_only)
                        return;
                }
            }
    });
    for (auto & f : found)
        for (auto & v : f) {
            r.add(std::move(v));
            if (first_only)
                return;
        }
}

inline void check_direct(const std::vector<Rat> & t, std::size_t n, unsigned threads, ValidationReport & r,
    bool first_only)
{
    // Every instance is keyed by (A∪B, B∪C, A∪C); for each violated key the
    // reported witness is the size-minimal (A, B, C) producing it.
    using Key = std::tuple<Mask, Mask, Mask>;
    using Best = std::map<Key, std::tuple<int, std::vector<Mask>>>;
    std::size_t count = std::size_t{1} << n;
    std::vector<Best> found(std::max(1u, threads));
    parallel_chunks(threads, count - 1, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto & best = found[chunk];
        for (Mask b = static_cast<Mask>(begin) + 1; b < end + 1; ++b)
            for (Mask a = 0; a < count; ++a)
                for (Mask c = 0; c < count; ++c) {
                    if (t[a | c] <= t[a | b] + t[b | c])
                        continue;
                    Key key{a | b, b | c, a | c};
                    int size = popcount(a) + popcount(b) + popcount(c);
                    std::vector<Mask> w{a, b, c};
                    auto it = best.find(key);
                    if (it == best.end() || size < std::get<0>(it->second)
                        || (size == std::get<0>(it->second) && witness_less(w, std::get<1>(it->second))))
                        best[key] = {size, w};
                    if (first_only)
                        return;
                }
    });
    Best merged;
    for (auto & part : found)
        for (auto & [key, val] : part) {
            auto it = merged.find(key);
            if (it == merged.end() || std::get<0>(val) < std::get<0>(it->second)
                || (std::get<0>(val) == std::get<0>(it->second)
                    && witness_less(std::get<1>(val), std::get<1>(it->second))))
                merged[key] = val;
        }
    for (auto & [key, val] : merged) {
        auto & w = std::get<1>(val);
        r.add({"D2", w, {t[w[0] | w[1]], t[w[1] | w[2]], t[w[0] | w[2]]}});
        if (first_only)
            return;
    }
}

} // namespace detail

struct ValidateOptions
{
    Mode mode = Mode::derived;
    Strictness strictness = Strictness::strict;
    unsigned threads = 1;
    /// Stop at the first violation found (the report is then not exhaustive).
    bool first_only = false;
};

/// Checks the diversity axioms on every instance.
///
/// derived mode checks D1, monotonicity on covering pairs A ⊂ A∪{x}, and
/// connected sublinearity on intersecting, non-nested pairs. direct mode
/// checks D1 and the three-set triangle inequality. Both accept exactly the
/// same tables.
inline ValidationReport validate(const FiniteDiversity & d, const ValidateOptions & opt = {})
{
    ValidationReport r;
    auto n = d.size();
    auto & t = d.table();
    detail::check_d1(t, n, opt.strictness, r, opt.first_only);
    if (opt.first_only && ! r.valid)
        return r;
    if (opt.mode == Mode::derived) {
        detail::check_monotone(t, n, r, opt.first_only);
        if (opt.first_only && ! r.valid)
            return r;
        detail::check_sublinear(t, n, opt.threads, r, opt.first_only);
    }
    else
        detail::check_direct(t, n, opt.threads, r, opt.first_only);
    detail::sort_report(r);
    return r;
}

inline ValidationReport validate(const FiniteDiversity & d, Mode mode, Strictness s = Strictness::strict)
{
    return validate(d, ValidateOptions{mode, s});
}

namespace detail {

/// Monotone tables satisfy connected sublinearity as soon as it holds for
/// pairs meeting in one point: shrinking B to (B \ A) ∪ {x} keeps the union
/// and can only lower δ(B).
template <class T>
bool fast_valid(const std::vector<T> & t, std::size_t n, Strictness s)
{
    Mask full = full_mask(n);
    for (Mask m = 0; m <= full; ++m) {
        int k = popcount(m);
        if (k <= 1 ? t[m] != T(0) : (s == Strictness::strict ? t[m] <= T(0) : t[m] < T(0)))
            return false;
        for (std::size_t x = 0; x < n; ++x)
            if (! contains(m, x) && t[m] > t[m | bit(x)])
                return false;
    }
    for (Mask u = 0; u <= full; ++u) {
        if (popcount(u) < 3)
            continue;
        for (std::size_t x = 0; x < n; ++x) {
            if (! contains(u, x))
                continue;
            Mask rest = u & ~bit(x);
            Mask low = rest & (~rest + 1);
            Mask others = rest & ~low;
            bool ok = true;
            // parts P ∋ low of rest, P ≠ rest
            for_each_subset(others, [&](Mask q) {
                Mask p = q | low;
                if (ok && p != rest && t[u] > t[p | bit(x)] + t[(rest & ~p) | bit(x)])
                    ok = false;
            });
            if (! ok)
                return false;
        }
    }
    return true;
}

} // namespace detail

/// Verdict only. Same answer as validate(d).valid, computed on scaled
/// integers over a reduced instance set.
inline bool is_valid(const FiniteDiversity & d, Strictness s = Strictness::strict)
{
    auto & t = d.table();
    std::int64_t scale = 1;
    Rat top(0);
    for (auto & v : t) {
        scale = std::lcm(scale, v.denominator());
        top = std::max(top, abs(v));
        if (scale > (std::int64_t{1} << 30))
            return detail::fast_valid(t, d.size(), s);
    }
    if (top > Rat(std::int64_t{1} << 30))
        return detail::fast_valid(t, d.size(), s);
    std::vector<std::int64_t> it(t.size());
    for (std::size_t m = 0; m < t.size(); ++m)
        it[m] = t[m].numerator() * (scale / t[m].denominator());
    return detail::fast_valid(it, d.size(), s);
}

/// Human-readable one-line-per-violation rendering.
inline std::string describe(const ValidationReport & r, const FiniteDiversity & d)
{
    if (r.valid)
        return "valid\n";
    std::ostringstream os;
    for (auto & v : r.violations) {
        os << v.axiom << ":";
        for (auto w : v.witness)
            os << " " << d.describe(w);
        os << " values";
        for (auto & x : v.values)
            os << " " << to_string(x);
        os << "\n";
    }
    return os.str();
}

inline void require_valid(const FiniteDiversity & d, Strictness s = Strictness::strict,
    const std::string & what = "diversity")
{
    if (is_valid(d, s))
        return;
    auto r = validate(d, Mode::derived, s);
    {
        auto & v = r.violations.front();
        std::string w;
        for (auto m : v.witness)
            w += (w.empty() ? "" : " ") + d.describe(m);
        throw DomainError("invalid-diversity", what + " violates " + v.axiom, w);
    }
}

// ---------------------------------------------------------------------------
// Metrics

struct MetricTable
{
    std::vector<std::string> points;
    /// Row-major n×n, symmetric, zero diagonal.
    std::vector<Rat> d;

    std::size_t size() const { return points.size(); }
    const Rat & at(std::size_t i, std::size_t j) const { return d[i * points.size() + j]; }
    Rat & at(std::size_t i, std::size_t j) { return d[i * points.size() + j]; }

    bool operator==(const MetricTable &) const = default;
};

inline MetricTable induced_metric(const FiniteDiversity & d)
{
    require_valid(d);
    MetricTable m{d.points(), std::vector<Rat>(d.size() * d.size(), Rat(0))};
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j)
            if (i != j)
                m.at(i, j) = d[bit(i) | bit(j)];
    return m;
}

/// Throws DomainError unless m is a (strict) metric.
inline void require_metric(const MetricTable & m)
{
    auto n = m.size();
    if (m.d.size() != n * n)
        throw StructuralError("metric table size does not match its point count");
    for (std::size_t i = 0; i < n; ++i) {
        if (m.at(i, i) != 0)
            throw DomainError("invalid-metric", "nonzero diagonal", m.points[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (m.at(i, j) != m.at(j, i))
                throw DomainError("invalid-metric", "asymmetric distance", m.points[i] + " " + m.points[j]);
            if (i != j && m.at(i, j) <= 0)
                throw DomainError("invalid-metric", "non-positive distance", m.points[i] + " " + m.points[j]);
            for (std::size_t k = 0; k < n; ++k)
                if (m.at(i, k) > m.at(i, j) + m.at(j, k))
                    throw DomainError("invalid-metric", "triangle inequality fails",
                        m.points[i] + " " + m.points[j] + " " + m.points[k]);
        }
    }
}

/// δ(A) = largest pairwise distance inside A.
inline FiniteDiversity diameter_diversity(const MetricTable & m)
{
    require_metric(m);
    auto d = FiniteDiversity::zeros(m.points);
    for (Mask s = 1; s <= d.full(); ++s) {
        auto top = static_cast<std::size_t>(31 - std::countl_zero(s));
        Mask rest = s & ~bit(top);
        Rat v = d[rest];
        for (auto p : positions(rest))
            v = std::max(v, m.at(top, p));
        d.set(s, v);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Restriction, relabelling

/// Subdiversity on the positions in `s`, keeping their relative order.
inline FiniteDiversity restrict(const FiniteDiversity & d, Mask s)
{
    if (! is_subset(s, d.full()))
        throw StructuralError("restriction set is not a subset of the points");
    auto out = FiniteDiversity::zeros(d.labels_of(s));
    for (Mask m = 0; m <= out.full(); ++m)
        out.set(m, d[expand(m, s)]);
    return out;
}

inline FiniteDiversity restrict(const FiniteDiversity & d, const std::vector<std::string> & labels)
{
    return restrict(d, d.mask_of(labels));
}

/// Same table with points renamed position by position.
inline FiniteDiversity relabel(const FiniteDiversity & d, std::vector<std::string> labels)
{
    if (labels.size() != d.size())
        throw StructuralError("relabel: label count mismatch");
    return FiniteDiversity(std::move(labels), d.table());
}

// ---------------------------------------------------------------------------
// Isomorphism

/// Position map i ↦ perm[i] from one diversity into another.
using PointMap = std::vector<std::size_t>;

namespace detail {

inline bool iso_search(const FiniteDiversity & a, const FiniteDiversity & b, const std::vector<int> & forced,
    PointMap & perm, std::vector<bool> & used, std::size_t i)
{
    auto n = a.size();
    if (i == n)
        return true;
    auto try_target = [&](std::size_t j) {
        if (used[j])
            return false;
        perm[i] = j;
        // every subset of the assigned prefix that contains i
        Mask prefix = full_mask(i);
        bool ok = true;
        for_each_subset(prefix, [&](Mask sub) {
            if (! ok)
                return;
            Mask s = sub | bit(i);
            Mask img = 0;
            for (auto p : positions(s))
                img |= bit(perm[p]);
            if (a[s] != b[img])
                ok = false;
        });
        if (! ok)
            return false;
        used[j] = true;
        if (iso_search(a, b, forced, perm, used, i + 1))
            return true;
        used[j] = false;
        return false;
    };
    if (forced[i] >= 0)
        return try_target(static_cast<std::size_t>(forced[i]));
    for (std::size_t j = 0; j < n; ++j)
        if (try_target(j))
            return true;
    return false;
}

} // namespace detail

/// True iff perm is a value-preserving bijection a → b.
inline bool is_isoversity(const FiniteDiversity & a, const FiniteDiversity & b, const PointMap & perm)
{
    if (a.size() != b.size() || perm.size() != a.size())
        return false;
    std::vector<bool> hit(a.size(), false);
    for (auto j : perm) {
        if (j >= a.size() || hit[j])
            return false;
        hit[j] = true;
    }
    for (Mask m = 0; m <= a.full(); ++m)
        if (a[m] != b[map_mask(m, perm)])
            return false;
    return true;
}

/// Searches for an isoversity a → b in lexicographic order of images. Entries
/// of `forced` that are ≥ 0 pin the image of that position.
inline std::optional<PointMap> find_isoversity_extending(const FiniteDiversity & a, const FiniteDiversity & b,
    const std::vector<int> & forced)
{
    if (a.size() != b.size() || forced.size() != a.size())
        return std::nullopt;
    PointMap perm(a.size());
    std::vector<bool> used(a.size(), false);
    if (detail::iso_search(a, b, forced, perm, used, 0))
        return perm;
    return std::nullopt;
}

/// Verifies `candidate` when given, otherwise searches exhaustively.
inline std::optional<PointMap> find_isoversity(const FiniteDiversity & a, const FiniteDiversity & b,
    const std::optional<PointMap> & candidate = std::nullopt)
{
    if (a.size() != b.size())
        return std::nullopt;
    if (candidate) {
        if (is_isoversity(a, b, *candidate))
            return candidate;
        return std::nullopt;
    }
    return find_isoversity_extending(a, b, std::vector<int>(a.size(), -1));
}

inline bool is_autoversity(const FiniteDiversity & d, const PointMap & perm) { return is_isoversity(d, d, perm); }

/// Pairs (x, p(x)) of point indices.
using PartialIso = std::vector<std::pair<std::size_t, std::size_t>>;

inline bool is_partial_isoversity(const FiniteDiversity & d, const PartialIso & p)
{
    std::vector<std::size_t> dom, ran;
    for (auto [x, y] : p) {
        if (x >= d.size() || y >= d.size())
            return false;
        dom.push_back(x);
        ran.push_back(y);
    }
    auto sorted_unique = [](std::vector<std::size_t> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (! sorted_unique(dom) || ! sorted_unique(ran))
        return false;
    for (Mask m = 1; m < (Mask{1} << p.size()); ++m) {
        Mask a = 0, b = 0;
        for (auto i : positions(m)) {
            a |= bit(p[i].first);
            b |= bit(p[i].second);
        }
        if (d[a] != d[b])
            return false;
    }
    return true;
}

/// Value of the set underlying a tuple of positions (repeats collapse).
inline Mask tuple_mask(const std::vector<std::size_t> & tuple, std::size_t of_indices)
{
    Mask m = 0;
    for (auto i : positions(static_cast<Mask>(of_indices)))
        m |= bit(tuple[i]);
    return m;
}

/// |δ(a_J) − δ(b_J)| < ε for every index set J.
inline bool epsilon_isomorphic(const FiniteDiversity & d, const std::vector<std::size_t> & a,
    const std::vector<std::size_t> & b, const Rat & eps)
{
    if (a.size() != b.size())
        throw StructuralError("epsilon_isomorphic: tuples differ in length");
    if (a.size() > 31)
        throw StructuralError("epsilon_isomorphic: tuple too long");
    for (auto i : a)
        if (i >= d.size())
            throw StructuralError("epsilon_isomorphic: point out of range");
    for (auto i : b)
        if (i >= d.size())
            throw StructuralError("epsilon_isomorphic: point out of range");
    for (std::size_t j = 0; j < (std::size_t{1} << a.size()); ++j)
        if (! (abs(d[tuple_mask(a, j)] - d[tuple_mask(b, j)]) < eps))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Generation

/// Deterministic integer source. mt19937_64 output is fixed by the standard;
/// reductions are done by hand so results do not depend on the library's
/// distribution implementations.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform-ish in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    /// Uniform-ish in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

namespace detail {

/// Would δ(s) := v keep an otherwise valid table valid? Only the constraints
/// involving s need checking when v ≥ the current value.
inline bool bump_is_valid(const FiniteDiversity & d, Mask s, const Rat & v)
{
    for (std::size_t x = 0; x < d.size(); ++x)
        if (! contains(s, x) && v > d[s | bit(x)])
            return false;
    bool ok = true;
    for_each_subset(s, [&](Mask a) {
        if (! ok || a == 0 || a == s)
            return;
        Mask rest = s & ~a;
        // b = rest ∪ t with ∅ ≠ t ⊊ a
        for_each_subset(a, [&](Mask t) {
            if (! ok || t == 0 || t == a)
                return;
            if (v > d[a] + d[rest | t])
                ok = false;
        });
    });
    return ok;
}

} // namespace detail

/// Random strict rational diversity with values on the grid 1/denom_max.
///
/// Pair weights are sampled from {1..⌊value_max·denom_max⌋}/denom_max, closed
/// under shortest paths and turned into a diameter diversity; then at most
/// 10·2^n random upward bumps of non-pair subsets are tried, each kept only if
/// the table stays valid.
inline FiniteDiversity random_diversity(std::uint64_t seed, std::size_t n, std::int64_t denom_max = 4,
    Rat value_max = Rat(3))
{
    if (n > max_points)
        throw StructuralError("random_diversity: n exceeds " + std::to_string(max_points));
    if (denom_max < 1)
        throw StructuralError("random_diversity: denom_max must be positive");
    Rat scaled = value_max * denom_max;
    auto steps = scaled.numerator() / scaled.denominator();
    if (steps < 1)
        throw StructuralError("random_diversity: value_max below the grid step");

    Rng rng(seed);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back("p" + std::to_string(i));

    MetricTable m{labels, std::vector<Rat>(n * n, Rat(0))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.at(i, j) = m.at(j, i) = Rat(rng.between(1, steps), denom_max);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (m.at(i, k) + m.at(k, j) < m.at(i, j))
                    m.at(i, j) = m.at(i, k) + m.at(k, j);
    auto d = diameter_diversity(m);

    std::vector<Mask> big;
    for (Mask s = 0; s <= d.full(); ++s)
        if (popcount(s) >= 3)
            big.push_back(s);
    if (big.empty())
        return d;
    std::size_t attempts = 10 * (std::size_t{1} << n);
    for (std::size_t k = 0; k < attempts; ++k) {
        Mask s = big[rng.below(big.size())];
        Rat v = d[s] + Rat(rng.between(1, steps), denom_max);
        if (detail::bump_is_valid(d, s, v))
            d.set(s, v);
    }
    return d;
}

} // namespace diversity
