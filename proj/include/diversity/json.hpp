#pragma once

#include <diversity/core.hpp>
#include <diversity/eppa.hpp>
#include <diversity/fraisse.hpp>
#include <diversity/katetov.hpp>
#include <diversity/propinquity.hpp>
#include <diversity/systems.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace diversity {

/// Insertion-ordered, so dumps are byte-stable.
using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad_json(const std::string & where, const std::string & what)
{
    throw StructuralError(where + ": " + what);
}

inline const Json & field(const Json & j, const char * key, const std::string & where)
{
    if (! j.is_object() || ! j.contains(key))
        bad_json(where, std::string("missing \"") + key + "\"");
    return j.at(key);
}

inline std::string text(const Json & j, const std::string & where)
{
    if (! j.is_string())
        bad_json(where, "expected a string");
    return j.get<std::string>();
}

inline std::size_t count(const Json & j, const std::string & where)
{
    if (! j.is_number_unsigned() && ! (j.is_number_integer() && j.get<std::int64_t>() >= 0))
        bad_json(where, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

inline Rat rational(const Json & j, const std::string & where)
{
    if (j.is_number_integer())
        return Rat(j.get<std::int64_t>());
    try {
        return parse_rat(text(j, where));
    } catch (const std::exception & e) {
        bad_json(where, e.what());
    }
}

inline std::vector<std::string> labels(const Json & j, const std::string & where)
{
    if (! j.is_array())
        bad_json(where, "expected an array of labels");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(text(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline Mask mask_in(const std::vector<std::string> & points, const std::vector<std::string> & set,
    const std::string & where)
{
    Mask m = 0;
    for (auto & l : set) {
        auto it = std::find(points.begin(), points.end(), l);
        if (it == points.end())
            bad_json(where, "unknown point label '" + l + "'");
        auto i = static_cast<std::size_t>(it - points.begin());
        if (contains(m, i))
            bad_json(where, "label '" + l + "' repeated");
        m |= bit(i);
    }
    return m;
}

inline Json labels_json(const std::vector<std::string> & points, Mask m)
{
    Json out = Json::array();
    for (auto p : positions(m))
        out.push_back(points[p]);
    return out;
}

/// Reads {"set", "value"} entries into a table; sets smaller than min_size
/// are optional, larger ones must each appear once.
inline std::vector<Rat> table_from(const Json & values, const std::vector<std::string> & points, int min_size,
    const std::string & where)
{
    if (! values.is_array())
        bad_json(where, "expected an array");
    auto n = points.size();
    if (n > max_points)
        bad_json(where, "more than " + std::to_string(max_points) + " points");
    std::vector<Rat> table(std::size_t{1} << n, Rat(0));
    std::vector<bool> seen(table.size(), false);
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto at = where + "[" + std::to_string(i) + "]";
        auto set = labels(field(values[i], "set", at), at + ".set");
        Mask m = mask_in(points, set, at + ".set");
        if (seen[m])
            bad_json(at, "set listed twice");
        seen[m] = true;
        table[m] = rational(field(values[i], "value", at), at + ".value");
    }
    for (Mask m = 0; m < table.size(); ++m)
        if (popcount(m) >= min_size && ! seen[m])
            bad_json(where, "no entry for " + labels_json(points, m).dump());
    return table;
}

inline Json values_json(const std::vector<std::string> & points, const std::vector<Rat> & table, int min_size,
    bool skip_zero_below)
{
    Json out = Json::array();
    for (Mask m : canonical_subsets(points.size())) {
        if (m == 0 || (popcount(m) < min_size && (skip_zero_below ? table[m] == 0 : true)))
            continue;
        out.push_back(Json{{"set", labels_json(points, m)}, {"value", to_string(table[m])}});
    }
    return out;
}

inline std::vector<std::string> point_list(const Json & j, const std::string & where)
{
    auto points = labels(field(j, "points", where), where + ".points");
    std::set<std::string> unique(points.begin(), points.end());
    if (unique.size() != points.size())
        bad_json(where + ".points", "duplicate label");
    return points;
}

} // namespace detail

// Diversity: {"points": [...], "values": [{"set": [...], "value": "p/q"}, ...]}

inline Json to_json(const FiniteDiversity & d)
{
    return Json{{"points", d.points()}, {"values", detail::values_json(d.points(), d.table(), 2, false)}};
}

inline FiniteDiversity diversity_from_json(const Json & j, const std::string & where = "diversity")
{
    auto points = detail::point_list(j, where);
    auto table = detail::table_from(detail::field(j, "values", where), points, 2, where + ".values");
    for (Mask m = 0; m < table.size(); ++m)
        if (popcount(m) < 2 && table[m] != 0)
            detail::bad_json(where + ".values", "sets of size below 2 are implicitly 0");
    return FiniteDiversity(std::move(points), std::move(table));
}

inline Json to_json(const Violation & v, const FiniteDiversity & d)
{
    Json sets = Json::array(), vals = Json::array();
    for (auto m : v.witness)
        sets.push_back(detail::labels_json(d.points(), m));
    for (auto & x : v.values)
        vals.push_back(to_string(x));
    return Json{{"axiom", v.axiom}, {"sets", sets}, {"values", vals}};
}

inline Json to_json(const ValidationReport & r, const FiniteDiversity & d)
{
    Json vs = Json::array();
    for (auto & v : r.violations)
        vs.push_back(to_json(v, d));
    return Json{{"valid", r.valid}, {"violations", vs}};
}

// Admissible map: {"base": diversity, "points": base points, "values": [...]}
// with nonzero singletons and ∅ listed when present.

inline Json map_to_json(const FiniteDiversity & base, const std::vector<Rat> & table)
{
    Json values = Json::array();
    if (table[0] != 0)
        values.push_back(Json{{"set", Json::array()}, {"value", to_string(table[0])}});
    for (auto & e : detail::values_json(base.points(), table, 2, true))
        values.push_back(e);
    return Json{{"base", to_json(base)}, {"points", base.points()}, {"values", values}};
}

inline Json to_json(const AdmissibleMap & f) { return map_to_json(f.base, f.table); }

inline AdmissibleMap admissible_from_json(const Json & j, const std::string & where = "map")
{
    auto base = diversity_from_json(detail::field(j, "base", where), where + ".base");
    if (j.contains("points") && detail::labels(j.at("points"), where + ".points") != base.points())
        detail::bad_json(where + ".points", "must repeat the base points");
    auto table = detail::table_from(detail::field(j, "values", where), base.points(), 2, where + ".values");
    return {std::move(base), std::move(table)};
}

// Assignment: diversity JSON on labels "0".."n-1".

inline Json to_json(const DiversityAssignment & r) { return to_json(to_diversity(r)); }

inline DiversityAssignment assignment_from_json(const Json & j, const std::string & where = "assignment")
{
    auto points = detail::point_list(j, where);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] != std::to_string(i))
            detail::bad_json(where + ".points", "labels must be \"0\"..\"n-1\" in order");
    auto table = detail::table_from(detail::field(j, "values", where), points, 2, where + ".values");
    return {points.size(), std::move(table)};
}

// Relational structure: {"universe": [...], "relations": [{"r", "n", "sets"}]}

inline Json key_json(const RelKey & k) { return Json{{"r", to_string(k.first)}, {"n", k.second}}; }

inline RelKey key_from_json(const Json & j, const std::string & where)
{
    return {detail::rational(detail::field(j, "r", where), where + ".r"),
        detail::count(detail::field(j, "n", where), where + ".n")};
}

inline Json to_json(const RelStructure & s)
{
    Json rels = Json::array();
    for (auto & [k, sets] : s.relations) {
        auto entry = key_json(k);
        std::vector<Mask> ordered(sets.begin(), sets.end());
        std::sort(ordered.begin(), ordered.end(), canonical_less);
        Json js = Json::array();
        for (auto m : ordered)
            js.push_back(detail::labels_json(s.universe, m));
        entry["sets"] = js;
        rels.push_back(entry);
    }
    return Json{{"universe", s.universe}, {"relations", rels}};
}

inline RelStructure relstruct_from_json(const Json & j, const std::string & where = "structure")
{
    RelStructure s{detail::labels(detail::field(j, "universe", where), where + ".universe"), {}};
    if (s.universe.size() > max_points)
        detail::bad_json(where + ".universe", "more than " + std::to_string(max_points) + " points");
    auto & rels = detail::field(j, "relations", where);
    for (std::size_t i = 0; i < rels.size(); ++i) {
        auto at = where + ".relations[" + std::to_string(i) + "]";
        auto k = key_from_json(rels[i], at);
        auto & sets = detail::field(rels[i], "sets", at);
        for (std::size_t t = 0; t < sets.size(); ++t) {
            auto st = at + ".sets[" + std::to_string(t) + "]";
            Mask m = detail::mask_in(s.universe, detail::labels(sets[t], st), st);
            if (static_cast<std::size_t>(popcount(m)) != k.second)
                detail::bad_json(st, "set size differs from n");
            s.add(k, m);
        }
        s.relations[k];
    }
    return s;
}

inline Json to_json(const Configuration & a)
{
    Json body = Json::array();
    for (auto & k : a.body)
        body.push_back(key_json(k));
    return Json{{"head", key_json(a.head)}, {"body", body}};
}

inline Configuration configuration_from_json(const Json & j, const std::string & where = "configuration")
{
    Configuration a{key_from_json(detail::field(j, "head", where), where + ".head"), {}};
    auto & body = detail::field(j, "body", where);
    for (std::size_t i = 0; i < body.size(); ++i)
        a.body.push_back(key_from_json(body[i], where + ".body[" + std::to_string(i) + "]"));
    std::sort(a.body.begin(), a.body.end());
    return a;
}

inline Json to_json(const ForbiddenStructure & f)
{
    Json fam = Json::array();
    for (auto m : f.family)
        fam.push_back(detail::labels_json(f.m.universe, m));
    return Json{{"alpha", to_json(f.alpha)}, {"family", fam}, {"structure", to_json(f.m)}};
}

inline Json to_json(const TFreeResult & r, const RelStructure & c)
{
    Json out{{"free", r.free}};
    if (r.witness) {
        auto & w = *r.witness;
        Json fam = Json::array(), h = Json::object();
        for (auto m : w.family)
            fam.push_back(detail::labels_json(w.m.universe, m));
        for (std::size_t i = 0; i < w.h.size(); ++i)
            h[w.m.universe[i]] = c.universe[w.h[i]];
        out["witness"] = Json{{"alpha", to_json(w.alpha)}, {"family", fam}, {"structure", to_json(w.m)}, {"h", h}};
    }
    return out;
}

// Partial maps: {label: label} objects in domain order.

inline Json map_json(const FiniteDiversity & d, const PartialIso & p)
{
    Json m = Json::object();
    for (auto [x, y] : p)
        m[d.label(x)] = d.label(y);
    return m;
}

inline PartialIso partial_from_json(const FiniteDiversity & d, const Json & j, const std::string & where)
{
    if (! j.is_object())
        detail::bad_json(where, "expected an object of label pairs");
    PartialIso p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto x = d.index_of(it.key());
        auto y = d.index_of(detail::text(it.value(), where + "." + it.key()));
        if (! x || ! y)
            detail::bad_json(where, "unknown label in pair " + it.key());
        p.emplace_back(*x, *y);
    }
    std::sort(p.begin(), p.end());
    return p;
}

inline Json point_map_json(const FiniteDiversity & d, const PointMap & g)
{
    Json m = Json::object();
    for (std::size_t i = 0; i < g.size(); ++i)
        m[d.label(i)] = d.label(g[i]);
    return m;
}

inline PointMap point_map_from_json(const FiniteDiversity & d, const Json & j, const std::string & where)
{
    auto p = partial_from_json(d, j, where);
    if (p.size() != d.size())
        detail::bad_json(where, "map must be total");
    PointMap g(d.size());
    for (auto [x, y] : p)
        g[x] = y;
    return g;
}

// EPPA instance and certificate:
// {"a": diversity, "partials": [{label: label}], "b": diversity, "extensions": [{label: label}]}

struct EppaInstance
{
    FiniteDiversity a;
    std::vector<PartialIso> partials;
};

inline Json partials_json(const FiniteDiversity & a, const std::vector<PartialIso> & ps)
{
    Json out = Json::array();
    for (auto & p : ps)
        out.push_back(map_json(a, p));
    return out;
}

inline EppaInstance eppa_instance_from_json(const Json & j, const std::string & where = "instance")
{
    EppaInstance in{diversity_from_json(detail::field(j, "a", where), where + ".a"), {}};
    auto & ps = detail::field(j, "partials", where);
    for (std::size_t i = 0; i < ps.size(); ++i)
        in.partials.push_back(partial_from_json(in.a, ps[i], where + ".partials[" + std::to_string(i) + "]"));
    return in;
}

inline Json certificate_json(const EppaCertificate & c)
{
    Json ext = Json::array();
    for (auto & g : c.extensions)
        ext.push_back(point_map_json(c.b, g));
    return Json{{"b", to_json(c.b)}, {"extensions", ext}};
}

inline EppaCertificate certificate_from_json(const Json & j, const std::string & where = "certificate")
{
    EppaCertificate c{diversity_from_json(detail::field(j, "b", where), where + ".b"), {}};
    auto & ext = detail::field(j, "extensions", where);
    for (std::size_t i = 0; i < ext.size(); ++i) {
        auto at = where + ".extensions[" + std::to_string(i) + "]";
        auto p = partial_from_json(c.b, ext[i], at);
        // non-bijective maps are kept so verification can name the failure
        PointMap g(c.b.size(), 0);
        if (p.size() != c.b.size())
            detail::bad_json(at, "map must be total");
        for (auto [x, y] : p)
            g[x] = y;
        c.extensions.push_back(g);
    }
    return c;
}

// n-system: diversity fields plus "parts": [{"domain": [...], "map": {label: label}}]

inline Json to_json(const NSystem & s)
{
    auto j = to_json(s.diversity);
    Json parts = Json::array();
    for (auto & p : s.parts)
        parts.push_back(Json{{"domain", detail::labels_json(s.diversity.points(), domain_of(p))},
            {"map", map_json(s.diversity, p)}});
    j["parts"] = parts;
    return j;
}

inline NSystem system_from_json(const Json & j, const std::string & where = "system")
{
    NSystem s{diversity_from_json(j, where), {}};
    auto & parts = detail::field(j, "parts", where);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        auto at = where + ".parts[" + std::to_string(i) + "]";
        auto p = partial_from_json(s.diversity, detail::field(parts[i], "map", at), at + ".map");
        if (parts[i].contains("domain")) {
            auto dom = detail::mask_in(s.diversity.points(), detail::labels(parts[i].at("domain"), at + ".domain"),
                at + ".domain");
            if (dom != domain_of(p))
                detail::bad_json(at + ".domain", "differs from the keys of map");
        }
        s.parts.push_back(p);
    }
    return s;
}

// Approximant: build parameters, level sizes, diversity and extension log.

inline Json to_json(const Approximant & a)
{
    static const char * dedup[] = {"none", "exact", "type"};
    Json log = Json::array();
    for (auto & t : a.log) {
        auto support = a.diversity.labels_of(t.support);
        log.push_back(Json{{"level", t.level}, {"label", t.label}, {"support", support},
            {"values", detail::values_json(support, t.f, 1, false)}});
    }
    auto & o = a.options;
    return Json{{"level", a.level}, {"level_sizes", a.level_sizes}, {"truncated", a.truncated},
        {"options",
            {{"denom_max", o.bounds.denom_max}, {"value_max", to_string(o.bounds.value_max)},
                {"support_max", o.bounds.support_max}, {"dedup", dedup[static_cast<int>(o.dedup)]},
                {"point_cap", o.point_cap}, {"seed", o.seed}}},
        {"diversity", to_json(a.diversity)}, {"log", log}};
}

inline Approximant approximant_from_json(const Json & j, const std::string & where = "approximant")
{
    Approximant a;
    a.level = detail::count(detail::field(j, "level", where), where + ".level");
    for (auto & s : detail::field(j, "level_sizes", where))
        a.level_sizes.push_back(detail::count(s, where + ".level_sizes"));
    a.truncated = detail::field(j, "truncated", where).get<bool>();
    a.diversity = diversity_from_json(detail::field(j, "diversity", where), where + ".diversity");
    if (a.level_sizes.size() != a.level + 1 || a.level_sizes.back() != a.diversity.size())
        detail::bad_json(where + ".level_sizes", "inconsistent with level and diversity");
    auto & o = detail::field(j, "options", where);
    auto ow = where + ".options";
    a.options.bounds = {static_cast<std::int64_t>(detail::count(detail::field(o, "denom_max", ow), ow)),
        detail::rational(detail::field(o, "value_max", ow), ow),
        detail::count(detail::field(o, "support_max", ow), ow)};
    auto dd = detail::text(detail::field(o, "dedup", ow), ow + ".dedup");
    a.options.dedup = dd == "none" ? Dedup::none : dd == "type" ? Dedup::type : Dedup::exact;
    a.options.point_cap = detail::count(detail::field(o, "point_cap", ow), ow);
    a.options.seed = detail::field(o, "seed", ow).get<std::uint64_t>();
    auto & log = detail::field(j, "log", where);
    for (std::size_t i = 0; i < log.size(); ++i) {
        auto at = where + ".log[" + std::to_string(i) + "]";
        ExtensionTask t;
        t.level = detail::count(detail::field(log[i], "level", at), at + ".level");
        t.label = detail::text(detail::field(log[i], "label", at), at + ".label");
        auto support = detail::labels(detail::field(log[i], "support", at), at + ".support");
        t.support = detail::mask_in(a.diversity.points(), support, at + ".support");
        t.f = detail::table_from(detail::field(log[i], "values", at), support, 1, at + ".values");
        a.log.push_back(std::move(t));
    }
    return a;
}

// Metric: {"points": [...], "pairs": [{"set": [x, y], "value": "p/q"}, ...]}

inline Json to_json(const MetricTable & m)
{
    Json pairs = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            pairs.push_back(Json{{"set", {m.points[i], m.points[j]}}, {"value", to_string(m.at(i, j))}});
    return Json{{"points", m.points}, {"pairs", pairs}};
}

inline MetricTable metric_from_json(const Json & j, const std::string & where = "metric")
{
    MetricTable m{detail::point_list(j, where), {}};
    auto n = m.size();
    if (n > max_points)
        detail::bad_json(where + ".points", "more than " + std::to_string(max_points) + " points");
    m.d.assign(n * n, Rat(0));
    std::vector<bool> seen(n * n, false);
    auto & pairs = detail::field(j, "pairs", where);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto at = where + ".pairs[" + std::to_string(k) + "]";
        auto set = detail::labels(detail::field(pairs[k], "set", at), at + ".set");
        Mask s = detail::mask_in(m.points, set, at + ".set");
        if (popcount(s) != 2 || set.size() != 2)
            detail::bad_json(at + ".set", "expected two distinct points");
        auto ij = positions(s);
        if (seen[ij[0] * n + ij[1]])
            detail::bad_json(at, "pair listed twice");
        seen[ij[0] * n + ij[1]] = true;
        m.at(ij[0], ij[1]) = m.at(ij[1], ij[0]) = detail::rational(detail::field(pairs[k], "value", at), at + ".value");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            if (! seen[i * n + k])
                detail::bad_json(where + ".pairs", "no entry for {" + m.points[i] + "," + m.points[k] + "}");
    return m;
}

inline Json error_json(const std::string & code, const std::string & message, const std::string & witness = {})
{
    return Json{{"code", code}, {"message", message}, {"witness", witness}};
}

} // namespace diversity
