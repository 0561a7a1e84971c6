#pragma once

#include "support.hpp"

#include <diversity/fraisse.hpp>
#include <diversity/katetov.hpp>
#include <diversity/systems.hpp>

#include <set>
#include <string>
#include <vector>

namespace testing_support {

/// One run of the WAP pipeline: s extends to base, base sits in c1 and c2,
/// and e1, e2 extend their parts.
struct WapFixture
{
    std::string name;
    NSystem s;
    EppaCertificate e0;
    NSystem c1, c2;
    EppaCertificate e1, e2;
};

inline std::vector<Rat> nonzero_values(const FiniteDiversity & d)
{
    std::set<Rat> vals(d.table().begin(), d.table().end());
    vals.erase(Rat(0));
    return {vals.begin(), vals.end()};
}

inline EppaCertificate certify(const NSystem & s, std::size_t bound, const std::string & suffix)
{
    auto r = brute_force_eppa(s.diversity, s.parts, bound, nonzero_values(s.diversity));
    if (! r.certificate)
        throw DomainError("no-certificate", "fixture has no certificate within the bound", suffix);
    return suffix_fresh(*r.certificate, s.diversity.size(), suffix);
}

/// base plus a cone point: δ(S ∪ {label}) = δ(S) + height for nonempty S.
inline NSystem add_cone(const NSystem & base, const Rat & height, const std::string & label)
{
    auto & d = base.diversity;
    AdmissibleMap f{d, std::vector<Rat>(d.table().size())};
    for (Mask m = 1; m <= d.full(); ++m)
        f.table[m] = d[m] + height;
    return {one_point_extension(d, f, label), base.parts};
}

inline WapFixture wap_fixture(std::string name, NSystem s, std::vector<std::pair<NSystem, NSystem>> sides)
{
    WapFixture w{std::move(name), std::move(s), {}, {}, {}, {}, {}};
    w.e0 = certify(w.s, 1, "");
    auto base = wap_base(w.s, w.e0);
    w.c1 = sides.empty() ? base : sides[0].first;
    w.c2 = sides.empty() ? base : sides[0].second;
    w.e1 = certify(w.c1, 6 - w.c1.diversity.size(), "_1");
    w.e2 = certify(w.c2, 6 - w.c2.diversity.size(), "_2");
    return w;
}

/// Swap of two points with various one-point extensions on either side.
inline std::vector<WapFixture> wap_fixtures()
{
    std::vector<WapFixture> out;
    auto two = make({"a", "b"}, {{{"a", "b"}, "1"}});
    NSystem swap{two, {{{0, 1}, {1, 0}}}};
    NSystem ident{two, {{{0, 0}, {1, 1}}}};
    out.push_back(wap_fixture("swap-trivial", swap, {}));
    out.push_back(wap_fixture("identity-trivial", ident, {}));

    auto base = wap_base(swap, certify(swap, 1, ""));
    NSystem even{make({"a", "b", "r"}, {{{"a", "b"}, "1"}, {{"a", "r"}, "1"}, {{"b", "r"}, "1"}, {{"a", "b", "r"}, "3/2"}}),
        base.parts};
    NSystem far{make({"a", "b", "s"}, {{{"a", "b"}, "1"}, {{"a", "s"}, "2"}, {{"b", "s"}, "2"}, {{"a", "b", "s"}, "3"}}),
        base.parts};
    NSystem skew{make({"a", "b", "r"}, {{{"a", "b"}, "1"}, {{"a", "r"}, "1"}, {{"b", "r"}, "2"}, {{"a", "b", "r"}, "2"}}),
        base.parts};
    NSystem skew2{make({"a", "b", "s"}, {{{"a", "b"}, "1"}, {{"a", "s"}, "2"}, {{"b", "s"}, "1"}, {{"a", "b", "s"}, "2"}}),
        base.parts};
    out.push_back(wap_fixture("swap-even-far", swap, {{even, far}}));
    out.push_back(wap_fixture("swap-skew", swap, {{skew, skew2}}));
    out.push_back(wap_fixture("swap-self", swap, {{skew, NSystem{relabel(skew.diversity, {"a", "b", "s"}), base.parts}}}));

    NSystem tri{d3(), {{{0, 1}, {1, 0}}, {{0, 1}, {1, 2}, {2, 0}}}};
    auto tb = wap_base(tri, certify(tri, 1, ""));
    out.push_back(wap_fixture("triangle-two-parts", tri,
        {{add_cone(tb, Rat(3, 2), "r"), add_cone(tb, Rat(2), "s")}}));
    return out;
}

} // namespace testing_support
