#pragma once

#include <diversity/amalgam.hpp>
#include <diversity/core.hpp>
#include <diversity/eppa.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace diversity {

/// A diversity with n partial isoversities, each stored as sorted (x, f(x)) pairs.
struct NSystem
{
    FiniteDiversity diversity;
    std::vector<PartialIso> parts;

    std::size_t arity() const { return parts.size(); }
    bool operator==(const NSystem &) const = default;
};

inline Mask domain_of(const PartialIso & p)
{
    Mask m = 0;
    for (auto [x, y] : p)
        m |= bit(x);
    return m;
}

inline Mask range_of(const PartialIso & p)
{
    Mask m = 0;
    for (auto [x, y] : p)
        m |= bit(y);
    return m;
}

inline std::optional<std::size_t> apply(const PartialIso & p, std::size_t x)
{
    for (auto [a, b] : p)
        if (a == x)
            return b;
    return std::nullopt;
}

/// The whole of a permutation as a part.
inline PartialIso as_part(const PointMap & g)
{
    PartialIso p;
    for (std::size_t i = 0; i < g.size(); ++i)
        p.emplace_back(i, g[i]);
    return p;
}

inline void require_system(const NSystem & s)
{
    for (std::size_t i = 0; i < s.parts.size(); ++i)
        if (! is_partial_isoversity(s.diversity, s.parts[i]))
            throw DomainError("invalid-system", "part " + std::to_string(i) + " is not a partial isoversity",
                std::to_string(i));
}

inline NSystem make_system(FiniteDiversity d, std::vector<PartialIso> parts)
{
    for (auto & p : parts)
        std::sort(p.begin(), p.end());
    NSystem s{std::move(d), std::move(parts)};
    require_system(s);
    return s;
}

/// Positions in dst of src's labels.
inline PointMap inclusion(const FiniteDiversity & src, const FiniteDiversity & dst)
{
    PointMap phi;
    for (auto & p : src.points()) {
        auto i = dst.index_of(p);
        if (! i)
            throw DomainError("missing-label", "label absent from the target", p);
        phi.push_back(*i);
    }
    return phi;
}

struct EmbeddingVerdict
{
    bool ok = true;
    /// "map", "values", "domain" or "commuting".
    std::string failed;
    std::optional<std::size_t> part;
    std::optional<std::size_t> point;
    bool operator==(const EmbeddingVerdict &) const = default;
};

/// Checks Φ preserves values and Φ ∘ f_i ⊂ g_i ∘ Φ for every part.
inline EmbeddingVerdict verify_system_embedding(const NSystem & src, const NSystem & dst, const PointMap & phi)
{
    if (src.arity() != dst.arity())
        throw DomainError("arity-mismatch",
            "systems have " + std::to_string(src.arity()) + " and " + std::to_string(dst.arity()) + " parts");
    std::size_t n = src.diversity.size();
    if (phi.size() != n)
        return {false, "map", std::nullopt, std::nullopt};
    Mask image = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (phi[i] >= dst.diversity.size() || contains(image, phi[i]))
            return {false, "map", std::nullopt, i};
        image |= bit(phi[i]);
    }
    for (Mask m = 1; m <= src.diversity.full(); ++m)
        if (src.diversity[m] != dst.diversity[map_mask(m, phi)])
            return {false, "values", std::nullopt, positions(m).front()};
    for (std::size_t i = 0; i < src.arity(); ++i)
        for (auto [a, fa] : src.parts[i]) {
            auto g = apply(dst.parts[i], phi[a]);
            if (! g)
                return {false, "domain", i, a};
            if (*g != phi[fa])
                return {false, "commuting", i, a};
        }
    return {};
}

/// Disjoint union with every mixed subset at n; part i is f_i ∪ g_i.
inline NSystem jep_join(const NSystem & s1, const NSystem & s2, std::optional<Rat> n = std::nullopt)
{
    if (s1.arity() != s2.arity())
        throw DomainError("arity-mismatch",
            "systems have " + std::to_string(s1.arity()) + " and " + std::to_string(s2.arity()) + " parts");
    Rat c = n ? *n : std::max(s1.diversity.total(), s2.diversity.total()) + Rat(1);
    NSystem out{disjoint_sum(s1.diversity, s2.diversity, c), s1.parts};
    std::size_t shift = s1.diversity.size();
    for (std::size_t i = 0; i < s2.arity(); ++i)
        for (auto [a, b] : s2.parts[i])
            out.parts[i].emplace_back(a + shift, b + shift);
    return out;
}

/// The certificate's space with each extension as a total part.
inline NSystem wap_base(const NSystem & s, const EppaCertificate & cert)
{
    auto v = verify_eppa(cert, s.diversity, s.parts);
    if (! v.ok)
        throw DomainError("eppa-verification", "certificate fails the " + v.failed + " check", v.failed);
    NSystem out{cert.b, {}};
    for (auto & g : cert.extensions)
        out.parts.push_back(as_part(g));
    return out;
}

/// Appends suffix to the labels of points from position keep on.
inline EppaCertificate suffix_fresh(EppaCertificate cert, std::size_t keep, const std::string & suffix)
{
    auto labels = cert.b.points();
    for (std::size_t i = keep; i < labels.size(); ++i)
        labels[i] += suffix;
    cert.b = relabel(cert.b, labels);
    return cert;
}

/// Free amalgam of e1.B and e2.B over base, with part i glued from the i-th
/// extensions of both certificates.
inline NSystem wap_amalgamate(const NSystem & base, const NSystem & c1, const NSystem & c2,
    const EppaCertificate & e1, const EppaCertificate & e2)
{
    std::size_t n = base.arity();
    if (c1.arity() != n || c2.arity() != n)
        throw DomainError("arity-mismatch", "systems differ in part count");
    for (auto [c, e] : {std::pair{&c1, &e1}, std::pair{&c2, &e2}}) {
        auto v = verify_eppa(*e, c->diversity, c->parts);
        if (! v.ok)
            throw DomainError("eppa-verification", "certificate fails the " + v.failed + " check", v.failed);
    }

    std::vector<std::string> common;
    for (auto & p : e1.b.points())
        if (e2.b.index_of(p))
            common.push_back(p);
    auto shared = base.diversity.points();
    if (std::is_permutation(common.begin(), common.end(), shared.begin(), shared.end()) == false
        || ! same_labeled(restrict(e1.b, shared), base.diversity)
        || ! same_labeled(restrict(e2.b, shared), base.diversity))
        throw DomainError("base-mismatch", "base is not the labeled intersection of the two extensions");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t x = 0; x < base.diversity.size(); ++x) {
            auto y = apply(base.parts[i], x);
            auto & lx = base.diversity.label(x);
            for (auto e : {&e1, &e2}) {
                auto ix = *e->b.index_of(lx);
                if (! y || e->b.label(e->extensions[i][ix]) != base.diversity.label(*y))
                    throw DomainError("restriction-mismatch",
                        "extension " + std::to_string(i) + " disagrees with the base part at " + lx,
                        std::to_string(i) + ":" + lx);
            }
        }

    NSystem out{free_amalgam(e1.b, e2.b), {}};
    auto & d = out.diversity;
    for (std::size_t i = 0; i < n; ++i) {
        PointMap g(d.size());
        for (std::size_t j = 0; j < d.size(); ++j) {
            auto & l = d.label(j);
            auto & e = e1.b.index_of(l) ? e1 : e2;
            g[j] = *d.index_of(e.b.label(e.extensions[i][*e.b.index_of(l)]));
        }
        if (! is_autoversity(d, g))
            throw DomainError("glue-not-autoversity", "glued part " + std::to_string(i) + " is not an autoversity",
                std::to_string(i));
        out.parts.push_back(as_part(g));
    }
    return out;
}

/// Random diversity with parts found by rejection; falls back to the identity on the chosen domain.
inline NSystem random_system(std::uint64_t seed, std::size_t n, std::size_t arity, std::int64_t denom_max = 2,
    const Rat & value_max = Rat(3))
{
    Rng rng(seed);
    NSystem s{random_diversity(rng.next(), n, denom_max, value_max), {}};
    for (std::size_t i = 0; i < arity; ++i) {
        Mask dom = static_cast<Mask>(rng.below(s.diversity.full() + 1));
        auto xs = positions(dom);
        PartialIso p;
        for (int attempt = 0; attempt < 32; ++attempt) {
            PointMap perm(n);
            for (std::size_t k = 0; k < n; ++k)
                perm[k] = k;
            for (std::size_t k = n; k > 1; --k)
                std::swap(perm[k - 1], perm[rng.below(k)]);
            p.clear();
            for (std::size_t k = 0; k < xs.size(); ++k)
                p.emplace_back(xs[k], perm[k]);
            if (is_partial_isoversity(s.diversity, p))
                break;
            p.clear();
            for (auto x : xs)
                p.emplace_back(x, x);
        }
        std::sort(p.begin(), p.end());
        s.parts.push_back(p);
    }
    return s;
}

} // namespace diversity
