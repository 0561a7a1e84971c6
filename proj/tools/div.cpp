// div: command-line front end for the diversity library.
//
// Exit codes: 0 success, 1 domain error or failed check (JSON error object on
// stderr), 2 usage or parse error.

#include <diversity/amalgam.hpp>
#include <diversity/json.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace diversity;

namespace {

/// Bad flags or unreadable input.
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// A check that ran and failed: the result still goes to stdout.
struct Rejected : DomainError
{
    Rejected(std::string out, std::string code, const std::string & message, std::string witness) :
        DomainError(std::move(code), message, std::move(witness)), output(std::move(out))
    {
    }
    std::string output;
};

struct Globals
{
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t bound = 1;
    std::string epsilon = "0";
    std::string out;
    std::string mode = "derived";
    bool strict = false;
    bool pseudo = false;
    bool text = false;

    Strictness strictness() const { return pseudo ? Strictness::pseudo : Strictness::strict; }
};

Json read_json(const std::string & path)
{
    std::ifstream in(path);
    if (! in)
        throw UsageError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error & e) {
        throw UsageError("'" + path + "' is not JSON: " + e.what());
    }
}

Rat rat_flag(const std::string & text, const std::string & name)
{
    try {
        return parse_rat(text);
    } catch (const std::exception & e) {
        throw UsageError(name + ": " + e.what());
    }
}

FiniteDiversity diversity_file(const std::string & path) { return diversity_from_json(read_json(path), path); }

/// B must equal X restricted to B's labels, listed in X's order.
Mask sub_support(const FiniteDiversity & x, const FiniteDiversity & b)
{
    Mask s = x.mask_of(b.points());
    if (! (restrict(x, s) == b))
        throw DomainError("base-mismatch", "map base is not the restriction of the diversity to its points");
    return s;
}

std::string witness_of(const ValidationReport & r, const FiniteDiversity & d)
{
    std::string w;
    for (auto m : r.violations.front().witness)
        w += (w.empty() ? "" : " ") + d.describe(m);
    return w;
}

std::vector<std::size_t> tuple_of(const FiniteDiversity & d, const std::vector<std::string> & labels)
{
    std::vector<std::size_t> t;
    for (auto & l : labels)
        t.push_back(d.require_index(l));
    return t;
}

Json labels_or_null(const FiniteDiversity & d, const std::optional<std::vector<std::size_t>> & t)
{
    if (! t)
        return nullptr;
    Json out = Json::array();
    for (auto i : *t)
        out.push_back(d.label(i));
    return out;
}

/// {label: label} from src labels to dst labels.
PointMap cross_map(const FiniteDiversity & src, const FiniteDiversity & dst, const Json & j, const std::string & where)
{
    if (! j.is_object() || j.size() != src.size())
        throw StructuralError(where + ": expected an object with one entry per source point");
    PointMap g(src.size());
    std::vector<bool> seen(src.size(), false);
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto x = src.index_of(it.key());
        if (! x || ! it.value().is_string())
            throw StructuralError(where + ": bad entry '" + it.key() + "'");
        auto y = dst.index_of(it.value().get<std::string>());
        if (! y)
            throw StructuralError(where + ": unknown target of '" + it.key() + "'");
        seen[*x] = true;
        g[*x] = *y;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw StructuralError(where + ": repeated source label");
    return g;
}

Json cross_map_json(const FiniteDiversity & src, const FiniteDiversity & dst, const PointMap & g)
{
    Json out = Json::object();
    for (std::size_t i = 0; i < g.size(); ++i)
        out[src.label(i)] = dst.label(g[i]);
    return out;
}

/// Plain {b, extensions} or the output of `eppa search`.
EppaCertificate certificate_file(const std::string & path)
{
    auto j = read_json(path);
    if (! j.contains("certificate"))
        return certificate_from_json(j, path);
    if (j["certificate"].is_null())
        throw DomainError("no-certificate", "'" + path + "' records a search that found no certificate");
    return certificate_from_json(j["certificate"], path + ".certificate");
}

RelStructure structure_file(const std::string & path, const Json & j)
{
    if (j.contains("universe"))
        return relstruct_from_json(j, path);
    return to_relstruct(diversity_from_json(j, path)).second;
}

Json embedding_json(const EmbeddingVerdict & v, const NSystem & src)
{
    Json out{{"ok", v.ok}};
    if (! v.ok) {
        out["failed"] = v.failed;
        out["part"] = v.part ? Json(*v.part) : Json(nullptr);
        out["point"] = v.point ? Json(src.diversity.label(*v.point)) : Json(nullptr);
    }
    return out;
}

void emit(const Globals & g, const std::string & text)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (! f)
        throw UsageError("cannot write '" + g.out + "'");
    f << text;
}

std::string render(const Json & j) { return j.dump(2) + "\n"; }

void report_error(const std::string & code, const std::string & message, const std::string & witness = {})
{
    std::cerr << error_json(code, message, witness).dump() << "\n";
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Exact computations with finite diversities"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--threads", g.threads, "Worker threads for validation")->check(CLI::Range(1u, 256u));
    app.add_option("--bound", g.bound, "Search bound (new EPPA points, extra cover blocks)");
    app.add_option("--epsilon", g.epsilon, "Tolerance p/q");
    app.add_option("--out", g.out, "Write the result here instead of stdout");
    app.add_option("--mode", g.mode, "Validation route")->check(CLI::IsMember({"derived", "direct"}));
    auto strict_flag = app.add_flag("--strict", g.strict, "Require positive values on sets of size 2 or more");
    app.add_flag("--pseudo", g.pseudo, "Allow zero values on larger sets")->excludes(strict_flag);
    app.add_flag("--text", g.text, "Human-readable output where supported");

    std::function<std::string()> action;
    auto json_action = [&](std::function<Json()> fn) {
        return [&action, fn] { action = [fn] { return render(fn()); }; };
    };

    // core ------------------------------------------------------------------
    std::string file, file2;
    auto validate_cmd = app.add_subcommand("validate", "Check the diversity axioms");
    validate_cmd->add_option("file", file, "Diversity JSON")->required();
    validate_cmd->callback([&] {
        action = [&] {
            auto d = diversity_file(file);
            ValidateOptions opt{g.mode == "direct" ? Mode::direct : Mode::derived, g.strictness(), g.threads};
            auto r = validate(d, opt);
            auto text = g.text ? describe(r, d) : render(to_json(r, d));
            if (! r.valid)
                throw Rejected(text, "invalid-diversity", "violates " + r.violations.front().axiom,
                    witness_of(r, d));
            return text;
        };
    });

    auto metric_cmd = app.add_subcommand("metric", "Induced metric");
    metric_cmd->add_option("file", file, "Diversity JSON")->required();
    metric_cmd->callback(json_action([&] { return to_json(induced_metric(diversity_file(file))); }));

    auto diam_cmd = app.add_subcommand("diam", "Diameter diversity of a metric");
    diam_cmd->add_option("file", file, "Metric JSON")->required();
    diam_cmd->callback(json_action([&] { return to_json(diameter_diversity(metric_from_json(read_json(file), file))); }));

    std::vector<std::string> points;
    auto restrict_cmd = app.add_subcommand("restrict", "Subdiversity on some points");
    restrict_cmd->add_option("file", file, "Diversity JSON")->required();
    restrict_cmd->add_option("--points", points, "Comma-separated labels")->required()->delimiter(',');
    restrict_cmd->callback(json_action([&] { return to_json(restrict(diversity_file(file), points)); }));

    std::string candidate;
    auto iso_cmd = app.add_subcommand("iso", "Find or verify an isoversity");
    iso_cmd->add_option("first", file, "Diversity JSON")->required();
    iso_cmd->add_option("second", file2, "Diversity JSON")->required();
    iso_cmd->add_option("--candidate", candidate, "JSON {label: label} to verify");
    iso_cmd->callback(json_action([&] {
        auto a = diversity_file(file), b = diversity_file(file2);
        std::optional<PointMap> cand;
        if (! candidate.empty()) {
            if (a.size() != b.size())
                return Json{{"isoversity", nullptr}};
            cand = cross_map(a, b, read_json(candidate), candidate);
        }
        auto r = find_isoversity(a, b, cand);
        return Json{{"isoversity", r ? cross_map_json(a, b, *r) : Json(nullptr)}};
    }));

    // amalgam ---------------------------------------------------------------
    auto amalgam_cmd = app.add_subcommand("amalgam", "Free amalgams and disjoint sums");
    amalgam_cmd->require_subcommand(1);
    std::string cover = "reduced";
    auto free_cmd = amalgam_cmd->add_subcommand("free", "Free amalgam over the shared points");
    free_cmd->add_option("first", file, "Diversity JSON")->required();
    free_cmd->add_option("second", file2, "Diversity JSON")->required();
    free_cmd->add_option("--cover", cover, "Cover search")->check(CLI::IsMember({"reduced", "exhaustive"}));
    free_cmd->callback(json_action([&] {
        AmalgamOptions opt{cover == "exhaustive" ? CoverMode::exhaustive : CoverMode::reduced, g.bound + 1};
        return to_json(free_amalgam(diversity_file(file), diversity_file(file2), opt));
    }));

    std::string constant;
    auto sum_cmd = amalgam_cmd->add_subcommand("sum", "Disjoint sum with a constant on mixed sets");
    sum_cmd->add_option("first", file, "Diversity JSON")->required();
    sum_cmd->add_option("second", file2, "Diversity JSON")->required();
    sum_cmd->add_option("--n", constant, "Mixed value p/q (default: larger total + 1)");
    sum_cmd->callback(json_action([&] {
        auto a = diversity_file(file), b = diversity_file(file2);
        Rat n = constant.empty() ? std::max(a.total(), b.total()) + Rat(1) : rat_flag(constant, "--n");
        return to_json(disjoint_sum(a, b, n));
    }));

    // admissible maps -------------------------------------------------------
    auto adm_cmd = app.add_subcommand("adm", "Admissible maps");
    adm_cmd->require_subcommand(1);

    auto check_cmd = adm_cmd->add_subcommand("check", "Check admissibility");
    check_cmd->add_option("map", file, "Admissible-map JSON")->required();
    check_cmd->callback([&] {
        action = [&] {
            auto f = admissible_from_json(read_json(file), file);
            auto r = is_admissible(f);
            if (! r.valid)
                throw Rejected(render(to_json(r, f.base)), "not-admissible", "violates " + r.violations.front().axiom,
                    witness_of(r, f.base));
            return render(to_json(r, f.base));
        };
    });

    std::string onto, label;
    auto extend_cmd = adm_cmd->add_subcommand("extend", "Extend a map to a larger base, or realize it by a new point");
    extend_cmd->add_option("map", file, "Admissible-map JSON")->required();
    extend_cmd->add_option("--onto", onto, "Diversity JSON containing the map's base");
    extend_cmd->add_option("--label", label, "Emit the one-point extension with this new label");
    extend_cmd->callback(json_action([&] {
        auto f = admissible_from_json(read_json(file), file);
        if (onto.empty() && label.empty())
            throw UsageError("extend needs --onto, --label or both");
        if (! onto.empty()) {
            auto x = diversity_file(onto);
            f = extend_support(x, sub_support(x, f.base), f.table);
        }
        if (label.empty())
            return to_json(f);
        return to_json(one_point_extension(f.base, f, label));
    }));

    std::string point;
    auto kappa_cmd = adm_cmd->add_subcommand("kappa", "The map A -> value of A with the point");
    kappa_cmd->add_option("file", file, "Diversity JSON")->required();
    kappa_cmd->add_option("point", point, "Point label")->required();
    kappa_cmd->callback(json_action([&] { return to_json(kappa(diversity_file(file), point)); }));

    std::vector<std::string> maps;
    auto hat_cmd = adm_cmd->add_subcommand("hatdelta", "Diversity value of a family of maps");
    hat_cmd->add_option("maps", maps, "Admissible-map JSON files");
    hat_cmd->callback(json_action([&] {
        std::vector<AdmissibleMap> family;
        for (auto & m : maps)
            family.push_back(admissible_from_json(read_json(m), m));
        Rat v = family.size() == 2 && g.mode == "direct" ? hat_delta_general(family) : hat_delta(family);
        return Json{{"value", to_string(v)}};
    }));

    auto push_cmd = adm_cmd->add_subcommand("push", "Push a map forward along an autoversity");
    push_cmd->add_option("map", file, "Admissible-map JSON")->required();
    push_cmd->add_option("autoversity", file2, "JSON {label: label} on the base")->required();
    push_cmd->callback(json_action([&] {
        auto f = admissible_from_json(read_json(file), file);
        return to_json(pushforward(point_map_from_json(f.base, read_json(file2), file2), f));
    }));

    auto probe_cmd = adm_cmd->add_subcommand("probe", "Find a point realizing a map within --epsilon");
    probe_cmd->add_option("file", file, "Diversity JSON")->required();
    probe_cmd->add_option("map", file2, "Admissible-map JSON over a subdiversity")->required();
    probe_cmd->callback(json_action([&] {
        auto d = diversity_file(file);
        auto f = admissible_from_json(read_json(file2), file2);
        auto x = extension_property_probe(d, sub_support(d, f.base), f.table, rat_flag(g.epsilon, "--epsilon"));
        return Json{{"point", x ? Json(d.label(*x)) : Json(nullptr)}};
    }));

    // fraisse ---------------------------------------------------------------
    auto fraisse_cmd = app.add_subcommand("fraisse", "Age catalogs and approximants");
    fraisse_cmd->require_subcommand(1);
    std::size_t size_max = 2, levels = 1, support_max = 1, point_cap = max_points, extra_levels = 0;
    std::int64_t denom_max = 1;
    std::string value_max = "2", dedup = "exact";

    auto age_cmd = fraisse_cmd->add_subcommand("age", "All diversities within bounds, up to isomorphism");
    age_cmd->add_option("--size-max", size_max, "Largest size");
    age_cmd->add_option("--denom-max", denom_max, "Largest denominator")->check(CLI::PositiveNumber);
    age_cmd->add_option("--value-max", value_max, "Largest value p/q");
    age_cmd->callback(json_action([&] {
        auto cat = enumerate_age(size_max, denom_max, rat_flag(value_max, "--value-max"));
        Json list = Json::array();
        for (auto & d : cat.structures)
            list.push_back(to_json(d));
        return Json{{"count", cat.structures.size()}, {"structures", list}};
    }));

    auto build_cmd = fraisse_cmd->add_subcommand("build", "Build an approximant level by level");
    build_cmd->add_option("--levels", levels, "Levels to build");
    build_cmd->add_option("--denom-max", denom_max, "Largest task denominator")->check(CLI::PositiveNumber);
    build_cmd->add_option("--value-max", value_max, "Largest task value p/q");
    build_cmd->add_option("--support-max", support_max, "Largest task support");
    build_cmd->add_option("--dedup", dedup, "Task deduplication")->check(CLI::IsMember({"none", "exact", "type"}));
    build_cmd->add_option("--point-cap", point_cap, "Stop adding points past this size");
    build_cmd->callback(json_action([&] {
        BuildOptions opt{{denom_max, rat_flag(value_max, "--value-max"), support_max},
            dedup == "none" ? Dedup::none : dedup == "type" ? Dedup::type : Dedup::exact, point_cap, g.seed};
        return to_json(build_approximant(levels, opt));
    }));

    auto fprobe_cmd = fraisse_cmd->add_subcommand("probe", "One back-and-forth step for a partial map");
    fprobe_cmd->add_option("approximant", file, "Approximant JSON")->required();
    fprobe_cmd->add_option("map", file2, "JSON {label: label}")->required();
    fprobe_cmd->add_option("--extra-levels", extra_levels, "Levels to add before searching");
    fprobe_cmd->callback(json_action([&] {
        auto a = approximant_from_json(read_json(file), file);
        auto p = partial_from_json(a.diversity, read_json(file2), file2);
        auto r = ultrahomogeneity_probe(a, p, extra_levels);
        auto & d = r.grown.diversity;
        return Json{{"points", d.size()}, {"extended", r.extended ? map_json(d, *r.extended) : Json(nullptr)},
            {"blocking", r.blocking ? Json(d.label(*r.blocking)) : Json(nullptr)}};
    }));

    // eppa ------------------------------------------------------------------
    auto eppa_cmd = app.add_subcommand("eppa", "Relational encoding and partial-map extension");
    eppa_cmd->require_subcommand(1);
    std::string route = "forbidden";
    std::size_t budget = 5000000;

    auto tfree_cmd = eppa_cmd->add_subcommand("tfree", "Look for a weak homomorphism from a forbidden structure");
    tfree_cmd->add_option("file", file, "Structure or diversity JSON")->required();
    tfree_cmd->add_option("--route", route, "Check route")->check(CLI::IsMember({"forbidden", "cover"}));
    tfree_cmd->callback(json_action([&] {
        auto c = structure_file(file, read_json(file));
        return to_json(is_t_free(c, signature_of(c), route == "cover" ? TRoute::cover : TRoute::forbidden), c);
    }));

    auto forbidden_cmd = eppa_cmd->add_subcommand("forbidden",
        "Forbidden structures of a configuration, or the configurations of a signature");
    forbidden_cmd->add_option("file", file, "Configuration, structure or diversity JSON")->required();
    forbidden_cmd->callback(json_action([&] {
        auto j = read_json(file);
        Json list = Json::array();
        if (j.contains("head")) {
            for (auto & f : enumerate_forbidden(configuration_from_json(j, file)))
                list.push_back(to_json(f));
            return Json{{"forbidden", list}};
        }
        auto sig = signature_of(structure_file(file, j));
        Json keys = Json::array();
        for (auto & k : sig)
            keys.push_back(key_json(k));
        for (auto & a : enumerate_configurations(sig))
            list.push_back(to_json(a));
        return Json{{"signature", keys}, {"configurations", list}};
    }));

    auto deltab_cmd = eppa_cmd->add_subcommand("deltab", "Diversity on the component of some points");
    deltab_cmd->add_option("file", file, "Structure or diversity JSON")->required();
    deltab_cmd->add_option("--points", points, "Comma-separated labels (default: all)")->delimiter(',');
    deltab_cmd->callback(json_action([&] {
        auto c = structure_file(file, read_json(file));
        Mask b = full_mask(c.size());
        if (! points.empty())
            b = component_B(c, detail::mask_in(c.universe, points, "--points"));
        return to_json(delta_B_from(c, b));
    }));

    auto search_cmd = eppa_cmd->add_subcommand("search", "Bounded search for an extension certificate");
    search_cmd->add_option("instance", file, "JSON {a, partials} or a system")->required();
    search_cmd->add_option("--denom-max", denom_max, "Largest denominator of new values")->check(CLI::PositiveNumber);
    search_cmd->add_option("--value-max", value_max, "Largest new value p/q");
    search_cmd->add_option("--budget", budget, "Candidate limit");
    search_cmd->add_option("--suffix", label, "Append to the labels of new points");
    search_cmd->callback(json_action([&] {
        auto j = read_json(file);
        EppaInstance in;
        if (j.contains("parts")) {
            auto s = system_from_json(j, file);
            in = {s.diversity, s.parts};
        }
        else
            in = eppa_instance_from_json(j, file);
        auto grid = value_grid(denom_max, rat_flag(value_max, "--value-max"));
        for (Mask m = 0; m <= in.a.full(); ++m)
            if (popcount(m) >= 2)
                grid.push_back(in.a[m]);
        auto r = brute_force_eppa(in.a, in.partials, g.bound, grid, budget);
        if (r.certificate && ! label.empty())
            r.certificate = suffix_fresh(*r.certificate, in.a.size(), label);
        return Json{{"certificate", r.certificate ? certificate_json(*r.certificate) : Json(nullptr)},
            {"candidates", r.candidates}, {"exhausted", r.exhausted}};
    }));

    auto verify_cmd = eppa_cmd->add_subcommand("verify", "Check a certificate against its instance");
    verify_cmd->add_option("file", file, "JSON {a, partials, b, extensions}")->required();
    verify_cmd->callback([&] {
        action = [&] {
            auto j = read_json(file);
            auto in = eppa_instance_from_json(j, file);
            auto v = verify_eppa(certificate_from_json(j, file), in.a, in.partials);
            Json out{{"ok", v.ok}};
            if (! v.ok) {
                out["failed"] = v.failed;
                throw Rejected(render(out), "eppa-verification", "certificate fails the " + v.failed + " check", v.failed);
            }
            return render(out);
        };
    });

    // systems ---------------------------------------------------------------
    auto systems_cmd = app.add_subcommand("systems", "Diversities with partial isoversities");
    systems_cmd->require_subcommand(1);

    auto jep_cmd = systems_cmd->add_subcommand("jep", "Disjoint join of two systems");
    jep_cmd->add_option("first", file, "System JSON")->required();
    jep_cmd->add_option("second", file2, "System JSON")->required();
    jep_cmd->add_option("--n", constant, "Mixed value p/q (default: larger total + 1)");
    jep_cmd->callback(json_action([&] {
        auto a = system_from_json(read_json(file), file), b = system_from_json(read_json(file2), file2);
        std::optional<Rat> n;
        if (! constant.empty())
            n = rat_flag(constant, "--n");
        return to_json(jep_join(a, b, n));
    }));

    std::string cert;
    auto wapbase_cmd = systems_cmd->add_subcommand("wapbase", "System of full autoversities from a certificate");
    wapbase_cmd->add_option("system", file, "System JSON")->required();
    wapbase_cmd->add_option("certificate", cert, "JSON {b, extensions}")->required();
    wapbase_cmd->callback(json_action([&] {
        return to_json(wap_base(system_from_json(read_json(file), file), certificate_file(cert)));
    }));

    std::vector<std::string> wap_files;
    auto wapamalg_cmd = systems_cmd->add_subcommand("wapamalg", "Glue two extensions over a base system");
    wapamalg_cmd->add_option("files", wap_files, "base c1 c2 e1 e2")->required()->expected(5);
    wapamalg_cmd->callback(json_action([&] {
        auto sys = [&](std::size_t i) { return system_from_json(read_json(wap_files[i]), wap_files[i]); };
        auto crt = [&](std::size_t i) { return certificate_file(wap_files[i]); };
        return to_json(wap_amalgamate(sys(0), sys(1), sys(2), crt(3), crt(4)));
    }));

    std::string phi;
    auto sverify_cmd = systems_cmd->add_subcommand("verify", "Check a system embedding");
    sverify_cmd->add_option("source", file, "System JSON")->required();
    sverify_cmd->add_option("target", file2, "System JSON")->required();
    sverify_cmd->add_option("--map", phi, "JSON {label: label} (default: inclusion by labels)");
    sverify_cmd->callback([&] {
        action = [&] {
            auto s = system_from_json(read_json(file), file), t = system_from_json(read_json(file2), file2);
            if (s.arity() != t.arity())
                throw DomainError("arity-mismatch", "systems differ in part count");
            auto map = phi.empty() ? inclusion(s.diversity, t.diversity)
                                   : cross_map(s.diversity, t.diversity, read_json(phi), phi);
            auto v = verify_system_embedding(s, t, map);
            auto out = embedding_json(v, s);
            if (! v.ok)
                throw Rejected(render(out), "not-an-embedding", "embedding fails the " + v.failed + " check",
                    v.point ? s.diversity.label(*v.point) : v.failed);
            return render(out);
        };
    });

    // propinquity -----------------------------------------------------------
    auto prop_cmd = app.add_subcommand("prop", "Diversity assignments on tuples");
    prop_cmd->require_subcommand(1);

    auto dinf_cmd = prop_cmd->add_subcommand("dinf", "Largest difference over index sets");
    dinf_cmd->add_option("first", file, "Assignment JSON")->required();
    dinf_cmd->add_option("second", file2, "Assignment JSON")->required();
    dinf_cmd->callback(json_action([&] {
        return Json{{"value", to_string(d_infty(assignment_from_json(read_json(file), file),
                                  assignment_from_json(read_json(file2), file2)))}};
    }));

    std::string rule = "per-link";
    auto join_cmd = prop_cmd->add_subcommand("join", "Joint assignment on both tuples");
    join_cmd->add_option("first", file, "Assignment JSON")->required();
    join_cmd->add_option("second", file2, "Assignment JSON")->required();
    join_cmd->add_option("--rule", rule, "Crossing cost")->check(CLI::IsMember({"per-link", "once"}));
    join_cmd->callback(json_action([&] {
        auto r1 = assignment_from_json(read_json(file), file), r2 = assignment_from_json(read_json(file2), file2);
        auto j = joint_assignment(r1, r2, rule == "once" ? JointRule::once : JointRule::per_link);
        return Json{{"d_infty", to_string(d_infty(r1, r2))}, {"vertical", to_string(vertical_max(j))},
            {"valid", is_valid(to_diversity(j), g.strictness())}, {"assignment", to_json(j)}};
    }));

    std::vector<std::string> tuple_a, tuple_b;
    auto match_cmd = prop_cmd->add_subcommand("match", "Isomorphic copy of one tuple near another");
    match_cmd->add_option("file", file, "Diversity JSON")->required();
    match_cmd->add_option("--a", tuple_a, "Comma-separated labels")->required()->delimiter(',');
    match_cmd->add_option("--b", tuple_b, "Comma-separated labels")->required()->delimiter(',');
    match_cmd->callback(json_action([&] {
        auto d = diversity_file(file);
        return Json{{"match", labels_or_null(d, propinquity_match(d, tuple_of(d, tuple_a), tuple_of(d, tuple_b),
                                                   rat_flag(g.epsilon, "--epsilon")))}};
    }));

    // generators ------------------------------------------------------------
    std::string kind = "diversity";
    std::size_t n = 3, arity = 1;
    std::int64_t gen_denom = 4;
    std::string gen_value = "3";
    auto gen_cmd = app.add_subcommand("gen", "Random valid objects");
    gen_cmd->add_option("--kind", kind, "What to generate")
        ->check(CLI::IsMember({"diversity", "metric", "admissible", "assignment", "system"}));
    gen_cmd->add_option("--n", n, "Number of points")->check(CLI::Range(std::size_t{1}, max_points));
    gen_cmd->add_option("--denom-max", gen_denom, "Largest denominator")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--value-max", gen_value, "Largest value p/q");
    gen_cmd->add_option("--arity", arity, "Parts of a system");
    gen_cmd->callback(json_action([&] {
        auto v = rat_flag(gen_value, "--value-max");
        if (kind == "system")
            return to_json(random_system(g.seed, n, arity, gen_denom, v));
        auto d = random_diversity(g.seed, n, gen_denom, v);
        if (kind == "metric")
            return to_json(induced_metric(d));
        if (kind == "admissible")
            return to_json(random_admissible(g.seed, d, gen_denom));
        if (kind == "assignment")
            return to_json(to_assignment(d));
        return to_json(d);
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp & e) {
        return app.exit(e);
    } catch (const CLI::ParseError & e) {
        report_error("usage", e.what());
        return 2;
    }

    try {
        emit(g, action());
        return 0;
    } catch (const Rejected & e) {
        emit(g, e.output);
        report_error(e.code(), e.what(), e.witness());
        return 1;
    } catch (const DomainError & e) {
        report_error(e.code(), e.what(), e.witness());
        return 1;
    } catch (const UsageError & e) {
        report_error("usage", e.what());
        return 2;
    } catch (const StructuralError & e) {
        report_error("parse", e.what());
        return 2;
    } catch (const std::exception & e) {
        report_error("internal", e.what());
        return 2;
    }
}
