// Command-line surface for the library: analyze structures, classify
// relations and languages, solve instances, apply reductions, verify gadget
// and expander files, evaluate pp-formulas, and test supermodularity.
//
// Exit codes: 0 success, 1 refused precondition or malformed input, 2 budget
// exhaustion. All output is deterministic for fixed inputs and seed.

#include <maxcsp/maxcsp.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

auto read_file(const std::string & path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw maxcsp::contract_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

auto load_relation(const std::string & path) -> std::pair<std::string, maxcsp::relation>
{
    return maxcsp::parse_relation(read_file(path), path);
}

// `uses <name> <path>` lines resolve relative to the instance file
auto resolver_for(const std::string & instance_path) -> maxcsp::relation_resolver
{
    auto base = std::filesystem::path(instance_path).parent_path();
    return [base](const std::string & name, const std::string & path) -> maxcsp::relation {
        if (path.empty())
            throw maxcsp::contract_error("relation '" + name +
                "' needs an explicit path when it is not defined in the instance file");
        auto full = std::filesystem::path(path);
        if (full.is_relative())
            full = base / full;
        return maxcsp::parse_relation(read_file(full.string()), full.string()).second;
    };
}

auto load_instance(const std::string & path) -> maxcsp::instance
{
    return maxcsp::parse_instance(read_file(path), resolver_for(path), path);
}

auto yesno(bool b) -> const char * { return b ? "yes" : "no"; }

void analyze_relation(const std::string & name, const maxcsp::relation & r, int wnuf_bound,
    std::uint64_t budget)
{
    std::cout << "# analysis kind=relation name=" << name << "\n";
    std::cout << "domain " << r.domain_size() << "\n";
    std::cout << "arity " << r.arity() << "\n";
    std::cout << "tuples " << r.count() << "\n";
    std::cout << "valid " << yesno(r.is_valid()) << "\n";
    auto core = maxcsp::find_core(r);
    std::cout << "core-size " << core.core.at(0).domain_size() << "\n";
    std::cout << "already-core " << yesno(core.already_core) << "\n";
    auto lang = maxcsp::language(r.domain_size());
    lang.add(name, r);
    std::cout << "orbits " << maxcsp::orbits(lang).size() << "\n";
    if (r.arity() == 2 && ! r.is_valid()) {
        auto props = maxcsp::digraph_props(r);
        std::cout << "antisymmetric " << yesno(props.antisymmetric) << "\n";
        std::cout << "bipartite " << yesno(props.bipartite) << "\n";
        std::cout << "vertex-transitive " << yesno(props.vertex_transitive) << "\n";
        std::cout << "directed-cycle " << yesno(props.directed_cycle) << "\n";
        std::cout << "edges " << props.edge_count << "\n";
    }
    if (wnuf_bound >= 2) {
        auto rep = maxcsp::wnuf_search(lang, wnuf_bound, budget);
        std::cout << "wnuf "
                  << (rep.verdict == maxcsp::wnuf_verdict::found ? "found" : "none") << "\n";
        std::cout << "wnuf-arities " << maxcsp::io_detail::join(rep.searched_arities) << "\n";
        std::cout << "wnuf-budget-exhausted " << yesno(rep.budget_exhausted) << "\n";
        if (rep.witness)
            std::cout << maxcsp::serialize_operation(*rep.witness, "wnuf");
    }
}

void analyze_language(const maxcsp::language & lang, int wnuf_bound, std::uint64_t budget)
{
    std::cout << "# analysis kind=language\n";
    std::cout << "domain " << lang.domain_size() << "\n";
    std::cout << "size " << lang.size() << "\n";
    for (int i = 0; i < lang.size(); ++i) {
        const auto & r = lang.at(i);
        std::cout << "relation " << lang.name(i) << " arity=" << r.arity() << " tuples="
                  << r.count() << " valid=" << yesno(r.is_valid()) << "\n";
    }
    auto core = maxcsp::find_core(lang);
    std::cout << "core-size " << core.core.domain_size() << "\n";
    std::cout << "already-core " << yesno(core.already_core) << "\n";
    std::cout << "orbits " << maxcsp::orbits(lang).size() << "\n";
    if (wnuf_bound >= 2) {
        auto rep = maxcsp::wnuf_search(lang, wnuf_bound, budget);
        std::cout << "wnuf "
                  << (rep.verdict == maxcsp::wnuf_verdict::found ? "found" : "none") << "\n";
        std::cout << "wnuf-arities " << maxcsp::io_detail::join(rep.searched_arities) << "\n";
        std::cout << "wnuf-budget-exhausted " << yesno(rep.budget_exhausted) << "\n";
        if (rep.witness)
            std::cout << maxcsp::serialize_operation(*rep.witness, "wnuf");
    }
}

void analyze_instance(const maxcsp::instance & inst)
{
    std::cout << "# analysis kind=instance\n";
    std::cout << "domain " << inst.domain_size() << "\n";
    std::cout << "vars " << inst.num_vars() << "\n";
    std::cout << "constraints " << inst.num_constraints() << "\n";
    std::cout << "occurrence-bound " << maxcsp::occurrence_bound(inst) << "\n";
    std::cout << "language-size " << inst.lang().size() << "\n";
}

auto run(int argc, char ** argv) -> int
{
    CLI::App app{"finite-domain constraint language laboratory"};
    app.require_subcommand(1);

    std::string rel_path, lang_path, inst_path, pp_path, target_path, gadget_path;
    std::string expander_path, lattice_path;
    int wnuf_bound = 3;
    std::uint64_t budget = maxcsp::default_budget;
    std::uint64_t seed = 0;
    int degree = 6;
    std::int64_t max_occ = 3;
    int arity_cap = 3;

    auto * analyze = app.add_subcommand("analyze", "report structural properties of an input");
    analyze->add_option("--relation", rel_path, "relation file");
    analyze->add_option("--language", lang_path, "language file");
    analyze->add_option("--instance", inst_path, "instance file");
    analyze->add_option("--wnuf-bound", wnuf_bound, "search for a wnuf up to this arity");
    analyze->add_option("--budget", budget, "search node budget");

    auto * classify = app.add_subcommand("classify", "classify a relation or language and "
        "print its certificate");
    classify->add_option("--relation", rel_path, "relation file");
    classify->add_option("--language", lang_path, "language file");
    classify->add_option("--wnuf-bound", wnuf_bound, "wnuf search arity bound");
    classify->add_option("--budget", budget, "search node budget");
    classify->add_option("--seed", seed, "seed for randomized constructions");
    classify->add_option("--degree", degree, "expander degree for the gap demo");
    bool no_demo = false;
    classify->add_flag("--no-demo", no_demo, "skip the gap pipeline demonstration");

    auto * solve = app.add_subcommand("solve", "optimize an instance");
    solve->add_option("instance", inst_path, "instance file")->required();
    bool m_exact = false, m_exhaustive = false, m_approx = false;
    solve->add_flag("--exact", m_exact, "branch and bound with optimality proof (default)");
    solve->add_flag("--exhaustive", m_exhaustive, "full enumeration");
    solve->add_flag("--approx", m_approx, "derandomized conditional expectations");
    solve->add_option("--budget", budget, "search node budget");

    auto * reduce = app.add_subcommand("reduce", "apply an instance transformation");
    reduce->add_option("instance", inst_path, "instance file")->required();
    bool r_core = false, r_occ = false;
    reduce->add_flag("--core", r_core, "retract the language onto its core");
    reduce->add_flag("--occurrences", r_occ, "bound variable occurrences via expander clouds");
    reduce->add_option("--max-occ", max_occ, "occurrence threshold before clouding");
    reduce->add_option("--degree", degree, "expander degree");
    reduce->add_option("--seed", seed, "expander search seed");

    auto * verify = app.add_subcommand("verify", "check a gadget or expander file");
    verify->add_option("--gadget", gadget_path, "strict implementation file");
    verify->add_option("--expander", expander_path, "expander file");
    verify->add_option("--budget", budget, "verification budget");

    auto * ppdefine = app.add_subcommand("ppdefine", "evaluate a pp-formula or test "
        "definability");
    ppdefine->add_option("--language", lang_path, "language file")->required();
    ppdefine->add_option("--pp", pp_path, "pp-formula file to evaluate");
    ppdefine->add_option("--target", target_path, "relation file to test for definability");
    ppdefine->add_option("--arity-cap", arity_cap, "polymorphism arity cap for the test");
    ppdefine->add_option("--budget", budget, "search node budget");

    auto * supermod = app.add_subcommand("supermod", "test a predicate over a lattice");
    supermod->add_option("--lattice", lattice_path, "lattice file")->required();
    supermod->add_option("--relation", rel_path, "predicate file")->required();

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) {
        if (! rel_path.empty()) {
            auto [name, r] = load_relation(rel_path);
            analyze_relation(name, r, wnuf_bound, budget);
        }
        else if (! lang_path.empty())
            analyze_language(maxcsp::parse_language(read_file(lang_path), lang_path),
                wnuf_bound, budget);
        else if (! inst_path.empty())
            analyze_instance(load_instance(inst_path));
        else
            throw maxcsp::contract_error("analyze needs --relation, --language or --instance");
    }
    else if (classify->parsed()) {
        maxcsp::classify_options opts;
        opts.wnuf_bound = wnuf_bound;
        opts.budget = budget;
        opts.seed = seed;
        opts.expander_degree = degree;
        opts.attach_gap_demo = ! no_demo;
        maxcsp::certificate cert;
        if (! rel_path.empty())
            cert = maxcsp::classify_single_relation(load_relation(rel_path).second, opts);
        else if (! lang_path.empty())
            cert = maxcsp::classify_language(
                maxcsp::parse_language(read_file(lang_path), lang_path), opts);
        else
            throw maxcsp::contract_error("classify needs --relation or --language");
        std::cout << maxcsp::serialize_certificate(cert);
    }
    else if (solve->parsed()) {
        if (m_exact + m_exhaustive + m_approx > 1)
            throw maxcsp::contract_error("choose one of --exact, --exhaustive, --approx");
        auto inst = load_instance(inst_path);
        maxcsp::solve_result res;
        if (m_exhaustive)
            res = maxcsp::solve_exhaustive(inst, budget);
        else if (m_approx)
            res = maxcsp::solve_approx(inst);
        else
            res = maxcsp::solve_exact(inst, budget);
        std::cout << maxcsp::serialize_solve(res);
    }
    else if (reduce->parsed()) {
        if (r_core == r_occ)
            throw maxcsp::contract_error("choose exactly one of --core, --occurrences");
        auto inst = load_instance(inst_path);
        maxcsp::reduction_record rec;
        if (r_core) {
            auto core = maxcsp::find_core(inst.lang());
            rec = maxcsp::transfer_core(inst, core.pi);
        }
        else {
            // whole-domain equality keeps every cloud consistent regardless of
            // the value a solution picks
            maxcsp::relation eq(inst.domain_size(), 2);
            for (int v = 0; v < inst.domain_size(); ++v)
                eq.add({v, v});
            std::map<int, maxcsp::relation> eq_of_orbit{{0, eq}};
            std::map<int, int> var_orbit;
            auto occ = maxcsp::occurrence_counts(inst);
            for (int v = 0; v < inst.num_vars(); ++v)
                if (occ[v] > max_occ)
                    var_orbit[v] = 0;
            maxcsp::occ_bound_config cfg;
            cfg.max_occurrences = max_occ;
            cfg.degree = degree;
            cfg.seed = seed;
            rec = maxcsp::bound_occurrences(inst, eq_of_orbit, var_orbit, cfg);
        }
        std::cout << maxcsp::serialize_reduction(rec);
    }
    else if (verify->parsed()) {
        if (! gadget_path.empty()) {
            auto imp = maxcsp::parse_strict(read_file(gadget_path), gadget_path);
            auto chk = maxcsp::verify_strict(imp, budget);
            if (chk.ok)
                std::cout << "PASS alpha=" << imp.alpha << " p=" << imp.primary_arity
                          << " q=" << imp.aux_arity << " summands=" << imp.summands.size()
                          << "\n";
            else {
                std::cout << "FAIL " << chk.failure << "\n";
                if (chk.witness)
                    std::cout << "witness " << maxcsp::io_detail::join(*chk.witness) << "\n";
                return 1;
            }
        }
        else if (! expander_path.empty()) {
            auto g = maxcsp::parse_expander(read_file(expander_path), expander_path);
            auto chk = maxcsp::verify_expander(g);
            if (chk.ok)
                std::cout << "PASS m=" << g.vertices << " degree=" << g.degree << " edges="
                          << g.edges.size() << "\n";
            else {
                std::cout << "FAIL subset=" << chk.worst_subset << " cut=" << chk.worst_cut
                          << " demand=" << chk.worst_demand << "\n";
                return 1;
            }
        }
        else
            throw maxcsp::contract_error("verify needs --gadget or --expander");
    }
    else if (ppdefine->parsed()) {
        auto lang = maxcsp::parse_language(read_file(lang_path), lang_path);
        if (! pp_path.empty()) {
            auto phi = maxcsp::parse_pp(read_file(pp_path), pp_path);
            auto r = maxcsp::eval_pp(phi, lang, budget);
            std::cout << maxcsp::serialize_relation(r, "defined");
        }
        else if (! target_path.empty()) {
            auto [tname, target] = load_relation(target_path);
            auto v = maxcsp::definability_test(target, lang, arity_cap, budget);
            switch (v.status) {
            case maxcsp::definability_status::definable_with_witness:
                std::cout << "DEFINABLE\n" << maxcsp::serialize_pp(*v.witness);
                break;
            case maxcsp::definability_status::not_definable_certified:
                std::cout << "NOT_DEFINABLE\n"
                          << maxcsp::serialize_operation(*v.counterexample, "violating");
                break;
            case maxcsp::definability_status::unknown_at_bound:
                std::cout << "UNKNOWN bound=" << v.bound_used << "\n";
                break;
            }
            if (! v.note.empty())
                std::cout << "note " << v.note << "\n";
        }
        else
            throw maxcsp::contract_error("ppdefine needs --pp or --target");
    }
    else if (supermod->parsed()) {
        auto l = maxcsp::parse_lattice(read_file(lattice_path), lattice_path);
        auto [name, f] = load_relation(rel_path);
        auto full = maxcsp::is_supermodular(f, l);
        auto restricted = maxcsp::is_supermodular_restricted(f, l);
        auto two = maxcsp::recognize_2monotone(f, l);
        std::cout << "# supermod d=" << l.size() << " arity=" << f.arity() << "\n";
        std::cout << "supermodular " << yesno(full.ok) << "\n";
        if (! full.ok) {
            std::cout << "witness-a " << maxcsp::io_detail::join(full.a) << "\n";
            std::cout << "witness-b " << maxcsp::io_detail::join(full.b) << "\n";
        }
        std::cout << "restricted-pair " << yesno(restricted.ok) << "\n";
        std::cout << "2-monotone " << yesno(two.has_value()) << "\n";
    }
    return 0;
}

}

auto main(int argc, char ** argv) -> int
{
    try {
        return run(argc, argv);
    }
    catch (const maxcsp::budget_error & e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 2;
    }
    catch (const maxcsp::parse_error & e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    catch (const maxcsp::contract_error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
