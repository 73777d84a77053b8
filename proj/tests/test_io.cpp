#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

using namespace maxcsp;

namespace {

struct failure {
    int line = 0;
    int column = 0;
    std::string message;
    bool threw = false;
};

template <typename F>
auto parse_failure(F && f) -> failure
{
    try {
        std::forward<F>(f)();
    }
    catch (const parse_error & e) {
        return failure{e.line, e.column, e.what(), true};
    }
    return failure{};
}

auto with_crlf(const std::string & text) -> std::string
{
    std::string out;
    for (char c : text) {
        if (c == '\n')
            out += '\r';
        out += c;
    }
    return out;
}

auto triangle() -> instance
{
    language lang(2);
    lang.add("neq", disequality(2));
    instance inst(lang, 3);
    inst.add_constraint("neq", {0, 1});
    inst.add_constraint("neq", {1, 2});
    inst.add_constraint("neq", {2, 0});
    return inst;
}

}

TEST_CASE("relations round-trip through their text form")
{
    auto [name, back] = parse_relation(serialize_relation(disequality(3), "n3"));
    CHECK(name == "n3");
    CHECK(back == disequality(3));

    // default name, canonical bytes
    auto text = serialize_relation(equality_relation(2));
    CHECK(text == "# relation name=r d=2 arity=2\n0 0\n1 1\n");
    CHECK(serialize_relation(parse_relation(text).second) == text);

    // empty relations keep their shape
    relation none(3, 2);
    auto [en, eb] = parse_relation(serialize_relation(none, "none"));
    CHECK(en == "none");
    CHECK(eb == none);
    CHECK(eb.domain_size() == 3);
    CHECK(eb.arity() == 2);

    // a missing final newline is tolerated
    auto [pn, pb] = parse_relation("# relation name=p d=2 arity=1\n0");
    CHECK(pn == "p");
    CHECK(pb.tuples() == std::vector<std::vector<int>>{{0}});

    // nullary relations have no text form
    CHECK_THROWS_AS(serialize_relation(relation{}), contract_error);
}

TEST_CASE("random relations survive the round trip byte for byte")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        int d = 1 + static_cast<int>(testutil::rng_below(rng, 4));
        int arity = 1 + static_cast<int>(testutil::rng_below(rng, 3));
        auto r = testutil::random_relation(rng, d, arity, false);
        auto text = serialize_relation(r, "x");
        auto [name, back] = parse_relation(text);
        CHECK(name == "x");
        CHECK(back == r);
        CHECK(serialize_relation(back, "x") == text);
    }
}

TEST_CASE("relation parse errors carry exact positions")
{
    auto wrong_kind = parse_failure([] {
        parse_relation("# operation name=f d=2 arity=1\n0 0\n1 1\n");
    });
    REQUIRE(wrong_kind.threw);
    CHECK(wrong_kind.message == "<input>:1:1: expected a relation block, got 'operation'");

    auto missing = parse_failure([] { parse_relation("# relation name=x d=2\n0\n"); });
    REQUIRE(missing.threw);
    CHECK(missing.message ==
        "<input>:1:1: block header 'relation' is missing the arity= field");

    auto bad_key = parse_failure([] { parse_relation("# relation name d=2 arity=1\n"); });
    REQUIRE(bad_key.threw);
    CHECK(bad_key.line == 1);
    CHECK(bad_key.column == 12);
    CHECK(bad_key.message == "<input>:1:12: expected key=value, got 'name'");

    auto out_of_domain = parse_failure([] {
        parse_relation("# relation name=x d=2 arity=2\n0 0\n0 2\n");
    });
    REQUIRE(out_of_domain.threw);
    CHECK(out_of_domain.line == 3);
    CHECK(out_of_domain.column == 3);
    CHECK(out_of_domain.message == "<input>:3:3: value 2 outside domain 0..1");

    auto wrong_width = parse_failure([] {
        parse_relation("# relation name=x d=2 arity=2\n0 0 1\n");
    });
    REQUIRE(wrong_width.threw);
    CHECK(wrong_width.line == 2);
    CHECK(wrong_width.message == "<input>:2:1: expected 2 values, got 3");

    auto misordered = parse_failure([] {
        parse_relation("# relation name=x d=2 arity=1\n1\n0\n");
    });
    REQUIRE(misordered.threw);
    CHECK(misordered.line == 3);
    CHECK(misordered.message ==
        "<input>:3:1: tuples must be listed in strictly ascending order");

    auto duplicate = parse_failure([] {
        parse_relation("# relation name=x d=2 arity=1\n0\n0\n");
    });
    REQUIRE(duplicate.threw);
    CHECK(duplicate.line == 3);

    auto trailing = parse_failure([] {
        parse_relation("# relation name=x d=2 arity=1\n0\n\n# relation name=y d=2 arity=1\n0\n");
    });
    REQUIRE(trailing.threw);
    CHECK(trailing.line == 4);
    CHECK(trailing.message == "<input>:4:1: trailing content after the relation block");

    auto empty = parse_failure([] { parse_relation(""); });
    CHECK(empty.threw);

    // the reported file name is whatever the caller passed
    auto named = parse_failure([] { parse_relation("junk\n", "things.rel"); });
    REQUIRE(named.threw);
    CHECK(named.message == "things.rel:1:1: expected a '#' block header");
}

TEST_CASE("operations round-trip and reject misordered tables")
{
    operation mx(3, 2);
    for (std::uint64_t idx = 0; idx < mx.table_size(); ++idx) {
        relation shape(3, 2);
        auto args = shape.decode(idx);
        mx.set(idx, std::max(args[0], args[1]));
    }
    auto text = serialize_operation(mx, "max");
    auto [name, back] = parse_operation(text);
    CHECK(name == "max");
    CHECK(back == mx);
    CHECK(serialize_operation(back, "max") == text);

    // rows walk the first argument fastest
    CHECK(text.substr(0, sizeof "# operation name=max d=3 arity=2\n0 0 0\n1 0 1\n2 0 2\n" - 1) ==
        "# operation name=max d=3 arity=2\n0 0 0\n1 0 1\n2 0 2\n");

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + static_cast<int>(testutil::rng_below(rng, 3));
        int arity = 1 + static_cast<int>(testutil::rng_below(rng, 2));
        operation f(d, arity);
        for (std::uint64_t idx = 0; idx < f.table_size(); ++idx)
            f.set(idx, static_cast<int>(testutil::rng_below(rng, d)));
        auto round = parse_operation(serialize_operation(f)).second;
        CHECK(round == f);
    }

    auto misordered = parse_failure([] {
        parse_operation("# operation name=f d=2 arity=1\n1 0\n0 1\n");
    });
    REQUIRE(misordered.threw);
    CHECK(misordered.line == 2);
    CHECK(misordered.message ==
        "<input>:2:1: rows must walk the argument tuples in ascending order; expected '0'");

    auto short_table = parse_failure([] {
        parse_operation("# operation name=f d=2 arity=1\n0 0\n");
    });
    REQUIRE(short_table.threw);
    CHECK(short_table.line == 2);
    CHECK(short_table.message == "<input>:2:1: operation table ended early: expected 2 rows");

    auto bad_value = parse_failure([] {
        parse_operation("# operation name=f d=2 arity=1\n0 5\n1 0\n");
    });
    REQUIRE(bad_value.threw);
    CHECK(bad_value.line == 2);
    CHECK(bad_value.column == 3);
    CHECK(bad_value.message == "<input>:2:3: value 5 outside domain 0..1");
}

TEST_CASE("languages round-trip with all their relations")
{
    language lang(3);
    lang.add("neq", disequality(3));
    relation u(3, 1);
    u.add({0});
    u.add({2});
    lang.add("u", u);

    auto text = serialize_language(lang);
    auto back = parse_language(text);
    CHECK(back == lang);
    CHECK(serialize_language(back) == text);

    // an empty language is just its header
    language bare(2);
    CHECK(serialize_language(bare) == "# language d=2 size=0\n");
    CHECK(parse_language(serialize_language(bare)) == bare);

    auto duplicate = parse_failure([] {
        parse_language("# language d=2 size=2\n"
                       "# relation name=a d=2 arity=1\n0\n"
                       "# relation name=a d=2 arity=1\n1\n");
    });
    REQUIRE(duplicate.threw);
    CHECK(duplicate.line == 4);
    CHECK(duplicate.message == "<input>:4:1: duplicate relation name 'a'");

    auto mismatch = parse_failure([] {
        parse_language("# language d=2 size=1\n"
                       "# relation name=a d=3 arity=1\n0\n");
    });
    REQUIRE(mismatch.threw);
    CHECK(mismatch.message ==
        "<input>:2:1: relation 'a' has domain size 3, language expects 2");
}

TEST_CASE("instances round-trip with inline relations in language order")
{
    auto inst = triangle();
    auto text = serialize_instance(inst);
    auto back = parse_instance(text);
    CHECK(back.domain_size() == 2);
    CHECK(back.num_vars() == 3);
    CHECK(back.num_constraints() == 3);
    CHECK(back.lang() == inst.lang());
    for (int i = 0; i < back.num_constraints(); ++i) {
        CHECK(back.constraints()[i].rel == inst.constraints()[i].rel);
        CHECK(back.constraints()[i].scope == inst.constraints()[i].scope);
    }
    CHECK(serialize_instance(back) == text);

    // multiplicity and repeated scope variables survive
    language lang(2);
    lang.add("e", equality_relation(2));
    instance multi(lang, 2);
    multi.add_constraint("e", {0, 1});
    multi.add_constraint("e", {0, 1});
    multi.add_constraint("e", {1, 1});
    auto mback = parse_instance(serialize_instance(multi));
    CHECK(mback.num_constraints() == 3);
    CHECK(mback.constraints()[1].scope == std::vector<int>{0, 1});
    CHECK(mback.constraints()[2].scope == std::vector<int>{1, 1});

    // an instance can have variables and no constraints at all
    instance idle(language(2), 4);
    CHECK(serialize_instance(idle) == "# instance d=2 vars=4\n");
    auto iback = parse_instance(serialize_instance(idle));
    CHECK(iback.num_vars() == 4);
    CHECK(iback.num_constraints() == 0);
}

TEST_CASE("instance parsing consults the resolver only for missing relations")
{
    int calls = 0;
    relation_resolver resolver = [&](const std::string & name, const std::string & path) {
        ++calls;
        CHECK(name == "n");
        CHECK(path == "data/n2.rel");
        return disequality(2);
    };

    auto inst = parse_instance(
        "# instance d=2 vars=2\n"
        "uses n data/n2.rel\n"
        "constraint n 0 1\n",
        resolver);
    CHECK(calls == 1);
    CHECK(inst.lang().at("n") == disequality(2));
    CHECK(inst.num_constraints() == 1);

    // a relation defined in the file shadows anything the resolver knows
    calls = 0;
    auto shadowed = parse_instance(
        "# relation name=n d=2 arity=2\n0 0\n1 1\n"
        "# instance d=2 vars=2\n"
        "uses n\n"
        "constraint n 0 1\n",
        resolver);
    CHECK(calls == 0);
    CHECK(shadowed.lang().at("n") == equality_relation(2));

    auto unresolved = parse_failure([] {
        parse_instance("# instance d=2 vars=1\nuses zap\n");
    });
    REQUIRE(unresolved.threw);
    CHECK(unresolved.line == 2);
    CHECK(unresolved.column == 6);
    CHECK(unresolved.message == "<input>:2:6: relation 'zap' is not defined in this file "
        "and no resolver was given");
}

TEST_CASE("instance parse errors carry exact positions")
{
    auto stray = parse_failure([] {
        parse_instance("0 1\n# instance d=2 vars=1\n");
    });
    REQUIRE(stray.threw);
    CHECK(stray.message == "<input>:1:1: expected a block header before data lines");

    auto late_uses = parse_failure([] {
        parse_instance("# relation name=a d=2 arity=1\n0\n"
                       "# instance d=2 vars=1\n"
                       "uses a\n"
                       "constraint a 0\n"
                       "uses a\n");
    });
    REQUIRE(late_uses.threw);
    CHECK(late_uses.line == 6);
    CHECK(late_uses.message == "<input>:6:1: 'uses' lines must precede all constraints");

    auto unknown = parse_failure([] {
        parse_instance("# instance d=2 vars=2\nconstraint zap 0 1\n");
    });
    REQUIRE(unknown.threw);
    CHECK(unknown.line == 2);
    CHECK(unknown.column == 12);
    CHECK(unknown.message == "<input>:2:12: constraint uses unknown relation 'zap'");

    auto out_of_range = parse_failure([] {
        parse_instance("# relation name=n d=3 arity=2\n1 0\n0 1\n"
                       "# instance d=3 vars=3\n"
                       "uses n\n"
                       "constraint n 0 5\n");
    });
    REQUIRE(out_of_range.threw);
    CHECK(out_of_range.line == 6);
    CHECK(out_of_range.column == 16);
    CHECK(out_of_range.message == "<input>:6:16: variable 5 outside 0..2");

    auto short_scope = parse_failure([] {
        parse_instance("# relation name=n d=2 arity=2\n0 1\n"
                       "# instance d=2 vars=2\n"
                       "uses n\n"
                       "constraint n 0\n");
    });
    REQUIRE(short_scope.threw);
    CHECK(short_scope.message == "<input>:5:1: relation 'n' needs 2 variables, got 1");

    auto junk_line = parse_failure([] {
        parse_instance("# instance d=2 vars=1\nponder 0\n");
    });
    REQUIRE(junk_line.threw);
    CHECK(junk_line.message ==
        "<input>:2:1: expected a 'uses' or 'constraint' line, got 'ponder'");
}

TEST_CASE("posets and lattices round-trip through their tables")
{
    auto vee = poset_from_pairs(3, {{0, 1}, {0, 2}});
    auto vtext = serialize_poset(vee);
    CHECK(vtext == "# poset d=3\n1 1 1\n0 1 0\n0 0 1\n");
    CHECK(parse_poset(vtext) == vee);

    poset antichain(4);
    CHECK(parse_poset(serialize_poset(antichain)) == antichain);

    for (int n : {1, 2, 3, 5}) {
        auto l = chain_lattice(n);
        auto round = parse_lattice(serialize_lattice(l));
        CHECK(round == l);
        CHECK(serialize_lattice(round) == serialize_lattice(l));
    }
    for (int n : {4, 5}) {
        auto l = diamond_lattice(n);
        CHECK(parse_lattice(serialize_lattice(l)) == l);
    }

    auto bad_entry = parse_failure([] {
        parse_poset("# poset d=2\n1 2\n0 1\n");
    });
    REQUIRE(bad_entry.threw);
    CHECK(bad_entry.message == "<input>:1:1: order entries must be 0 or 1");

    auto irreflexive = parse_failure([] {
        parse_poset("# poset d=2\n0 1\n0 1\n");
    });
    REQUIRE(irreflexive.threw);
    CHECK(irreflexive.message == "<input>:1:1: order must be reflexive");

    auto cyclic = parse_failure([] {
        parse_poset("# poset d=3\n1 1 0\n1 1 0\n0 0 1\n");
    });
    REQUIRE(cyclic.threw);
    CHECK(cyclic.message.find("not a partial order") != std::string::npos);

    auto short_table = parse_failure([] {
        parse_poset("# poset d=3\n1 1 1\n0 1 0\n");
    });
    REQUIRE(short_table.threw);
    CHECK(short_table.message.find("order table ended early") != std::string::npos);

    auto not_lattice = parse_failure([] {
        // meet table of the 2-chain, join table corrupted at (0,1)
        parse_lattice("# lattice d=2\n0 0\n0 1\n0 0\n1 1\n");
    });
    REQUIRE(not_lattice.threw);
    CHECK(not_lattice.message.find("not a lattice") != std::string::npos);

    auto wild_value = parse_failure([] {
        parse_lattice("# lattice d=2\n0 5\n0 1\n0 1\n1 1\n");
    });
    REQUIRE(wild_value.threw);
    CHECK(wild_value.message == "<input>:1:1: table entry 5 outside domain");
}

TEST_CASE("expander graphs round-trip as edge lists")
{
    expander k4;
    k4.vertices = 4;
    k4.degree = 3;
    k4.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

    auto text = serialize_expander(k4);
    auto back = parse_expander(text);
    CHECK(back.vertices == 4);
    CHECK(back.degree == 3);
    CHECK(back.edges == k4.edges);
    CHECK(serialize_expander(back) == text);

    auto bad_vertex = parse_failure([] {
        parse_expander("# expander m=3 degree=2\n0 9\n");
    });
    REQUIRE(bad_vertex.threw);
    CHECK(bad_vertex.line == 2);
    CHECK(bad_vertex.message == "<input>:2:1: vertex 9 outside 0..2");

    auto not_an_edge = parse_failure([] {
        parse_expander("# expander m=3 degree=2\n0 1 2\n");
    });
    REQUIRE(not_an_edge.threw);
    CHECK(not_an_edge.message == "<input>:2:1: expected an edge 'a b'");
}

TEST_CASE("pp formulas round-trip with free variables first")
{
    pp_formula f;
    f.free_count = 2;
    f.exist_count = 1;
    f.atoms.push_back(pp_atom{"a", {0, 2}});
    f.atoms.push_back(pp_atom{"b", {2, 1}});

    auto text = serialize_pp(f);
    CHECK(text == "# pp p=2 q=1\natom a 0 2\natom b 2 1\n");
    auto back = parse_pp(text);
    CHECK(back.free_count == 2);
    CHECK(back.exist_count == 1);
    CHECK(back.atoms == f.atoms);

    // a formula with no atoms holds everything; it still round-trips
    pp_formula top;
    top.free_count = 1;
    auto tround = parse_pp(serialize_pp(top));
    CHECK(tround.free_count == 1);
    CHECK(tround.exist_count == 0);
    CHECK(tround.atoms.empty());

    auto out_of_range = parse_failure([] {
        parse_pp("# pp p=2 q=1\natom a 3\n");
    });
    REQUIRE(out_of_range.threw);
    CHECK(out_of_range.line == 2);
    CHECK(out_of_range.column == 8);
    CHECK(out_of_range.message == "<input>:2:8: variable 3 outside 0..2");

    auto not_atom = parse_failure([] {
        parse_pp("# pp p=1 q=0\nbogus 0\n");
    });
    REQUIRE(not_atom.threw);
    CHECK(not_atom.message == "<input>:2:1: expected 'atom <rel> <vars...>'");
}

TEST_CASE("strict implementations round-trip whole")
{
    for (int k : {3, 5}) {
        auto imp = gadget_odd_cycle_disequality(k);
        auto text = serialize_strict(imp);
        auto back = parse_strict(text);
        CHECK(back.alpha == imp.alpha);
        CHECK(back.primary_arity == imp.primary_arity);
        CHECK(back.aux_arity == imp.aux_arity);
        CHECK(back.target == imp.target);
        CHECK(back.lang == imp.lang);
        CHECK(back.summands == imp.summands);
        CHECK(serialize_strict(back) == text);
        CHECK(verify_strict(back).ok);
    }

    auto de = gadget_double_edge(directed_cycle(3));
    auto dback = parse_strict(serialize_strict(de));
    CHECK(dback.target == de.target);
    CHECK(dback.summands == de.summands);
    CHECK(verify_strict(dback).ok);

    auto g5 = serialize_strict(gadget_odd_cycle_disequality(5));

    auto arity_clash = parse_failure([&] {
        auto tampered = g5;
        tampered.replace(tampered.find(" p=2 "), 5, " p=3 ");
        parse_strict(tampered);
    });
    REQUIRE(arity_clash.threw);
    CHECK(arity_clash.message.find("target arity does not match p") != std::string::npos);

    auto unknown_summand = parse_failure([&] {
        parse_strict(g5 + "summand zap 0 1\n");
    });
    REQUIRE(unknown_summand.threw);
    CHECK(unknown_summand.column == 9);
    CHECK(unknown_summand.message.find("summand uses unknown relation 'zap'") !=
        std::string::npos);

    auto wrong_kind = parse_failure([] {
        parse_strict("# relation name=x d=2 arity=1\n0\n");
    });
    REQUIRE(wrong_kind.threw);
    CHECK(wrong_kind.message == "<input>:1:1: expected a strict block, got 'relation'");
}

TEST_CASE("report serializers are deterministic and self-describing")
{
    auto tri = triangle();

    auto exact = solve_exact(tri);
    CHECK(serialize_solve(exact) ==
        "# solve method=EXACT_BRANCHBOUND\n"
        "satisfied 2 of 3\n"
        "fraction 2/3\n"
        "optimal yes\n"
        "assignment 0 0 1\n");

    auto approx = solve_approx(tri);
    CHECK(serialize_solve(approx) ==
        "# solve method=APPROX_CONDEXP\n"
        "satisfied 2 of 3\n"
        "fraction 2/3\n"
        "optimal no\n"
        "expected 3/2\n"
        "guarantee 3/4\n"
        "assignment 0 1 0\n");

    language lang(3);
    lang.add("n", disequality(3));
    relation u(3, 1);
    u.add({0});
    u.add({1});
    lang.add("u", u);
    instance inst(lang, 2);
    inst.add_constraint("n", {0, 1});
    inst.add_constraint("u", {0});
    auto rec = restrict_domain(inst, "u");
    auto rtext = serialize_reduction(rec);
    CHECK(rtext.rfind("# reduction kind=DOMAIN_RESTRICT\n", 0) == 0);
    CHECK(rtext.find("description " + rec.description + "\n") != std::string::npos);
    CHECK(rtext.find(serialize_instance(rec.output)) != std::string::npos);
    CHECK(serialize_reduction(rec) == rtext);

    auto cert = classify_single_relation(disequality(2));
    auto ctext = serialize_certificate(cert);
    CHECK(ctext.rfind("# certificate\nverdict HARD_TO_APPROXIMATE\n", 0) == 0);
    CHECK(ctext.find("step 1 ") != std::string::npos);
    CHECK(serialize_certificate(cert) == ctext);
}

TEST_CASE("sniff_kind reads the first block header")
{
    CHECK(sniff_kind(serialize_relation(disequality(2))) == "relation");
    CHECK(sniff_kind(serialize_operation(operation(2, 1))) == "operation");
    CHECK(sniff_kind(serialize_language(language(2))) == "language");
    CHECK(sniff_kind(serialize_poset(poset(2))) == "poset");
    CHECK(sniff_kind(serialize_lattice(chain_lattice(2))) == "lattice");
    CHECK(sniff_kind("# expander m=1 degree=0\n") == "expander");
    CHECK(sniff_kind(serialize_pp(pp_formula{})) == "pp");
    CHECK(sniff_kind(serialize_strict(gadget_odd_cycle_disequality(3))) == "strict");
    CHECK(sniff_kind(serialize_solve(solve_exact(triangle()))) == "solve");
    CHECK(sniff_kind(serialize_certificate(classify_single_relation(disequality(2)))) ==
        "certificate");

    // instances serialize their language first, so a loaded file announces
    // itself as a relation; only a language-free instance starts at its own
    // header
    CHECK(sniff_kind(serialize_instance(triangle())) == "relation");
    CHECK(sniff_kind(serialize_instance(instance(language(2), 1))) == "instance");

    CHECK_THROWS_AS(sniff_kind("plain words\n"), parse_error);
    CHECK_THROWS_AS(sniff_kind(""), parse_error);
}

TEST_CASE("windows line endings parse the same")
{
    auto rel_text = serialize_relation(disequality(3), "n3");
    CHECK(parse_relation(with_crlf(rel_text)).second == disequality(3));

    auto inst_text = serialize_instance(triangle());
    auto back = parse_instance(with_crlf(inst_text));
    CHECK(back.num_constraints() == 3);
    CHECK(serialize_instance(back) == inst_text);

    auto imp = gadget_odd_cycle_disequality(3);
    CHECK(parse_strict(with_crlf(serialize_strict(imp))).summands == imp.summands);
}

TEST_CASE("random instances round-trip byte for byte")
{
    language lang(3);
    lang.add("n", disequality(3));
    relation u(3, 1);
    u.add({1});
    u.add({2});
    lang.add("u", u);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        int vars = 1 + static_cast<int>(testutil::rng_below(rng, 5));
        int cons = static_cast<int>(testutil::rng_below(rng, 7));
        auto inst = testutil::random_instance(rng, lang, vars, cons);
        auto text = serialize_instance(inst);
        auto back = parse_instance(text);
        CHECK(serialize_instance(back) == text);
        CHECK(back.num_vars() == inst.num_vars());
        CHECK(back.num_constraints() == inst.num_constraints());
    }
}
