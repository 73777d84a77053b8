#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace maxcsp;

namespace {

auto rules(const certificate & c) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (auto & st : c.chain)
        out.push_back(st.rule);
    return out;
}

void check_verified(const certificate & c)
{
    for (auto & st : c.chain)
        CHECK(st.verified);
    CHECK(verify_certificate(c));
    // serialization must be total and deterministic on everything we emit
    CHECK(serialize_certificate(c) == serialize_certificate(c));
}

}

TEST_CASE("binary disequality is the base hard case")
{
    auto c = classify_single_relation(disequality(2));
    CHECK(c.result == verdict::hard_to_approximate);
    CHECK(rules(c) == std::vector<std::string>{"maxkcut-base"});
    check_verified(c);
}

TEST_CASE("odd directed cycles walk the symmetrisation chain")
{
    for (int k : {3, 5}) {
        auto c = classify_single_relation(directed_cycle(k));
        CHECK(c.result == verdict::hard_to_approximate);
        CHECK(rules(c) == std::vector<std::string>{"double-edge-symmetrisation", "relabel",
            "odd-cycle-disequality", "maxkcut-base"});
        check_verified(c);
    }
}

TEST_CASE("even directed cycles retract after symmetrisation")
{
    auto c = classify_single_relation(directed_cycle(4));
    CHECK(c.result == verdict::hard_to_approximate);
    CHECK(rules(c) == std::vector<std::string>{"double-edge-symmetrisation", "core-retraction",
        "maxkcut-base"});
    check_verified(c);
}

TEST_CASE("a single directed edge symmetrises straight to the base case")
{
    auto c = classify_single_relation(relation::of_tuples(2, 2, {{0, 1}}));
    CHECK(c.result == verdict::hard_to_approximate);
    CHECK(rules(c) == std::vector<std::string>{"double-edge-symmetrisation", "maxkcut-base"});
    check_verified(c);
}

TEST_CASE("the undirected four-cycle retracts onto an edge")
{
    auto c = classify_single_relation(undirected_cycle(4));
    CHECK(c.result == verdict::hard_to_approximate);
    CHECK(rules(c) == std::vector<std::string>{"core-retraction", "maxkcut-base"});
    check_verified(c);
}

TEST_CASE("wnuf-free vertex-transitive graphs close with search evidence")
{
    for (auto r : {disequality(3), vertex_transitive_four()}) {
        auto c = classify_single_relation(r);
        CHECK(c.result == verdict::hard_gap_at_1);
        CHECK(rules(c) == std::vector<std::string>{"wnuf-evidence"});
        CHECK(c.wnuf_arities_searched == std::vector<int>{2, 3});
        CHECK(! c.wnuf_witness.has_value());
        check_verified(c);
    }
}

TEST_CASE("the transitive tournament goes through its orbit neighbourhood")
{
    auto t3 = relation::of_tuples(3, 2, {{0, 1}, {0, 2}, {1, 2}});
    auto c = classify_single_relation(t3);
    CHECK(c.result == verdict::hard_to_approximate);
    CHECK(rules(c) == std::vector<std::string>{"orbit-out-neighborhood", "domain-restriction",
        "double-edge-symmetrisation", "maxkcut-base"});
    // each recursion strictly shrinks the vertex set
    check_verified(c);
}

TEST_CASE("degenerate relations classify trivially")
{
    auto e = classify_single_relation(relation(3, 2));
    CHECK(e.result == verdict::trivial_empty);
    CHECK(rules(e) == std::vector<std::string>{"empty-relation"});
    check_verified(e);

    auto v = classify_single_relation(equality_relation(3));
    CHECK(v.result == verdict::trivial_valid);
    CHECK(rules(v) == std::vector<std::string>{"valid-relation"});
    check_verified(v);
}

TEST_CASE("higher arities are reduced before the digraph machinery starts")
{
    auto tern = relation::of_tuples(2, 3, {{0, 1, 0}, {1, 0, 0}});
    auto c = classify_single_relation(tern);
    CHECK(c.result == verdict::hard_to_approximate);
    CHECK(rules(c) == std::vector<std::string>{"arity-reduction", "double-edge-symmetrisation",
        "maxkcut-base"});
    check_verified(c);
}

TEST_CASE("the hardness condition reports a wnuf witness for pure equality")
{
    language eq3(3);
    eq3.add("eq", equality_relation(3));
    auto c = hard_gap_condition(eq3);
    CHECK(c.result == verdict::inconclusive_evidence);
    CHECK(rules(c) == std::vector<std::string>{"core-retraction", "wnuf-witness"});
    REQUIRE(c.wnuf_witness.has_value());
    CHECK(is_wnuf(*c.wnuf_witness));
    REQUIRE(c.core_language.has_value());
    CHECK(c.core_language->domain_size() == 1); // equality collapses to a point
    CHECK(is_polymorphism(*c.wnuf_witness, *c.core_language));
    check_verified(c);
}

TEST_CASE("the clause language passes the hardness condition with a demo run")
{
    auto c = hard_gap_condition(threesat_language());
    CHECK(c.result == verdict::hard_gap_at_1);
    CHECK(rules(c) == std::vector<std::string>{"wnuf-evidence", "gap-pipeline-demo"});
    CHECK(c.wnuf_arities_searched == std::vector<int>{2, 3});
    REQUIRE(c.gap_demo.has_value());
    REQUIRE(c.gap_demo_input.has_value());
    // the demo's four clauses are simultaneously satisfiable, so the composed
    // output must be too
    auto opt_in = solve_exact(*c.gap_demo_input).opt;
    REQUIRE(opt_in.frac() == fraction(1));
    auto sat = solve_exact(*c.gap_demo_input).best;
    auto fwd = c.gap_demo->record.forward_solution(sat);
    CHECK(measure(c.gap_demo->record.output, fwd).frac() == fraction(1));
    check_verified(c);
}

TEST_CASE("the hardness condition skips the demo when asked")
{
    classify_options opts;
    opts.attach_gap_demo = false;
    auto c = hard_gap_condition(threesat_language(), opts);
    CHECK(c.result == verdict::hard_gap_at_1);
    CHECK(rules(c) == std::vector<std::string>{"wnuf-evidence"});
    CHECK(! c.gap_demo.has_value());
    check_verified(c);
}

TEST_CASE("the triangle language passes the hardness condition without a demo")
{
    language k3(3);
    k3.add("k3", disequality(3));
    auto c = hard_gap_condition(k3);
    CHECK(c.result == verdict::hard_gap_at_1);
    CHECK(rules(c) == std::vector<std::string>{"wnuf-evidence"}); // no boolean clause relations
    check_verified(c);
}

TEST_CASE("language dispatch sends single-orbit languages down the direct split")
{
    language eq3(3);
    eq3.add("eq", equality_relation(3));
    auto c = classify_language(eq3);
    CHECK(c.result == verdict::trivial_valid);
    CHECK(rules(c) == std::vector<std::string>{"single-orbit-language"});
    check_verified(c);

    language n3(3);
    n3.add("n3", disequality(3));
    auto h = classify_transitive_language(n3);
    CHECK(h.result == verdict::hard_gap_at_1);
    CHECK(rules(h) == std::vector<std::string>{"single-orbit-language", "wnuf-evidence"});
    check_verified(h);

    language edge(2);
    edge.add("e", relation::of_tuples(2, 2, {{0, 1}}));
    auto i = classify_language(edge);
    CHECK(i.result == verdict::inconclusive_evidence);
    CHECK(rules(i) == std::vector<std::string>{"wnuf-witness"});
    REQUIRE(i.wnuf_witness.has_value());
    CHECK(is_polymorphism(*i.wnuf_witness, edge));
    check_verified(i);

    language empty_lang(2);
    CHECK_THROWS_AS(classify_language(empty_lang), contract_error);
}

TEST_CASE("the direct split refuses languages with several orbits")
{
    language t3(3);
    t3.add("t", relation::of_tuples(3, 2, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK_THROWS_AS(classify_transitive_language(t3), contract_error);
}

TEST_CASE("tampered certificates fail replay")
{
    auto c = classify_single_relation(directed_cycle(3));
    REQUIRE(verify_certificate(c));
    auto bad = c;
    bad.chain[0].produced = equality_relation(3);
    CHECK(! verify_certificate(bad));

    auto stripped = c;
    stripped.chain[0].gadget.reset();
    CHECK_THROWS_AS(verify_certificate(stripped), contract_error);
}

TEST_CASE("classification is deterministic across repeated runs")
{
    for (int run = 0; run < 2; ++run) {
        auto a = classify_single_relation(vertex_transitive_four());
        auto b = classify_single_relation(vertex_transitive_four());
        CHECK(serialize_certificate(a) == serialize_certificate(b));
    }
    auto a = hard_gap_condition(threesat_language());
    auto b = hard_gap_condition(threesat_language());
    CHECK(serialize_certificate(a) == serialize_certificate(b));
}
