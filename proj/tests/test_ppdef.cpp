#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace maxcsp;

namespace {

auto ab_language() -> language
{
    language lang(2);
    lang.add("A", relation::of_tuples(2, 2, {{0, 0}, {0, 1}, {1, 0}}));
    lang.add("B", relation::of_tuples(2, 2, {{1, 0}, {0, 1}, {1, 1}}));
    return lang;
}

}

TEST_CASE("composing A and B through one existential yields the order relation")
{
    pp_formula phi;
    phi.free_count = 2;
    phi.exist_count = 1;
    phi.atoms = {{"A", {0, 2}}, {"B", {2, 1}}};

    auto i = eval_pp(phi, ab_language());
    CHECK(i == relation::of_tuples(2, 2, {{0, 0}, {0, 1}, {1, 1}}));
}

TEST_CASE("equality atoms are always available under the reserved name")
{
    language lang(3);
    lang.add("c3", directed_cycle(3));
    pp_formula phi;
    phi.free_count = 2;
    phi.exist_count = 1;
    phi.atoms = {{pp_equality_name, {0, 2}}, {pp_equality_name, {2, 1}}};
    CHECK(eval_pp(phi, lang) == equality_relation(3));
}

TEST_CASE("two disequality steps define equality on the Boolean domain")
{
    language lang(2);
    lang.add("n2", disequality(2));
    pp_formula phi;
    phi.free_count = 2;
    phi.exist_count = 1;
    phi.atoms = {{"n2", {0, 2}}, {"n2", {2, 1}}};
    CHECK(eval_pp(phi, lang) == equality_relation(2));
}

TEST_CASE("doubled edges of the four-vertex example are pp-definable")
{
    language lang(4);
    lang.add("g", vertex_transitive_four());
    pp_formula phi;
    phi.free_count = 2;
    phi.exist_count = 0;
    phi.atoms = {{"g", {0, 1}}, {"g", {1, 0}}};
    auto r = eval_pp(phi, lang);
    CHECK(r == relation::of_tuples(4, 2, {{2, 0}, {3, 1}, {0, 2}, {1, 3}}));
}

TEST_CASE("eval_pp rejects malformed atoms and enforces its budget")
{
    language lang(2);
    lang.add("n2", disequality(2));
    pp_formula phi;
    phi.free_count = 1;
    phi.exist_count = 0;
    phi.atoms = {{"missing", {0}}};
    CHECK_THROWS_AS(eval_pp(phi, lang), contract_error);

    phi.atoms = {{"n2", {0}}};
    CHECK_THROWS_AS(eval_pp(phi, lang), contract_error);

    pp_formula wide;
    wide.free_count = 2;
    wide.exist_count = 30;
    wide.atoms = {{"n2", {0, 1}}};
    CHECK_THROWS_AS(eval_pp(wide, lang), budget_error);
}

TEST_CASE("verify_perfect_implementation reports first divergence")
{
    language lang = ab_language();
    pp_formula phi;
    phi.free_count = 2;
    phi.exist_count = 1;
    phi.atoms = {{"A", {0, 2}}, {"B", {2, 1}}};

    auto good = verify_perfect_implementation(phi, lang,
        relation::of_tuples(2, 2, {{0, 0}, {0, 1}, {1, 1}}));
    CHECK(good.ok);

    auto bad = verify_perfect_implementation(phi, lang, equality_relation(2));
    CHECK(! bad.ok);
    REQUIRE(bad.extra.has_value());
    CHECK(*bad.extra == std::vector<int>{0, 1});
}

TEST_CASE("canonical construction recovers pp-definable targets")
{
    language lang(2);
    lang.add("n2", disequality(2));
    auto res = canonical_construction(equality_relation(2), lang);
    CHECK(res.defines_target);
    CHECK(res.evaluated == equality_relation(2));
    CHECK(verify_perfect_implementation(res.formula, lang, equality_relation(2)).ok);
}

TEST_CASE("definability test certifies both directions")
{
    language c3(3);
    c3.add("c3", directed_cycle(3));

    // K_3 is invariant-separated from the 3-cycle: some polymorphism of the
    // cycle (2x - y style) breaks disequality
    auto verdict = definability_test(disequality(3), c3, 3);
    REQUIRE(verdict.status == definability_status::not_definable_certified);
    REQUIRE(verdict.counterexample.has_value());
    CHECK(is_polymorphism(*verdict.counterexample, c3));
    CHECK(! is_polymorphism(*verdict.counterexample, disequality(3)));

    language n2(2);
    n2.add("n2", disequality(2));
    auto def = definability_test(equality_relation(2), n2, 3);
    REQUIRE(def.status == definability_status::definable_with_witness);
    REQUIRE(def.witness.has_value());
    CHECK(verify_perfect_implementation(*def.witness, n2, equality_relation(2)).ok);
}

TEST_CASE("definability test refuses empty targets")
{
    language lang(2);
    lang.add("n2", disequality(2));
    relation empty(2, 2);
    CHECK_THROWS_AS(definability_test(empty, lang, 2), contract_error);
}
