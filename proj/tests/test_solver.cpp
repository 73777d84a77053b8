#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace maxcsp;

namespace {

auto triangle() -> instance
{
    language lang(2);
    lang.add("n2", disequality(2));
    instance inst(lang, 3);
    inst.add_constraint("n2", {0, 1});
    inst.add_constraint("n2", {1, 2});
    inst.add_constraint("n2", {0, 2});
    return inst;
}

}

TEST_CASE("the odd triangle tops out at two thirds")
{
    auto inst = triangle();
    auto ex = solve_exhaustive(inst);
    auto bb = solve_exact(inst);
    CHECK(ex.opt.frac() == fraction(2, 3));
    CHECK(bb.opt.frac() == fraction(2, 3));
    CHECK(ex.best == assignment{0, 0, 1});
    CHECK(bb.best == ex.best);
    CHECK(ex.proof_of_optimality);
    CHECK(bb.proof_of_optimality);
    CHECK(bb.nodes > 0);
    CHECK(gap_report(inst) == fraction(2, 3));
}

TEST_CASE("full and empty relations give the extreme measures")
{
    language lang(2);
    relation full(2, 2);
    for (std::uint64_t i = 0; i < full.table_size(); ++i)
        full.set_index(i, true);
    lang.add("full", full);
    lang.add("none", relation(2, 2));

    instance happy(lang, 2);
    happy.add_constraint("full", {0, 1});
    happy.add_constraint("full", {1, 0});
    CHECK(solve_exact(happy).opt.frac() == fraction(1));

    instance hopeless(lang, 2);
    hopeless.add_constraint("none", {0, 1});
    CHECK(solve_exact(hopeless).opt.satisfied == 0);
    CHECK(gap_report(hopeless) == fraction(0));
}

TEST_CASE("an instance without constraints is perfectly satisfied")
{
    language lang(2);
    lang.add("n2", disequality(2));
    instance inst(lang, 2);
    auto res = solve_exact(inst);
    CHECK(res.opt.satisfied == 0);
    CHECK(res.opt.total == 0);
    CHECK(res.opt.frac() == fraction(1));
    CHECK(gap_report(inst) == fraction(1));
}

TEST_CASE("branch and bound replicates exhaustive search on random instances")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + static_cast<int>(testutil::rng_below(rng, 2));
        language lang(d);
        lang.add("a", testutil::random_relation(rng, d, 2));
        lang.add("b", testutil::random_relation(rng, d, 1 + static_cast<int>(testutil::rng_below(rng, 3))));
        const int vars = 2 + static_cast<int>(testutil::rng_below(rng, 6));
        auto inst = testutil::random_instance(rng, lang, vars,
            1 + static_cast<int>(testutil::rng_below(rng, 12)));
        auto ex = solve_exhaustive(inst);
        auto bb = solve_exact(inst);
        CHECK(ex.opt.satisfied == bb.opt.satisfied);
        CHECK(ex.best == bb.best); // both report the lexicographically least optimum
    }
}

TEST_CASE("conditional expectation rounding on the triangle")
{
    auto res = solve_approx(triangle());
    CHECK(res.method == solve_method::approx_condexp);
    CHECK(! res.proof_of_optimality);
    CHECK(res.expected == fraction(3, 2));
    CHECK(res.guarantee == fraction(3, 4));
    CHECK(res.best == assignment{0, 1, 0});
    CHECK(res.opt.satisfied == 2);
}

TEST_CASE("the derandomized result never drops below the initial expectation")
{
    // scopes may repeat variables here; the expectation accounts for that
    std::mt19937_64 rng(78);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + static_cast<int>(testutil::rng_below(rng, 2));
        language lang(d);
        lang.add("a", testutil::random_relation(rng, d, 2));
        lang.add("b", testutil::random_relation(rng, d, 3));
        const int vars = 2 + static_cast<int>(testutil::rng_below(rng, 5));
        auto inst = testutil::random_instance(rng, lang, vars,
            1 + static_cast<int>(testutil::rng_below(rng, 10)));
        auto apx = solve_approx(inst);
        auto sat = fraction(apx.opt.satisfied);
        CHECK(! (sat < apx.expected));
        auto opt = solve_exact(inst).opt.satisfied;
        CHECK(apx.opt.satisfied <= opt);
    }
}

TEST_CASE("distinct-variable scopes earn the counting guarantee")
{
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + static_cast<int>(testutil::rng_below(rng, 2));
        language lang(d);
        lang.add("a", testutil::random_relation(rng, d, 2));
        lang.add("b", testutil::random_relation(rng, d, 3));
        const int vars = 3 + static_cast<int>(testutil::rng_below(rng, 4));
        instance inst(lang, vars);
        const int m = 1 + static_cast<int>(testutil::rng_below(rng, 10));
        for (int c = 0; c < m; ++c) {
            int which = static_cast<int>(testutil::rng_below(rng, 2));
            std::vector<int> pool(vars);
            std::iota(pool.begin(), pool.end(), 0);
            testutil::shuffle_vec(pool, rng);
            pool.resize(lang.at(which).arity());
            inst.add_constraint(lang.name(which), pool);
        }
        auto apx = solve_approx(inst);
        auto sat = fraction(apx.opt.satisfied);
        CHECK(! (sat < apx.expected));
        CHECK(! (sat < apx.guarantee));
        CHECK(! (apx.expected < apx.guarantee));
    }
}

TEST_CASE("the four-clause pipeline demo instance is satisfiable")
{
    auto lang = threesat_language();
    instance inst(lang, 4);
    inst.add_constraint("3sat0", {0, 1, 2});
    inst.add_constraint("3sat1", {1, 2, 3});
    inst.add_constraint("3sat2", {0, 2, 3});
    inst.add_constraint("3sat3", {0, 1, 3});
    CHECK(gap_report(inst) == fraction(1));
}

TEST_CASE("contradictory equality demands leave exactly half")
{
    language lang(2);
    lang.add("eq", equality_relation(2));
    lang.add("neq", disequality(2));
    instance inst(lang, 2);
    inst.add_constraint("eq", {0, 1});
    inst.add_constraint("neq", {0, 1});
    CHECK(gap_report(inst) == fraction(1, 2));
}

TEST_CASE("starved budgets abort both exact solvers")
{
    auto inst = triangle();
    CHECK_THROWS_AS(solve_exhaustive(inst, 4), budget_error);
    CHECK_THROWS_AS(solve_exact(inst, 2), budget_error);
}
