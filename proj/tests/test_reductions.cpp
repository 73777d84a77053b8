#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace maxcsp;

namespace {

// every assignment of `vars` values over domain d, in lexicographic order
template <typename Fn>
void for_each_assignment(int vars, int d, Fn && fn)
{
    assignment s(vars, 0);
    for (;;) {
        fn(s);
        int i = vars - 1;
        while (i >= 0 && s[i] == d - 1)
            s[i--] = 0;
        if (i < 0)
            return;
        ++s[i];
    }
}

}

TEST_CASE("core transfer onto an edge preserves measures both ways")
{
    auto c4 = undirected_cycle(4);
    auto core = find_core(c4);
    REQUIRE(core.pi.image == std::vector<int>{0, 1});

    language lang(4);
    lang.add("r", c4);
    instance inst(lang, 3);
    inst.add_constraint("r", {0, 1});
    inst.add_constraint("r", {1, 2});
    inst.add_constraint("r", {2, 0});

    auto rec = transfer_core(inst, core.pi);
    CHECK(rec.output.domain_size() == 2);
    CHECK(rec.output.lang().at("r") == disequality(2));
    CHECK(rec.output.num_constraints() == 3);

    // pulling back an output assignment is exactly measure-preserving
    for_each_assignment(3, 2, [&](const assignment & s_out) {
        auto s_in = rec.backward_solution(s_out);
        CHECK(measure(rec.output, s_out).satisfied == measure(inst, s_in).satisfied);
        CHECK(rec.measure_claim(s_out));
    });
    // this retraction maps non-edges to non-edges, so pushing forward is
    // exactly measure-preserving as well
    for_each_assignment(3, 4, [&](const assignment & s_in) {
        auto s_out = rec.forward_solution(s_in);
        CHECK(measure(rec.output, s_out).satisfied == measure(inst, s_in).satisfied);
    });

    retraction bogus{{0, 0, 0, 1}, {0, 1}};
    CHECK_THROWS_AS(transfer_core(inst, bogus), contract_error);
}

TEST_CASE("domain restriction drops values outside the unary predicate")
{
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
    CHECK(rec.output.domain_size() == 2);
    CHECK(rec.output.lang().at("n") == disequality(2));
    for_each_assignment(2, 2, [&](const assignment & s_out) {
        CHECK(rec.measure_claim(s_out));
    });

    CHECK_THROWS_AS(restrict_domain(inst, "n"), contract_error);
    CHECK_THROWS_AS(restrict_domain(inst, "missing"), contract_error);
}

TEST_CASE("orbit restriction shifts the optimum by a fixed cloud cost")
{
    auto c3 = directed_cycle(3);
    language hl(3);
    hl.add("h", c3);
    instance inst(hl, 2);
    inst.add_constraint("h", {0, 1});

    auto rec = restrict_to_orbit_reduction(c3, {0, 1, 2}, inst, 2);
    CHECK(rec.output.num_vars() == 6);
    CHECK(rec.output.num_constraints() == 13); // 1 original + copies * |E| * |V| = 12
    REQUIRE(rec.bookkeeping.size() >= 2);
    CHECK(rec.bookkeeping[0] == std::pair<std::string, fraction>{"opt_shift", fraction(12)});
    CHECK(rec.bookkeeping[1] == std::pair<std::string, fraction>{"copies", fraction(2)});

    assignment sat{0, 1};
    auto fwd = rec.forward_solution(sat);
    CHECK(measure(rec.output, fwd).satisfied == 13);
    CHECK(rec.measure_claim(fwd));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        assignment s(6);
        for (auto & v : s)
            v = static_cast<int>(testutil::rng_below(rng, 3));
        CHECK(rec.measure_claim(s));
    }
}

TEST_CASE("occurrence bounding leaves quiet instances untouched")
{
    language lang(2);
    lang.add("n2", disequality(2));
    instance tri(lang, 3);
    tri.add_constraint("n2", {0, 1});
    tri.add_constraint("n2", {1, 2});
    tri.add_constraint("n2", {0, 2});

    std::map<int, relation> eq{{0, equality_relation(2)}};
    std::map<int, int> orbit_of{{0, 0}, {1, 0}, {2, 0}};
    auto rec = bound_occurrences(tri, eq, orbit_of, occ_bound_config{3, 6, 0});
    CHECK(rec.output.num_constraints() == 3);
    CHECK(rec.measure_claim(assignment{1, 0, 1}));
}

TEST_CASE("occurrence bounding clouds busy variables through an expander")
{
    language lang(2);
    lang.add("n2", disequality(2));
    instance tri(lang, 3);
    tri.add_constraint("n2", {0, 1});
    tri.add_constraint("n2", {1, 2});
    tri.add_constraint("n2", {0, 2});

    std::map<int, relation> eq{{0, equality_relation(2)}};
    std::map<int, int> orbit_of{{0, 0}, {1, 0}, {2, 0}};
    auto rec = bound_occurrences(tri, eq, orbit_of, occ_bound_config{1, 6, 0});

    CHECK(rec.output.num_vars() == 21); // three clouds of seven expander slots
    CHECK(rec.output.num_constraints() == 129);
    CHECK(occurrence_bound(rec.output) == 13); // 1 + degree * |D|
    std::map<std::string, fraction> book(rec.bookkeeping.begin(), rec.bookkeeping.end());
    CHECK(book.at("input_constraints") == fraction(3));
    CHECK(book.at("eq_constraints") == fraction(126));
    CHECK(book.at("output_constraints") == fraction(129));
    CHECK(book.at("achieved_bound") == fraction(13));
    CHECK(book.at("gap_coefficient") == fraction(42));

    // a forward image satisfies every equality, so only the original loss remains
    assignment best{0, 1, 0};
    auto fwd = rec.forward_solution(best);
    CHECK(measure(rec.output, fwd).satisfied == 126 + 2);
    CHECK(rec.measure_claim(fwd));

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        assignment s(rec.output.num_vars());
        for (auto & v : s)
            v = static_cast<int>(testutil::rng_below(rng, 2));
        CHECK(rec.measure_claim(s));
    }

    // over-occurring variables must come with an orbit entry
    std::map<int, int> partial{{0, 0}};
    CHECK_THROWS_AS(bound_occurrences(tri, eq, partial, occ_bound_config{1, 6, 0}),
        contract_error);
}

TEST_CASE("strict gadget application shifts the measure by alpha minus one")
{
    auto g5 = gadget_odd_cycle_disequality(5);
    language lang(5);
    lang.add("neq", disequality(5));
    instance inst(lang, 3);
    inst.add_constraint("neq", {0, 1});
    inst.add_constraint("neq", {1, 2});

    auto rec = apply_strict_gadget(inst, "neq", g5);
    CHECK(rec.output.num_vars() == 7); // 3 primaries + 2 gadget blocks * 2 auxiliaries
    CHECK(rec.output.num_constraints() == 6);
    std::map<std::string, fraction> book(rec.bookkeeping.begin(), rec.bookkeeping.end());
    CHECK(book.at("alpha") == fraction(3));
    CHECK(book.at("replaced_constraints") == fraction(2));
    CHECK(book.at("opt_shift") == fraction(4));

    assignment s{0, 1, 0};
    auto fwd = rec.forward_solution(s);
    CHECK(measure(rec.output, fwd).satisfied == measure(inst, s).satisfied + 4);
    CHECK(rec.measure_claim(fwd));

    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        assignment r(rec.output.num_vars());
        for (auto & v : r)
            v = static_cast<int>(testutil::rng_below(rng, 5));
        CHECK(rec.measure_claim(r));
    }

    auto wrong = gadget_odd_cycle_disequality(3);
    CHECK_THROWS_AS(apply_strict_gadget(inst, "neq", wrong), contract_error);
}

TEST_CASE("clause relations exclude exactly one sign pattern each")
{
    const std::array<std::vector<int>, 4> excluded{
        std::vector<int>{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
    for (int i = 0; i < 4; ++i) {
        auto r = threesat_relation(i);
        CHECK(r.count() == 7);
        CHECK(! r.contains(excluded[i]));
        CHECK(preimage_relation(phi_identity(), i, 2) == r);
    }
    CHECK_THROWS_AS(threesat_relation(4), contract_error);

    auto lang = threesat_language();
    REQUIRE(lang.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(lang.at("3sat" + std::to_string(i)) == threesat_relation(i));
}

TEST_CASE("phi maps validate their shape")
{
    CHECK(phi_identity().of(0) == 0);
    CHECK(phi_identity().of(1) == 1);
    CHECK(phi_identity().of(7) == -1);
    CHECK_THROWS_AS(validate_phi(phi_map{{0, 1}, {0, 0}}, 2), contract_error); // not onto
    CHECK_THROWS_AS(validate_phi(phi_map{{1, 0}, {0, 1}}, 2), contract_error); // unsorted
    CHECK_THROWS_AS(validate_phi(phi_map{{0, 3}, {0, 1}}, 3), contract_error); // range
    validate_phi(phi_map{{0, 2}, {1, 0}}, 3);
}

TEST_CASE("constant elimination rewrites pinned atoms into a u-block")
{
    language gamma(2);
    gamma.add("n2", disequality(2));
    auto gc = with_constants(gamma);
    CHECK(gc.size() == 3);
    CHECK(gc.at("c0") == constant_relation(2, 0));
    CHECK(gc.at("c1") == constant_relation(2, 1));

    // f(x) := exists z . c1(z) and n2(x, z) defines {0}
    pp_formula f;
    f.free_count = 1;
    f.exist_count = 1;
    f.atoms.push_back(pp_atom{"c1", {1}});
    f.atoms.push_back(pp_atom{"n2", {0, 1}});
    relation zero(2, 1);
    zero.add({0});
    CHECK(eval_pp(f, gc) == zero);

    auto elim = eliminate_constants(f, 2);
    CHECK(elim.free_count == 3); // u0, u1, then x
    CHECK(elim.exist_count == 0);
    auto lifted = eval_pp(elim, gamma);
    relation recovered(2, 1);
    for (auto & t : lifted.tuples())
        if (t[0] == 0 && t[1] == 1)
            recovered.add({t[2]});
    CHECK(recovered == zero);

    // pinning a free variable goes through a reserved equality atom
    pp_formula pin;
    pin.free_count = 1;
    pin.exist_count = 0;
    pin.atoms.push_back(pp_atom{"c1", {0}});
    auto pinned = eliminate_constants(pin, 2);
    auto pl = eval_pp(pinned, gamma);
    relation one(2, 1);
    one.add({1});
    relation rec2(2, 1);
    for (auto & t : pl.tuples())
        if (t[0] == 0 && t[1] == 1)
            rec2.add({t[2]});
    CHECK(rec2 == one);

    // merging two distinct constants means the witness was unsatisfiable
    pp_formula bad;
    bad.free_count = 0;
    bad.exist_count = 1;
    bad.atoms.push_back(pp_atom{"c0", {0}});
    bad.atoms.push_back(pp_atom{"c1", {0}});
    CHECK_THROWS_AS(eliminate_constants(bad, 2), contract_error);
}

TEST_CASE("the composed gap pipeline keeps satisfiable inputs at measure one")
{
    auto gamma = threesat_language();
    std::array<pp_formula, 4> wit;
    for (int i = 0; i < 4; ++i) {
        pp_formula f;
        f.free_count = 3;
        f.exist_count = 0;
        f.atoms.push_back(pp_atom{"3sat" + std::to_string(i), {0, 1, 2}});
        wit[i] = f;
    }
    instance demo(gamma, 4);
    demo.add_constraint("3sat0", {0, 1, 2});
    demo.add_constraint("3sat1", {1, 2, 3});
    demo.add_constraint("3sat2", {0, 2, 3});
    demo.add_constraint("3sat3", {0, 1, 3});

    auto pipe = gap_pipeline_3sat(gamma, phi_identity(), wit, demo, 6, 0);
    CHECK(pipe.record.output.num_vars() == 18);
    CHECK(pipe.record.output.num_constraints() == 88);
    std::map<std::string, fraction> book(pipe.record.bookkeeping.begin(),
        pipe.record.bookkeeping.end());
    CHECK(book.at("input_constraints") == fraction(4));
    CHECK(book.at("eq_constraints") == fraction(84));
    CHECK(book.at("output_constraints") == fraction(88));
    CHECK(book.at("achieved_bound") == fraction(13));
    CHECK(book.at("gap_coefficient") == fraction(21));
    CHECK(pipe.preimage_instance.num_constraints() == 4);
    CHECK(pipe.ublock_instance.num_constraints() == 4);

    assignment sat{0, 0, 1, 0}; // satisfies all four clauses
    REQUIRE(measure(demo, sat).frac() == fraction(1));
    auto fwd = pipe.record.forward_solution(sat);
    CHECK(measure(pipe.record.output, fwd).frac() == fraction(1));
    CHECK(pipe.record.measure_claim(fwd));

    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 40; ++trial) {
        assignment s(pipe.record.output.num_vars());
        for (auto & v : s)
            v = static_cast<int>(testutil::rng_below(rng, 2));
        CHECK(pipe.record.measure_claim(s));
    }

    // a non-core language is refused outright
    language padded(3);
    for (int i = 0; i < 4; ++i) {
        relation r(3, 3);
        for (auto & t : threesat_relation(i).tuples())
            r.add(t);
        padded.add("3sat" + std::to_string(i), r);
    }
    instance dummy(threesat_language(), 3);
    CHECK_THROWS_AS(gap_pipeline_3sat(padded, phi_identity(), wit, dummy, 6, 0),
        contract_error);
}
