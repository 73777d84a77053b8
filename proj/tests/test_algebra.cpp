#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace maxcsp;

namespace {

// f(x, y, z) = x - y + z mod 3
auto affine3() -> operation
{
    operation f(3, 3);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z)
                f.set(f.encode({x, y, z}), ((x - y + z) % 3 + 3) % 3);
    return f;
}

// g(x, y) = 2x - y mod 3
auto twist3() -> operation
{
    operation g(3, 2);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            g.set(g.encode({x, y}), ((2 * x - y) % 3 + 3) % 3);
    return g;
}

}

TEST_CASE("operation tables evaluate and validate")
{
    auto f = affine3();
    CHECK(f.apply({1, 0, 2}) == 0);
    CHECK(f.is_idempotent());
    CHECK(! f.is_projection());
    auto p = operation::projection(3, 3, 1);
    CHECK(p.is_projection());
    CHECK(p.apply({0, 2, 1}) == 2);
    CHECK_THROWS_AS(operation(2, 2, std::vector<int>{0, 1, 2}), contract_error);
    CHECK_THROWS_AS(operation(2, 2, std::vector<int>{0, 1, 2, 7}), contract_error);
}

TEST_CASE("componentwise application works row-wise")
{
    auto f = affine3();
    auto out = apply_componentwise(f, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(out == std::vector<int>{1, 2});
}

TEST_CASE("x - y + z mod 3 is a polymorphism of the directed 3-cycle")
{
    CHECK(is_polymorphism(affine3(), directed_cycle(3)));
    CHECK(! is_polymorphism(affine3(), disequality(3)));
}

TEST_CASE("2x - y mod 3 separates the 3-cycle from the complete graph")
{
    auto g = twist3();
    CHECK(is_polymorphism(g, directed_cycle(3)));
    CHECK(! is_polymorphism(g, disequality(3)));
    // the witnessing violation: rows (0,2) and (1,2) map to the loop (2,2)
    auto image = apply_componentwise(g, {{0, 2}, {1, 2}});
    CHECK(image == std::vector<int>{2, 2});
}

TEST_CASE("idempotent polymorphisms of the complete graph are projections")
{
    language lang(3);
    lang.add("k3", disequality(3));
    for (int k = 1; k <= 3; ++k) {
        auto polys = enumerate_polymorphisms(lang, k, true);
        CHECK(static_cast<int>(polys.size()) == k);
        for (auto & f : polys)
            CHECK(f.is_projection());
    }
}

TEST_CASE("polymorphism enumeration honours the idempotent filter")
{
    language lang(2);
    lang.add("eq", equality_relation(2));
    // every binary operation preserves equality; idempotence pins the diagonal
    CHECK(enumerate_polymorphisms(lang, 2, false).size() == 16);
    CHECK(enumerate_polymorphisms(lang, 2, true).size() == 4);
}

TEST_CASE("wnuf shape requires arity at least two")
{
    language lang(2);
    lang.add("n2", disequality(2));
    CHECK_THROWS_AS(wnuf_search(lang, 1), contract_error);
}

TEST_CASE("disequality on two values has no binary wnuf but majority works")
{
    language lang(2);
    lang.add("n2", disequality(2));
    auto rep = wnuf_search(lang, 3);
    REQUIRE(rep.verdict == wnuf_verdict::found);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->arity() == 3);
    CHECK(rep.searched_arities == std::vector<int>{2, 3});
    CHECK(! rep.budget_exhausted);

    // the lexicographically first witness is majority, not minority
    operation maj(2, 3);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                maj.set(maj.encode({x, y, z}), (x + y + z >= 2) ? 1 : 0);
    CHECK(*rep.witness == maj);
    CHECK(is_wnuf(*rep.witness));
    CHECK(is_polymorphism(*rep.witness, lang));
}

TEST_CASE("equality finds the minimum operation as its first binary wnuf")
{
    language lang(2);
    lang.add("eq", equality_relation(2));
    auto rep = wnuf_search(lang, 2);
    REQUIRE(rep.verdict == wnuf_verdict::found);
    CHECK(rep.witness->table() == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("the triangle admits no wnuf up to arity three")
{
    language lang(3);
    lang.add("k3", disequality(3));
    auto rep = wnuf_search(lang, 3);
    CHECK(rep.verdict == wnuf_verdict::none_up_to_bound);
    CHECK(rep.searched_arities == std::vector<int>{2, 3});
    CHECK(! rep.budget_exhausted);

    // the two-element clique is just disequality: majority rescues it
    language two(2);
    two.add("k2", disequality(2));
    auto found = wnuf_search(two, 3);
    REQUIRE(found.verdict == wnuf_verdict::found);
    CHECK(found.witness->arity() == 3);
}

TEST_CASE("a starved budget reports exhaustion instead of an answer")
{
    language lang(3);
    lang.add("k3", disequality(3));
    auto rep = wnuf_search(lang, 3, 2);
    CHECK(rep.budget_exhausted);
    CHECK(rep.verdict == wnuf_verdict::none_up_to_bound);
    CHECK(rep.searched_arities.empty());
}

TEST_CASE("is_wnuf demands idempotence and one-dissenter agreement")
{
    CHECK(! is_wnuf(operation::projection(2, 3, 0)));
    operation maj(2, 3);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                maj.set(maj.encode({x, y, z}), (x + y + z >= 2) ? 1 : 0);
    CHECK(is_wnuf(maj));
}

TEST_CASE("polymorphism property holds on random languages by direct check")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 2 + static_cast<int>(testutil::rng_below(rng, 2));
        language lang(d);
        lang.add("r", testutil::random_relation(rng, d, 2));
        auto polys = enumerate_polymorphisms(lang, 2, false, 1u << 22);
        // re-check a few against the definition
        for (std::size_t i = 0; i < polys.size() && i < 5; ++i) {
            const auto & f = polys[i];
            const auto & r = lang.at(0);
            for (auto & t1 : r.tuples())
                for (auto & t2 : r.tuples())
                    CHECK(r.contains(apply_componentwise(f, {t1, t2})));
        }
    }
}
