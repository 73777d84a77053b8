#pragma once

// Seeded generators shared by the unit tests and the acceptance runner.

#include <maxcsp/maxcsp.hpp>

#include <array>
#include <random>
#include <vector>

namespace testutil {

using maxcsp::detail::rng_below;
using maxcsp::detail::shuffle_vec;

inline auto random_relation(std::mt19937_64 & rng, int d, int arity, bool non_empty = true,
    bool non_valid = false) -> maxcsp::relation
{
    for (;;) {
        maxcsp::relation r(d, arity);
        for (std::uint64_t i = 0; i < r.table_size(); ++i)
            if (rng_below(rng, 2) == 1)
                r.set_index(i, true);
        if (non_valid)
            for (int v = 0; v < d; ++v)
                r.set_index(r.encode(std::vector<int>(arity, v)), false);
        if (non_empty && r.is_empty())
            continue;
        return r;
    }
}

inline auto random_instance(std::mt19937_64 & rng, const maxcsp::language & lang, int vars,
    int constraints) -> maxcsp::instance
{
    maxcsp::instance inst(lang, vars);
    for (int i = 0; i < constraints; ++i) {
        int ri = static_cast<int>(rng_below(rng, lang.size()));
        std::vector<int> scope(lang.at(ri).arity());
        for (auto & v : scope)
            v = static_cast<int>(rng_below(rng, vars));
        inst.add_constraint(ri, scope);
    }
    return inst;
}

// Random 3SAT over the clause relations: three distinct variables per clause,
// negated literals listed first, so a clause with i negations uses 3sat_i.
inline auto random_threesat(std::mt19937_64 & rng, int vars, int clauses) -> maxcsp::instance
{
    if (vars < 3)
        throw maxcsp::contract_error("random_threesat: need at least 3 variables");
    maxcsp::instance inst(maxcsp::threesat_language(), vars);
    for (int c = 0; c < clauses; ++c) {
        int a = static_cast<int>(rng_below(rng, vars));
        int b = a, e = a;
        while (b == a)
            b = static_cast<int>(rng_below(rng, vars));
        while (e == a || e == b)
            e = static_cast<int>(rng_below(rng, vars));
        std::vector<int> neg, pos;
        for (int x : {a, b, e})
            (rng_below(rng, 2) == 1 ? neg : pos).push_back(x);
        std::vector<int> scope = neg;
        scope.insert(scope.end(), pos.begin(), pos.end());
        inst.add_constraint("3sat" + std::to_string(neg.size()), scope);
    }
    return inst;
}

}
