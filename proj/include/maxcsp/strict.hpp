#pragma once

#include <maxcsp/relation.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxcsp {

// A strict alpha-implementation of a target relation: a sum of constraint
// applications over p primary and q auxiliary variables such that
//   - no assignment satisfies more than alpha summands,
//   - primaries in the target reach exactly alpha for some auxiliaries,
//   - primaries outside the target reach exactly alpha - 1.
// Summand scopes index primaries as 0..p-1 and auxiliaries as p..p+q-1.
struct strict_summand {
    std::string rel;        // name in the implementation's language
    std::vector<int> scope;

    friend auto operator==(const strict_summand & a, const strict_summand & b) -> bool
    {
        return a.rel == b.rel && a.scope == b.scope;
    }
};

struct strict_implementation {
    int primary_arity = 0;    // p, equals target arity
    int aux_arity = 0;        // q
    int alpha = 0;
    language lang;            // relations the summands draw from
    std::vector<strict_summand> summands;
    relation target;

    [[nodiscard]] auto var_count() const -> int { return primary_arity + aux_arity; }
};

// Exhaustive verification over all |D|^(p+q) assignments, reporting which
// clause of the definition fails first and on what witness.
struct strict_check {
    bool ok = false;
    std::string failure;                     // empty when ok
    std::optional<std::vector<int>> witness; // primary values of the failure
};

inline auto verify_strict(const strict_implementation & imp,
    std::uint64_t budget = default_budget) -> strict_check
{
    const int d = imp.lang.domain_size();
    const int p = imp.primary_arity, q = imp.aux_arity;
    if (imp.target.domain_size() != d)
        throw contract_error("verify_strict: target domain mismatch");
    if (imp.target.arity() != p)
        throw contract_error("verify_strict: target arity " + std::to_string(imp.target.arity()) +
            " does not equal primary arity " + std::to_string(p));
    std::vector<const relation *> rel_of(imp.summands.size());
    for (std::size_t i = 0; i < imp.summands.size(); ++i) {
        int idx = imp.lang.find(imp.summands[i].rel);
        if (idx < 0)
            throw contract_error("verify_strict: unknown summand relation '" +
                imp.summands[i].rel + "'");
        rel_of[i] = &imp.lang.at(idx);
        if (static_cast<int>(imp.summands[i].scope.size()) != rel_of[i]->arity())
            throw contract_error("verify_strict: summand scope does not match arity of '" +
                imp.summands[i].rel + "'");
        for (int v : imp.summands[i].scope)
            if (v < 0 || v >= p + q)
                throw contract_error("verify_strict: summand variable out of range");
    }

    const std::uint64_t prim_space = detail::checked_power(d, p, budget, "verify_strict");
    const std::uint64_t aux_space = detail::checked_power(d, q, budget, "verify_strict");
    if (aux_space > budget / prim_space)
        throw budget_error("verify_strict: " + std::to_string(d) + "^" + std::to_string(p + q) +
            " assignments exceed budget " + std::to_string(budget));

    std::vector<int> val(p + q, 0);
    strict_check out;
    for (std::uint64_t pc = 0; pc < prim_space; ++pc) {
        std::uint64_t c = pc;
        for (int i = 0; i < p; ++i) {
            val[i] = static_cast<int>(c % d);
            c /= d;
        }
        int best = -1;
        for (std::uint64_t ac = 0; ac < aux_space; ++ac) {
            std::uint64_t a = ac;
            for (int i = 0; i < q; ++i) {
                val[p + i] = static_cast<int>(a % d);
                a /= d;
            }
            int sat = 0;
            for (std::size_t s = 0; s < imp.summands.size(); ++s) {
                const relation & r = *rel_of[s];
                std::uint64_t idx = 0, mult = 1;
                for (int v : imp.summands[s].scope) {
                    idx += static_cast<std::uint64_t>(val[v]) * mult;
                    mult *= static_cast<std::uint64_t>(d);
                }
                if (r.contains_index(idx))
                    ++sat;
            }
            if (sat > imp.alpha) {
                out.failure = "some assignment satisfies " + std::to_string(sat) +
                    " summands, more than alpha = " + std::to_string(imp.alpha);
                out.witness = std::vector<int>(val.begin(), val.begin() + p);
                return out;
            }
            best = std::max(best, sat);
        }
        std::vector<int> prim(val.begin(), val.begin() + p);
        bool inside = imp.target.contains(prim);
        if (inside && best != imp.alpha) {
            out.failure = "member tuple reaches maximum " + std::to_string(best) +
                ", expected exactly alpha = " + std::to_string(imp.alpha);
            out.witness = prim;
            return out;
        }
        if (! inside && best != imp.alpha - 1) {
            out.failure = "non-member tuple reaches maximum " + std::to_string(best) +
                ", expected exactly alpha - 1 = " + std::to_string(imp.alpha - 1);
            out.witness = prim;
            return out;
        }
    }
    out.ok = true;
    return out;
}

// Substitute a strict implementation of one summand's relation into an outer
// implementation: the summand is replaced by the inner summand list (inner
// primaries renamed onto the outer summand's scope, inner auxiliaries turned
// into fresh outer auxiliaries), and alpha grows by alpha_inner - 1. The
// result is a strict implementation of the outer target over the remaining
// outer relations plus the inner language, and must be re-verified by the
// caller like any other gadget.
inline auto compose_strict(const strict_implementation & outer, std::size_t summand_index,
    const strict_implementation & inner) -> strict_implementation
{
    if (summand_index >= outer.summands.size())
        throw contract_error("compose_strict: summand index out of range");
    const strict_summand & victim = outer.summands[summand_index];
    if (outer.lang.at(victim.rel) != inner.target)
        throw contract_error("compose_strict: inner target does not match the relation of "
            "summand '" + victim.rel + "'");
    if (inner.lang.domain_size() != outer.lang.domain_size())
        throw contract_error("compose_strict: domain mismatch");

    strict_implementation out;
    out.primary_arity = outer.primary_arity;
    out.aux_arity = outer.aux_arity + inner.aux_arity;
    out.alpha = outer.alpha + inner.alpha - 1;
    out.target = outer.target;

    // union language: outer relations still used, inner relations added
    language merged(outer.lang.domain_size());
    for (std::size_t i = 0; i < outer.summands.size(); ++i) {
        if (i == summand_index)
            continue;
        const std::string & nm = outer.summands[i].rel;
        if (merged.find(nm) < 0)
            merged.add(nm, outer.lang.at(nm));
    }
    for (int i = 0; i < inner.lang.size(); ++i) {
        const std::string & nm = inner.lang.name(i);
        if (merged.find(nm) < 0)
            merged.add(nm, inner.lang.at(i));
        else if (merged.at(nm) != inner.lang.at(i))
            throw contract_error("compose_strict: relation name '" + nm +
                "' denotes different relations in the two languages");
    }
    out.lang = merged;

    // inner variable -> outer variable
    auto rename = [&](int v) -> int {
        if (v < inner.primary_arity)
            return victim.scope[v];
        return outer.primary_arity + outer.aux_arity + (v - inner.primary_arity);
    };

    for (std::size_t i = 0; i < outer.summands.size(); ++i) {
        if (i == summand_index)
            continue;
        out.summands.push_back(outer.summands[i]);
    }
    for (auto & s : inner.summands) {
        strict_summand ns;
        ns.rel = s.rel;
        ns.scope.reserve(s.scope.size());
        for (int v : s.scope)
            ns.scope.push_back(rename(v));
        out.summands.push_back(std::move(ns));
    }
    return out;
}

}
