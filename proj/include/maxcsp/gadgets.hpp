#pragma once

#include <maxcsp/ppformula.hpp>
#include <maxcsp/strict.hpp>
#include <maxcsp/structure.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace maxcsp {

// Gadget constructors. Every constructor runs verify_strict (or eval_pp for
// the perfect p-p implementations) before returning; a gadget that fails its
// own verification is a bug, reported loudly rather than returned.

namespace detail {
    inline void must_verify(const strict_implementation & imp, const std::string & who)
    {
        auto chk = verify_strict(imp);
        if (! chk.ok)
            throw contract_error(who + ": constructed gadget failed verification: " +
                chk.failure);
    }
}

// G(x,y) + G(y,x) is a strict 1-implementation of the symmetrisation of an
// antisymmetric digraph G.
inline auto gadget_double_edge(const relation & g, const std::string & rel_name = "g")
    -> strict_implementation
{
    auto props = digraph_props(g);
    if (! props.antisymmetric)
        throw contract_error("gadget_double_edge: digraph must be antisymmetric "
            "(no loops, no two-way pair)");
    strict_implementation imp;
    imp.primary_arity = 2;
    imp.aux_arity = 0;
    imp.alpha = 1;
    imp.lang = language(g.domain_size());
    imp.lang.add(rel_name, g);
    imp.summands.push_back(strict_summand{rel_name, {0, 1}});
    imp.summands.push_back(strict_summand{rel_name, {1, 0}});
    relation target(g.domain_size(), 2);
    for (auto & t : g.tuples()) {
        target.add(t);
        target.add({t[1], t[0]});
    }
    imp.target = target;
    detail::must_verify(imp, "gadget_double_edge");
    return imp;
}

// A chain of k-2 undirected-cycle edges through k-3 auxiliaries strictly
// (k-2)-implements disequality on k values, for odd k >= 3.
inline auto gadget_odd_cycle_disequality(int k, const std::string & rel_name = "c")
    -> strict_implementation
{
    if (k < 3 || k % 2 == 0)
        throw contract_error("gadget_odd_cycle_disequality: k must be odd and >= 3");
    strict_implementation imp;
    imp.primary_arity = 2;
    imp.aux_arity = k - 3;
    imp.alpha = k - 2;
    imp.lang = language(k);
    imp.lang.add(rel_name, undirected_cycle(k));
    // variable layout: 0 = chain start, 1 = chain end, 2.. = interior points
    auto chain_var = [&](int i) { // i = 0..k-2 along the chain
        if (i == 0)
            return 0;
        if (i == k - 2)
            return 1;
        return 1 + i;
    };
    for (int i = 0; i + 1 <= k - 2; ++i)
        imp.summands.push_back(strict_summand{rel_name, {chain_var(i), chain_var(i + 1)}});
    imp.target = disequality(k);
    detail::must_verify(imp, "gadget_odd_cycle_disequality");
    return imp;
}

// S(x) + T(x) strictly 1-implements the union of two disjoint unary relations.
inline auto gadget_unary_union(const relation & s, const relation & t,
    const std::string & s_name = "s", const std::string & t_name = "t")
    -> strict_implementation
{
    if (s.arity() != 1 || t.arity() != 1)
        throw contract_error("gadget_unary_union: both relations must be unary");
    if (s.domain_size() != t.domain_size())
        throw contract_error("gadget_unary_union: domain mismatch");
    relation target(s.domain_size(), 1);
    for (int v = 0; v < s.domain_size(); ++v) {
        bool in_s = s.contains({v}), in_t = t.contains({v});
        if (in_s && in_t)
            throw contract_error("gadget_unary_union: relations intersect at value " +
                std::to_string(v));
        if (in_s || in_t)
            target.add({v});
    }
    strict_implementation imp;
    imp.primary_arity = 1;
    imp.aux_arity = 0;
    imp.alpha = 1;
    imp.lang = language(s.domain_size());
    imp.lang.add(s_name, s);
    imp.lang.add(t_name, t);
    imp.summands.push_back(strict_summand{s_name, {0}});
    imp.summands.push_back(strict_summand{t_name, {0}});
    imp.target = target;
    detail::must_verify(imp, "gadget_unary_union");
    return imp;
}

// The out- (or in-) neighbourhood of a set of vertices.
inline auto neighborhood(const relation & h, const std::vector<int> & omega, bool outgoing)
    -> relation
{
    if (h.arity() != 2)
        throw contract_error("neighborhood: relation must be binary");
    relation out(h.domain_size(), 1);
    for (int i : omega)
        for (int j = 0; j < h.domain_size(); ++j)
            if (outgoing ? h.contains({i, j}) : h.contains({j, i}))
                out.add({j});
    return out;
}

// For a core digraph H and an orbit Omega of its automorphism group, one
// pinned edge H(z_w, x) plus one edge atom per edge of H over a full vertex
// copy z_0..z_{d-1} strictly (|E|+1)-implements the unary neighbourhood
// Omega+ (outgoing) or Omega- (incoming, with the pinned edge reversed).
inline auto gadget_orbit_neighborhood(const relation & h, const std::vector<int> & omega,
    bool outgoing, const std::string & rel_name = "h") -> strict_implementation
{
    if (h.arity() != 2)
        throw contract_error("gadget_orbit_neighborhood: relation must be binary");
    language single(h.domain_size());
    single.add(rel_name, h);
    if (! is_core(single))
        throw contract_error("gadget_orbit_neighborhood: digraph must be a core");
    auto orb = orbits(single);
    bool is_orbit = false;
    for (auto & cls : orb.classes)
        if (cls == omega)
            is_orbit = true;
    if (! is_orbit)
        throw contract_error("gadget_orbit_neighborhood: the given set is not an orbit of "
            "the automorphism group");
    const int d = h.domain_size();
    const int pin = omega.front(); // least orbit element carries the pinned edge

    strict_implementation imp;
    imp.primary_arity = 1;
    imp.aux_arity = d; // one copy variable per vertex
    imp.alpha = static_cast<int>(h.count()) + 1;
    imp.lang = single;
    auto copy_var = [&](int vertex) { return 1 + vertex; };
    if (outgoing)
        imp.summands.push_back(strict_summand{rel_name, {copy_var(pin), 0}});
    else
        imp.summands.push_back(strict_summand{rel_name, {0, copy_var(pin)}});
    for (auto & e : h.tuples())
        imp.summands.push_back(strict_summand{rel_name, {copy_var(e[0]), copy_var(e[1])}});
    imp.target = neighborhood(h, omega, outgoing);
    detail::must_verify(imp, "gadget_orbit_neighborhood");
    return imp;
}

// One step of arity reduction: a strict 1-implementation of some non-empty,
// non-valid relation of arity n-1 in terms of R (arity n >= 3). If some
// member repeats a value, the earliest repeat's positions are identified;
// otherwise the last coordinate is existentially projected away.
inline auto arity_reduction_step(const relation & r, const std::string & rel_name)
    -> strict_implementation
{
    const int n = r.arity();
    if (n < 3)
        throw contract_error("arity_reduction_step: arity must be >= 3");
    if (r.is_empty() || r.is_valid())
        throw contract_error("arity_reduction_step: relation must be non-empty and non-valid");

    strict_implementation imp;
    imp.alpha = 1;
    imp.lang = language(r.domain_size());
    imp.lang.add(rel_name, r);

    // earliest member with a repeated value, earliest position pair within it
    int rep_i = -1, rep_j = -1;
    for (auto & t : r.tuples()) {
        for (int i = 0; i < n && rep_i < 0; ++i)
            for (int j = i + 1; j < n; ++j)
                if (t[i] == t[j]) {
                    rep_i = i;
                    rep_j = j;
                    break;
                }
        if (rep_i >= 0)
            break;
    }

    if (rep_i >= 0) {
        // identify coordinates rep_i and rep_j: new arity n-1, no auxiliaries
        imp.primary_arity = n - 1;
        imp.aux_arity = 0;
        std::vector<int> scope(n);
        for (int l = 0; l < n; ++l) {
            if (l == rep_j)
                scope[l] = rep_i;
            else if (l > rep_j)
                scope[l] = l - 1;
            else
                scope[l] = l;
        }
        imp.summands.push_back(strict_summand{rel_name, scope});
        relation target(r.domain_size(), n - 1);
        for (auto & t : r.tuples()) {
            if (t[rep_i] != t[rep_j])
                continue;
            std::vector<int> nt;
            nt.reserve(n - 1);
            for (int l = 0; l < n; ++l)
                if (l != rep_j)
                    nt.push_back(t[l]);
            target.add(nt);
        }
        imp.target = target;
    }
    else {
        // all members have pairwise distinct values: project the last
        // coordinate existentially
        imp.primary_arity = n - 1;
        imp.aux_arity = 1;
        std::vector<int> scope(n);
        for (int l = 0; l < n; ++l)
            scope[l] = l; // variable n-1 is the single auxiliary
        imp.summands.push_back(strict_summand{rel_name, scope});
        relation target(r.domain_size(), n - 1);
        for (auto & t : r.tuples())
            target.add(std::vector<int>(t.begin(), t.end() - 1));
        imp.target = target;
    }

    if (imp.target.is_empty() || imp.target.is_valid())
        throw contract_error("arity_reduction_step: produced target is empty or valid, "
            "which the construction should rule out");
    detail::must_verify(imp, "arity_reduction_step");
    return imp;
}

// Full reduction chain from a non-empty, non-valid relation of arity >= 2
// down to a binary one: a single composed strict 1-implementation in terms of
// the original relation, plus the per-step gadgets for inspection.
struct arity_reduction_chain {
    strict_implementation composed;         // binary target, summands over the input relation
    std::vector<strict_implementation> steps;
};

inline auto gadget_arity_reduction(const relation & r, const std::string & rel_name = "r")
    -> arity_reduction_chain
{
    if (r.arity() < 2)
        throw contract_error("gadget_arity_reduction: arity must be >= 2");
    if (r.is_empty() || r.is_valid())
        throw contract_error("gadget_arity_reduction: relation must be non-empty and non-valid");

    arity_reduction_chain chain;
    if (r.arity() == 2) {
        // already binary: the identity gadget R(x, y)
        strict_implementation imp;
        imp.primary_arity = 2;
        imp.aux_arity = 0;
        imp.alpha = 1;
        imp.lang = language(r.domain_size());
        imp.lang.add(rel_name, r);
        imp.summands.push_back(strict_summand{rel_name, {0, 1}});
        imp.target = r;
        detail::must_verify(imp, "gadget_arity_reduction");
        chain.composed = imp;
        return chain;
    }

    // Step names keep each intermediate relation distinct in the language.
    relation cur = r;
    std::string cur_name = rel_name;
    strict_implementation composed;
    bool first = true;
    while (cur.arity() > 2) {
        auto step = arity_reduction_step(cur, cur_name);
        chain.steps.push_back(step);
        if (first) {
            composed = step;
            first = false;
        }
        else {
            // the new step consumes the previous composed target: substitute
            // the composed gadget for the step's single summand
            composed = compose_strict(step, 0, composed);
            auto chk = verify_strict(composed);
            if (! chk.ok)
                throw contract_error("gadget_arity_reduction: composed chain failed "
                    "verification: " + chk.failure);
        }
        cur = step.target;
        cur_name = rel_name + "_a" + std::to_string(cur.arity());
    }
    chain.composed = composed;
    return chain;
}

// The automorphism group of a core language as a |D|-ary relation: one member
// (g(0), ..., g(d-1)) per automorphism g. Also emits, for each domain value
// i, a verified p-p formula defining equality restricted to the orbit of i,
// using two R_S atoms that share every position except the i-th.
struct group_relation_result {
    relation r_s;                              // arity d
    std::vector<std::vector<int>> group;       // the automorphisms, lex order
    orbit_partition orbit;
    std::vector<pp_formula> eq_formula;        // per domain value i
    std::vector<relation> eq_relation;         // equality on the orbit of i
};

inline auto gadget_group_relation(const language & lang, const std::string & rs_name = "rs",
    std::uint64_t budget = default_budget) -> group_relation_result
{
    if (! is_core(lang))
        throw contract_error("gadget_group_relation: language must be a core");
    const int d = lang.domain_size();
    group_relation_result out;
    out.group = automorphisms(lang);
    out.orbit = orbits(lang);
    relation rs(d, d);
    for (auto & g : out.group)
        rs.add(g);
    out.r_s = rs;

    language rs_lang(d);
    rs_lang.add(rs_name, rs);

    for (int i = 0; i < d; ++i) {
        // EQ_i(x, y) <=> exist z_0..z_{d-1} except slot i:
        //   R_S(z_0,..,x@i,..,z_{d-1}) and R_S(z_0,..,y@i,..,z_{d-1})
        pp_formula phi;
        phi.free_count = 2;
        phi.exist_count = d - 1;
        std::vector<int> slot(d);
        int next_exist = 2;
        for (int j = 0; j < d; ++j)
            slot[j] = (j == i) ? -1 : next_exist++;
        pp_atom a1, a2;
        a1.rel = rs_name;
        a2.rel = rs_name;
        for (int j = 0; j < d; ++j) {
            a1.scope.push_back(j == i ? 0 : slot[j]);
            a2.scope.push_back(j == i ? 1 : slot[j]);
        }
        phi.atoms.push_back(a1);
        phi.atoms.push_back(a2);

        relation expect(d, 2);
        for (int v : out.orbit.classes[out.orbit.class_of[i]])
            expect.add({v, v});
        auto chk = verify_perfect_implementation(phi, rs_lang, expect, budget);
        if (! chk.ok)
            throw contract_error("gadget_group_relation: orbit equality formula for value " +
                std::to_string(i) + " does not evaluate to the expected relation");
        out.eq_formula.push_back(std::move(phi));
        out.eq_relation.push_back(std::move(expect));
    }
    return out;
}

}
