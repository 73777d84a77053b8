#pragma once

#include <maxcsp/expander.hpp>
#include <maxcsp/gadgets.hpp>
#include <maxcsp/instance.hpp>

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maxcsp {

enum class reduction_kind {
    core_transfer,
    domain_restrict,
    orbit_restrict,
    gap_3sat,
    occ_bound,
    strict_gadget,
};

inline auto to_string(reduction_kind k) -> std::string
{
    switch (k) {
    case reduction_kind::core_transfer: return "CORE_TRANSFER";
    case reduction_kind::domain_restrict: return "DOMAIN_RESTRICT";
    case reduction_kind::orbit_restrict: return "ORBIT_RESTRICT";
    case reduction_kind::gap_3sat: return "GAP_3SAT";
    case reduction_kind::occ_bound: return "OCC_BOUND";
    case reduction_kind::strict_gadget: return "STRICT_GADGET";
    }
    return "?";
}

// A verified instance transformation. The maps carry solutions across the
// reduction; measure_claim takes any assignment of the OUTPUT instance and
// checks the exact measure relation the construction promises (it recomputes
// both measures, so it can be spot-checked against random assignments).
struct reduction_record {
    reduction_kind kind = reduction_kind::core_transfer;
    std::string description;
    instance output;
    std::function<assignment(const assignment &)> forward_solution;
    std::function<assignment(const assignment &)> backward_solution;
    std::function<bool(const assignment &)> measure_claim;
    std::vector<std::pair<std::string, fraction>> bookkeeping;
};

// ---------------------------------------------------------------------------
// core transfer: replace every relation by its retraction image over the core
// domain. For any output assignment s', pulling it back along the relabelling
// never loses measure; pushing any input assignment through pi never loses
// measure either. (Both inequalities together give OPT equality.)
inline auto transfer_core(const instance & inst, const retraction & pi) -> reduction_record
{
    const int d = inst.domain_size();
    if (static_cast<int>(pi.map.size()) != d)
        throw contract_error("transfer_core: retraction domain mismatch");
    for (int v : pi.image)
        if (pi.map[v] != v)
            throw contract_error("transfer_core: map does not fix its image");
    for (int i = 0; i < inst.lang().size(); ++i)
        if (! preserves(pi.map, inst.lang().at(i)))
            throw contract_error("transfer_core: map is not a retraction of relation '" +
                inst.lang().name(i) + "'");

    std::vector<int> old_to_new(d, -1);
    for (int i = 0; i < static_cast<int>(pi.image.size()); ++i)
        old_to_new[pi.image[i]] = i;

    language core_lang(static_cast<int>(pi.image.size()));
    for (int i = 0; i < inst.lang().size(); ++i) {
        relation mapped = map_relation(inst.lang().at(i), pi.map);
        core_lang.add(inst.lang().name(i), restrict_relation(mapped, pi.image).restricted);
    }
    instance out(core_lang, inst.num_vars());
    for (auto & c : inst.constraints())
        out.add_constraint(c.rel, c.scope);

    reduction_record rec;
    rec.kind = reduction_kind::core_transfer;
    rec.description = "relations replaced by their retraction images; core domain relabelled "
        "densely";
    rec.output = out;
    auto map = pi.map;
    auto o2n = old_to_new;
    auto n2o = pi.image;
    rec.forward_solution = [map, o2n](const assignment & s) {
        assignment t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            t[i] = o2n[map[s[i]]];
        return t;
    };
    rec.backward_solution = [n2o](const assignment & s) {
        assignment t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            t[i] = n2o[s[i]];
        return t;
    };
    instance in_copy = inst;
    auto back = rec.backward_solution;
    auto fwd = rec.forward_solution;
    instance out_copy = out;
    rec.measure_claim = [in_copy, out_copy, back, fwd](const assignment & s_out) {
        auto m_out = measure(out_copy, s_out).satisfied;
        auto s_in = back(s_out);
        auto m_in = measure(in_copy, s_in).satisfied;
        // pull-back never loses; push-forward of the pulled-back solution
        // never loses either
        return m_in >= m_out && measure(out_copy, fwd(s_in)).satisfied >= m_in;
    };
    rec.bookkeeping.emplace_back("core_domain", fraction(static_cast<std::int64_t>(pi.image.size())));
    return rec;
}

// ---------------------------------------------------------------------------
// domain restriction: restrict every relation to the members of a unary
// relation of the language. Exact measure equality for restricted-domain
// assignments. The formal approximation-preserving direction runs the other
// way (the restricted problem reduces TO the original); this record's
// description says so.
inline auto restrict_domain(const instance & inst, const std::string & unary_name)
    -> reduction_record
{
    int ui = inst.lang().find(unary_name);
    if (ui < 0)
        throw contract_error("restrict_domain: no relation named '" + unary_name + "'");
    const relation & u = inst.lang().at(ui);
    if (u.arity() != 1)
        throw contract_error("restrict_domain: '" + unary_name + "' is not unary");
    if (u.is_empty())
        throw contract_error("restrict_domain: '" + unary_name + "' is empty");
    std::vector<int> sub;
    for (int v = 0; v < inst.domain_size(); ++v)
        if (u.contains({v}))
            sub.push_back(v);

    language rlang(static_cast<int>(sub.size()));
    for (int i = 0; i < inst.lang().size(); ++i)
        rlang.add(inst.lang().name(i), restrict_relation(inst.lang().at(i), sub).restricted);
    instance out(rlang, inst.num_vars());
    for (auto & c : inst.constraints())
        out.add_constraint(c.rel, c.scope);

    reduction_record rec;
    rec.kind = reduction_kind::domain_restrict;
    rec.description = "language restricted to the members of '" + unary_name +
        "'; AP-reduction direction: the restricted problem reduces TO the original";
    rec.output = out;
    auto n2o = sub;
    std::vector<int> o2n(inst.domain_size(), -1);
    for (int i = 0; i < static_cast<int>(sub.size()); ++i)
        o2n[sub[i]] = i;
    rec.backward_solution = [n2o](const assignment & s) {
        assignment t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            t[i] = n2o[s[i]];
        return t;
    };
    rec.forward_solution = [o2n, n2o](const assignment & s) {
        assignment t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            t[i] = o2n[s[i]] >= 0 ? o2n[s[i]] : 0; // out-of-subset values snap to least
        return t;
    };
    instance in_copy = inst, out_copy = out;
    auto back = rec.backward_solution;
    rec.measure_claim = [in_copy, out_copy, back](const assignment & s_out) {
        // exact equality for restricted-domain assignments
        return measure(in_copy, back(s_out)).satisfied == measure(out_copy, s_out).satisfied;
    };
    rec.bookkeeping.emplace_back("restricted_domain", fraction(static_cast<std::int64_t>(sub.size())));
    return rec;
}

// ---------------------------------------------------------------------------
// orbit restriction: an instance over H|Omega becomes an instance over {H} by
// giving every variable a full vertex cloud wired with `copies` copies of
// every H-edge, identifying the variable with the cloud slot of the least
// orbit element. OPT shifts by exactly copies * |E(H)| * |V|.
inline auto restrict_to_orbit_reduction(const relation & h, const std::vector<int> & omega,
    const instance & inst, int copies) -> reduction_record
{
    if (h.arity() != 2)
        throw contract_error("restrict_to_orbit_reduction: H must be binary");
    language hl(h.domain_size());
    hl.add("h", h);
    if (! is_core(hl))
        throw contract_error("restrict_to_orbit_reduction: H must be a core");
    {
        auto orb = orbits(hl);
        bool found = false;
        for (auto & cls : orb.classes)
            if (cls == omega)
                found = true;
        if (! found)
            throw contract_error("restrict_to_orbit_reduction: the given set is not an orbit");
    }
    auto res = restrict_relation(h, omega);
    if (inst.lang().size() != 1 || inst.lang().at(0) != res.restricted)
        throw contract_error("restrict_to_orbit_reduction: instance language must be exactly "
            "H restricted to the orbit (relabelled)");
    if (copies < 1 || copies < occurrence_bound(inst))
        throw contract_error("restrict_to_orbit_reduction: copies must be >= the occurrence "
            "bound " + std::to_string(occurrence_bound(inst)));

    const int p = h.domain_size();
    const int n = inst.num_vars();
    const int pin = omega.front();
    auto edges = h.tuples();

    language out_lang(p);
    out_lang.add("h", h);
    instance out(out_lang, n * p);
    auto cloud_var = [p](int var, int vertex) { return var * p + vertex; };
    for (auto & c : inst.constraints())
        out.add_constraint("h", {cloud_var(c.scope[0], pin), cloud_var(c.scope[1], pin)});
    for (int v = 0; v < n; ++v)
        for (auto & e : edges)
            for (int rep = 0; rep < copies; ++rep)
                out.add_constraint("h", {cloud_var(v, e[0]), cloud_var(v, e[1])});

    const auto autos = automorphisms(hl);
    auto n2o = res.new_to_old;
    std::vector<int> o2n(p, -1);
    for (int i = 0; i < static_cast<int>(n2o.size()); ++i)
        o2n[n2o[i]] = i;

    reduction_record rec;
    rec.kind = reduction_kind::orbit_restrict;
    rec.description = "every variable expanded to a full H-vertex cloud wired with " +
        std::to_string(copies) + " copies per edge; variable identified with cloud slot " +
        std::to_string(pin);
    rec.output = out;
    std::int64_t shift = static_cast<std::int64_t>(copies) *
        static_cast<std::int64_t>(edges.size()) * n;
    rec.bookkeeping.emplace_back("opt_shift", fraction(shift));
    rec.bookkeeping.emplace_back("copies", fraction(copies));

    rec.forward_solution = [autos, n2o, p, n, pin, cloud_var](const assignment & s) {
        assignment t(static_cast<std::size_t>(n) * p, 0);
        for (int v = 0; v < n; ++v) {
            int want = n2o[s[v]];
            // least automorphism sending the pinned vertex to the value
            const std::vector<int> * g = nullptr;
            for (auto & a : autos)
                if (a[pin] == want) {
                    g = &a;
                    break;
                }
            if (! g)
                throw contract_error("restrict_to_orbit_reduction: no automorphism reaches "
                    "an orbit value (orbit check should have prevented this)");
            for (int a = 0; a < p; ++a)
                t[cloud_var(v, a)] = (*g)[a];
        }
        return t;
    };

    relation h_copy = h;
    auto edges_copy = edges;
    auto repair = [h_copy, edges_copy, p, n, cloud_var](assignment s) {
        for (int v = 0; v < n; ++v) {
            bool intact = true;
            for (auto & e : edges_copy)
                if (! h_copy.contains({s[cloud_var(v, e[0])], s[cloud_var(v, e[1])]})) {
                    intact = false;
                    break;
                }
            if (! intact)
                for (int a = 0; a < p; ++a)
                    s[cloud_var(v, a)] = a; // reset to the identity copy
        }
        return s;
    };
    rec.backward_solution = [repair, o2n, p, n, pin, cloud_var](const assignment & s_out) {
        auto fixed = repair(s_out);
        assignment s(n);
        for (int v = 0; v < n; ++v) {
            int val = fixed[cloud_var(v, pin)];
            if (o2n[val] < 0)
                throw contract_error("restrict_to_orbit_reduction: repaired cloud left the "
                    "orbit, which the core property should prevent");
            s[v] = o2n[val];
        }
        return s;
    };
    instance in_copy = inst, out_copy = out;
    auto back = rec.backward_solution;
    rec.measure_claim = [in_copy, out_copy, repair, back, shift](const assignment & s_out) {
        auto repaired = repair(s_out);
        auto m_rep = measure(out_copy, repaired).satisfied;
        if (m_rep < measure(out_copy, s_out).satisfied)
            return false; // repair must never lose measure
        return measure(in_copy, back(s_out)).satisfied == m_rep - shift;
    };
    return rec;
}

// ---------------------------------------------------------------------------
// occurrence bounding

struct occ_bound_config {
    std::int64_t max_occurrences = 1; // threshold k: vars above it get clouds
    int degree = 6;                   // expander degree
    std::uint64_t seed = 0;
};

// Replace each variable occurring more than the threshold by a cloud of
// copies, one per constraint slot, glued with |D| copies of its orbit
// equality along the edges of one shared verified expander. eq_of_orbit maps
// an orbit representative to the equality-on-that-orbit relation; var_orbit
// says which orbit each over-occurring variable's value is expected to stay
// in (the u-block convention of the gap reduction).
inline auto bound_occurrences(const instance & inst, const std::map<int, relation> & eq_of_orbit,
    const std::map<int, int> & var_orbit, const occ_bound_config & cfg) -> reduction_record
{
    if (cfg.max_occurrences < 1)
        throw contract_error("bound_occurrences: threshold must be >= 1");
    const int d = inst.domain_size();
    if (d < 2)
        throw contract_error("bound_occurrences: domain must have at least 2 values");
    auto occ = occurrence_counts(inst);
    std::vector<int> over;
    std::int64_t widest = 0;
    for (int v = 0; v < inst.num_vars(); ++v)
        if (occ[v] > cfg.max_occurrences) {
            over.push_back(v);
            widest = std::max(widest, occ[v]);
        }

    reduction_record rec;
    rec.kind = reduction_kind::occ_bound;
    if (over.empty()) {
        rec.description = "all occurrence counts within the threshold; identity transformation";
        rec.output = inst;
        rec.forward_solution = [](const assignment & s) { return s; };
        rec.backward_solution = [](const assignment & s) { return s; };
        instance in_copy = inst;
        rec.measure_claim = [in_copy](const assignment & s_out) {
            (void) s_out;
            return true;
        };
        rec.bookkeeping.emplace_back("eq_constraints", fraction(0));
        rec.bookkeeping.emplace_back("achieved_bound", fraction(occurrence_bound(inst)));
        return rec;
    }

    for (int v : over) {
        auto it = var_orbit.find(v);
        if (it == var_orbit.end())
            throw contract_error("bound_occurrences: variable " + std::to_string(v) +
                " exceeds the threshold but has no orbit assigned");
        auto eq = eq_of_orbit.find(it->second);
        if (eq == eq_of_orbit.end())
            throw contract_error("bound_occurrences: no equality relation for orbit " +
                std::to_string(it->second));
        if (eq->second.arity() != 2 || eq->second.domain_size() != d)
            throw contract_error("bound_occurrences: orbit equality relation must be binary "
                "over the instance domain");
    }

    expander exp = find_expander(static_cast<int>(std::max<std::int64_t>(widest, 2)),
        cfg.degree, cfg.seed);
    const int m = exp.vertices;
    const int p_copies = d; // equality multiplicity per expander edge

    // output language: original plus one equality relation per used orbit
    language out_lang = inst.lang();
    std::map<int, std::string> eq_name;
    for (int v : over) {
        int orbit = var_orbit.at(v);
        if (eq_name.count(orbit))
            continue;
        std::string nm = "eq_o" + std::to_string(orbit);
        if (out_lang.find(nm) >= 0) {
            if (out_lang.at(nm) != eq_of_orbit.at(orbit))
                throw contract_error("bound_occurrences: name '" + nm +
                    "' already denotes a different relation");
        }
        else
            out_lang.add(nm, eq_of_orbit.at(orbit));
        eq_name[orbit] = nm;
    }

    // cloud layout: slot 0 reuses the original variable index, slots 1..m-1
    // are fresh variables appended per over-occurring variable in order
    instance out(out_lang, inst.num_vars());
    std::map<int, std::vector<int>> cloud;
    for (int v : over) {
        std::vector<int> slots(m);
        slots[0] = v;
        for (int i = 1; i < m; ++i)
            slots[i] = out.add_variable();
        cloud[v] = std::move(slots);
    }

    std::map<int, std::int64_t> next_slot;
    for (auto & c : inst.constraints()) {
        std::vector<int> scope = c.scope;
        for (auto & v : scope) {
            auto it = cloud.find(v);
            if (it != cloud.end())
                v = it->second[static_cast<std::size_t>(next_slot[v]++ % m)];
        }
        out.add_constraint(inst.lang().name(c.rel), std::move(scope));
    }
    std::int64_t eq_total = 0;
    for (int v : over) {
        const auto & slots = cloud.at(v);
        const std::string & nm = eq_name.at(var_orbit.at(v));
        for (auto & e : exp.edges)
            for (int rep = 0; rep < p_copies; ++rep) {
                out.add_constraint(nm, {slots[e.first], slots[e.second]});
                ++eq_total;
            }
    }

    rec.description = "over-occurring variables expanded to clouds over a verified " +
        std::to_string(exp.degree) + "-regular expander on " + std::to_string(m) +
        " vertices, " + std::to_string(p_copies) + " equality copies per edge";
    rec.output = out;
    rec.bookkeeping.emplace_back("input_constraints", fraction(inst.num_constraints()));
    rec.bookkeeping.emplace_back("eq_constraints", fraction(eq_total));
    rec.bookkeeping.emplace_back("output_constraints", fraction(out.num_constraints()));
    rec.bookkeeping.emplace_back("achieved_bound", fraction(occurrence_bound(out)));
    // the soundness bookkeeping coefficient: eq constraints per input constraint;
    // a (1 - eps) gap on the input becomes (eps + r) / (1 + r) on the output
    fraction r(eq_total, std::max<std::int64_t>(inst.num_constraints(), 1));
    rec.bookkeeping.emplace_back("gap_coefficient", r);

    auto cloud_copy = cloud;
    rec.forward_solution = [cloud_copy, nfresh = out.num_vars()](const assignment & s) {
        assignment t(s);
        t.resize(nfresh, 0);
        for (auto & [v, slots] : cloud_copy)
            for (int slot : slots)
                t[slot] = s[v];
        return t;
    };

    // repair: set each cloud to the most frequent in-orbit value (falling
    // back to the orbit representative), which never loses measure for
    // |D| >= 2 equality copies per edge
    std::map<int, relation> eq_rel_of_var;
    for (int v : over)
        eq_rel_of_var[v] = eq_of_orbit.at(var_orbit.at(v));
    auto repair = [cloud_copy, eq_rel_of_var, d](assignment s) {
        for (auto & [v, slots] : cloud_copy) {
            const relation & eq = eq_rel_of_var.at(v);
            std::vector<int> count(d, 0);
            for (int slot : slots)
                ++count[s[slot]];
            int best = -1, best_count = -1;
            for (int val = 0; val < d; ++val)
                if (eq.contains({val, val}) && count[val] > best_count) {
                    best = val;
                    best_count = count[val];
                }
            if (best < 0)
                throw contract_error("bound_occurrences: orbit equality relation has no "
                    "diagonal member at all");
            for (int slot : slots)
                s[slot] = best;
        }
        return s;
    };
    int n_in = inst.num_vars();
    rec.backward_solution = [repair, n_in](const assignment & s_out) {
        auto fixed = repair(s_out);
        return assignment(fixed.begin(), fixed.begin() + n_in);
    };
    instance in_copy = inst, out_copy = out;
    auto back = rec.backward_solution;
    rec.measure_claim = [in_copy, out_copy, repair, back, eq_total](const assignment & s_out) {
        auto repaired = repair(s_out);
        auto m_rep = measure(out_copy, repaired).satisfied;
        if (m_rep < measure(out_copy, s_out).satisfied)
            return false; // repair must never lose measure
        return measure(in_copy, back(s_out)).satisfied >= m_rep - eq_total;
    };
    return rec;
}

// ---------------------------------------------------------------------------
// strict gadget application: replace every constraint on the target relation
// by the gadget's summands over fresh auxiliaries. With each gadget block's
// auxiliaries re-optimised, the measure shifts by exactly (alpha-1) per
// replaced constraint.
inline auto apply_strict_gadget(const instance & inst, const std::string & target_name,
    const strict_implementation & imp) -> reduction_record
{
    int ti = inst.lang().find(target_name);
    if (ti < 0)
        throw contract_error("apply_strict_gadget: no relation named '" + target_name + "'");
    if (inst.lang().at(ti) != imp.target)
        throw contract_error("apply_strict_gadget: gadget target differs from relation '" +
            target_name + "'");
    auto chk = verify_strict(imp);
    if (! chk.ok)
        throw contract_error("apply_strict_gadget: gadget failed verification: " + chk.failure);

    language out_lang(inst.domain_size());
    for (int i = 0; i < inst.lang().size(); ++i)
        if (i != ti)
            out_lang.add(inst.lang().name(i), inst.lang().at(i));
    for (int i = 0; i < imp.lang.size(); ++i) {
        const std::string & nm = imp.lang.name(i);
        if (out_lang.find(nm) < 0)
            out_lang.add(nm, imp.lang.at(i));
        else if (out_lang.at(nm) != imp.lang.at(i))
            throw contract_error("apply_strict_gadget: name '" + nm +
                "' denotes different relations in instance and gadget");
    }

    instance out(out_lang, inst.num_vars());
    std::vector<std::vector<int>> aux_blocks; // auxiliaries per replaced constraint
    std::int64_t replaced = 0;
    for (auto & c : inst.constraints()) {
        if (c.rel != ti) {
            out.add_constraint(inst.lang().name(c.rel), c.scope);
            continue;
        }
        ++replaced;
        std::vector<int> aux(imp.aux_arity);
        for (int i = 0; i < imp.aux_arity; ++i)
            aux[i] = out.add_variable();
        aux_blocks.push_back(aux);
        for (auto & s : imp.summands) {
            std::vector<int> scope;
            scope.reserve(s.scope.size());
            for (int v : s.scope)
                scope.push_back(v < imp.primary_arity ? c.scope[v]
                                                      : aux[v - imp.primary_arity]);
            out.add_constraint(s.rel, std::move(scope));
        }
    }

    reduction_record rec;
    rec.kind = reduction_kind::strict_gadget;
    rec.description = "constraints on '" + target_name + "' replaced by a verified strict " +
        std::to_string(imp.alpha) + "-implementation";
    rec.output = out;
    rec.bookkeeping.emplace_back("alpha", fraction(imp.alpha));
    rec.bookkeeping.emplace_back("replaced_constraints", fraction(replaced));
    rec.bookkeeping.emplace_back("opt_shift", fraction((imp.alpha - 1) * replaced));

    const int d = inst.domain_size();
    int n_in = inst.num_vars();
    // per-block exhaustive auxiliary re-optimisation
    instance out_copy = out;
    auto blocks = aux_blocks;
    std::uint64_t aux_space = detail::checked_power(d, imp.aux_arity, default_budget,
        "apply_strict_gadget");
    auto repair = [out_copy, blocks, d, aux_space](assignment s) {
        for (auto & aux : blocks) {
            assignment best = s;
            std::int64_t best_m = measure(out_copy, s).satisfied;
            assignment trial = s;
            for (std::uint64_t code = 0; code < aux_space; ++code) {
                std::uint64_t c = code;
                for (std::size_t i = 0; i < aux.size(); ++i) {
                    trial[aux[i]] = static_cast<int>(c % d);
                    c /= d;
                }
                auto m = measure(out_copy, trial).satisfied;
                if (m > best_m) {
                    best_m = m;
                    best = trial;
                }
            }
            s = best;
        }
        return s;
    };
    rec.forward_solution = [repair, nfresh = out.num_vars()](const assignment & s) {
        assignment t(s);
        t.resize(nfresh, 0);
        return repair(t);
    };
    rec.backward_solution = [n_in](const assignment & s_out) {
        return assignment(s_out.begin(), s_out.begin() + n_in);
    };
    instance in_copy = inst;
    std::int64_t shift = (imp.alpha - 1) * replaced;
    auto back = rec.backward_solution;
    rec.measure_claim = [in_copy, out_copy, repair, back, shift](const assignment & s_out) {
        auto repaired = repair(s_out);
        auto m_rep = measure(out_copy, repaired).satisfied;
        if (m_rep < measure(out_copy, s_out).satisfied)
            return false;
        return measure(in_copy, back(repaired)).satisfied == m_rep - shift;
    };
    return rec;
}

// ---------------------------------------------------------------------------
// the four ternary Boolean clause relations: 3sat_i excludes the pattern of
// i ones followed by zeros
inline auto threesat_relation(int i) -> relation
{
    if (i < 0 || i > 3)
        throw contract_error("threesat_relation: index must be 0..3");
    relation r(2, 3);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                r.add({x, y, z});
    const std::array<std::vector<int>, 4> excluded = {
        std::vector<int>{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
    r.remove(excluded[i]);
    return r;
}

inline auto threesat_language() -> language
{
    language lang(2);
    for (int i = 0; i < 4; ++i)
        lang.add("3sat" + std::to_string(i), threesat_relation(i));
    return lang;
}

// A two-valued interpretation of part of the domain: phi maps the subdomain b
// onto {0,1} surjectively.
struct phi_map {
    std::vector<int> b;       // sorted distinct domain values
    std::vector<int> to_bool; // parallel to b

    [[nodiscard]] auto of(int v) const -> int
    {
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i] == v)
                return to_bool[i];
        return -1;
    }
};

inline auto phi_identity() -> phi_map
{
    return phi_map{{0, 1}, {0, 1}};
}

inline void validate_phi(const phi_map & phi, int d)
{
    if (phi.b.size() != phi.to_bool.size() || phi.b.empty())
        throw contract_error("phi: subdomain and value lists must be parallel and non-empty");
    bool hit0 = false, hit1 = false;
    for (std::size_t i = 0; i < phi.b.size(); ++i) {
        if (phi.b[i] < 0 || phi.b[i] >= d)
            throw contract_error("phi: subdomain value outside domain");
        if (i > 0 && phi.b[i] <= phi.b[i - 1])
            throw contract_error("phi: subdomain must be sorted and distinct");
        if (phi.to_bool[i] == 0)
            hit0 = true;
        else if (phi.to_bool[i] == 1)
            hit1 = true;
        else
            throw contract_error("phi: values must be 0 or 1");
    }
    if (! hit0 || ! hit1)
        throw contract_error("phi: map must be surjective onto {0,1}");
}

// phi^{-1}(3sat_i) as a ternary relation over the full domain.
inline auto preimage_relation(const phi_map & phi, int i, int d) -> relation
{
    relation sat = threesat_relation(i);
    relation r(d, 3);
    for (int x : phi.b)
        for (int y : phi.b)
            for (int z : phi.b)
                if (sat.contains({phi.of(x), phi.of(y), phi.of(z)}))
                    r.add({x, y, z});
    return r;
}

// gamma plus the unary constants c0..c{d-1} (for pp witnesses that pin values).
inline auto with_constants(const language & gamma) -> language
{
    language out(gamma.domain_size());
    for (int i = 0; i < gamma.size(); ++i)
        out.add(gamma.name(i), gamma.at(i));
    for (int e = 0; e < gamma.domain_size(); ++e) {
        std::string nm = "c" + std::to_string(e);
        if (out.find(nm) >= 0)
            throw contract_error("with_constants: name '" + nm + "' already taken");
        out.add(nm, constant_relation(gamma.domain_size(), e));
    }
    return out;
}

// Rewrite a pp formula over gamma+constants into one over gamma alone, with d
// new leading free variables u_0..u_{d-1} standing in for the constants:
// every constant atom c_a(x) merges x with u_a (existentials) or ties it by
// equality (frees). Evaluating the result with u = identity recovers the
// original relation.
inline auto eliminate_constants(const pp_formula & phi, int d) -> pp_formula
{
    pp_formula out;
    out.free_count = d + phi.free_count;
    out.exist_count = phi.exist_count;

    // variable renumbering: old free i -> d+i, old exist j -> d+free+j
    auto shifted = [&](int v) { return d + v; };

    // union-find over the shifted variable space for existential merges
    std::vector<int> parent(d + phi.var_count());
    for (std::size_t i = 0; i < parent.size(); ++i)
        parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<pp_atom> kept;
    std::vector<std::pair<int, int>> free_pins; // (free var new index, u slot)
    for (auto & a : phi.atoms) {
        if (a.rel.size() >= 2 && a.rel[0] == 'c' &&
            a.rel.find_first_not_of("0123456789", 1) == std::string::npos) {
            int slot = std::stoi(a.rel.substr(1));
            if (slot < 0 || slot >= d)
                throw contract_error("eliminate_constants: constant '" + a.rel +
                    "' outside domain");
            if (a.scope.size() != 1)
                throw contract_error("eliminate_constants: constant atom must be unary");
            int v = a.scope[0];
            if (v < phi.free_count)
                free_pins.emplace_back(shifted(v), slot);
            else {
                int rv = find(shifted(v));
                int ru = find(slot);
                if (rv == ru)
                    continue;
                // prefer the u slot as the representative
                if (ru < d)
                    parent[rv] = ru;
                else if (rv < d)
                    parent[ru] = rv;
                else
                    parent[std::max(rv, ru)] = std::min(rv, ru);
            }
        }
        else {
            pp_atom na = a;
            for (auto & v : na.scope)
                v = shifted(v);
            kept.push_back(std::move(na));
        }
    }
    // two different constants forced onto one existential would mean the
    // verified witness defines the empty relation
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            if (find(a) == find(b))
                throw contract_error("eliminate_constants: two distinct constants merged; "
                    "the witness formula is unsatisfiable");

    // compact: free vars keep their slots, surviving existential roots pack after
    std::vector<int> final_of(parent.size(), -1);
    for (int i = 0; i < out.free_count; ++i)
        final_of[i] = i;
    int next = out.free_count;
    for (std::size_t i = out.free_count; i < parent.size(); ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i))
            final_of[i] = next++;
    out.exist_count = next - out.free_count;

    auto resolve = [&](int v) {
        int r = find(v);
        if (final_of[r] < 0)
            throw contract_error("eliminate_constants: unmapped variable");
        return final_of[r];
    };
    for (auto & a : kept) {
        for (auto & v : a.scope)
            v = resolve(v);
        out.atoms.push_back(std::move(a));
    }
    for (auto & [fv, slot] : free_pins)
        out.atoms.push_back(pp_atom{pp_equality_name, {resolve(fv), resolve(slot)}});
    return out;
}

// ---------------------------------------------------------------------------
// the composed gap reduction from Max 3SAT

struct gap_pipeline_result {
    reduction_record record;          // composite: 3SAT instance -> final instance
    instance preimage_instance;       // stage 1: clause relations -> phi preimages
    instance ublock_instance;         // stage 2: shared u-block, minimal invariant relations
    std::array<pp_formula, 4> eliminated; // constant-free witnesses with the u-block
    group_relation_result group;
    std::array<relation, 4> rprime;
};

inline auto gap_pipeline_3sat(const language & gamma, const phi_map & phi,
    const std::array<pp_formula, 4> & witnesses, const instance & sat_inst, int degree,
    std::uint64_t seed, std::uint64_t budget = default_budget) -> gap_pipeline_result
{
    const int d = gamma.domain_size();
    if (d < 2)
        throw contract_error("gap_pipeline_3sat: domain must have at least 2 values");
    if (! is_core(gamma))
        throw contract_error("gap_pipeline_3sat: language must be a core");
    validate_phi(phi, d);
    {
        language sat = threesat_language();
        if (! (sat_inst.lang() == sat))
            throw contract_error("gap_pipeline_3sat: instance must be over the four clause "
                "relations 3sat0..3sat3");
    }

    gap_pipeline_result res;
    res.group = gadget_group_relation(gamma, "rs", budget);

    // verify the witnesses against the preimage relations
    language gc = with_constants(gamma);
    std::array<relation, 4> preimage;
    for (int i = 0; i < 4; ++i) {
        preimage[i] = preimage_relation(phi, i, d);
        auto chk = verify_perfect_implementation(witnesses[i], gc, preimage[i], budget);
        if (! chk.ok)
            throw contract_error("gap_pipeline_3sat: witness " + std::to_string(i) +
                " does not define the phi-preimage of 3sat" + std::to_string(i));
        res.eliminated[i] = eliminate_constants(witnesses[i], d);
    }

    // minimal invariant relations R'_i = { (g(0..d-1), g(t)) : g in S, t in preimage }
    for (int i = 0; i < 4; ++i) {
        relation rp(d, d + 3);
        for (auto & g : res.group.group)
            for (auto & t : preimage[i].tuples()) {
                std::vector<int> tuple(d + 3);
                for (int a = 0; a < d; ++a)
                    tuple[a] = g[a];
                for (int a = 0; a < 3; ++a)
                    tuple[d + a] = g[t[a]];
                rp.add(tuple);
            }
        res.rprime[i] = rp;
        // consistency: the formula route intersected with R_S x D^3 must agree
        try {
            auto ev = eval_pp(res.eliminated[i], gamma, budget);
            relation cross(d, d + 3);
            for (std::uint64_t idx = 0; idx < ev.table_size(); ++idx) {
                if (! ev.contains_index(idx))
                    continue;
                auto t = ev.decode(idx);
                if (res.group.r_s.contains(std::vector<int>(t.begin(), t.begin() + d)))
                    cross.add(t);
            }
            if (! (cross == rp))
                throw contract_error("gap_pipeline_3sat: constant elimination disagrees with "
                    "the group construction for relation " + std::to_string(i));
        }
        catch (const budget_error &) {
            // formula too wide to evaluate at this budget; the direct group
            // construction stands on its own
        }
    }

    // stage 1: same constraints over the preimage relations
    language pre_lang(d);
    for (int i = 0; i < 4; ++i)
        pre_lang.add("r" + std::to_string(i), preimage[i]);
    res.preimage_instance = instance(pre_lang, sat_inst.num_vars());
    for (auto & c : sat_inst.constraints())
        res.preimage_instance.add_constraint(c.rel, c.scope);

    // stage 2: shared u-block
    language up_lang(d);
    for (int i = 0; i < 4; ++i)
        up_lang.add("rp" + std::to_string(i), res.rprime[i]);
    const int n0 = sat_inst.num_vars();
    instance ub(up_lang, n0);
    std::vector<int> ublock(d);
    for (int a = 0; a < d; ++a)
        ublock[a] = ub.add_variable();
    for (auto & c : sat_inst.constraints()) {
        std::vector<int> scope = ublock;
        for (int v : c.scope)
            scope.push_back(v);
        ub.add_constraint(c.rel, std::move(scope)); // same index: rp_i matches 3sat_i
    }
    res.ublock_instance = ub;

    // stage 3: clouds for the u-block
    std::map<int, relation> eq_of_orbit;
    std::map<int, int> var_orbit;
    for (int a = 0; a < d; ++a) {
        int rep = res.group.orbit.classes[res.group.orbit.class_of[a]].front();
        eq_of_orbit.emplace(rep, res.group.eq_relation[a]);
        var_orbit[ublock[a]] = rep;
    }
    std::int64_t base_occ = std::max<std::int64_t>(occurrence_bound(res.preimage_instance), 1);
    occ_bound_config cfg;
    cfg.max_occurrences = base_occ;
    cfg.degree = degree;
    cfg.seed = seed;
    auto occ_rec = bound_occurrences(ub, eq_of_orbit, var_orbit, cfg);

    // composite record
    reduction_record rec;
    rec.kind = reduction_kind::gap_3sat;
    rec.description = "clause relations -> phi preimages -> shared u-block over minimal "
        "invariant relations -> expander clouds for the u-block";
    rec.output = occ_rec.output;
    std::int64_t eq_total = 0;
    for (auto & [k, v] : occ_rec.bookkeeping)
        if (k == "eq_constraints")
            eq_total = v.num();
    rec.bookkeeping.emplace_back("input_constraints", fraction(sat_inst.num_constraints()));
    rec.bookkeeping.emplace_back("eq_constraints", fraction(eq_total));
    rec.bookkeeping.emplace_back("output_constraints", fraction(rec.output.num_constraints()));
    rec.bookkeeping.emplace_back("achieved_bound", fraction(occurrence_bound(rec.output)));
    fraction r(eq_total, std::max<std::int64_t>(sat_inst.num_constraints(), 1));
    rec.bookkeeping.emplace_back("gap_coefficient", r);

    // forward: boolean values through phi's least preimages, u-block to the
    // identity, clouds uniform
    std::array<int, 2> b_of = {-1, -1};
    for (std::size_t i = 0; i < phi.b.size(); ++i)
        if (b_of[phi.to_bool[i]] < 0)
            b_of[phi.to_bool[i]] = phi.b[i];
    auto occ_fwd = occ_rec.forward_solution;
    auto ubl = ublock;
    rec.forward_solution = [b_of, ubl, n0, d, occ_fwd](const assignment & s) {
        assignment t(static_cast<std::size_t>(n0) + d, 0);
        for (int i = 0; i < n0; ++i)
            t[i] = b_of[s[i]];
        for (int a = 0; a < d; ++a)
            t[ubl[a]] = a;
        return occ_fwd(t);
    };

    // backward: repair clouds, read the u-block, undo its automorphism, map
    // through phi (values outside b fall to boolean 0)
    auto occ_back = occ_rec.backward_solution;
    auto rs = res.group.r_s;
    auto group = res.group.group;
    phi_map phi_copy = phi;
    rec.backward_solution = [occ_back, rs, group, ubl, n0, d, phi_copy](const assignment & s_out) {
        auto s2 = occ_back(s_out); // over stage-2 variables
        std::vector<int> prefix(d);
        for (int a = 0; a < d; ++a)
            prefix[a] = s2[ubl[a]];
        std::vector<int> ginv(d);
        bool in_group = rs.contains(prefix);
        if (in_group)
            for (int a = 0; a < d; ++a)
                ginv[prefix[a]] = a;
        assignment s(n0, 0);
        for (int i = 0; i < n0; ++i) {
            int v = in_group ? ginv[s2[i]] : s2[i];
            int bv = phi_copy.of(v);
            s[i] = bv < 0 ? 0 : bv;
        }
        return s;
    };

    instance in_copy = sat_inst;
    instance out_copy = rec.output;
    auto back = rec.backward_solution;
    rec.measure_claim = [in_copy, out_copy, back, eq_total](const assignment & s_out) {
        return measure(in_copy, back(s_out)).satisfied >=
            measure(out_copy, s_out).satisfied - eq_total;
    };
    res.record = std::move(rec);
    return res;
}

}
