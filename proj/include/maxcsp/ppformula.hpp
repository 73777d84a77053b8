#pragma once

#include <maxcsp/polymorphism.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxcsp {

// A primitive positive formula: a conjunction of relation atoms over p free
// and q existentially quantified variables. Variables are indices 0..p-1
// (free) then p..p+q-1 (existential). Atoms name relations of the language
// they are evaluated against; the name "eq" is reserved for equality on the
// domain, which is always available.
struct pp_atom {
    std::string rel;
    std::vector<int> scope;

    friend auto operator==(const pp_atom & a, const pp_atom & b) -> bool
    {
        return a.rel == b.rel && a.scope == b.scope;
    }
};

struct pp_formula {
    int free_count = 0;
    int exist_count = 0;
    std::vector<pp_atom> atoms;

    [[nodiscard]] auto var_count() const -> int { return free_count + exist_count; }

    friend auto operator==(const pp_formula & a, const pp_formula & b) -> bool
    {
        return a.free_count == b.free_count && a.exist_count == b.exist_count &&
            a.atoms == b.atoms;
    }
};

inline const std::string pp_equality_name = "eq";

// The relation defined by the formula over the language: all projections to
// the free variables of total assignments satisfying every atom. Enumeration
// is the full d^(p+q) space, guarded by the budget.
inline auto eval_pp(const pp_formula & phi, const language & lang,
    std::uint64_t budget = default_budget) -> relation
{
    const int d = lang.domain_size();
    const int n = phi.var_count();
    if (phi.free_count < 0 || phi.exist_count < 0)
        throw contract_error("eval_pp: negative variable counts");

    // resolve atoms up front
    relation eq = equality_relation(d);
    std::vector<const relation *> rel_of(phi.atoms.size());
    for (std::size_t i = 0; i < phi.atoms.size(); ++i) {
        const pp_atom & a = phi.atoms[i];
        if (a.rel == pp_equality_name)
            rel_of[i] = &eq;
        else {
            int idx = lang.find(a.rel);
            if (idx < 0)
                throw contract_error("eval_pp: atom names unknown relation '" + a.rel + "'");
            rel_of[i] = &lang.at(idx);
        }
        if (static_cast<int>(a.scope.size()) != rel_of[i]->arity())
            throw contract_error("eval_pp: atom scope size does not match arity of '" + a.rel +
                "'");
        for (int v : a.scope)
            if (v < 0 || v >= n)
                throw contract_error("eval_pp: atom variable out of range");
    }

    std::uint64_t space = 1;
    for (int i = 0; i < n; ++i) {
        space *= static_cast<std::uint64_t>(d);
        if (space > budget)
            throw budget_error("eval_pp: " + std::to_string(d) + "^" + std::to_string(n) +
                " assignments exceed budget " + std::to_string(budget));
    }

    relation out(d, phi.free_count);
    std::vector<int> val(n, 0);
    for (std::uint64_t code = 0; code < space; ++code) {
        std::uint64_t c = code;
        for (int i = 0; i < n; ++i) {
            val[i] = static_cast<int>(c % d);
            c /= d;
        }
        bool ok = true;
        for (std::size_t i = 0; i < phi.atoms.size() && ok; ++i) {
            const relation & r = *rel_of[i];
            std::uint64_t idx = 0, mult = 1;
            for (int v : phi.atoms[i].scope) {
                idx += static_cast<std::uint64_t>(val[v]) * mult;
                mult *= static_cast<std::uint64_t>(d);
            }
            ok = r.contains_index(idx);
        }
        if (ok) {
            std::uint64_t idx = 0, mult = 1;
            for (int i = 0; i < phi.free_count; ++i) {
                idx += static_cast<std::uint64_t>(val[i]) * mult;
                mult *= static_cast<std::uint64_t>(d);
            }
            out.set_index(idx, true);
        }
    }
    return out;
}

// Does the formula define exactly the target? On mismatch, the diagnostics
// list the earliest missing and extra tuples.
struct perfect_check {
    bool ok = false;
    relation evaluated;
    std::optional<std::vector<int>> missing; // in target, not produced
    std::optional<std::vector<int>> extra;   // produced, not in target
};

inline auto verify_perfect_implementation(const pp_formula & phi, const language & lang,
    const relation & target, std::uint64_t budget = default_budget) -> perfect_check
{
    perfect_check out;
    out.evaluated = eval_pp(phi, lang, budget);
    if (out.evaluated.domain_size() != target.domain_size() ||
        out.evaluated.arity() != target.arity())
        throw contract_error("verify_perfect_implementation: target shape mismatch");
    out.ok = out.evaluated == target;
    if (! out.ok) {
        for (std::uint64_t idx = 0; idx < target.table_size(); ++idx) {
            if (target.contains_index(idx) && ! out.evaluated.contains_index(idx)) {
                out.missing = target.decode(idx);
                break;
            }
        }
        for (std::uint64_t idx = 0; idx < target.table_size(); ++idx) {
            if (out.evaluated.contains_index(idx) && ! target.contains_index(idx)) {
                out.extra = target.decode(idx);
                break;
            }
        }
    }
    return out;
}

// The indicator construction: a formula whose evaluation is exactly the
// target whenever every |target|-ary polymorphism of the language preserves
// the target. One existential variable per element of D^m (m = member
// count); atoms are every language constraint holding columnwise on all m
// members; the free variables are tied by equality to the target's column
// vectors. Always post-verified — on mismatch this throws rather than ever
// returning a wrong formula.
struct canonical_construction_result {
    pp_formula formula;
    bool defines_target = false;
    relation evaluated;
};

inline auto canonical_construction(const relation & target, const language & lang,
    std::uint64_t budget = default_budget) -> canonical_construction_result
{
    if (target.domain_size() != lang.domain_size())
        throw contract_error("canonical_construction: domain mismatch");
    const int d = lang.domain_size();
    auto members = target.tuples();
    const int m = static_cast<int>(members.size());
    if (m == 0)
        throw contract_error("canonical_construction: empty target has no indicator");

    // q = d^m existential variables, one per column vector in D^m
    std::uint64_t q = 1;
    for (int i = 0; i < m; ++i) {
        q *= static_cast<std::uint64_t>(d);
        if (q > budget)
            throw budget_error("canonical_construction: D^" + std::to_string(m) +
                " column space exceeds budget");
    }

    auto column_code = [&](const std::vector<int> & col) {
        std::uint64_t code = 0, mult = 1;
        for (int j = 0; j < m; ++j) {
            code += static_cast<std::uint64_t>(col[j]) * mult;
            mult *= static_cast<std::uint64_t>(d);
        }
        return code;
    };

    pp_formula phi;
    phi.free_count = target.arity();
    phi.exist_count = static_cast<int>(q);
    auto var_of_column = [&](std::uint64_t code) {
        return phi.free_count + static_cast<int>(code);
    };

    // tie each free variable to its column vector
    for (int i = 0; i < target.arity(); ++i) {
        std::vector<int> col(m);
        for (int j = 0; j < m; ++j)
            col[j] = members[j][i];
        phi.atoms.push_back(pp_atom{pp_equality_name, {i, var_of_column(column_code(col))}});
    }

    // every language atom that holds columnwise
    for (int ri = 0; ri < lang.size(); ++ri) {
        const relation & r = lang.at(ri);
        if (r.arity() == 0)
            continue;
        const int ar = r.arity();
        std::uint64_t combos = 1;
        for (int i = 0; i < ar; ++i) {
            combos *= q;
            if (combos > budget)
                throw budget_error("canonical_construction: atom combinations for '" +
                    lang.name(ri) + "' exceed budget");
        }
        std::vector<std::uint64_t> pick(ar, 0);
        std::vector<std::vector<int>> cols(ar, std::vector<int>(m));
        for (std::uint64_t n = 0; n < combos; ++n) {
            for (int i = 0; i < ar; ++i) {
                std::uint64_t c = pick[i];
                for (int j = 0; j < m; ++j) {
                    cols[i][j] = static_cast<int>(c % d);
                    c /= d;
                }
            }
            bool holds = true;
            std::vector<int> row(ar);
            for (int j = 0; j < m && holds; ++j) {
                for (int i = 0; i < ar; ++i)
                    row[i] = cols[i][j];
                holds = r.contains(row);
            }
            if (holds) {
                pp_atom a;
                a.rel = lang.name(ri);
                a.scope.resize(ar);
                for (int i = 0; i < ar; ++i)
                    a.scope[i] = var_of_column(pick[i]);
                phi.atoms.push_back(std::move(a));
            }
            int pos = 0;
            while (pos < ar && ++pick[pos] == q) {
                pick[pos] = 0;
                ++pos;
            }
        }
    }

    canonical_construction_result res;
    res.evaluated = eval_pp(phi, lang, budget);
    res.defines_target = res.evaluated == target;
    res.formula = std::move(phi);
    return res;
}

enum class definability_status { definable_with_witness, not_definable_certified, unknown_at_bound };

struct definability_verdict {
    definability_status status = definability_status::unknown_at_bound;
    std::optional<pp_formula> witness;          // when definable
    std::optional<operation> counterexample;    // language polymorphism violating the target
    int bound_used = 0;
    std::string note;
};

// Bounded definability test via the polymorphism route: a language
// polymorphism violating the target certifies non-definability; if no
// polymorphism of arity up to the target's member count violates it, the
// indicator construction produces a verified witness. Anything cut short by
// the budget reports unknown, never a guess.
inline auto definability_test(const relation & target, const language & lang, int arity_cap,
    std::uint64_t budget = default_budget) -> definability_verdict
{
    if (target.domain_size() != lang.domain_size())
        throw contract_error("definability_test: domain mismatch");
    if (arity_cap < 1)
        throw contract_error("definability_test: arity cap must be >= 1");
    if (target.is_empty())
        throw contract_error("definability_test: empty target refused (every operation "
            "preserves it vacuously, so the polymorphism route cannot decide it)");

    definability_verdict v;
    for (int k = 1; k <= arity_cap; ++k) {
        v.bound_used = k;
        std::optional<operation> bad;
        table_search_options opt;
        opt.budget = budget;
        try {
            for_each_polymorphism(lang, k, opt, [&](const operation & f) {
                if (! is_polymorphism(f, target)) {
                    bad = f;
                    return false;
                }
                return true;
            });
        }
        catch (const budget_error & e) {
            v.status = definability_status::unknown_at_bound;
            v.note = std::string("budget exhausted during arity-") + std::to_string(k) +
                " polymorphism enumeration: " + e.what();
            return v;
        }
        if (bad) {
            v.status = definability_status::not_definable_certified;
            v.counterexample = std::move(bad);
            return v;
        }
        if (static_cast<std::uint64_t>(k) >= target.count()) {
            // All polymorphisms up to the member count preserve the target;
            // the indicator construction must now evaluate to it exactly.
            canonical_construction_result cc;
            try {
                cc = canonical_construction(target, lang, budget);
            }
            catch (const budget_error & e) {
                v.status = definability_status::unknown_at_bound;
                v.note = std::string("indicator construction over budget: ") + e.what();
                return v;
            }
            if (! cc.defines_target)
                throw contract_error("definability_test: indicator construction failed to "
                    "reproduce the target although no violating polymorphism exists");
            v.status = definability_status::definable_with_witness;
            v.witness = std::move(cc.formula);
            return v;
        }
    }
    v.status = definability_status::unknown_at_bound;
    v.note = "no violating polymorphism up to the cap; cap below the member count";
    return v;
}

}
