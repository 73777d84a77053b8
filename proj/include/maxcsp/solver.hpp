#pragma once

#include <maxcsp/fraction.hpp>
#include <maxcsp/instance.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace maxcsp {

enum class solve_method {
    exact_exhaustive,
    exact_branchbound,
    approx_condexp,
};

inline auto to_string(solve_method m) -> std::string
{
    switch (m) {
    case solve_method::exact_exhaustive: return "EXACT_EXHAUSTIVE";
    case solve_method::exact_branchbound: return "EXACT_BRANCHBOUND";
    case solve_method::approx_condexp: return "APPROX_CONDEXP";
    }
    return "?";
}

struct solve_result {
    assignment best;
    measure_result opt;
    solve_method method = solve_method::exact_exhaustive;
    bool proof_of_optimality = false;
    fraction guarantee = fraction(0); // approx: the |C|/d^a floor it promises
    fraction expected = fraction(0);  // approx: exact initial expectation
    std::uint64_t nodes = 0;
};

namespace detail {

    // satisfied-so-far plus every constraint that could still go either way;
    // prefix semantics: variables 0..assigned-1 are fixed (solver_order maps
    // depth -> variable)
    struct bound_state {
        std::int64_t decided_sat = 0;
        std::int64_t possible = 0;
    };

    inline auto partial_bound(const instance & inst, const assignment & s,
        const std::vector<char> & fixed) -> bound_state
    {
        bound_state b;
        for (auto & c : inst.constraints()) {
            const relation & r = inst.lang().at(c.rel);
            bool all = true;
            for (int v : c.scope)
                if (! fixed[v])
                    all = false;
            if (all) {
                if (satisfies(inst, c, s))
                    ++b.decided_sat;
                continue;
            }
            bool can = false;
            for (std::uint64_t idx = 0; idx < r.table_size() && ! can; ++idx) {
                if (! r.contains_index(idx))
                    continue;
                auto t = r.decode(idx);
                bool consistent = true;
                for (std::size_t i = 0; i < c.scope.size(); ++i)
                    if (fixed[c.scope[i]] && s[c.scope[i]] != t[i])
                        consistent = false;
                if (consistent)
                    can = true;
            }
            if (can)
                ++b.possible;
        }
        return b;
    }

}

// Plain enumeration of all d^n assignments in lexicographic order (variable 0
// compared first); the first assignment reaching the optimum is returned, so
// the result is the lexicographically least optimal assignment. The oracle
// every other solving method is tested against.
inline auto solve_exhaustive(const instance & inst, std::uint64_t budget = default_budget)
    -> solve_result
{
    const int n = inst.num_vars();
    const int d = inst.domain_size();
    detail::checked_power(d, n, budget, "solve_exhaustive");

    solve_result res;
    res.method = solve_method::exact_exhaustive;
    res.proof_of_optimality = true;

    assignment s(n, 0);
    std::int64_t best = -1;
    assignment best_s;
    while (true) {
        ++res.nodes;
        auto m = measure(inst, s).satisfied;
        if (m > best) {
            best = m;
            best_s = s;
        }
        // lexicographic successor: bump the last variable
        int i = n - 1;
        while (i >= 0 && s[i] == d - 1)
            s[i--] = 0;
        if (i < 0)
            break;
        ++s[i];
    }
    res.best = best_s;
    res.opt = measure(inst, res.best);
    res.guarantee = res.opt.frac();
    return res;
}

// Branch and bound, two passes. Pass one branches on the most-occurring
// variables first and establishes the optimum; pass two walks variables in
// index order with values ascending, pruning strictly-worse subtrees, so the
// first optimal leaf it reaches is the lexicographically least one.
inline auto solve_exact(const instance & inst, std::uint64_t budget = default_budget)
    -> solve_result
{
    const int n = inst.num_vars();
    const int d = inst.domain_size();

    solve_result res;
    res.method = solve_method::exact_branchbound;
    res.proof_of_optimality = true;

    assignment s(n, 0);
    std::vector<char> fixed(n, 0);
    std::uint64_t nodes = 0;
    auto spend = [&]() {
        if (++nodes > budget)
            throw budget_error("solve_exact: node budget exhausted");
    };

    // pass one: optimum value
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    {
        auto occ = occurrence_counts(inst);
        std::stable_sort(order.begin(), order.end(),
            [&](int a, int b) { return occ[a] > occ[b]; });
    }
    std::int64_t opt = -1;
    const std::int64_t total = inst.num_constraints();
    auto dive = [&](auto && self, int depth) -> void {
        spend();
        auto b = detail::partial_bound(inst, s, fixed);
        if (b.decided_sat + b.possible <= opt)
            return;
        if (depth == n) {
            opt = b.decided_sat; // all constraints decided
            return;
        }
        int v = order[depth];
        fixed[v] = 1;
        for (int val = 0; val < d && opt < total; ++val) {
            s[v] = val;
            self(self, depth + 1);
        }
        fixed[v] = 0;
        s[v] = 0;
    };
    dive(dive, 0);

    // pass two: lexicographically least assignment achieving the optimum
    std::fill(s.begin(), s.end(), 0);
    std::fill(fixed.begin(), fixed.end(), 0);
    assignment found;
    auto walk = [&](auto && self, int depth) -> bool {
        spend();
        auto b = detail::partial_bound(inst, s, fixed);
        if (b.decided_sat + b.possible < opt)
            return false;
        if (depth == n) {
            if (b.decided_sat == opt) {
                found = s;
                return true;
            }
            return false;
        }
        fixed[depth] = 1;
        for (int val = 0; val < d; ++val) {
            s[depth] = val;
            if (self(self, depth + 1))
                return true;
        }
        fixed[depth] = 0;
        s[depth] = 0;
        return false;
    };
    if (! walk(walk, 0))
        throw contract_error("solve_exact: no assignment reaches the proven optimum (bug)");
    res.best = found;
    res.opt = measure(inst, res.best);
    res.nodes = nodes;
    res.guarantee = res.opt.frac();
    return res;
}

// Derandomized conditional expectation: fix variables in index order, always
// to the value maximising the exact expected number of satisfied constraints
// (ties to the least value). The result satisfies at least the ceiling of the
// initial expectation, which is at least |C| / d^max_arity when no relation
// is empty and no constraint repeats a variable.
inline auto solve_approx(const instance & inst) -> solve_result
{
    const int n = inst.num_vars();
    const int d = inst.domain_size();

    solve_result res;
    res.method = solve_method::approx_condexp;
    res.proof_of_optimality = false;

    assignment s(n, 0);
    std::vector<char> fixed(n, 0);

    // Exact satisfaction probability per constraint under a uniform choice of
    // its distinct unfixed variables; scope positions naming the same variable
    // must move together, so enumerating relation rows independently per
    // position would overestimate.
    auto expectation = [&]() {
        fraction e(0);
        for (auto & c : inst.constraints()) {
            const relation & r = inst.lang().at(c.rel);
            std::vector<int> free_list;
            for (int v : c.scope)
                if (! fixed[v] &&
                    std::find(free_list.begin(), free_list.end(), v) == free_list.end())
                    free_list.push_back(v);
            std::int64_t space = 1;
            for (std::size_t i = 0; i < free_list.size(); ++i)
                space *= d;
            std::int64_t consistent = 0;
            std::vector<int> val(c.scope.size());
            std::vector<int> pick(free_list.size());
            for (std::int64_t a = 0; a < space; ++a) {
                std::int64_t code = a;
                for (std::size_t i = 0; i < pick.size(); ++i) {
                    pick[i] = static_cast<int>(code % d);
                    code /= d;
                }
                for (std::size_t i = 0; i < c.scope.size(); ++i) {
                    int v = c.scope[i];
                    if (fixed[v])
                        val[i] = s[v];
                    else {
                        auto it = std::find(free_list.begin(), free_list.end(), v);
                        val[i] = pick[static_cast<std::size_t>(it - free_list.begin())];
                    }
                }
                if (r.contains(val))
                    ++consistent;
            }
            e = e + fraction(consistent, space);
        }
        return e;
    };

    res.expected = expectation();
    for (int v = 0; v < n; ++v) {
        fixed[v] = 1;
        fraction best_e(0);
        int best_val = 0;
        for (int val = 0; val < d; ++val) {
            s[v] = val;
            fraction e = expectation();
            if (val == 0 || best_e < e) {
                best_e = e;
                best_val = val;
            }
        }
        s[v] = best_val;
    }
    res.best = s;
    res.opt = measure(inst, s);

    int max_arity = 1;
    for (auto & c : inst.constraints())
        max_arity = std::max(max_arity, static_cast<int>(c.scope.size()));
    std::int64_t denom = 1;
    for (int i = 0; i < max_arity; ++i)
        denom *= d;
    res.guarantee = fraction(inst.num_constraints(), denom);
    return res;
}

// OPT / |C| as an exact rational; 1 for instances with no constraints.
inline auto gap_report(const instance & inst, std::uint64_t budget = default_budget) -> fraction
{
    return solve_exact(inst, budget).opt.frac();
}

}
