#pragma once

#include <maxcsp/operation.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxcsp {

// Polymorphism enumeration is a backtracking search over the d^k table cells.
// Every combination of k member tuples of a relation R in the language pins
// the image tuple's cells to a member of R; these checks fire as soon as the
// last cell involved gets a value, so the naive d^(d^k) space is pruned hard.
// The budget caps explored search nodes (value placements), and exhaustion is
// an error, never a silent truncation.

namespace detail {

    struct cell_constraint {
        int rel;                          // language index
        std::vector<std::uint32_t> cells; // one table cell per coordinate of rel

        friend auto operator<(const cell_constraint & a, const cell_constraint & b) -> bool
        {
            return std::tie(a.rel, a.cells) < std::tie(b.rel, b.cells);
        }
        friend auto operator==(const cell_constraint & a, const cell_constraint & b) -> bool
        {
            return a.rel == b.rel && a.cells == b.cells;
        }
    };

    // Union-find used to tie table cells that must hold equal values.
    struct cell_groups {
        std::vector<std::uint32_t> parent;

        explicit cell_groups(std::uint64_t n) : parent(n)
        {
            for (std::uint64_t i = 0; i < n; ++i)
                parent[i] = static_cast<std::uint32_t>(i);
        }

        auto find(std::uint32_t x) -> std::uint32_t
        {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        }

        void unite(std::uint32_t a, std::uint32_t b)
        {
            a = find(a);
            b = find(b);
            if (a == b)
                return;
            // Keep the smaller index as root so group order follows cell order.
            if (b < a)
                std::swap(a, b);
            parent[b] = a;
        }
    };

}

struct table_search_options {
    bool idempotent_only = false;
    // Tie all "one dissenter" cells per (x, y) pair together and fix the
    // diagonal: candidates are exactly the weak near-unanimity shaped tables.
    bool wnuf_shape = false;
    std::uint64_t budget = default_budget;
};

// Streams every arity-k operation preserving `lang` (restricted per options)
// to `yield`, in lexicographic table order. `yield` returns false to stop
// early. Returns the number of search nodes spent.
template <typename Yield>
auto for_each_polymorphism(const language & lang, int k, const table_search_options & opt,
    Yield && yield) -> std::uint64_t
{
    if (k < 1)
        throw contract_error("polymorphism search: arity must be >= 1");
    if (opt.wnuf_shape && k < 2)
        throw contract_error("polymorphism search: wnuf shape needs arity >= 2");
    const int d = lang.domain_size();
    const auto cells =
        detail::checked_power(d, k, max_table_cells, "polymorphism search");

    // --- group cells and pin fixed values ---------------------------------
    detail::cell_groups groups(cells);
    std::vector<int> fixed(cells, -1);
    operation probe(d, k); // for encode()
    if (opt.idempotent_only || opt.wnuf_shape) {
        std::vector<int> args(k);
        for (int x = 0; x < d; ++x) {
            std::fill(args.begin(), args.end(), x);
            fixed[probe.encode(args)] = x;
        }
    }
    if (opt.wnuf_shape) {
        std::vector<int> args(k);
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y) {
                if (x == y)
                    continue;
                std::fill(args.begin(), args.end(), y);
                args[0] = x;
                auto first = static_cast<std::uint32_t>(probe.encode(args));
                for (int pos = 1; pos < k; ++pos) {
                    std::fill(args.begin(), args.end(), y);
                    args[pos] = x;
                    groups.unite(first, static_cast<std::uint32_t>(probe.encode(args)));
                }
            }
    }

    // Propagate fixed values to group roots.
    std::vector<int> root_fixed(cells, -1);
    for (std::uint64_t c = 0; c < cells; ++c)
        if (fixed[c] >= 0) {
            auto r = groups.find(static_cast<std::uint32_t>(c));
            if (root_fixed[r] >= 0 && root_fixed[r] != fixed[c])
                return 0; // contradictory pins: no candidates at all
            root_fixed[r] = fixed[c];
        }

    // --- build membership constraints from the language -------------------
    std::vector<detail::cell_constraint> constraints;
    for (int ri = 0; ri < lang.size(); ++ri) {
        const relation & r = lang.at(ri);
        if (r.arity() == 0)
            continue;
        auto tuples = r.tuples();
        const std::uint64_t t = tuples.size();
        if (t == 0)
            continue; // empty relations are preserved vacuously
        std::uint64_t combos = 1;
        for (int j = 0; j < k; ++j) {
            combos *= t;
            if (combos > opt.budget)
                throw budget_error("polymorphism search: " + std::to_string(t) + "^" +
                    std::to_string(k) + " tuple combinations for '" + lang.name(ri) +
                    "' exceed budget " + std::to_string(opt.budget));
        }
        std::vector<std::uint64_t> pick(k, 0);
        for (std::uint64_t n = 0; n < combos; ++n) {
            detail::cell_constraint con;
            con.rel = ri;
            con.cells.resize(r.arity());
            for (int i = 0; i < r.arity(); ++i) {
                std::uint64_t cell = 0, mult = 1;
                for (int j = 0; j < k; ++j) {
                    cell += static_cast<std::uint64_t>(tuples[pick[j]][i]) * mult;
                    mult *= static_cast<std::uint64_t>(d);
                }
                con.cells[i] = static_cast<std::uint32_t>(cell);
            }
            constraints.push_back(std::move(con));
            int pos = 0;
            while (pos < k && ++pick[pos] == t) {
                pick[pos] = 0;
                ++pos;
            }
        }
    }
    std::sort(constraints.begin(), constraints.end());
    constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());

    // --- order the free groups; map constraints to triggers ---------------
    std::vector<std::uint32_t> order; // free roots, ascending (root = min cell)
    std::vector<int> rank(cells, -1);
    for (std::uint64_t c = 0; c < cells; ++c) {
        auto r = groups.find(static_cast<std::uint32_t>(c));
        if (r == c && root_fixed[r] < 0) {
            rank[r] = static_cast<int>(order.size());
            order.push_back(r);
        }
    }

    std::vector<int> table(cells, -1);
    for (std::uint64_t c = 0; c < cells; ++c) {
        auto r = groups.find(static_cast<std::uint32_t>(c));
        if (root_fixed[r] >= 0)
            table[c] = root_fixed[r];
    }

    // cells of each free group, for bulk assignment
    std::vector<std::vector<std::uint32_t>> members(order.size());
    for (std::uint64_t c = 0; c < cells; ++c) {
        auto r = groups.find(static_cast<std::uint32_t>(c));
        if (rank[r] >= 0)
            members[rank[r]].push_back(static_cast<std::uint32_t>(c));
    }

    std::vector<std::vector<const detail::cell_constraint *>> by_trigger(order.size() + 1);
    auto check = [&](const detail::cell_constraint & con) -> bool {
        const relation & r = lang.at(con.rel);
        std::uint64_t idx = 0, mult = 1;
        for (auto cell : con.cells) {
            idx += static_cast<std::uint64_t>(table[cell]) * mult;
            mult *= static_cast<std::uint64_t>(d);
        }
        return r.contains_index(idx);
    };
    for (auto & con : constraints) {
        int trig = -1;
        for (auto cell : con.cells)
            trig = std::max(trig, rank[groups.find(cell)]);
        if (trig < 0) {
            if (! check(con))
                return 0; // fully pinned and already violated: nothing to yield
        }
        else
            by_trigger[trig].push_back(&con);
    }

    // --- depth-first search, values ascending ------------------------------
    std::uint64_t nodes = 0;
    const auto n_groups = static_cast<int>(order.size());

    auto emit = [&]() -> bool {
        operation f(d, k);
        for (std::uint64_t c = 0; c < cells; ++c)
            f.set(c, table[c]);
        return yield(static_cast<const operation &>(f));
    };

    if (n_groups == 0) {
        emit();
        return nodes;
    }

    std::vector<int> value(n_groups, -1);
    int depth = 0;
    bool stopped = false;
    while (depth >= 0 && ! stopped) {
        int v = ++value[depth];
        if (v >= d) {
            value[depth] = -1;
            --depth;
            continue;
        }
        if (++nodes > opt.budget)
            throw budget_error("polymorphism search: node budget " +
                std::to_string(opt.budget) + " exhausted at d=" + std::to_string(d) +
                " k=" + std::to_string(k));
        for (auto cell : members[depth])
            table[cell] = v;
        bool ok = true;
        for (auto * con : by_trigger[depth])
            if (! check(*con)) {
                ok = false;
                break;
            }
        if (! ok)
            continue;
        if (depth + 1 == n_groups) {
            if (! emit())
                stopped = true;
        }
        else
            ++depth;
    }
    return nodes;
}

// All arity-k operations preserving the language, in lexicographic table
// order, optionally just the idempotent ones.
inline auto enumerate_polymorphisms(const language & lang, int k, bool idempotent_only = false,
    std::uint64_t budget = default_budget) -> std::vector<operation>
{
    table_search_options opt;
    opt.idempotent_only = idempotent_only;
    opt.budget = budget;
    std::vector<operation> out;
    for_each_polymorphism(lang, k, opt, [&](const operation & f) {
        out.push_back(f);
        return true;
    });
    return out;
}

enum class wnuf_verdict { found, none_up_to_bound };

// Outcome of a bounded weak near-unanimity search. A negative verdict is
// evidence up to the searched arities, never a proof for all arities.
struct wnuf_report {
    wnuf_verdict verdict = wnuf_verdict::none_up_to_bound;
    std::optional<operation> witness;
    std::vector<int> searched_arities; // exhaustively completed arities
    int requested_bound = 0;
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
};

// Search arities 2..max_arity for a weak near-unanimity polymorphism of the
// language. Candidates are exactly the tables constant on the one-dissenter
// orbits; the first witness in lexicographic table order is returned.
inline auto wnuf_search(const language & lang, int max_arity,
    std::uint64_t budget = default_budget) -> wnuf_report
{
    if (max_arity < 2)
        throw contract_error("wnuf_search: bound must be >= 2");
    wnuf_report rep;
    rep.requested_bound = max_arity;
    for (int k = 2; k <= max_arity; ++k) {
        table_search_options opt;
        opt.wnuf_shape = true;
        opt.budget = budget;
        std::optional<operation> hit;
        try {
            rep.nodes += for_each_polymorphism(lang, k, opt, [&](const operation & f) {
                hit = f;
                return false;
            });
        }
        catch (const budget_error &) {
            rep.budget_exhausted = true;
            break; // higher arities are larger still; report what completed
        }
        if (hit) {
            // Defensive re-check through the independent predicates.
            if (! is_wnuf(*hit) || ! is_polymorphism(*hit, lang))
                throw contract_error("wnuf_search: internal check failed on witness");
            rep.verdict = wnuf_verdict::found;
            rep.witness = std::move(hit);
            rep.searched_arities.push_back(k);
            return rep;
        }
        rep.searched_arities.push_back(k);
    }
    rep.verdict = wnuf_verdict::none_up_to_bound;
    return rep;
}

}
