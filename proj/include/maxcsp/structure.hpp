#pragma once

#include <maxcsp/operation.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace maxcsp {

// A unary map pi with pi|image = identity that preserves every relation of a
// language (pi(t) is a member whenever t is).
struct retraction {
    std::vector<int> map;      // old value -> old value
    std::vector<int> image;    // sorted fixed points
};

inline auto preserves(const std::vector<int> & pi, const relation & r) -> bool
{
    for (auto t : r.tuples()) {
        for (auto & v : t)
            v = pi[v];
        if (! r.contains(t))
            return false;
    }
    return true;
}

inline auto preserves(const std::vector<int> & pi, const language & lang) -> bool
{
    for (int i = 0; i < lang.size(); ++i)
        if (! preserves(pi, lang.at(i)))
            return false;
    return true;
}

// All bijective unary polymorphisms, in lexicographic order. Each is checked
// to preserve every relation in both directions (forward by membership, the
// inverse explicitly), and the result is asserted to be a group.
inline auto automorphisms(const language & lang) -> std::vector<std::vector<int>>
{
    const int d = lang.domain_size();
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        if (! preserves(perm, lang))
            continue;
        std::vector<int> inv(d);
        for (int i = 0; i < d; ++i)
            inv[perm[i]] = i;
        if (! preserves(inv, lang))
            continue;
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Group sanity: closure under composition and inverse.
    std::set<std::vector<int>> members(out.begin(), out.end());
    for (auto & g : out) {
        std::vector<int> inv(d);
        for (int i = 0; i < d; ++i)
            inv[g[i]] = i;
        if (! members.count(inv))
            throw contract_error("automorphisms: set not closed under inverse");
        for (auto & h : out) {
            std::vector<int> gh(d);
            for (int i = 0; i < d; ++i)
                gh[i] = g[h[i]];
            if (! members.count(gh))
                throw contract_error("automorphisms: set not closed under composition");
        }
    }
    return out;
}

// Domain partition induced by the automorphism group. Classes are listed by
// their least element, each class sorted ascending.
struct orbit_partition {
    std::vector<std::vector<int>> classes;
    std::vector<int> class_of; // value -> class index

    [[nodiscard]] auto size() const -> int { return static_cast<int>(classes.size()); }
};

inline auto orbits(const language & lang) -> orbit_partition
{
    const int d = lang.domain_size();
    auto autos = automorphisms(lang);
    orbit_partition p;
    p.class_of.assign(d, -1);
    for (int v = 0; v < d; ++v) {
        if (p.class_of[v] >= 0)
            continue;
        std::set<int> cls;
        for (auto & g : autos)
            cls.insert(g[v]);
        int id = static_cast<int>(p.classes.size());
        p.classes.emplace_back(cls.begin(), cls.end());
        for (int w : p.classes.back())
            p.class_of[w] = id;
    }
    return p;
}

struct core_result {
    language core;                 // relations restricted to the image, relabelled 0..m-1
    retraction pi;                 // witnessing retraction on the original domain
    std::vector<int> new_to_old;   // relabelling: core value -> original value
    bool already_core = false;     // the identity was the only retraction found first
};

enum class core_tie_break { lex_ascending, lex_descending };

// Smallest-image retraction, exhaustively over all unary idempotent maps.
// Maps are tried by image size ascending; ties broken by lexicographic map
// order (the tie_break knob exists for the uniqueness-up-to-isomorphism
// property test). The returned language is the induced core with the image
// relabelled densely to 0..|image|-1 in increasing order of original values.
inline auto find_core(const language & lang,
    core_tie_break tie = core_tie_break::lex_ascending) -> core_result
{
    const int d = lang.domain_size();
    std::uint64_t total = detail::checked_power(d, d, max_table_cells, "find_core");
    struct cand {
        int image_size;
        std::vector<int> map;
    };
    std::vector<cand> cands;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<int> pi(d);
        std::uint64_t c = code;
        for (int i = 0; i < d; ++i) {
            pi[i] = static_cast<int>(c % d);
            c /= d;
        }
        // idempotent unary map == fixes its image pointwise
        bool idem = true;
        for (int i = 0; i < d && idem; ++i)
            idem = pi[pi[i]] == pi[i];
        if (! idem)
            continue;
        std::set<int> img(pi.begin(), pi.end());
        cands.push_back(cand{static_cast<int>(img.size()), std::move(pi)});
    }
    std::stable_sort(cands.begin(), cands.end(), [&](const cand & a, const cand & b) {
        if (a.image_size != b.image_size)
            return a.image_size < b.image_size;
        return tie == core_tie_break::lex_ascending ? a.map < b.map : b.map < a.map;
    });

    for (auto & c : cands) {
        if (! preserves(c.map, lang))
            continue;
        retraction pi;
        pi.map = c.map;
        std::set<int> img(c.map.begin(), c.map.end());
        pi.image.assign(img.begin(), img.end());

        core_result res;
        res.pi = pi;
        res.new_to_old = pi.image;
        res.already_core = pi.image.size() == static_cast<std::size_t>(d);
        language core(static_cast<int>(pi.image.size()));
        for (int i = 0; i < lang.size(); ++i)
            core.add(lang.name(i), restrict_relation(lang.at(i), pi.image).restricted);
        res.core = std::move(core);
        return res;
    }
    throw contract_error("find_core: no retraction found (identity should always qualify)");
}

inline auto find_core(const relation & r, core_tie_break tie = core_tie_break::lex_ascending)
    -> core_result
{
    language lang(r.domain_size());
    lang.add("r", r);
    return find_core(lang, tie);
}

// Is the language a core, i.e. the identity is its only retraction?
inline auto is_core(const language & lang) -> bool
{
    return find_core(lang).already_core;
}

inline auto is_core(const relation & r) -> bool
{
    language lang(r.domain_size());
    lang.add("r", r);
    return is_core(lang);
}

// Structural report for a binary relation viewed as a digraph on the domain.
struct digraph_properties {
    bool has_loop = false;
    bool antisymmetric = false;    // no loops and no two-way pair
    bool bipartite = false;
    std::vector<int> bipartition;  // colour per vertex when bipartite
    bool vertex_transitive = false;
    bool directed_cycle = false;   // isomorphic to the canonical directed cycle on d vertices
    std::int64_t edge_count = 0;
};

inline auto digraph_props(const relation & h) -> digraph_properties
{
    if (h.arity() != 2)
        throw contract_error("digraph_props: relation must be binary");
    const int d = h.domain_size();
    digraph_properties p;
    p.edge_count = static_cast<std::int64_t>(h.count());

    for (int v = 0; v < d; ++v)
        if (h.contains({v, v}))
            p.has_loop = true;

    p.antisymmetric = ! p.has_loop;
    for (int x = 0; x < d && p.antisymmetric; ++x)
        for (int y = x + 1; y < d && p.antisymmetric; ++y)
            if (h.contains({x, y}) && h.contains({y, x}))
                p.antisymmetric = false;

    // bipartite: partition with no edge inside either part (loops rule it out)
    p.bipartition.assign(d, -1);
    p.bipartite = ! p.has_loop;
    for (int start = 0; start < d && p.bipartite; ++start) {
        if (p.bipartition[start] >= 0)
            continue;
        p.bipartition[start] = 0;
        std::vector<int> queue{start};
        while (! queue.empty() && p.bipartite) {
            int u = queue.back();
            queue.pop_back();
            for (int v = 0; v < d; ++v) {
                if (! h.contains({u, v}) && ! h.contains({v, u}))
                    continue;
                if (p.bipartition[v] < 0) {
                    p.bipartition[v] = 1 - p.bipartition[u];
                    queue.push_back(v);
                }
                else if (p.bipartition[v] == p.bipartition[u])
                    p.bipartite = false;
            }
        }
    }
    if (! p.bipartite)
        p.bipartition.clear();

    {
        language lang(d);
        lang.add("h", h);
        p.vertex_transitive = orbits(lang).size() == 1;
    }

    // directed cycle: every vertex has out- and in-degree one and the
    // successor permutation is a single d-cycle (d >= 2)
    p.directed_cycle = d >= 2;
    std::vector<int> succ(d, -1);
    for (int x = 0; x < d && p.directed_cycle; ++x) {
        int out = 0, in = 0;
        for (int y = 0; y < d; ++y) {
            if (h.contains({x, y})) {
                ++out;
                succ[x] = y;
            }
            if (h.contains({y, x}))
                ++in;
        }
        if (out != 1 || in != 1)
            p.directed_cycle = false;
    }
    if (p.directed_cycle) {
        int steps = 0, at = 0;
        do {
            at = succ[at];
            ++steps;
        } while (at != 0 && steps <= d);
        p.directed_cycle = (at == 0 && steps == d);
    }
    return p;
}

// Largest symmetric subrelation {(x,y) : (x,y) and (y,x) both edges}.
inline auto undir(const relation & h) -> relation
{
    if (h.arity() != 2)
        throw contract_error("undir: relation must be binary");
    relation out(h.domain_size(), 2);
    for (int x = 0; x < h.domain_size(); ++x)
        for (int y = 0; y < h.domain_size(); ++y)
            if (h.contains({x, y}) && h.contains({y, x}))
                out.add({x, y});
    return out;
}

// Canonical digraph constructors used throughout.
inline auto directed_cycle(int n) -> relation
{
    if (n < 2)
        throw contract_error("directed_cycle: need at least 2 vertices");
    relation r(n, 2);
    for (int x = 0; x < n; ++x)
        r.add({x, (x + 1) % n});
    return r;
}

inline auto undirected_cycle(int n) -> relation
{
    if (n < 3)
        throw contract_error("undirected_cycle: need at least 3 vertices");
    relation r(n, 2);
    for (int x = 0; x < n; ++x) {
        r.add({x, (x + 1) % n});
        r.add({(x + 1) % n, x});
    }
    return r;
}

// Disequality on n values; as a digraph this is the complete graph K_n.
inline auto disequality(int n) -> relation
{
    relation r(n, 2);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y)
                r.add({x, y});
    return r;
}

// The directed 4-cycle with both antipodal pairs joined by double edges: the
// smallest vertex-transitive core digraph that is neither a directed cycle
// nor a complete graph. Every vertex has in- and out-degree two.
inline auto vertex_transitive_four() -> relation
{
    relation r = directed_cycle(4);
    for (auto e : {std::pair{0, 2}, std::pair{1, 3}}) {
        r.add({e.first, e.second});
        r.add({e.second, e.first});
    }
    return r;
}

}
