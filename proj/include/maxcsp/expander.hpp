#pragma once

#include <maxcsp/errors.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace maxcsp {

namespace detail {
    // Uniform draw from [0, n) by rejection; uniform_int_distribution is
    // implementation-defined and would break seed reproducibility.
    inline auto rng_below(std::mt19937_64 & rng, std::uint64_t n) -> std::uint64_t
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do
            x = rng();
        while (x >= limit);
        return x % n;
    }

    template <typename T>
    inline void shuffle_vec(std::vector<T> & v, std::mt19937_64 & rng)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng_below(rng, i)]);
    }
}

// A regular multigraph meant to satisfy the cut property: every vertex subset
// S has at least min(|S|, |V \ S|) crossing edges.
struct expander {
    int vertices = 0;
    int degree = 0;
    std::vector<std::pair<int, int>> edges; // undirected, may repeat
};

struct expander_check {
    bool ok = false;
    // tightest failing (or passing) subset as a bitmask, with its cut size
    std::uint32_t worst_subset = 0;
    std::int64_t worst_cut = 0;
    std::int64_t worst_demand = 0;
};

// Exhaustive verification over all 2^m subsets; refuses m > 20.
inline auto verify_expander(const expander & g, int max_vertices_exhaustive = 20)
    -> expander_check
{
    if (g.vertices < 1)
        throw contract_error("verify_expander: no vertices");
    if (g.vertices > max_vertices_exhaustive)
        throw budget_error("verify_expander: exhaustive check limited to " +
            std::to_string(max_vertices_exhaustive) + " vertices, got " +
            std::to_string(g.vertices));
    for (auto & e : g.edges)
        if (e.first < 0 || e.first >= g.vertices || e.second < 0 || e.second >= g.vertices)
            throw contract_error("verify_expander: edge endpoint out of range");

    expander_check out;
    out.ok = true;
    std::int64_t worst_slack = INT64_MAX;
    const std::uint32_t full = (g.vertices >= 32) ? 0xffffffffu
                                                  : ((std::uint32_t{1} << g.vertices) - 1);
    for (std::uint32_t s = 1; s < full; ++s) {
        int size = __builtin_popcount(s);
        std::int64_t demand = std::min(size, g.vertices - size);
        std::int64_t cut = 0;
        for (auto & e : g.edges) {
            bool a = (s >> e.first) & 1, b = (s >> e.second) & 1;
            if (a != b)
                ++cut;
        }
        if (cut - demand < worst_slack) {
            worst_slack = cut - demand;
            out.worst_subset = s;
            out.worst_cut = cut;
            out.worst_demand = demand;
        }
        if (cut < demand)
            out.ok = false;
    }
    return out;
}

// Seeded search for a verified expander with at least m_min vertices: random
// degree-regular multigraphs from the stub-pairing model, each candidate
// verified exhaustively. Deterministic for a fixed seed. Pairings with loops
// are rejected and retried (a loop contributes to no cut); repeated edges
// are kept. If random pairing fails for a size, the circulant graph with
// offsets 1..degree/2 (plus the antipodal offset when the degree is odd) is
// tried before moving on. Vertex counts with odd degree sums are stepped
// past.
inline auto find_expander(int m_min, int degree, std::uint64_t seed,
    int attempts_per_size = 200, int size_slack = 16) -> expander
{
    if (m_min < 2)
        throw contract_error("find_expander: need at least 2 vertices");
    if (degree < 1)
        throw contract_error("find_expander: degree must be >= 1");
    std::mt19937_64 rng(seed);
    for (int m = std::max(m_min, degree + 1); m <= std::max(m_min, degree + 1) + size_slack;
         ++m) {
        if ((static_cast<std::int64_t>(m) * degree) % 2 != 0)
            continue;
        if (m > 20)
            break; // verification is exhaustive and refuses larger graphs
        for (int attempt = 0; attempt < attempts_per_size; ++attempt) {
            std::vector<int> stubs;
            stubs.reserve(static_cast<std::size_t>(m) * degree);
            for (int v = 0; v < m; ++v)
                for (int i = 0; i < degree; ++i)
                    stubs.push_back(v);
            detail::shuffle_vec(stubs, rng);
            expander g;
            g.vertices = m;
            g.degree = degree;
            bool loop_free = true;
            for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
                int a = stubs[i], b = stubs[i + 1];
                if (a == b) {
                    loop_free = false;
                    break;
                }
                g.edges.emplace_back(std::min(a, b), std::max(a, b));
            }
            if (! loop_free)
                continue;
            std::sort(g.edges.begin(), g.edges.end());
            if (verify_expander(g).ok)
                return g;
        }
        expander circ;
        circ.vertices = m;
        circ.degree = degree;
        for (int off = 1; off <= degree / 2; ++off)
            for (int v = 0; v < m; ++v) {
                int w = (v + off) % m;
                circ.edges.emplace_back(std::min(v, w), std::max(v, w));
            }
        if (degree % 2 == 1)
            for (int v = 0; v < m / 2; ++v)
                circ.edges.emplace_back(v, v + m / 2);
        std::sort(circ.edges.begin(), circ.edges.end());
        if (verify_expander(circ).ok)
            return circ;
    }
    throw budget_error("find_expander: no verified expander with degree " +
        std::to_string(degree) + " found near " + std::to_string(m_min) +
        " vertices; a higher degree is likely needed");
}

}
