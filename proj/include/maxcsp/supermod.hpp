#pragma once

#include <maxcsp/gadgets.hpp>
#include <maxcsp/instance.hpp>
#include <maxcsp/lattice.hpp>
#include <maxcsp/strict.hpp>

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maxcsp {

struct supermod_check {
    bool ok = true;
    std::vector<int> a, b; // earliest violating pair in encoded-index order
};

namespace detail {

    inline void check_predicate(const relation & f, const lattice & l, const char * who)
    {
        if (f.domain_size() != l.size())
            throw contract_error(std::string(who) + ": predicate domain differs from lattice");
    }

    inline auto decode_all(const relation & f) -> std::vector<std::vector<int>>
    {
        std::vector<std::vector<int>> tuples;
        tuples.reserve(f.table_size());
        for (std::uint64_t i = 0; i < f.table_size(); ++i)
            tuples.push_back(f.decode(i));
        return tuples;
    }

}

// f(a) + f(b) <= f(a meet b) + f(a join b) over every pair, meets and joins
// taken componentwise.
inline auto is_supermodular(const relation & f, const lattice & l) -> supermod_check
{
    detail::check_predicate(f, l, "is_supermodular");
    auto tuples = detail::decode_all(f);
    const int n = f.arity();
    std::vector<int> m(n), j(n);
    for (std::uint64_t ia = 0; ia < f.table_size(); ++ia)
        for (std::uint64_t ib = 0; ib < f.table_size(); ++ib) {
            int lhs = (f.contains_index(ia) ? 1 : 0) + (f.contains_index(ib) ? 1 : 0);
            if (lhs == 0)
                continue;
            for (int c = 0; c < n; ++c) {
                m[c] = l.meet(tuples[ia][c], tuples[ib][c]);
                j[c] = l.join(tuples[ia][c], tuples[ib][c]);
            }
            int rhs = (f.contains(m) ? 1 : 0) + (f.contains(j) ? 1 : 0);
            if (lhs > rhs)
                return {false, tuples[ia], tuples[ib]};
        }
    return {};
}

// The pair-family test: only pairs that differ in exactly one coordinate, or
// in exactly two coordinates with both differing components comparable.
inline auto is_supermodular_restricted(const relation & f, const lattice & l) -> supermod_check
{
    detail::check_predicate(f, l, "is_supermodular_restricted");
    auto tuples = detail::decode_all(f);
    const int n = f.arity();
    std::vector<int> m(n), j(n);
    for (std::uint64_t ia = 0; ia < f.table_size(); ++ia)
        for (std::uint64_t ib = 0; ib < f.table_size(); ++ib) {
            int diffs = 0;
            bool comparable = true;
            for (int c = 0; c < n && diffs <= 2; ++c)
                if (tuples[ia][c] != tuples[ib][c]) {
                    ++diffs;
                    if (! l.comparable(tuples[ia][c], tuples[ib][c]))
                        comparable = false;
                }
            if (diffs != 1 && ! (diffs == 2 && comparable))
                continue;
            int lhs = (f.contains_index(ia) ? 1 : 0) + (f.contains_index(ib) ? 1 : 0);
            if (lhs == 0)
                continue;
            for (int c = 0; c < n; ++c) {
                m[c] = l.meet(tuples[ia][c], tuples[ib][c]);
                j[c] = l.join(tuples[ia][c], tuples[ib][c]);
            }
            int rhs = (f.contains(m) ? 1 : 0) + (f.contains(j) ? 1 : 0);
            if (lhs > rhs)
                return {false, tuples[ia], tuples[ib]};
        }
    return {};
}

// ---------------------------------------------------------------------------
// generalised 2-monotone predicates: a down-set clause and an up-set clause

struct twomonotone {
    int arity = 1;
    std::vector<std::pair<int, int>> lower; // (coordinate, bound a): x_c below a
    std::vector<std::pair<int, int>> upper; // (coordinate, bound b): x_c above b
};

// An absent clause contributes nothing; a predicate with both clauses absent
// is the full relation (the convention the enumeration examples pin down).
inline auto evaluate_2monotone(const twomonotone & t, const lattice & l) -> relation
{
    relation r(l.size(), t.arity);
    for (std::uint64_t idx = 0; idx < r.table_size(); ++idx) {
        auto x = r.decode(idx);
        bool low = ! t.lower.empty();
        for (auto & [c, a] : t.lower)
            if (! l.leq(x[c], a))
                low = false;
        bool up = ! t.upper.empty();
        for (auto & [c, b] : t.upper)
            if (! l.leq(b, x[c]))
                up = false;
        if (low || up || (t.lower.empty() && t.upper.empty()))
            r.set_index(idx, true);
    }
    return r;
}

namespace detail {

    // clause option per coordinate: -1 absent, otherwise the bound value;
    // enumerated lexicographically so recognition is canonical
    template <typename Yield>
    void for_each_clause(int arity, int d, Yield && yield)
    {
        std::vector<int> opt(arity, -1);
        while (true) {
            std::vector<std::pair<int, int>> clause;
            for (int c = 0; c < arity; ++c)
                if (opt[c] >= 0)
                    clause.emplace_back(c, opt[c]);
            yield(clause);
            int c = arity - 1;
            while (c >= 0 && opt[c] == d - 1)
                opt[c--] = -1;
            if (c < 0)
                return;
            ++opt[c];
        }
    }

}

// first clause pair (in canonical enumeration order) evaluating to f, if any
inline auto recognize_2monotone(const relation & f, const lattice & l)
    -> std::optional<twomonotone>
{
    detail::check_predicate(f, l, "recognize_2monotone");
    std::optional<twomonotone> found;
    detail::for_each_clause(f.arity(), l.size(), [&](const auto & low) {
        if (found)
            return;
        detail::for_each_clause(f.arity(), l.size(), [&](const auto & up) {
            if (found)
                return;
            twomonotone t{f.arity(), low, up};
            if (evaluate_2monotone(t, l) == f)
                found = t;
        });
    });
    return found;
}

// all 2-monotone predicates of arity 1..max_arity with distinct evaluations,
// each double-checked supermodular
inline auto enumerate_2monotone(const lattice & l, int max_arity)
    -> std::vector<std::pair<twomonotone, relation>>
{
    if (max_arity < 1 || max_arity > 2)
        throw contract_error("enumerate_2monotone: arity must be 1 or 2");
    std::vector<std::pair<twomonotone, relation>> out;
    for (int arity = 1; arity <= max_arity; ++arity) {
        std::map<relation, bool> seen;
        detail::for_each_clause(arity, l.size(), [&](const auto & low) {
            detail::for_each_clause(arity, l.size(), [&](const auto & up) {
                twomonotone t{arity, low, up};
                relation r = evaluate_2monotone(t, l);
                if (seen.emplace(r, true).second) {
                    if (! is_supermodular(r, l).ok)
                        throw contract_error("enumerate_2monotone: a 2-monotone predicate "
                            "failed the supermodularity check (bug)");
                    out.emplace_back(t, std::move(r));
                }
            });
        });
    }
    return out;
}

// which of the two lattice orders on {0,1} (if any) make every relation of a
// Boolean language supermodular; the classification oracle for Boolean cores
inline auto boolean_supermodular_orders(const language & lang) -> std::vector<int>
{
    if (lang.domain_size() != 2)
        throw contract_error("boolean_supermodular_orders: domain must be {0,1}");
    std::vector<int> orders;
    for (int flip = 0; flip < 2; ++flip) {
        lattice l = boolean_chain(flip == 1);
        bool all = true;
        for (int i = 0; i < lang.size(); ++i)
            if (! is_supermodular(lang.at(i), l).ok)
                all = false;
        if (all)
            orders.push_back(flip);
    }
    return orders;
}

// ---------------------------------------------------------------------------
// non-lattice posets: the explicit non-valid 2-monotone predicate

struct poset_witness {
    lattice_failure kind = lattice_failure::none;
    int a = -1, b = -1;
    relation g;                // binary over the full poset domain
    std::optional<relation> f; // unary restriction predicate (two-bound cases)
    std::vector<int> subdomain;
    relation g_effective; // g, or g restricted to the subdomain (relabelled)
    std::string note;
};

inline auto poset_hardness_witness(const poset & p) -> poset_witness
{
    auto res = is_lattice(p);
    if (res.check.ok)
        throw contract_error("poset_hardness_witness: the poset is a lattice order");
    const int n = p.size();
    const int a = res.check.a, b = res.check.b;
    const auto kind = res.check.kind;

    bool meet_side = kind == lattice_failure::meet_no_common_bound ||
        kind == lattice_failure::meet_not_unique;
    relation g(n, 2);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            bool v = meet_side ? (p.leq(x, a) && p.leq(y, b)) : (p.leq(a, x) && p.leq(b, y));
            if (v)
                g.add({x, y});
        }
    if (! g.contains({a, b}))
        throw contract_error("poset_hardness_witness: g misses its defining pair (bug)");

    poset_witness out;
    out.kind = kind;
    out.a = a;
    out.b = b;
    out.g = g;

    if (kind == lattice_failure::meet_no_common_bound ||
        kind == lattice_failure::join_no_common_bound) {
        if (g.is_valid())
            throw contract_error("poset_hardness_witness: g is valid though the pair has no "
                "common bound (bug)");
        out.g_effective = g;
        out.note = meet_side ? "no common lower bound: g itself is non-valid"
                             : "no common upper bound: g itself is non-valid";
        return out;
    }

    // two extremal common bounds exist; restrict to the values above (below)
    // both of them
    std::vector<int> extremal;
    for (int c = 0; c < n; ++c) {
        bool common = meet_side ? (p.leq(c, a) && p.leq(c, b)) : (p.leq(a, c) && p.leq(b, c));
        if (! common)
            continue;
        bool ext = true;
        for (int e = 0; e < n; ++e) {
            bool e_common = meet_side ? (p.leq(e, a) && p.leq(e, b))
                                      : (p.leq(a, e) && p.leq(b, e));
            if (! e_common || e == c)
                continue;
            if (meet_side ? p.leq(c, e) : p.leq(e, c))
                ext = false;
        }
        if (ext)
            extremal.push_back(c);
    }
    if (extremal.size() < 2)
        throw contract_error("poset_hardness_witness: expected two extremal common bounds "
            "(bug)");
    int c = extremal[0], e = extremal[1];
    relation f(n, 1);
    for (int x = 0; x < n; ++x) {
        bool v = meet_side ? (p.leq(c, x) && p.leq(e, x)) : (p.leq(x, c) && p.leq(x, e));
        if (v)
            f.add({x});
    }
    std::vector<int> sub;
    for (int x = 0; x < n; ++x)
        if (f.contains({x}))
            sub.push_back(x);
    relation g_eff = restrict_relation(g, sub).restricted;
    if (g_eff.is_empty() || g_eff.is_valid())
        throw contract_error("poset_hardness_witness: restricted g is not non-empty "
            "non-valid (bug)");
    out.f = f;
    out.subdomain = sub;
    out.g_effective = g_eff;
    out.note = std::string(meet_side ? "several maximal common lower bounds "
                                     : "several minimal common upper bounds ") +
        std::to_string(c) + "," + std::to_string(e) +
        ": g restricted to the f-subdomain is non-empty and non-valid";
    return out;
}

// ---------------------------------------------------------------------------
// the Boolean-target reduction for a non-supermodular predicate

struct constant_elimination {
    bool applied = false;
    std::vector<int> kept_coords;
    std::vector<std::pair<int, int>> pinned; // (coordinate, constant), forced by
                                             // two copies each of (y below a), (a below y)
    relation reduced;
};

namespace detail {

    // first violating pair among pairs differing in exactly two coordinates,
    // both comparable (the Case 2 family), in encoded-index order
    inline auto find_two_coord_witness(const relation & f, const lattice & l)
        -> std::optional<std::pair<std::vector<int>, std::vector<int>>>
    {
        auto tuples = decode_all(f);
        const int n = f.arity();
        std::vector<int> m(n), j(n);
        for (std::uint64_t ia = 0; ia < f.table_size(); ++ia)
            for (std::uint64_t ib = 0; ib < f.table_size(); ++ib) {
                int diffs = 0;
                bool comparable = true;
                for (int c = 0; c < n && diffs <= 2; ++c)
                    if (tuples[ia][c] != tuples[ib][c]) {
                        ++diffs;
                        if (! l.comparable(tuples[ia][c], tuples[ib][c]))
                            comparable = false;
                    }
                if (diffs != 2 || ! comparable)
                    continue;
                int lhs = (f.contains_index(ia) ? 1 : 0) + (f.contains_index(ib) ? 1 : 0);
                for (int c = 0; c < n; ++c) {
                    m[c] = l.meet(tuples[ia][c], tuples[ib][c]);
                    j[c] = l.join(tuples[ia][c], tuples[ib][c]);
                }
                int rhs = (f.contains(m) ? 1 : 0) + (f.contains(j) ? 1 : 0);
                if (lhs > rhs)
                    return std::make_pair(tuples[ia], tuples[ib]);
            }
        return std::nullopt;
    }

    inline auto find_one_coord_witness(const relation & f, const lattice & l)
        -> std::optional<std::pair<std::vector<int>, std::vector<int>>>
    {
        auto tuples = decode_all(f);
        const int n = f.arity();
        std::vector<int> m(n), j(n);
        for (std::uint64_t ia = 0; ia < f.table_size(); ++ia)
            for (std::uint64_t ib = 0; ib < f.table_size(); ++ib) {
                int diffs = 0;
                for (int c = 0; c < n && diffs <= 1; ++c)
                    if (tuples[ia][c] != tuples[ib][c])
                        ++diffs;
                if (diffs != 1)
                    continue;
                int lhs = (f.contains_index(ia) ? 1 : 0) + (f.contains_index(ib) ? 1 : 0);
                for (int c = 0; c < n; ++c) {
                    m[c] = l.meet(tuples[ia][c], tuples[ib][c]);
                    j[c] = l.join(tuples[ia][c], tuples[ib][c]);
                }
                int rhs = (f.contains(m) ? 1 : 0) + (f.contains(j) ? 1 : 0);
                if (lhs > rhs)
                    return std::make_pair(tuples[ia], tuples[ib]);
            }
        return std::nullopt;
    }

    inline auto project_to_coords(const relation & f, const std::vector<int> & kept,
        const std::vector<std::pair<int, int>> & pinned) -> relation
    {
        relation r(f.domain_size(), static_cast<int>(kept.size()));
        std::vector<int> full(f.arity());
        for (std::uint64_t idx = 0; idx < r.table_size(); ++idx) {
            auto part = r.decode(idx);
            for (std::size_t i = 0; i < kept.size(); ++i)
                full[kept[i]] = part[i];
            for (auto & [c, v] : pinned)
                full[c] = v;
            if (f.contains(full))
                r.set_index(idx, true);
        }
        return r;
    }

}

// Bring a non-supermodular predicate down to arity <= 2 by substituting all
// but the witness coordinates with the witness's shared constants. Prefers a
// two-coordinate comparable witness (feeding the binary construction); falls
// back to a one-coordinate witness (feeding the unary construction).
inline auto eliminate_to_low_arity(const lattice & l, const relation & f)
    -> constant_elimination
{
    detail::check_predicate(f, l, "eliminate_to_low_arity");
    if (is_supermodular(f, l).ok)
        throw contract_error("eliminate_to_low_arity: refused, the predicate is "
            "supermodular");
    auto witness = detail::find_two_coord_witness(f, l);
    if (! witness)
        witness = detail::find_one_coord_witness(f, l);
    if (! witness)
        throw contract_error("eliminate_to_low_arity: full test found a violation but "
            "neither restricted family did; the restricted families are supposed to "
            "cover every violation (bug)");
    auto & [a, b] = *witness;
    constant_elimination out;
    for (int c = 0; c < f.arity(); ++c)
        if (a[c] != b[c])
            out.kept_coords.push_back(c);
        else
            out.pinned.emplace_back(c, a[c]);
    out.reduced = detail::project_to_coords(f, out.kept_coords, out.pinned);
    out.applied = ! out.pinned.empty();
    if (is_supermodular(out.reduced, l).ok)
        throw contract_error("eliminate_to_low_arity: projection lost the violation (bug)");
    return out;
}

// the five possible restrictions of f along t1 x t2, rows (x,y) = 00,01,10,11
inline constexpr std::array<std::array<int, 4>, 5> g_possibilities = {{
    {0, 1, 1, 1},
    {0, 1, 0, 0},
    {0, 0, 1, 0},
    {0, 1, 1, 0},
    {1, 1, 1, 0},
}};

struct case1_certificate {
    std::string subcase;        // "1a" or "1b"
    bool used_intermediate = false;
    int a = -1, b = -1;         // witness, original lattice values
    int z_low = -1, z_high = -1;
    std::vector<int> dprime;    // interval members, original values
    lattice sub;                // the interval, relabelled
    relation f_prime;           // f restricted to the interval
    bool dual = false;          // 1a flavour with f(z_low) = 1
    std::optional<strict_implementation> h; // 1b: f' + u summed (alpha = 1)
    relation h_eval;            // the unary predicate feeding the g step
    relation g;                 // binary over the interval
    std::vector<int> dsecond;   // interval values where h_eval holds
    relation g_restricted;      // non-empty and non-valid

    case1_certificate()
        : sub(chain_lattice(1))
    {
    }
};

namespace detail {

    inline auto build_case1(const lattice & l, const relation & f, std::vector<int> a_t,
        std::vector<int> b_t) -> case1_certificate
    {
        int a = a_t[0], b = b_t[0];
        if (l.comparable(a, b))
            throw contract_error("case 1: witness elements are comparable, which cannot "
                "violate supermodularity (bug)");
        // normalise f(a) = 1
        if (! f.contains({a}))
            std::swap(a, b);
        if (! f.contains({a}))
            throw contract_error("case 1: violating pair with f zero on both sides (bug)");

        case1_certificate cert;
        cert.a = a;
        cert.b = b;
        cert.z_low = l.meet(a, b);
        cert.z_high = l.join(a, b);
        auto sub = interval_sublattice(l, cert.z_low, cert.z_high);
        cert.dprime = sub.new_to_old;
        cert.sub = sub.lat;
        cert.f_prime = restrict_relation(f, sub.new_to_old).restricted;

        std::vector<int> o2n(l.size(), -1);
        for (std::size_t i = 0; i < sub.new_to_old.size(); ++i)
            o2n[sub.new_to_old[i]] = static_cast<int>(i);
        const int A = o2n[a], B = o2n[b], ZL = o2n[cert.z_low], ZH = o2n[cert.z_high];
        const lattice & L = cert.sub;
        const relation & fp = cert.f_prime;

        auto fin = [&](bool is_1b) {
            cert.subcase = is_1b ? "1b" : "1a";
            const relation & he = cert.h_eval;
            // g(x,y): below-a and below-b, or the dual above-a/above-b flavour
            relation g(L.size(), 2);
            for (int x = 0; x < L.size(); ++x)
                for (int y = 0; y < L.size(); ++y) {
                    bool v = cert.dual ? (L.leq(A, x) && L.leq(B, y))
                                       : (L.leq(x, A) && L.leq(y, B));
                    if (v)
                        g.add({x, y});
                }
            cert.g = g;
            for (int x = 0; x < L.size(); ++x)
                if (he.contains({x}))
                    cert.dsecond.push_back(x);
            cert.g_restricted = restrict_relation(g, cert.dsecond).restricted;
            if (cert.g_restricted.is_empty() || cert.g_restricted.is_valid())
                throw contract_error("case 1: restricted g is not non-empty non-valid (bug)");
            return cert;
        };

        if (fp.contains({B})) { // subcase 1a
            if (fp.contains({ZL}) && fp.contains({ZH}))
                throw contract_error("case 1a: f holds on meet and join, no violation (bug)");
            cert.dual = fp.contains({ZL}); // f(z_low)=1 forces f(z_high)=0: dual flavour
            cert.h_eval = fp;
            return fin(false);
        }

        // subcase 1b: f(a)=1, f(b)=0, hence f(z_low)=f(z_high)=0
        if (fp.contains({ZL}) || fp.contains({ZH}))
            throw contract_error("case 1b: f nonzero on meet or join, no violation (bug)");
        for (int x = 0; x < L.size(); ++x)
            if (L.less(B, x) && L.less(x, ZH) && fp.contains({x})) {
                // an intermediate witness upgrades to subcase 1a on (a, x)
                auto upgraded = build_case1(l, f, {a}, {sub.new_to_old[x]});
                upgraded.used_intermediate = true;
                return upgraded;
            }
        relation u(L.size(), 1);
        for (int x = 0; x < L.size(); ++x)
            if (L.leq(B, x))
                u.add({x});
        cert.h = gadget_unary_union(fp, u, "f", "u");
        relation he(L.size(), 1);
        for (int x = 0; x < L.size(); ++x)
            if (fp.contains({x}) || u.contains({x}))
                he.add({x});
        cert.h_eval = he;
        return fin(true);
    }

}

struct twomon_transform {
    instance output;
    std::int64_t g_blocks = 0;      // M: constraints of type g in the input
    std::int64_t opt_shift = 0;     // 8(2w+1)M
    std::int64_t achieved_bound = 0;
    std::function<assignment(const assignment &)> forward;
    std::function<assignment(const assignment &)> repair;
    std::function<assignment(const assignment &)> backward;

    twomon_transform()
        : output(language(1), 0)
    {
    }
};

struct case2_certificate {
    int a1 = -1, a2 = -1, b1 = -1, b2 = -1; // original lattice values
    int z_low = -1, z_high = -1;
    std::vector<int> dprime;
    lattice sub;
    relation f_prime; // binary over the interval
    std::array<int, 2> t1{}, t2{}; // interval-relabelled values
    relation g; // Boolean 2x2
    int g_column = -1;
    language gadget_lang;  // f, h1, h2, the six unary forcers, l_low, g_high
    language boolean_lang; // g, c0, c1
    std::int64_t multiplicity = 0; // 2w+1
    std::function<twomon_transform(const instance &)> transform;

    case2_certificate()
        : sub(chain_lattice(1))
        , gadget_lang(1)
        , boolean_lang(2)
    {
    }
};

namespace detail {

    inline auto build_case2(const lattice & l, const relation & f, std::vector<int> a,
        std::vector<int> b, std::int64_t w) -> case2_certificate
    {
        // normalise a1 strictly below b1; then b2 strictly below a2 follows
        if (! l.less(a[0], b[0]))
            std::swap(a, b);
        if (! l.less(a[0], b[0]) || ! l.less(b[1], a[1]))
            throw contract_error("case 2: witness does not normalise to an ascending first "
                "coordinate and a descending second (bug)");

        case2_certificate cert;
        cert.a1 = a[0];
        cert.a2 = a[1];
        cert.b1 = b[0];
        cert.b2 = b[1];
        cert.z_low = l.meet(cert.a1, cert.b2);
        cert.z_high = l.join(cert.a2, cert.b1);
        auto sub = interval_sublattice(l, cert.z_low, cert.z_high);
        cert.dprime = sub.new_to_old;
        cert.sub = sub.lat;
        cert.f_prime = restrict_relation(f, sub.new_to_old).restricted;

        std::vector<int> o2n(l.size(), -1);
        for (std::size_t i = 0; i < sub.new_to_old.size(); ++i)
            o2n[sub.new_to_old[i]] = static_cast<int>(i);
        const int A1 = o2n[cert.a1], A2 = o2n[cert.a2], B1 = o2n[cert.b1], B2 = o2n[cert.b2];
        const int ZL = o2n[cert.z_low], ZH = o2n[cert.z_high];
        const lattice & L = cert.sub;
        const relation & fp = cert.f_prime;
        cert.t1 = {A1, B1};
        cert.t2 = {B2, A2};

        relation g(2, 2);
        std::array<int, 4> gv{};
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                bool v = fp.contains({cert.t1[x], cert.t2[y]});
                gv[x * 2 + y] = v ? 1 : 0;
                if (v)
                    g.add({x, y});
            }
        cert.g = g;
        for (std::size_t col = 0; col < g_possibilities.size(); ++col)
            if (std::array<int, 4>{gv[0], gv[1], gv[2], gv[3]} == g_possibilities[col])
                cert.g_column = static_cast<int>(col);
        if (cert.g_column < 0)
            throw contract_error("case 2: the induced Boolean predicate matches no known "
                "possibility (bug)");

        auto unary = [&](auto && pred) {
            relation r(L.size(), 1);
            for (int x = 0; x < L.size(); ++x)
                if (pred(x))
                    r.add({x});
            return r;
        };
        auto binary = [&](auto && pred) {
            relation r(L.size(), 2);
            for (int x = 0; x < L.size(); ++x)
                for (int y = 0; y < L.size(); ++y)
                    if (pred(x, y))
                        r.add({x, y});
            return r;
        };
        relation h1 = binary([&](int x, int y) {
            return (L.leq(x, ZL) && L.leq(y, cert.t1[0])) ||
                (L.leq(ZH, x) && L.leq(cert.t1[1], y));
        });
        relation h2 = binary([&](int x, int y) {
            return (L.leq(x, ZL) && L.leq(y, cert.t2[0])) ||
                (L.leq(ZH, x) && L.leq(cert.t2[1], y));
        });
        language gl(L.size());
        gl.add("f", fp);
        gl.add("h1", h1);
        gl.add("h2", h2);
        gl.add("l_b1", unary([&](int x) { return L.leq(x, B1); }));
        gl.add("g_a1", unary([&](int x) { return L.leq(A1, x); }));
        gl.add("n_a1b1", unary([&](int x) { return L.leq(x, A1) || L.leq(B1, x); }));
        gl.add("l_a2", unary([&](int x) { return L.leq(x, A2); }));
        gl.add("g_b2", unary([&](int x) { return L.leq(B2, x); }));
        gl.add("n_b2a2", unary([&](int x) { return L.leq(x, B2) || L.leq(A2, x); }));
        gl.add("l_low", unary([&](int x) { return L.leq(x, ZL); }));
        gl.add("g_high", unary([&](int x) { return L.leq(ZH, x); }));
        // everything except f itself must be 2-monotone on the interval
        for (int i = 1; i < gl.size(); ++i)
            if (! recognize_2monotone(gl.at(i), L))
                throw contract_error("case 2: gadget predicate '" + gl.name(i) +
                    "' is not 2-monotone (bug)");
        cert.gadget_lang = gl;

        language bl(2);
        bl.add("g", g);
        bl.add("c0", constant_relation(2, 0));
        bl.add("c1", constant_relation(2, 1));
        cert.boolean_lang = bl;
        // the external Boolean fact: {g, c0, c1} is supermodular on neither
        // order of {0,1}
        if (! boolean_supermodular_orders(bl).empty())
            throw contract_error("case 2: the Boolean target is supermodular on a chain, "
                "contradicting the table of possibilities (bug)");

        if (w < 1)
            throw contract_error("case 2: occurrence bound w must be >= 1");
        const std::int64_t copies = 2 * w + 1;
        cert.multiplicity = copies;

        language gl_copy = gl;
        language bl_copy = bl;
        std::array<int, 2> t1 = cert.t1, t2 = cert.t2;
        cert.transform = [gl_copy, bl_copy, copies, w, ZL, ZH, t1, t2](const instance & in)
            -> twomon_transform {
            if (! (in.lang() == bl_copy))
                throw contract_error("2-monotone transform: instance must be over the "
                    "Boolean language {g, c0, c1}");
            if (occurrence_bound(in) > w)
                throw contract_error("2-monotone transform: input occurrence bound exceeds "
                    "w = " + std::to_string(w));
            const int n = in.num_vars();
            instance out(gl_copy, n);
            std::vector<std::array<int, 4>> blocks; // x_j, x_k, y_j, y_k
            for (auto & c : in.constraints()) {
                const std::string & nm = bl_copy.name(c.rel);
                if (nm == "g") {
                    int xj = c.scope[0], xk = c.scope[1];
                    int yj = out.add_variable();
                    int yk = out.add_variable();
                    blocks.push_back({xj, xk, yj, yk});
                    out.add_constraint("f", {yj, yk});
                    for (int r = 0; r < copies; ++r) {
                        out.add_constraint("l_b1", {yj});
                        out.add_constraint("g_a1", {yj});
                        out.add_constraint("n_a1b1", {yj});
                    }
                    for (int r = 0; r < copies; ++r) {
                        out.add_constraint("l_a2", {yk});
                        out.add_constraint("g_b2", {yk});
                        out.add_constraint("n_b2a2", {yk});
                    }
                    for (int r = 0; r < copies; ++r) {
                        out.add_constraint("h1", {xj, yj});
                        out.add_constraint("h2", {xk, yk});
                    }
                }
                else if (nm == "c0")
                    out.add_constraint("l_low", {c.scope[0]});
                else
                    out.add_constraint("g_high", {c.scope[0]});
            }

            twomon_transform res;
            res.output = out;
            res.g_blocks = static_cast<std::int64_t>(blocks.size());
            res.opt_shift = 8 * copies * res.g_blocks;
            res.achieved_bound = occurrence_bound(out);

            auto blocks_copy = blocks;
            res.forward = [blocks_copy, n, ZL, ZH, t1, t2,
                              total = out.num_vars()](const assignment & s) {
                assignment t(total, 0);
                for (int i = 0; i < n; ++i)
                    t[i] = s[i] == 0 ? ZL : ZH;
                for (auto & bl : blocks_copy) {
                    t[bl[2]] = t1[t[bl[0]] == ZH ? 1 : 0];
                    t[bl[3]] = t2[t[bl[1]] == ZH ? 1 : 0];
                }
                return t;
            };
            res.repair = [blocks_copy, n, ZL, ZH, t1, t2](assignment s) {
                for (int i = 0; i < n; ++i)
                    if (s[i] != ZL && s[i] != ZH)
                        s[i] = ZH;
                for (auto & bl : blocks_copy) {
                    s[bl[2]] = t1[s[bl[0]] == ZH ? 1 : 0];
                    s[bl[3]] = t2[s[bl[1]] == ZH ? 1 : 0];
                }
                return s;
            };
            auto rep = res.repair;
            res.backward = [rep, n, ZL](const assignment & s_out) {
                auto fixed = rep(s_out);
                assignment s(n);
                for (int i = 0; i < n; ++i)
                    s[i] = fixed[i] == ZL ? 0 : 1;
                return s;
            };
            return res;
        };
        return cert;
    }

}

struct boolean_reduction {
    std::string branch; // "1a", "1b" or "2"
    constant_elimination elim;
    std::optional<case1_certificate> unary;
    std::optional<case2_certificate> binary;
};

// The hardness construction for a predicate that is not supermodular on the
// lattice: either the unary interval-and-restriction certificate (Case 1) or
// the full Boolean-target gadget reduction (Case 2). w is the occurrence
// bound of the Boolean instances the Case 2 transformation will accept.
inline auto nonsupermodular_boolean_reduction(const lattice & l, const relation & f,
    std::int64_t w) -> boolean_reduction
{
    detail::check_predicate(f, l, "nonsupermodular_boolean_reduction");
    if (is_supermodular(f, l).ok)
        throw contract_error("nonsupermodular_boolean_reduction: refused, the predicate is "
            "supermodular on this lattice");

    boolean_reduction out;
    out.elim = eliminate_to_low_arity(l, f);
    const relation & reduced = out.elim.reduced;
    if (reduced.arity() == 2) {
        auto witness = detail::find_two_coord_witness(reduced, l);
        if (! witness)
            throw contract_error("nonsupermodular_boolean_reduction: binary projection lost "
                "its two-coordinate witness (bug)");
        out.binary = detail::build_case2(l, reduced, witness->first, witness->second, w);
        out.branch = "2";
    }
    else {
        auto witness = detail::find_one_coord_witness(reduced, l);
        if (! witness)
            throw contract_error("nonsupermodular_boolean_reduction: unary projection lost "
                "its witness (bug)");
        out.unary = detail::build_case1(l, reduced, witness->first, witness->second);
        out.branch = out.unary->subcase;
    }
    return out;
}

}
