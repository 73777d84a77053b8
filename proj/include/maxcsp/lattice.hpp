#pragma once

#include <maxcsp/errors.hpp>

#include <optional>
#include <string>
#include <vector>

namespace maxcsp {

// A finite partial order as an explicit leq matrix.
class poset {
public:
    explicit poset(int n)
        : n_(n)
        , leq_(static_cast<std::size_t>(n) * n, 0)
    {
        if (n < 1)
            throw contract_error("poset: need at least one element");
        for (int i = 0; i < n; ++i)
            leq_[idx(i, i)] = 1;
    }

    [[nodiscard]] auto size() const -> int { return n_; }
    [[nodiscard]] auto leq(int a, int b) const -> bool { return leq_[idx(a, b)] != 0; }
    [[nodiscard]] auto less(int a, int b) const -> bool { return a != b && leq(a, b); }
    [[nodiscard]] auto comparable(int a, int b) const -> bool { return leq(a, b) || leq(b, a); }
    void set_leq(int a, int b) { leq_[idx(a, b)] = 1; }

    auto operator==(const poset & o) const -> bool { return n_ == o.n_ && leq_ == o.leq_; }
    auto operator!=(const poset & o) const -> bool { return ! (*this == o); }

private:
    [[nodiscard]] auto idx(int a, int b) const -> std::size_t
    {
        if (a < 0 || a >= n_ || b < 0 || b >= n_)
            throw contract_error("poset: element out of range");
        return static_cast<std::size_t>(a) * n_ + b;
    }

    int n_;
    std::vector<char> leq_;
};

struct poset_check {
    bool ok = true;
    std::string reason;
    int a = -1, b = -1, c = -1;
};

inline auto validate_poset(const poset & p) -> poset_check
{
    for (int a = 0; a < p.size(); ++a)
        if (! p.leq(a, a))
            return {false, "not reflexive", a, a, -1};
    for (int a = 0; a < p.size(); ++a)
        for (int b = 0; b < p.size(); ++b)
            if (a != b && p.leq(a, b) && p.leq(b, a))
                return {false, "not antisymmetric", a, b, -1};
    for (int a = 0; a < p.size(); ++a)
        for (int b = 0; b < p.size(); ++b)
            for (int c = 0; c < p.size(); ++c)
                if (p.leq(a, b) && p.leq(b, c) && ! p.leq(a, c))
                    return {false, "not transitive", a, b, c};
    return {};
}

// Convenience for building posets from covering pairs in tests and tools.
inline auto poset_from_pairs(int n, const std::vector<std::pair<int, int>> & below) -> poset
{
    poset p(n);
    for (auto & [a, b] : below)
        p.set_leq(a, b);
    // transitive closure
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (p.leq(a, k) && p.leq(k, b))
                    p.set_leq(a, b);
    auto chk = validate_poset(p);
    if (! chk.ok)
        throw contract_error("poset_from_pairs: " + chk.reason);
    return p;
}

class lattice {
public:
    lattice(poset order, std::vector<int> meet, std::vector<int> join)
        : order_(std::move(order))
        , meet_(std::move(meet))
        , join_(std::move(join))
    {
        auto n = static_cast<std::size_t>(order_.size());
        if (meet_.size() != n * n || join_.size() != n * n)
            throw contract_error("lattice: meet/join tables must be d*d");
    }

    [[nodiscard]] auto size() const -> int { return order_.size(); }
    [[nodiscard]] auto order() const -> const poset & { return order_; }
    [[nodiscard]] auto leq(int a, int b) const -> bool { return order_.leq(a, b); }
    [[nodiscard]] auto less(int a, int b) const -> bool { return order_.less(a, b); }
    [[nodiscard]] auto comparable(int a, int b) const -> bool { return order_.comparable(a, b); }
    [[nodiscard]] auto meet(int a, int b) const -> int
    {
        return meet_[static_cast<std::size_t>(a) * size() + b];
    }
    [[nodiscard]] auto join(int a, int b) const -> int
    {
        return join_[static_cast<std::size_t>(a) * size() + b];
    }
    [[nodiscard]] auto meet_table() const -> const std::vector<int> & { return meet_; }
    [[nodiscard]] auto join_table() const -> const std::vector<int> & { return join_; }

    [[nodiscard]] auto bottom() const -> int
    {
        int b = 0;
        for (int i = 1; i < size(); ++i)
            b = meet(b, i);
        return b;
    }
    [[nodiscard]] auto top() const -> int
    {
        int t = 0;
        for (int i = 1; i < size(); ++i)
            t = join(t, i);
        return t;
    }

    auto operator==(const lattice & o) const -> bool
    {
        return order_ == o.order_ && meet_ == o.meet_ && join_ == o.join_;
    }
    auto operator!=(const lattice & o) const -> bool { return ! (*this == o); }

private:
    poset order_;
    std::vector<int> meet_, join_;
};

enum class lattice_failure {
    none,
    meet_no_common_bound,
    meet_not_unique, // several maximal common lower bounds
    join_no_common_bound,
    join_not_unique,
};

inline auto to_string(lattice_failure k) -> std::string
{
    switch (k) {
    case lattice_failure::none: return "none";
    case lattice_failure::meet_no_common_bound: return "no common lower bound";
    case lattice_failure::meet_not_unique: return "several maximal common lower bounds";
    case lattice_failure::join_no_common_bound: return "no common upper bound";
    case lattice_failure::join_not_unique: return "several minimal common upper bounds";
    }
    return "?";
}

struct lattice_check {
    bool ok = false;
    lattice_failure kind = lattice_failure::none;
    int a = -1, b = -1;
};

struct lattice_result {
    std::optional<lattice> lat;
    lattice_check check;
};

// Decide whether the poset is a lattice order. On success builds the meet and
// join tables; on failure reports the least pair (by element order) that
// lacks a greatest lower or least upper bound, together with which of the
// two failure shapes occurred.
inline auto is_lattice(const poset & p) -> lattice_result
{
    {
        auto chk = validate_poset(p);
        if (! chk.ok)
            throw contract_error("is_lattice: invalid poset: " + chk.reason);
    }
    const int n = p.size();
    std::vector<int> meet(static_cast<std::size_t>(n) * n, -1);
    std::vector<int> join(static_cast<std::size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<int> lower, upper;
            for (int c = 0; c < n; ++c) {
                if (p.leq(c, a) && p.leq(c, b))
                    lower.push_back(c);
                if (p.leq(a, c) && p.leq(b, c))
                    upper.push_back(c);
            }
            if (lower.empty())
                return {std::nullopt, {false, lattice_failure::meet_no_common_bound, a, b}};
            int greatest = -1;
            for (int c : lower) {
                bool top_of_lower = true;
                for (int e : lower)
                    if (! p.leq(e, c))
                        top_of_lower = false;
                if (top_of_lower)
                    greatest = c;
            }
            if (greatest < 0)
                return {std::nullopt, {false, lattice_failure::meet_not_unique, a, b}};
            if (upper.empty())
                return {std::nullopt, {false, lattice_failure::join_no_common_bound, a, b}};
            int least = -1;
            for (int c : upper) {
                bool bottom_of_upper = true;
                for (int e : upper)
                    if (! p.leq(c, e))
                        bottom_of_upper = false;
                if (bottom_of_upper)
                    least = c;
            }
            if (least < 0)
                return {std::nullopt, {false, lattice_failure::join_not_unique, a, b}};
            meet[static_cast<std::size_t>(a) * n + b] = greatest;
            join[static_cast<std::size_t>(a) * n + b] = least;
        }
    lattice lat(p, std::move(meet), std::move(join));
    return {std::move(lat), {true, lattice_failure::none, -1, -1}};
}

// Full axiom check: commutativity, associativity, idempotence, absorption,
// and agreement of the tables with the order.
inline void validate_lattice(const lattice & l)
{
    const int n = l.size();
    for (int a = 0; a < n; ++a) {
        if (l.meet(a, a) != a || l.join(a, a) != a)
            throw contract_error("lattice: idempotence fails at " + std::to_string(a));
        for (int b = 0; b < n; ++b) {
            if (l.meet(a, b) != l.meet(b, a) || l.join(a, b) != l.join(b, a))
                throw contract_error("lattice: commutativity fails");
            if (l.join(a, l.meet(a, b)) != a || l.meet(a, l.join(a, b)) != a)
                throw contract_error("lattice: absorption fails");
            bool ab = l.leq(a, b);
            if ((l.meet(a, b) == a) != ab || (l.join(a, b) == b) != ab)
                throw contract_error("lattice: meet/join disagree with the order");
            int m = l.meet(a, b), j = l.join(a, b);
            if (! l.leq(m, a) || ! l.leq(m, b) || ! l.leq(a, j) || ! l.leq(b, j))
                throw contract_error("lattice: meet/join not bounds");
            for (int c = 0; c < n; ++c) {
                if (l.leq(c, a) && l.leq(c, b) && ! l.leq(c, m))
                    throw contract_error("lattice: meet not greatest lower bound");
                if (l.leq(a, c) && l.leq(b, c) && ! l.leq(j, c))
                    throw contract_error("lattice: join not least upper bound");
                if (l.meet(a, l.meet(b, c)) != l.meet(l.meet(a, b), c) ||
                    l.join(a, l.join(b, c)) != l.join(l.join(a, b), c))
                    throw contract_error("lattice: associativity fails");
            }
        }
    }
}

inline auto chain_lattice(int n) -> lattice
{
    poset p(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            p.set_leq(a, b);
    auto res = is_lattice(p);
    return *res.lat;
}

// bottom 0, top n-1, the n-2 middle elements pairwise incomparable
inline auto diamond_lattice(int n) -> lattice
{
    if (n < 2)
        throw contract_error("diamond_lattice: need at least 2 elements");
    poset p(n);
    for (int a = 0; a < n; ++a) {
        p.set_leq(0, a);
        p.set_leq(a, n - 1);
    }
    auto res = is_lattice(p);
    return *res.lat;
}

// the two lattice orders on {0,1}: 0 below 1, or 1 below 0
inline auto boolean_chain(bool flipped) -> lattice
{
    poset p(2);
    if (flipped)
        p.set_leq(1, 0);
    else
        p.set_leq(0, 1);
    auto res = is_lattice(p);
    return *res.lat;
}

// the interval [low, high] as a sublattice, with the kept values reported
struct sublattice {
    lattice lat;
    std::vector<int> new_to_old;
};

inline auto interval_sublattice(const lattice & l, int low, int high) -> sublattice
{
    if (! l.leq(low, high))
        throw contract_error("interval_sublattice: endpoints not ordered");
    std::vector<int> keep;
    std::vector<int> old_to_new(l.size(), -1);
    for (int x = 0; x < l.size(); ++x)
        if (l.leq(low, x) && l.leq(x, high)) {
            old_to_new[x] = static_cast<int>(keep.size());
            keep.push_back(x);
        }
    const int m = static_cast<int>(keep.size());
    poset p(m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (l.leq(keep[a], keep[b]))
                p.set_leq(a, b);
    std::vector<int> meet(static_cast<std::size_t>(m) * m), join(meet.size());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            int mm = l.meet(keep[a], keep[b]);
            int jj = l.join(keep[a], keep[b]);
            // an interval is closed under meet and join
            if (old_to_new[mm] < 0 || old_to_new[jj] < 0)
                throw contract_error("interval_sublattice: interval not closed (impossible)");
            meet[static_cast<std::size_t>(a) * m + b] = old_to_new[mm];
            join[static_cast<std::size_t>(a) * m + b] = old_to_new[jj];
        }
    lattice sub(p, std::move(meet), std::move(join));
    validate_lattice(sub);
    return {std::move(sub), std::move(keep)};
}

}
