#pragma once

#include <maxcsp/errors.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace maxcsp {

// How many cells a dense table may occupy before construction is refused.
// d^arity beyond this is no longer desk scale.
inline constexpr std::uint64_t max_table_cells = std::uint64_t{1} << 26;

namespace detail {
    // d^n with an explicit cap, so callers cannot silently wrap.
    inline auto checked_power(int d, int n, std::uint64_t cap, const char * who) -> std::uint64_t
    {
        std::uint64_t r = 1;
        for (int i = 0; i < n; ++i) {
            r *= static_cast<std::uint64_t>(d);
            if (r > cap)
                throw budget_error(std::string(who) + ": table of " + std::to_string(d) + "^" +
                    std::to_string(n) + " cells exceeds limit " + std::to_string(cap));
        }
        return r;
    }
}

// A finitary relation over the domain {0, ..., d-1}, stored as a dense boolean
// table. Tuples are encoded mixed-radix with the FIRST coordinate least
// significant: index(t) = sum_i t[i] * d^i. The encoding is part of the
// serialisation contract; listings and file output follow ascending index.
class relation {
public:
    relation() = default;

    relation(int domain_size, int arity) :
        d_(domain_size),
        arity_(arity),
        table_(detail::checked_power(domain_size, arity, max_table_cells, "relation"), 0)
    {
        if (domain_size < 1)
            throw contract_error("relation: domain size must be >= 1");
        if (arity < 0)
            throw contract_error("relation: negative arity");
    }

    static auto of_tuples(int domain_size, int arity, const std::vector<std::vector<int>> & tuples)
        -> relation
    {
        relation r(domain_size, arity);
        for (auto & t : tuples)
            r.add(t);
        return r;
    }

    [[nodiscard]] auto domain_size() const -> int { return d_; }
    [[nodiscard]] auto arity() const -> int { return arity_; }
    [[nodiscard]] auto table_size() const -> std::uint64_t { return table_.size(); }

    [[nodiscard]] auto encode(const std::vector<int> & t) const -> std::uint64_t
    {
        if (static_cast<int>(t.size()) != arity_)
            throw contract_error("relation: tuple length " + std::to_string(t.size()) +
                " does not match arity " + std::to_string(arity_));
        std::uint64_t idx = 0, mult = 1;
        for (int i = 0; i < arity_; ++i) {
            if (t[i] < 0 || t[i] >= d_)
                throw contract_error("relation: tuple value " + std::to_string(t[i]) +
                    " outside domain of size " + std::to_string(d_));
            idx += static_cast<std::uint64_t>(t[i]) * mult;
            mult *= static_cast<std::uint64_t>(d_);
        }
        return idx;
    }

    [[nodiscard]] auto decode(std::uint64_t idx) const -> std::vector<int>
    {
        std::vector<int> t(arity_);
        for (int i = 0; i < arity_; ++i) {
            t[i] = static_cast<int>(idx % d_);
            idx /= d_;
        }
        return t;
    }

    void add(const std::vector<int> & t) { table_[encode(t)] = 1; }
    void remove(const std::vector<int> & t) { table_[encode(t)] = 0; }

    [[nodiscard]] auto contains(const std::vector<int> & t) const -> bool
    {
        return table_[encode(t)] != 0;
    }

    [[nodiscard]] auto contains_index(std::uint64_t idx) const -> bool { return table_[idx] != 0; }
    void set_index(std::uint64_t idx, bool value) { table_[idx] = value ? 1 : 0; }

    [[nodiscard]] auto count() const -> std::uint64_t
    {
        std::uint64_t n = 0;
        for (char c : table_)
            n += static_cast<unsigned char>(c);
        return n;
    }

    [[nodiscard]] auto is_empty() const -> bool
    {
        return std::find(table_.begin(), table_.end(), char{1}) == table_.end();
    }

    // (e, e, ..., e) is a member.
    [[nodiscard]] auto is_d_valid(int e) const -> bool
    {
        return contains(std::vector<int>(arity_, e));
    }

    // Some constant tuple is a member, i.e. a constant assignment satisfies it.
    [[nodiscard]] auto is_valid() const -> bool
    {
        for (int e = 0; e < d_; ++e)
            if (is_d_valid(e))
                return true;
        return false;
    }

    // Members in ascending encoded order (the canonical listing order).
    [[nodiscard]] auto tuples() const -> std::vector<std::vector<int>>
    {
        std::vector<std::vector<int>> out;
        for (std::uint64_t idx = 0; idx < table_.size(); ++idx)
            if (table_[idx])
                out.push_back(decode(idx));
        return out;
    }

    friend auto operator==(const relation & a, const relation & b) -> bool
    {
        return a.d_ == b.d_ && a.arity_ == b.arity_ && a.table_ == b.table_;
    }

    friend auto operator!=(const relation & a, const relation & b) -> bool { return ! (a == b); }

    friend auto operator<(const relation & a, const relation & b) -> bool
    {
        return std::tie(a.d_, a.arity_, a.table_) < std::tie(b.d_, b.arity_, b.table_);
    }

private:
    int d_ = 1;
    int arity_ = 0;
    std::vector<char> table_ = std::vector<char>(1, 0);
};

// Equality on {0..d-1}, the relation that is implicitly available to every
// primitive positive formula.
inline auto equality_relation(int d) -> relation
{
    relation r(d, 2);
    for (int e = 0; e < d; ++e)
        r.add({e, e});
    return r;
}

// The unary constant relation {(e)}.
inline auto constant_relation(int d, int e) -> relation
{
    relation r(d, 1);
    r.add({e});
    return r;
}

// Restriction of R to a subset of the domain, with the subset relabelled
// densely: the i-th smallest member of `subset` becomes value i. Returns the
// restricted relation plus the relabelling (new value -> old value).
struct restriction {
    relation restricted;
    std::vector<int> new_to_old;
};

inline auto restrict_relation(const relation & r, std::vector<int> subset) -> restriction
{
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    if (subset.empty())
        throw contract_error("restrict_relation: empty domain subset");
    std::vector<int> old_to_new(r.domain_size(), -1);
    for (int i = 0; i < static_cast<int>(subset.size()); ++i) {
        if (subset[i] < 0 || subset[i] >= r.domain_size())
            throw contract_error("restrict_relation: subset value " + std::to_string(subset[i]) +
                " outside domain");
        old_to_new[subset[i]] = i;
    }
    relation out(static_cast<int>(subset.size()), r.arity());
    for (auto & t : r.tuples()) {
        std::vector<int> mapped(t.size());
        bool inside = true;
        for (std::size_t i = 0; i < t.size() && inside; ++i) {
            if (old_to_new[t[i]] < 0)
                inside = false;
            else
                mapped[i] = old_to_new[t[i]];
        }
        if (inside)
            out.add(mapped);
    }
    return restriction{std::move(out), std::move(subset)};
}

// Apply a unary map to every tuple componentwise: pi(R).
inline auto map_relation(const relation & r, const std::vector<int> & pi) -> relation
{
    if (static_cast<int>(pi.size()) != r.domain_size())
        throw contract_error("map_relation: map length does not match domain");
    relation out(r.domain_size(), r.arity());
    for (auto t : r.tuples()) {
        for (auto & v : t)
            v = pi[v];
        out.add(t);
    }
    return out;
}

// Do the two relations differ only by a domain bijection? Brute force over
// all d! bijections; intended for small domains (certificate re-checks).
inline auto isomorphic(const relation & a, const relation & b) -> bool
{
    if (a.domain_size() != b.domain_size() || a.arity() != b.arity())
        return false;
    std::vector<int> perm(a.domain_size());
    for (int i = 0; i < a.domain_size(); ++i)
        perm[i] = i;
    do {
        if (map_relation(a, perm) == b)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// A named list of relations over one shared domain. Insertion order is kept
// (it is the tie-break order for every search built on top).
class language {
public:
    language() = default;

    explicit language(int domain_size) : d_(domain_size)
    {
        if (domain_size < 1)
            throw contract_error("language: domain size must be >= 1");
    }

    [[nodiscard]] auto domain_size() const -> int { return d_; }

    auto add(const std::string & name, relation r) -> int
    {
        if (r.domain_size() != d_)
            throw contract_error("language: relation '" + name + "' has domain size " +
                std::to_string(r.domain_size()) + ", language has " + std::to_string(d_));
        if (index_.count(name))
            throw contract_error("language: duplicate relation name '" + name + "'");
        index_[name] = static_cast<int>(rels_.size());
        rels_.emplace_back(name, std::move(r));
        return static_cast<int>(rels_.size()) - 1;
    }

    [[nodiscard]] auto size() const -> int { return static_cast<int>(rels_.size()); }
    [[nodiscard]] auto name(int i) const -> const std::string & { return rels_.at(i).first; }
    [[nodiscard]] auto at(int i) const -> const relation & { return rels_.at(i).second; }

    [[nodiscard]] auto find(const std::string & name) const -> int
    {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    [[nodiscard]] auto at(const std::string & name) const -> const relation &
    {
        int i = find(name);
        if (i < 0)
            throw contract_error("language: no relation named '" + name + "'");
        return rels_[i].second;
    }

    friend auto operator==(const language & a, const language & b) -> bool
    {
        return a.d_ == b.d_ && a.rels_ == b.rels_;
    }

private:
    int d_ = 1;
    std::vector<std::pair<std::string, relation>> rels_;
    std::map<std::string, int> index_;
};

}
