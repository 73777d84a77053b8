#pragma once

#include <maxcsp/relation.hpp>

#include <cstdint>
#include <vector>

namespace maxcsp {

// A finitary operation f : D^k -> D as a flat table, indexed exactly like
// relation tuples (first argument least significant).
class operation {
public:
    operation() = default;

    operation(int domain_size, int arity) :
        d_(domain_size),
        arity_(arity),
        table_(detail::checked_power(domain_size, arity, max_table_cells, "operation"), 0)
    {
        if (domain_size < 1)
            throw contract_error("operation: domain size must be >= 1");
        if (arity < 1)
            throw contract_error("operation: arity must be >= 1");
    }

    operation(int domain_size, int arity, std::vector<int> table) : operation(domain_size, arity)
    {
        if (table.size() != table_.size())
            throw contract_error("operation: table size " + std::to_string(table.size()) +
                ", expected " + std::to_string(table_.size()));
        for (int v : table)
            if (v < 0 || v >= domain_size)
                throw contract_error("operation: table value outside domain");
        table_ = std::move(table);
    }

    [[nodiscard]] auto domain_size() const -> int { return d_; }
    [[nodiscard]] auto arity() const -> int { return arity_; }
    [[nodiscard]] auto table() const -> const std::vector<int> & { return table_; }
    [[nodiscard]] auto table_size() const -> std::uint64_t { return table_.size(); }

    [[nodiscard]] auto encode(const std::vector<int> & args) const -> std::uint64_t
    {
        std::uint64_t idx = 0, mult = 1;
        for (int i = 0; i < arity_; ++i) {
            idx += static_cast<std::uint64_t>(args[i]) * mult;
            mult *= static_cast<std::uint64_t>(d_);
        }
        return idx;
    }

    [[nodiscard]] auto apply(const std::vector<int> & args) const -> int
    {
        if (static_cast<int>(args.size()) != arity_)
            throw contract_error("operation: argument count does not match arity");
        for (int v : args)
            if (v < 0 || v >= d_)
                throw contract_error("operation: argument outside domain");
        return table_[encode(args)];
    }

    [[nodiscard]] auto at(std::uint64_t idx) const -> int { return table_[idx]; }
    void set(std::uint64_t idx, int v) { table_[idx] = v; }

    // f(x, ..., x) = x for every x.
    [[nodiscard]] auto is_idempotent() const -> bool
    {
        std::vector<int> args(arity_);
        for (int x = 0; x < d_; ++x) {
            std::fill(args.begin(), args.end(), x);
            if (table_[encode(args)] != x)
                return false;
        }
        return true;
    }

    // f equals the projection onto some argument position.
    [[nodiscard]] auto is_projection() const -> bool
    {
        for (int pos = 0; pos < arity_; ++pos)
            if (*this == projection(d_, arity_, pos))
                return true;
        return false;
    }

    static auto projection(int domain_size, int arity, int pos) -> operation
    {
        operation f(domain_size, arity);
        std::uint64_t n = f.table_.size();
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            std::uint64_t v = idx;
            for (int i = 0; i < pos; ++i)
                v /= static_cast<std::uint64_t>(domain_size);
            f.table_[idx] = static_cast<int>(v % static_cast<std::uint64_t>(domain_size));
        }
        return f;
    }

    friend auto operator==(const operation & a, const operation & b) -> bool
    {
        return a.d_ == b.d_ && a.arity_ == b.arity_ && a.table_ == b.table_;
    }

    friend auto operator!=(const operation & a, const operation & b) -> bool { return ! (a == b); }

    friend auto operator<(const operation & a, const operation & b) -> bool
    {
        return std::tie(a.d_, a.arity_, a.table_) < std::tie(b.d_, b.arity_, b.table_);
    }

private:
    int d_ = 1;
    int arity_ = 1;
    std::vector<int> table_;
};

// Apply f componentwise to k tuples of equal length: row i of the result is
// f(rows[0][i], ..., rows[k-1][i]).
inline auto apply_componentwise(const operation & f, const std::vector<std::vector<int>> & rows)
    -> std::vector<int>
{
    if (static_cast<int>(rows.size()) != f.arity())
        throw contract_error("apply_componentwise: need exactly arity many tuples");
    std::size_t len = rows[0].size();
    for (auto & r : rows)
        if (r.size() != len)
            throw contract_error("apply_componentwise: tuples of unequal length");
    std::vector<int> out(len);
    std::vector<int> args(f.arity());
    for (std::size_t i = 0; i < len; ++i) {
        for (int j = 0; j < f.arity(); ++j)
            args[j] = rows[j][i];
        out[i] = f.apply(args);
    }
    return out;
}

// Does f preserve R? Every componentwise image of k members must again be a
// member. Early exit on the first failing combination.
inline auto is_polymorphism(const operation & f, const relation & r) -> bool
{
    if (f.domain_size() != r.domain_size())
        throw contract_error("is_polymorphism: domain size mismatch");
    auto tuples = r.tuples();
    std::uint64_t t = tuples.size();
    if (t == 0 || r.arity() == 0)
        return true;
    int k = f.arity();
    // Odometer over k choices of member tuples (with repetition).
    std::vector<std::uint64_t> pick(k, 0);
    std::vector<int> args(k);
    std::vector<int> image(r.arity());
    for (;;) {
        std::uint64_t idx = 0, mult = 1;
        for (int i = 0; i < r.arity(); ++i) {
            for (int j = 0; j < k; ++j)
                args[j] = tuples[pick[j]][i];
            image[i] = f.apply(args);
            idx += static_cast<std::uint64_t>(image[i]) * mult;
            mult *= static_cast<std::uint64_t>(r.domain_size());
        }
        if (! r.contains_index(idx))
            return false;
        int pos = 0;
        while (pos < k && ++pick[pos] == t) {
            pick[pos] = 0;
            ++pos;
        }
        if (pos == k)
            return true;
    }
}

inline auto is_polymorphism(const operation & f, const language & lang) -> bool
{
    for (int i = 0; i < lang.size(); ++i)
        if (! is_polymorphism(f, lang.at(i)))
            return false;
    return true;
}

// Weak near-unanimity: idempotent, and for every pair (x, y) all "one
// dissenter" patterns agree: f(x,y,...,y) = f(y,x,y,...,y) = ... = f(y,...,y,x).
inline auto is_wnuf(const operation & f) -> bool
{
    if (f.arity() < 2)
        throw contract_error("is_wnuf: arity must be >= 2");
    if (! f.is_idempotent())
        return false;
    int d = f.domain_size(), k = f.arity();
    std::vector<int> args(k);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
            if (x == y)
                continue;
            std::fill(args.begin(), args.end(), y);
            args[0] = x;
            int v = f.apply(args);
            for (int pos = 1; pos < k; ++pos) {
                std::fill(args.begin(), args.end(), y);
                args[pos] = x;
                if (f.apply(args) != v)
                    return false;
            }
        }
    return true;
}

}
