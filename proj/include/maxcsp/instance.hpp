#pragma once

#include <maxcsp/fraction.hpp>
#include <maxcsp/relation.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace maxcsp {

// One application of a relation to a scope of variables. Multiplicity is
// expressed by repeating the entry in the instance's constraint list, and
// every occurrence counts separately everywhere (a variable used s times in a
// constraint repeated t times occurs t*s times).
struct constraint {
    int rel = -1;               // index into the instance's language
    std::vector<int> scope;     // variable indices, length = relation arity

    friend auto operator==(const constraint & a, const constraint & b) -> bool
    {
        return a.rel == b.rel && a.scope == b.scope;
    }
};

using assignment = std::vector<int>;

struct measure_result {
    std::int64_t satisfied = 0;
    std::int64_t total = 0;

    [[nodiscard]] auto frac() const -> fraction
    {
        return total == 0 ? fraction(1) : fraction(satisfied, total);
    }
};

// A Max CSP instance: maximise the number of satisfied constraints over all
// assignments of the variables. The instance owns (a copy of) its language.
class instance {
public:
    instance() = default;

    instance(language lang, int num_vars) : lang_(std::move(lang)), num_vars_(num_vars)
    {
        if (num_vars < 0)
            throw contract_error("instance: negative variable count");
    }

    [[nodiscard]] auto lang() const -> const language & { return lang_; }
    [[nodiscard]] auto domain_size() const -> int { return lang_.domain_size(); }
    [[nodiscard]] auto num_vars() const -> int { return num_vars_; }
    [[nodiscard]] auto constraints() const -> const std::vector<constraint> & { return cons_; }
    [[nodiscard]] auto num_constraints() const -> std::int64_t
    {
        return static_cast<std::int64_t>(cons_.size());
    }

    void add_constraint(const std::string & rel_name, std::vector<int> scope)
    {
        int idx = lang_.find(rel_name);
        if (idx < 0)
            throw contract_error("instance: unknown relation '" + rel_name + "'");
        add_constraint(idx, std::move(scope));
    }

    void add_constraint(int rel_index, std::vector<int> scope)
    {
        const relation & r = lang_.at(rel_index);
        if (static_cast<int>(scope.size()) != r.arity())
            throw contract_error("instance: scope size " + std::to_string(scope.size()) +
                " does not match arity " + std::to_string(r.arity()) + " of '" +
                lang_.name(rel_index) + "'");
        for (int v : scope)
            if (v < 0 || v >= num_vars_)
                throw contract_error("instance: variable " + std::to_string(v) + " out of range");
        cons_.push_back(constraint{rel_index, std::move(scope)});
    }

    // Grow the variable set (used by reductions that add fresh variables).
    auto add_variable() -> int { return num_vars_++; }

    friend auto operator==(const instance & a, const instance & b) -> bool
    {
        return a.lang_ == b.lang_ && a.num_vars_ == b.num_vars_ && a.cons_ == b.cons_;
    }

private:
    language lang_;
    int num_vars_ = 0;
    std::vector<constraint> cons_;
};

inline auto satisfies(const instance & inst, const constraint & c, const assignment & s) -> bool
{
    const relation & r = inst.lang().at(c.rel);
    std::uint64_t idx = 0, mult = 1;
    for (std::size_t i = 0; i < c.scope.size(); ++i) {
        idx += static_cast<std::uint64_t>(s[c.scope[i]]) * mult;
        mult *= static_cast<std::uint64_t>(r.domain_size());
    }
    return r.contains_index(idx);
}

// Exact count of satisfied constraints under a total assignment.
inline auto measure(const instance & inst, const assignment & s) -> measure_result
{
    if (static_cast<int>(s.size()) != inst.num_vars())
        throw contract_error("measure: assignment length " + std::to_string(s.size()) +
            " does not match variable count " + std::to_string(inst.num_vars()));
    for (int v : s)
        if (v < 0 || v >= inst.domain_size())
            throw contract_error("measure: assignment value outside domain");
    measure_result m;
    m.total = inst.num_constraints();
    for (auto & c : inst.constraints())
        if (satisfies(inst, c, s))
            ++m.satisfied;
    return m;
}

// Occurrence count per variable under the t*s counting rule, and the maximum.
inline auto occurrence_counts(const instance & inst) -> std::vector<std::int64_t>
{
    std::vector<std::int64_t> occ(inst.num_vars(), 0);
    for (auto & c : inst.constraints())
        for (int v : c.scope)
            ++occ[v];
    return occ;
}

inline auto occurrence_bound(const instance & inst) -> std::int64_t
{
    std::int64_t best = 0;
    for (auto o : occurrence_counts(inst))
        best = std::max(best, o);
    return best;
}

}
