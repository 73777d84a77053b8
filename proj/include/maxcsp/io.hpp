#pragma once

#include <maxcsp/classify.hpp>
#include <maxcsp/expander.hpp>
#include <maxcsp/lattice.hpp>
#include <maxcsp/ppformula.hpp>
#include <maxcsp/solver.hpp>
#include <maxcsp/strict.hpp>

#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Line-oriented text formats. Every block starts with a header line
//   # <kind> key=value ...
// followed by data lines; blank lines are ignored, and a block ends at the
// next '#' line or end of input. Serializers are canonical (single spaces,
// ascending tuple order, trailing newline) so equal values produce identical
// bytes.

namespace maxcsp {

using relation_resolver =
    std::function<relation(const std::string & name, const std::string & path)>;

namespace io_detail {

    struct token {
        int column = 0; // 1-based
        std::string text;
    };

    inline auto tokenize(const std::string & line) -> std::vector<token>
    {
        std::vector<token> out;
        std::size_t i = 0;
        while (i < line.size()) {
            if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
                ++i;
            out.push_back(token{static_cast<int>(start) + 1, line.substr(start, i - start)});
        }
        return out;
    }

    struct cursor {
        std::string file;
        std::vector<std::string> lines;
        int pos = 0;

        cursor(const std::string & text, std::string name) : file(std::move(name))
        {
            std::string cur;
            for (char c : text) {
                if (c == '\n') {
                    lines.push_back(cur);
                    cur.clear();
                }
                else
                    cur.push_back(c);
            }
            if (! cur.empty())
                lines.push_back(cur);
        }

        [[nodiscard]] auto eof() const -> bool { return pos >= static_cast<int>(lines.size()); }
        [[nodiscard]] auto line_number() const -> int { return pos + 1; }
        [[nodiscard]] auto peek() const -> const std::string & { return lines[pos]; }

        void skip_blank()
        {
            while (! eof() && tokenize(lines[pos]).empty())
                ++pos;
        }

        [[noreturn]] void fail(int column, const std::string & what) const
        {
            throw parse_error(file, std::min(line_number(),
                static_cast<int>(lines.size())), column, what);
        }

        // next non-blank line as tokens, consuming it
        auto next_tokens() -> std::vector<token>
        {
            skip_blank();
            if (eof())
                fail(1, "unexpected end of input");
            auto t = tokenize(lines[pos]);
            ++pos;
            return t;
        }

        // peek the next non-blank line without consuming
        auto peek_tokens() -> std::vector<token>
        {
            skip_blank();
            if (eof())
                return {};
            return tokenize(lines[pos]);
        }
    };

    inline auto parse_int(const cursor & cur, const token & t) -> int
    {
        std::size_t i = 0;
        if (! t.text.empty() && t.text[0] == '-')
            i = 1;
        if (i == t.text.size())
            cur.fail(t.column, "expected an integer, got '" + t.text + "'");
        long long v = 0;
        bool neg = i == 1;
        for (; i < t.text.size(); ++i) {
            if (t.text[i] < '0' || t.text[i] > '9')
                cur.fail(t.column, "expected an integer, got '" + t.text + "'");
            v = v * 10 + (t.text[i] - '0');
            if (v > 1'000'000'000)
                cur.fail(t.column, "integer out of range: '" + t.text + "'");
        }
        return static_cast<int>(neg ? -v : v);
    }

    struct header {
        std::string kind;
        std::vector<std::pair<std::string, token>> fields;
        int line = 0;
    };

    inline auto parse_header(cursor & cur) -> header
    {
        cur.skip_blank();
        if (cur.eof())
            cur.fail(1, "expected a '#' block header");
        header h;
        h.line = cur.line_number();
        auto toks = cur.next_tokens();
        if (toks.empty() || toks[0].text != "#")
            throw parse_error(cur.file, h.line, toks.empty() ? 1 : toks[0].column,
                "expected a '#' block header");
        if (toks.size() < 2)
            throw parse_error(cur.file, h.line, toks[0].column + 1,
                "block header is missing its kind");
        h.kind = toks[1].text;
        for (std::size_t i = 2; i < toks.size(); ++i) {
            auto eq = toks[i].text.find('=');
            if (eq == std::string::npos || eq == 0)
                throw parse_error(cur.file, h.line, toks[i].column,
                    "expected key=value, got '" + toks[i].text + "'");
            token val;
            val.column = toks[i].column + static_cast<int>(eq) + 1;
            val.text = toks[i].text.substr(eq + 1);
            h.fields.emplace_back(toks[i].text.substr(0, eq), val);
        }
        return h;
    }

    inline auto field(const cursor & cur, const header & h, const std::string & key) -> token
    {
        for (auto & [k, v] : h.fields)
            if (k == key)
                return v;
        throw parse_error(cur.file, h.line, 1,
            "block header '" + h.kind + "' is missing the " + key + "= field");
    }

    inline auto int_field(const cursor & cur, const header & h, const std::string & key) -> int
    {
        return parse_int(cur, field(cur, h, key));
    }

    [[nodiscard]] inline auto at_header(cursor & cur) -> bool
    {
        auto toks = cur.peek_tokens();
        return ! toks.empty() && toks[0].text == "#";
    }

    // data rows are all-integer lines; a keyword line ends the surrounding
    // block (e.g. the summands after a strict implementation's language)
    [[nodiscard]] inline auto at_keyword(cursor & cur) -> bool
    {
        auto toks = cur.peek_tokens();
        if (toks.empty() || toks[0].text == "#")
            return false;
        char c = toks[0].text[0];
        return ! ((c >= '0' && c <= '9') || c == '-');
    }

    inline auto join(const std::vector<int> & v) -> std::string
    {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                out += ' ';
            out += std::to_string(v[i]);
        }
        return out;
    }

}

// ---------------------------------------------------------------------------
// relations

inline auto serialize_relation(const relation & r, const std::string & name = "r")
    -> std::string
{
    if (r.arity() < 1)
        throw contract_error("serialize_relation: nullary relations have no text form");
    std::string out = "# relation name=" + name + " d=" + std::to_string(r.domain_size()) +
        " arity=" + std::to_string(r.arity()) + "\n";
    for (auto & t : r.tuples())
        out += io_detail::join(t) + "\n";
    return out;
}

namespace io_detail {

    inline auto read_relation_block(cursor & cur) -> std::pair<std::string, relation>
    {
        auto h = parse_header(cur);
        if (h.kind != "relation")
            throw parse_error(cur.file, h.line, 1, "expected a relation block, got '" +
                h.kind + "'");
        std::string name = field(cur, h, "name").text;
        int d = int_field(cur, h, "d");
        int arity = int_field(cur, h, "arity");
        if (d < 1)
            throw parse_error(cur.file, h.line, 1, "domain size must be at least 1");
        if (arity < 1)
            throw parse_error(cur.file, h.line, 1, "arity must be at least 1");
        relation r(d, arity);
        std::int64_t last = -1;
        while (! cur.eof() && ! at_header(cur) && ! at_keyword(cur)) {
            int line = cur.line_number();
            auto toks = cur.next_tokens();
            if (static_cast<int>(toks.size()) != arity)
                throw parse_error(cur.file, line, toks.front().column,
                    "expected " + std::to_string(arity) + " values, got " +
                    std::to_string(toks.size()));
            std::vector<int> t(arity);
            for (int i = 0; i < arity; ++i) {
                t[i] = parse_int(cur, toks[i]);
                if (t[i] < 0 || t[i] >= d)
                    throw parse_error(cur.file, line, toks[i].column,
                        "value " + std::to_string(t[i]) + " outside domain 0.." +
                        std::to_string(d - 1));
            }
            auto idx = static_cast<std::int64_t>(r.encode(t));
            if (idx <= last)
                throw parse_error(cur.file, line, toks.front().column,
                    "tuples must be listed in strictly ascending order");
            last = idx;
            r.add(t);
        }
        return {name, r};
    }

}

inline auto parse_relation(const std::string & text, const std::string & file = "<input>")
    -> std::pair<std::string, relation>
{
    io_detail::cursor cur(text, file);
    auto out = io_detail::read_relation_block(cur);
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the relation block");
    return out;
}

// ---------------------------------------------------------------------------
// operations

inline auto serialize_operation(const operation & f, const std::string & name = "f")
    -> std::string
{
    std::string out = "# operation name=" + name + " d=" + std::to_string(f.domain_size()) +
        " arity=" + std::to_string(f.arity()) + "\n";
    relation shape(f.domain_size(), f.arity()); // borrow the tuple codec
    for (std::uint64_t idx = 0; idx < f.table_size(); ++idx) {
        auto args = shape.decode(idx);
        args.push_back(f.at(idx));
        out += io_detail::join(args) + "\n";
    }
    return out;
}

inline auto parse_operation(const std::string & text, const std::string & file = "<input>")
    -> std::pair<std::string, operation>
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    if (h.kind != "operation")
        throw parse_error(file, h.line, 1, "expected an operation block, got '" + h.kind + "'");
    std::string name = io_detail::field(cur, h, "name").text;
    int d = io_detail::int_field(cur, h, "d");
    int arity = io_detail::int_field(cur, h, "arity");
    if (d < 1 || arity < 1)
        throw parse_error(file, h.line, 1, "operation needs d >= 1 and arity >= 1");
    operation f(d, arity);
    relation shape(d, arity);
    for (std::uint64_t idx = 0; idx < f.table_size(); ++idx) {
        cur.skip_blank();
        if (cur.eof())
            cur.fail(1, "operation table ended early: expected " +
                std::to_string(f.table_size()) + " rows");
        int line = cur.line_number();
        auto toks = cur.next_tokens();
        if (static_cast<int>(toks.size()) != arity + 1)
            throw parse_error(file, line, toks.front().column,
                "expected " + std::to_string(arity) + " arguments and a value");
        std::vector<int> args(arity);
        for (int i = 0; i < arity; ++i)
            args[i] = io_detail::parse_int(cur, toks[i]);
        auto want = shape.decode(idx);
        if (args != want)
            throw parse_error(file, line, toks.front().column,
                "rows must walk the argument tuples in ascending order; expected '" +
                io_detail::join(want) + "'");
        int v = io_detail::parse_int(cur, toks[arity]);
        if (v < 0 || v >= d)
            throw parse_error(file, line, toks[arity].column,
                "value " + std::to_string(v) + " outside domain 0.." + std::to_string(d - 1));
        f.set(idx, v);
    }
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the operation table");
    return {name, f};
}

// ---------------------------------------------------------------------------
// languages

inline auto serialize_language(const language & lang) -> std::string
{
    std::string out = "# language d=" + std::to_string(lang.domain_size()) +
        " size=" + std::to_string(lang.size()) + "\n";
    for (int i = 0; i < lang.size(); ++i)
        out += serialize_relation(lang.at(i), lang.name(i));
    return out;
}

namespace io_detail {

    inline auto read_language_block(cursor & cur) -> language
    {
        auto h = parse_header(cur);
        if (h.kind != "language")
            throw parse_error(cur.file, h.line, 1, "expected a language block, got '" +
                h.kind + "'");
        int d = int_field(cur, h, "d");
        int size = int_field(cur, h, "size");
        if (d < 1 || size < 0)
            throw parse_error(cur.file, h.line, 1, "language needs d >= 1 and size >= 0");
        language lang(d);
        for (int i = 0; i < size; ++i) {
            int line = cur.line_number();
            auto [name, r] = read_relation_block(cur);
            if (r.domain_size() != d)
                throw parse_error(cur.file, line, 1, "relation '" + name +
                    "' has domain size " + std::to_string(r.domain_size()) +
                    ", language expects " + std::to_string(d));
            if (lang.find(name) >= 0)
                throw parse_error(cur.file, line, 1, "duplicate relation name '" + name + "'");
            lang.add(name, r);
        }
        return lang;
    }

}

inline auto parse_language(const std::string & text, const std::string & file = "<input>")
    -> language
{
    io_detail::cursor cur(text, file);
    auto lang = io_detail::read_language_block(cur);
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the language block");
    return lang;
}

// ---------------------------------------------------------------------------
// instances. Relation blocks may precede the instance header; `uses` lines
// bind them (or externally resolved ones) into the instance language in
// order, then `constraint` lines reference them by name.

inline auto serialize_instance(const instance & inst) -> std::string
{
    std::string out;
    for (int i = 0; i < inst.lang().size(); ++i)
        out += serialize_relation(inst.lang().at(i), inst.lang().name(i));
    out += "# instance d=" + std::to_string(inst.domain_size()) +
        " vars=" + std::to_string(inst.num_vars()) + "\n";
    for (int i = 0; i < inst.lang().size(); ++i)
        out += "uses " + inst.lang().name(i) + "\n";
    for (auto & c : inst.constraints())
        out += "constraint " + inst.lang().name(c.rel) + " " + io_detail::join(c.scope) + "\n";
    return out;
}

inline auto parse_instance(const std::string & text, const relation_resolver & resolver = {},
    const std::string & file = "<input>") -> instance
{
    io_detail::cursor cur(text, file);

    std::vector<std::pair<std::string, relation>> local;
    while (true) {
        auto toks = cur.peek_tokens();
        if (toks.empty())
            cur.fail(1, "expected an instance block");
        if (toks[0].text != "#")
            cur.fail(toks[0].column, "expected a block header before data lines");
        if (toks.size() >= 2 && toks[1].text == "relation") {
            int line = cur.line_number();
            auto named = io_detail::read_relation_block(cur);
            for (auto & [n, r] : local)
                if (n == named.first)
                    throw parse_error(file, line, 1,
                        "duplicate relation name '" + named.first + "'");
            local.push_back(named);
            continue;
        }
        break;
    }

    auto h = io_detail::parse_header(cur);
    if (h.kind != "instance")
        throw parse_error(file, h.line, 1, "expected an instance block, got '" + h.kind + "'");
    int d = io_detail::int_field(cur, h, "d");
    int vars = io_detail::int_field(cur, h, "vars");
    if (d < 1 || vars < 0)
        throw parse_error(file, h.line, 1, "instance needs d >= 1 and vars >= 0");

    language lang(d);
    bool saw_constraint = false;
    std::vector<std::pair<std::string, std::vector<int>>> raw;
    while (! cur.eof() && ! io_detail::at_header(cur)) {
        int line = cur.line_number();
        auto toks = cur.next_tokens();
        if (toks[0].text == "uses") {
            if (saw_constraint)
                throw parse_error(file, line, toks[0].column,
                    "'uses' lines must precede all constraints");
            if (toks.size() != 2 && toks.size() != 3)
                throw parse_error(file, line, toks[0].column,
                    "expected 'uses <name> [path]'");
            const std::string & name = toks[1].text;
            if (lang.find(name) >= 0)
                throw parse_error(file, line, toks[1].column,
                    "relation '" + name + "' is already in the language");
            const relation * found = nullptr;
            for (auto & [n, r] : local)
                if (n == name)
                    found = &r;
            relation r;
            if (found)
                r = *found;
            else if (resolver)
                r = resolver(name, toks.size() == 3 ? toks[2].text : std::string());
            else
                throw parse_error(file, line, toks[1].column,
                    "relation '" + name + "' is not defined in this file and no resolver "
                    "was given");
            if (r.domain_size() != d)
                throw parse_error(file, line, toks[1].column,
                    "relation '" + name + "' has domain size " +
                    std::to_string(r.domain_size()) + ", instance expects " +
                    std::to_string(d));
            lang.add(name, r);
        }
        else if (toks[0].text == "constraint") {
            saw_constraint = true;
            if (toks.size() < 2)
                throw parse_error(file, line, toks[0].column,
                    "expected 'constraint <name> <vars...>'");
            int ri = lang.find(toks[1].text);
            if (ri < 0)
                throw parse_error(file, line, toks[1].column,
                    "constraint uses unknown relation '" + toks[1].text + "'");
            int arity = lang.at(ri).arity();
            if (static_cast<int>(toks.size()) != 2 + arity)
                throw parse_error(file, line, toks[0].column,
                    "relation '" + toks[1].text + "' needs " + std::to_string(arity) +
                    " variables, got " + std::to_string(toks.size() - 2));
            std::vector<int> scope(arity);
            for (int i = 0; i < arity; ++i) {
                scope[i] = io_detail::parse_int(cur, toks[2 + i]);
                if (scope[i] < 0 || scope[i] >= vars)
                    throw parse_error(file, line, toks[2 + i].column,
                        "variable " + std::to_string(scope[i]) + " outside 0.." +
                        std::to_string(vars - 1));
            }
            raw.emplace_back(toks[1].text, std::move(scope));
        }
        else
            throw parse_error(file, line, toks[0].column,
                "expected a 'uses' or 'constraint' line, got '" + toks[0].text + "'");
    }
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the instance block");

    instance inst(lang, vars);
    for (auto & [name, scope] : raw)
        inst.add_constraint(name, scope);
    return inst;
}

// ---------------------------------------------------------------------------
// posets and lattices

inline auto serialize_poset(const poset & p) -> std::string
{
    std::string out = "# poset d=" + std::to_string(p.size()) + "\n";
    for (int a = 0; a < p.size(); ++a) {
        std::vector<int> row(p.size());
        for (int b = 0; b < p.size(); ++b)
            row[b] = p.leq(a, b) ? 1 : 0;
        out += io_detail::join(row) + "\n";
    }
    return out;
}

namespace io_detail {

    inline auto read_matrix(cursor & cur, int rows, int cols, const char * what)
        -> std::vector<std::vector<int>>
    {
        std::vector<std::vector<int>> m;
        for (int a = 0; a < rows; ++a) {
            cur.skip_blank();
            if (cur.eof())
                cur.fail(1, std::string(what) + " table ended early");
            int line = cur.line_number();
            auto toks = cur.next_tokens();
            if (static_cast<int>(toks.size()) != cols)
                throw parse_error(cur.file, line, toks.front().column,
                    "expected " + std::to_string(cols) + " entries, got " +
                    std::to_string(toks.size()));
            std::vector<int> row(cols);
            for (int b = 0; b < cols; ++b)
                row[b] = parse_int(cur, toks[b]);
            m.push_back(std::move(row));
        }
        return m;
    }

}

inline auto parse_poset(const std::string & text, const std::string & file = "<input>")
    -> poset
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    if (h.kind != "poset")
        throw parse_error(file, h.line, 1, "expected a poset block, got '" + h.kind + "'");
    int d = io_detail::int_field(cur, h, "d");
    if (d < 1)
        throw parse_error(file, h.line, 1, "poset needs d >= 1");
    auto m = io_detail::read_matrix(cur, d, d, "order");
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the poset block");
    poset p(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (m[a][b] != 0 && m[a][b] != 1)
                throw parse_error(file, h.line, 1, "order entries must be 0 or 1");
            if (m[a][b])
                p.set_leq(a, b);
            else if (a == b)
                throw parse_error(file, h.line, 1, "order must be reflexive");
        }
    auto chk = validate_poset(p);
    if (! chk.ok)
        throw parse_error(file, h.line, 1, "not a partial order: " + chk.reason);
    return p;
}

inline auto serialize_lattice(const lattice & l) -> std::string
{
    std::string out = "# lattice d=" + std::to_string(l.size()) + "\n";
    for (int a = 0; a < l.size(); ++a) {
        std::vector<int> row(l.size());
        for (int b = 0; b < l.size(); ++b)
            row[b] = l.meet(a, b);
        out += io_detail::join(row) + "\n";
    }
    for (int a = 0; a < l.size(); ++a) {
        std::vector<int> row(l.size());
        for (int b = 0; b < l.size(); ++b)
            row[b] = l.join(a, b);
        out += io_detail::join(row) + "\n";
    }
    return out;
}

inline auto parse_lattice(const std::string & text, const std::string & file = "<input>")
    -> lattice
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    if (h.kind != "lattice")
        throw parse_error(file, h.line, 1, "expected a lattice block, got '" + h.kind + "'");
    int d = io_detail::int_field(cur, h, "d");
    if (d < 1)
        throw parse_error(file, h.line, 1, "lattice needs d >= 1");
    auto meet = io_detail::read_matrix(cur, d, d, "meet");
    auto join = io_detail::read_matrix(cur, d, d, "join");
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the lattice block");
    for (auto * m : {&meet, &join})
        for (auto & row : *m)
            for (int v : row)
                if (v < 0 || v >= d)
                    throw parse_error(file, h.line, 1,
                        "table entry " + std::to_string(v) + " outside domain");
    // rebuild the order from the meet table, then let the validator check
    // every axiom
    poset p(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (meet[a][b] == a)
                p.set_leq(a, b);
    auto chk = validate_poset(p);
    if (! chk.ok)
        throw parse_error(file, h.line, 1, "meet table induces no partial order: " +
            chk.reason);
    std::vector<int> meet_flat, join_flat;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            meet_flat.push_back(meet[a][b]);
            join_flat.push_back(join[a][b]);
        }
    lattice l(p, meet_flat, join_flat);
    try {
        validate_lattice(l);
    }
    catch (const contract_error & e) {
        throw parse_error(file, h.line, 1, std::string("not a lattice: ") + e.what());
    }
    return l;
}

// ---------------------------------------------------------------------------
// expanders

inline auto serialize_expander(const expander & g) -> std::string
{
    std::string out = "# expander m=" + std::to_string(g.vertices) +
        " degree=" + std::to_string(g.degree) + "\n";
    for (auto & e : g.edges)
        out += std::to_string(e.first) + " " + std::to_string(e.second) + "\n";
    return out;
}

inline auto parse_expander(const std::string & text, const std::string & file = "<input>")
    -> expander
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    if (h.kind != "expander")
        throw parse_error(file, h.line, 1, "expected an expander block, got '" + h.kind + "'");
    expander g;
    g.vertices = io_detail::int_field(cur, h, "m");
    g.degree = io_detail::int_field(cur, h, "degree");
    if (g.vertices < 1)
        throw parse_error(file, h.line, 1, "expander needs m >= 1");
    while (! cur.eof() && ! io_detail::at_header(cur)) {
        int line = cur.line_number();
        auto toks = cur.next_tokens();
        if (toks.size() != 2)
            throw parse_error(file, line, toks.front().column, "expected an edge 'a b'");
        int a = io_detail::parse_int(cur, toks[0]);
        int b = io_detail::parse_int(cur, toks[1]);
        for (int v : {a, b})
            if (v < 0 || v >= g.vertices)
                throw parse_error(file, line, toks.front().column,
                    "vertex " + std::to_string(v) + " outside 0.." +
                    std::to_string(g.vertices - 1));
        g.edges.emplace_back(a, b);
    }
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the expander block");
    return g;
}

// ---------------------------------------------------------------------------
// primitive-positive formulas. Variables are 0-based: the free block first,
// the existential block after it.

inline auto serialize_pp(const pp_formula & f) -> std::string
{
    std::string out = "# pp p=" + std::to_string(f.free_count) +
        " q=" + std::to_string(f.exist_count) + "\n";
    for (auto & a : f.atoms)
        out += "atom " + a.rel + " " + io_detail::join(a.scope) + "\n";
    return out;
}

inline auto parse_pp(const std::string & text, const std::string & file = "<input>")
    -> pp_formula
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    if (h.kind != "pp")
        throw parse_error(file, h.line, 1, "expected a pp block, got '" + h.kind + "'");
    pp_formula f;
    f.free_count = io_detail::int_field(cur, h, "p");
    f.exist_count = io_detail::int_field(cur, h, "q");
    if (f.free_count < 0 || f.exist_count < 0)
        throw parse_error(file, h.line, 1, "pp needs p >= 0 and q >= 0");
    while (! cur.eof() && ! io_detail::at_header(cur)) {
        int line = cur.line_number();
        auto toks = cur.next_tokens();
        if (toks[0].text != "atom" || toks.size() < 2)
            throw parse_error(file, line, toks[0].column,
                "expected 'atom <rel> <vars...>'");
        pp_atom a;
        a.rel = toks[1].text;
        for (std::size_t i = 2; i < toks.size(); ++i) {
            int v = io_detail::parse_int(cur, toks[i]);
            if (v < 0 || v >= f.var_count())
                throw parse_error(file, line, toks[i].column,
                    "variable " + std::to_string(v) + " outside 0.." +
                    std::to_string(f.var_count() - 1));
            a.scope.push_back(v);
        }
        f.atoms.push_back(std::move(a));
    }
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the pp block");
    return f;
}

// ---------------------------------------------------------------------------
// strict implementations: header, target relation block, implementation
// language block, then the summands over variables 0..p+q-1.

inline auto serialize_strict(const strict_implementation & imp) -> std::string
{
    std::string out = "# strict alpha=" + std::to_string(imp.alpha) +
        " p=" + std::to_string(imp.primary_arity) + " q=" + std::to_string(imp.aux_arity) +
        " d=" + std::to_string(imp.lang.domain_size()) + "\n";
    out += serialize_relation(imp.target, "target");
    out += serialize_language(imp.lang);
    for (auto & s : imp.summands)
        out += "summand " + s.rel + " " + io_detail::join(s.scope) + "\n";
    return out;
}

inline auto parse_strict(const std::string & text, const std::string & file = "<input>")
    -> strict_implementation
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    if (h.kind != "strict")
        throw parse_error(file, h.line, 1, "expected a strict block, got '" + h.kind + "'");
    strict_implementation imp;
    imp.alpha = io_detail::int_field(cur, h, "alpha");
    imp.primary_arity = io_detail::int_field(cur, h, "p");
    imp.aux_arity = io_detail::int_field(cur, h, "q");
    int d = io_detail::int_field(cur, h, "d");

    auto [tname, target] = io_detail::read_relation_block(cur);
    imp.target = target;
    imp.lang = io_detail::read_language_block(cur);
    if (imp.lang.domain_size() != d || imp.target.domain_size() != d)
        throw parse_error(file, h.line, 1, "domain sizes of target, language and header "
            "disagree");
    if (imp.target.arity() != imp.primary_arity)
        throw parse_error(file, h.line, 1, "target arity does not match p");

    while (! cur.eof() && ! io_detail::at_header(cur)) {
        int line = cur.line_number();
        auto toks = cur.next_tokens();
        if (toks[0].text != "summand" || toks.size() < 2)
            throw parse_error(file, line, toks[0].column,
                "expected 'summand <rel> <vars...>'");
        int ri = imp.lang.find(toks[1].text);
        if (ri < 0)
            throw parse_error(file, line, toks[1].column,
                "summand uses unknown relation '" + toks[1].text + "'");
        strict_summand s;
        s.rel = toks[1].text;
        int arity = imp.lang.at(ri).arity();
        if (static_cast<int>(toks.size()) != 2 + arity)
            throw parse_error(file, line, toks[0].column,
                "relation '" + toks[1].text + "' needs " + std::to_string(arity) +
                " variables, got " + std::to_string(toks.size() - 2));
        for (int i = 0; i < arity; ++i) {
            int v = io_detail::parse_int(cur, toks[2 + i]);
            if (v < 0 || v >= imp.var_count())
                throw parse_error(file, line, toks[2 + i].column,
                    "variable " + std::to_string(v) + " outside 0.." +
                    std::to_string(imp.var_count() - 1));
            s.scope.push_back(v);
        }
        imp.summands.push_back(std::move(s));
    }
    cur.skip_blank();
    if (! cur.eof())
        cur.fail(1, "trailing content after the strict block");
    return imp;
}

// ---------------------------------------------------------------------------
// write-only reports

inline auto serialize_solve(const solve_result & res) -> std::string
{
    std::string out = "# solve method=" + to_string(res.method) + "\n";
    out += "satisfied " + std::to_string(res.opt.satisfied) + " of " +
        std::to_string(res.opt.total) + "\n";
    out += "fraction " + res.opt.frac().str() + "\n";
    out += "optimal " + std::string(res.proof_of_optimality ? "yes" : "no") + "\n";
    if (res.method == solve_method::approx_condexp) {
        out += "expected " + res.expected.str() + "\n";
        out += "guarantee " + res.guarantee.str() + "\n";
    }
    out += "assignment " + io_detail::join(res.best) + "\n";
    return out;
}

inline auto serialize_reduction(const reduction_record & rec) -> std::string
{
    std::string out = "# reduction kind=" + to_string(rec.kind) + "\n";
    out += "description " + rec.description + "\n";
    for (auto & [k, v] : rec.bookkeeping)
        out += "book " + k + " " + v.str() + "\n";
    out += serialize_instance(rec.output);
    return out;
}

inline auto serialize_certificate(const certificate & cert) -> std::string
{
    std::string out = "# certificate\n";
    out += "verdict " + to_string(cert.result) + "\n";
    if (cert.wnuf_bound_searched > 0) {
        out += "wnuf-bound " + std::to_string(cert.wnuf_bound_searched) + "\n";
        if (! cert.wnuf_arities_searched.empty())
            out += "wnuf-arities " + io_detail::join(cert.wnuf_arities_searched) + "\n";
    }
    for (auto & d : cert.diagnostics)
        out += "diagnostic " + d + "\n";
    int i = 0;
    for (auto & st : cert.chain) {
        out += "step " + std::to_string(++i) + " " + st.rule + " verified=" +
            (st.verified ? "1" : "0") + "\n";
        out += "detail " + st.detail + "\n";
        if (! st.subset.empty())
            out += "subset " + io_detail::join(st.subset) + "\n";
        if (! st.mapping.empty())
            out += "mapping " + io_detail::join(st.mapping) + "\n";
        if (st.retract)
            out += "retraction " + io_detail::join(st.retract->map) + "\n";
        if (st.input.arity() >= 1)
            out += serialize_relation(st.input, "input");
        if (st.produced)
            out += serialize_relation(*st.produced, "produced");
        if (st.gadget)
            out += serialize_strict(*st.gadget);
    }
    if (cert.wnuf_witness)
        out += serialize_operation(*cert.wnuf_witness, "wnuf");
    if (cert.gap_demo) {
        out += "gap-demo attached\n";
        for (auto & [k, v] : cert.gap_demo->record.bookkeeping)
            out += "book " + k + " " + v.str() + "\n";
    }
    return out;
}

// First '#' header token of a document; lets the command line decide how to
// read a file.
inline auto sniff_kind(const std::string & text, const std::string & file = "<input>")
    -> std::string
{
    io_detail::cursor cur(text, file);
    auto h = io_detail::parse_header(cur);
    return h.kind;
}

}
