#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace maxcsp {

// Violated precondition: the input is outside the operation's contract.
// The CLI maps this to exit code 1.
struct contract_error : std::runtime_error {
    explicit contract_error(const std::string & what) : std::runtime_error(what) {}
};

// A search or evaluation space exceeded its configured budget. The operation
// refuses to guess; the CLI maps this to exit code 2.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string & what) : std::runtime_error(what) {}
};

// Malformed input file. Carries the 1-based position of the offending token.
struct parse_error : std::runtime_error {
    std::string file;
    int line = 0;
    int column = 0;

    parse_error(std::string f, int ln, int col, const std::string & what) :
        std::runtime_error(f + ":" + std::to_string(ln) + ":" + std::to_string(col) + ": " + what),
        file(std::move(f)),
        line(ln),
        column(col)
    {
    }
};

// Cap on explored candidates / enumerated assignments for the search and
// evaluation routines. The default is deliberately generous for desk scale.
inline constexpr std::uint64_t default_budget = std::uint64_t{1} << 28;

}
