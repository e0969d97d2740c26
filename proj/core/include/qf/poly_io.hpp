#pragma once

#include <stdexcept>
#include <string>

#include "qf/poly.hpp"

namespace qf {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Canonical text form: terms in descending lexicographic order joined with
// " + " / " - ", coefficients of +-1 folded into the sign, mixed complex
// coefficients parenthesized. Variables are z1..zN and Z1..ZN (conjugates),
// exponents written with ^ only when above 1.
std::string to_string(const Poly& p);

// Grammar: expr := ['+'|'-'] term (('+'|'-') term)*
//          term := factor (['*'] factor)*
//          factor := primary ['^' uint]
//          primary := rational | 'i' | variable | '(' expr ')'
// Implicit multiplication is allowed ("2z1Z2"). Throws ParseError with
// 1-based line/column on malformed input or variable index out of range.
Poly parse_poly(const std::string& text, int n_vars);

}  // namespace qf
