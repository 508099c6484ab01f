#pragma once

#include "ncpn/forms.hpp"

#include <variant>

namespace ncpn {

struct ParseError : Error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_),
          col(col_) {}
};

// Result of parsing an expression: a path polynomial, a necklace class, or a
// de Rham class, depending on whether @-symbols or differentials occur.
using ParsedValue = std::variant<PathPoly, PolyVector, DRForm>;

struct ParseResult {
    ParsedValue value;
    std::vector<std::string> warnings; // e.g. incomposable products collapsing to 0
};

// Expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := rational? factor*
//   factor := atom | '@' atom | 'd' atom | 'd' '(' expr ')'
//           | '(' expr ')' | '[' expr ',' expr ']'
//   atom   := NAME '^'?                  (arrow, dual arrow, or vertex)
// Juxtaposition multiplies; '[x,y]' is the ordinary commutator.
ParseResult parse_expression(const std::string& src, const Quiver& q);

// `quiver NAME { vertex v; arrow a: v -> w; ... }`
Quiver parse_quiver_file(const std::string& text);

// canonical printing, inverse to the parser
std::string print_value(const ParsedValue& v, const Quiver& q);

} // namespace ncpn
