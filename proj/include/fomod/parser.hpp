#pragma once

#include <optional>
#include <string>

#include "fomod/formula.hpp"

namespace fomod {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(std::string msg, int line_, int col_)
      : std::runtime_error(std::move(msg)), line(line_), col(col_) {}
};

struct ParseResult {
  FormulaPtr formula;
  Signature sig;
};

// Parses a sentence or open formula. The signature is inferred from the
// text (predicates in first-occurrence order); a hint fixes the predicate
// order and navigational kind instead, and parsing fails if the text does
// not fit it.
ParseResult parse_formula(const std::string& text,
                          const std::optional<Signature>& hint = std::nullopt);

}  // namespace fomod
