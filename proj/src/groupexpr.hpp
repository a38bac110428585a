#pragma once

#include <string_view>

#include "groupspec.hpp"

namespace nilmult {

// Grammar:  expr   := factor (WS "*[" UINT "]" WS factor)*
//           factor := "Z" | "Z/" UINT(>=2)
// Left-associated. Throws ParseError carrying the byte offset of the
// offending token.
GroupSpec parse_group_expr(std::string_view text);

}  // namespace nilmult
