#pragma once

#include <string>

#include "ucutlass/ast.hpp"

namespace ucutlass {

// Parses one DSL program (a kernel expression or a pipeline).
// Throws LexError/ParseError with spans on malformed input; ParseError carries
// the expected-token description where one is known.
DslProgram parse(const std::string& source);

}  // namespace ucutlass
