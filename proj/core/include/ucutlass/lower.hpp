#pragma once

#include "ucutlass/ast.hpp"
#include "ucutlass/config.hpp"

namespace ucutlass {

// Lowers a parsed program to the typed IR. Binding args are mapped to typed
// fields; documented defaults (dtypes, layouts, arch, stages, alignment) are
// materialized and recorded in defaulted_fields; all other optionals stay
// absent. Throws LowerError naming the offending binding/arg on unknown keys,
// wrong value types, out-of-enum values, or bindings inapplicable to the
// operator (e.g. with_iterator on gemm).
AnyConfig lower(const DslProgram& program);

}  // namespace ucutlass
