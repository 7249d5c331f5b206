#pragma once

#include <string_view>

#include "frontend/ast.hpp"

namespace quipmc::frontend {

/// Parses a `.qpe` source text into a structurally valid Program. The gate
/// table is pre-populated with the built-in library; user matrices are
/// checked for unitarity (tolerance 1e-10) at parse time.
Program parse_program(std::string_view source);

}  // namespace quipmc::frontend
