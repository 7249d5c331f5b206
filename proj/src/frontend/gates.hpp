#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontend/ast.hpp"

namespace quipmc::frontend {

/// The built-in gate library: X, Y, Z, H, S, T, CNOT, CZ, SWAP, Toffoli.
/// Multi-qubit gates take their control(s) first in the target list.
const std::vector<GateRef>& builtin_gates();

/// Resolves a surface name to a built-in gate name, accepting the aliases
/// used in the source dialect (hadamard, gate_X, not, ...). Case-insensitive.
std::optional<std::string> resolve_builtin_name(const std::string& surface);

}  // namespace quipmc::frontend
