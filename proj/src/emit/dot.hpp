#pragma once

#include <string>

#include "semantics/chain.hpp"

namespace quipmc::emit {

/// GraphViz rendering of a chain: nodes labeled "(residual summary, env)",
/// edges labeled by their QPMC constant names, exit loop-backs dashed.
std::string emit_dot(const semantics::Qmc& chain);

}  // namespace quipmc::emit
