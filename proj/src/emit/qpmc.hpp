#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "semantics/chain.hpp"

namespace quipmc::emit {

/// Serializes a chain to QPMC-dialect model code: a `qmc` header, one named
/// constant per distinct edge superoperator (M# for projector conjugations,
/// U# for other unitaries, K# for Kraus lists, ID for the identity), a
/// module with guarded commands, and one label line per boolean that is true
/// somewhere. Deterministic, byte-identical across runs.
std::string emit_qpmc(const semantics::Qmc& chain);

/// The structure recovered by the internal round-trip reader.
struct QpmcModel {
    std::size_t dim = 0;
    int num_states = 0;
    int init_state = 0;
    std::map<std::pair<int, int>, linalg::Superoperator> transitions;
    std::map<std::string, std::set<int>> labels;
};

QpmcModel read_qpmc(std::string_view text);

/// Constant names assigned to each edge, indexed like Qmc::edges. Shared by
/// the QPMC and DOT emitters so both use the same names.
std::vector<std::vector<std::string>> edge_constant_names(const semantics::Qmc& chain);

/// True when the model re-read from text matches the chain: same state
/// count, same label sets, and edge superoperators equal within tol.
bool model_matches_chain(const QpmcModel& model, const semantics::Qmc& chain, double tol);

}  // namespace quipmc::emit
