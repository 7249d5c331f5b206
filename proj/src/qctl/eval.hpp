#pragma once

#include <optional>
#include <vector>

#include "qctl/formula.hpp"
#include "semantics/chain.hpp"

namespace quipmc::qctl {

struct EvalContext {
    const semantics::Qmc* chain = nullptr;
    linalg::DensityMatrix rho0;
    int start_state = 0;
    double fixpoint_tol = 1e-9;
    int max_iters = 10000;
};

/// Satisfaction set of a state formula, one flag per chain state. Nested
/// Q~e operators are resolved against the context's initial state.
std::vector<bool> sat_states(const EvalContext& ctx, const StateFormula& sf);

/// Sum of the edge superoperators from `from` into states satisfying `sf`.
linalg::Superoperator next_superop(const EvalContext& ctx, const StateFormula& sf, int from);

/// Accumulated superoperator of the paths from `from` satisfying
/// phi1 U phi2 (bounded: exact k-step recursion; unbounded: least fixpoint
/// on vectorized matrices). Trace-non-increasing by construction.
linalg::Superoperator until_superop(const EvalContext& ctx, const StateFormula& phi1,
                                    const StateFormula& phi2, std::optional<long> bound,
                                    int from);

/// qeval: the path superoperator applied to the initial state.
linalg::DensityMatrix qeval(const EvalContext& ctx, const PathFormula& pf);

/// qprob = tr(qeval(...)); always within [0, 1 + 1e-9].
double qprob(const EvalContext& ctx, const PathFormula& pf);

/// Evaluates a top-level Q~e[PF] comparison from the start state. Equality
/// uses tolerance 1e-9; non-strict bounds get the same slack.
bool check(const EvalContext& ctx, const StateFormula& qcompare);

/// Range of tr(E(rho)) over all unit-trace rho, from the extreme eigenvalues
/// of the dual map applied to the identity (the --all-rho diagnostic).
struct RhoBounds {
    double min = 0.0;
    double max = 0.0;
};
RhoBounds all_rho_bounds(const EvalContext& ctx, const PathFormula& pf);

/// Sub-normalized state accumulated over every path that exits the program
/// within `max_passes` executions of the body (loop-back edges re-enter the
/// start state). This is the bounded-until horizon covering a fixed number
/// of loop traversals, computed exactly.
linalg::DensityMatrix reach_exited_density(const semantics::Qmc& chain,
                                           const linalg::DensityMatrix& rho0,
                                           int max_passes);

}  // namespace quipmc::qctl
