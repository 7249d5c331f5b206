#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frontend/validate.hpp"
#include "linalg/superop.hpp"

namespace quipmc::semantics {

/// Total assignment of {0,1} to every program variable; bit i is the value
/// of Program::vars[i]. The all-zero assignment is written O.
using Env = std::uint64_t;

/// A chain state: the residual body (instruction continuation; empty means
/// the body pass has finished) together with the classical environment.
/// Two states are equal iff their residuals are structurally equal and their
/// environments coincide.
struct ChainState {
    std::vector<const frontend::Instr*> residual;
    Env env = 0;

    bool empty() const { return residual.empty(); }
};

struct StepEdge {
    linalg::Superoperator label;
    ChainState next;
};

/// Per-program context for executing the operational rules: owns the
/// synthesized X-correction instructions the reset rule prepends, and caches
/// edge superoperators.
class StepContext {
public:
    explicit StepContext(std::shared_ptr<const frontend::CheckedProgram> program);

    const frontend::CheckedProgram& checked() const { return *program_; }
    const frontend::Program& program() const { return program_->program; }
    std::shared_ptr<const frontend::CheckedProgram> program_ptr() const { return program_; }

    /// Synthesized `X_at q` instruction for the reset rule's 1-branch.
    const frontend::Instr* x_correction(int qubit);

    /// Ownership of the synthesized instructions, shared with built chains.
    std::vector<std::shared_ptr<const frontend::Instr>> synthesized() const;

    const linalg::Superoperator& identity_op();
    const linalg::Superoperator& measure_op(int qubit, int outcome);
    const linalg::Superoperator& gate_op(const frontend::GateInstr& gate);

private:
    std::shared_ptr<const frontend::CheckedProgram> program_;
    std::vector<std::shared_ptr<frontend::Instr>> x_instrs_;  // index = qubit
    std::optional<linalg::Superoperator> identity_;
    std::map<std::pair<int, int>, linalg::Superoperator> measure_cache_;
    std::map<std::pair<int, std::vector<int>>, linalg::Superoperator> gate_cache_;
};

/// One application of the operational rules to a state: returns exactly the
/// licensed edges, 0-branch before 1-branch. The empty body yields its
/// identity self-loop.
std::vector<StepEdge> step(const ChainState& state, StepContext& ctx);

/// Superoperator-weighted quantum Markov chain over the program's classical
/// states. AP is the program's variable set; a state is labeled with the
/// variables its environment sets to 1.
struct Qmc {
    struct Edge {
        int to = 0;
        linalg::Superoperator op;
        bool exit_loopback = false;  // exit rule with guard 0, drawn dashed
    };
    struct State {
        std::vector<const frontend::Instr*> residual;
        Env env = 0;
        std::string residual_text;  // canonical render, part of state identity

        bool empty() const { return residual.empty(); }
    };

    std::shared_ptr<const frontend::CheckedProgram> program;
    std::vector<std::shared_ptr<const frontend::Instr>> synthesized;  // X corrections
    int num_qubits = 0;
    std::size_t dim = 0;
    bool has_exit_rules = false;  // built by build_program_chain with a guard
    std::vector<State> states;
    std::vector<std::vector<Edge>> edges;  // edges[i] in rule order

    const frontend::Program& source() const { return program->program; }

    /// The program has exited in this state: the residual is empty and the
    /// exit condition holds (or the chain has no exit guard, in which case
    /// every empty state is absorbing).
    bool state_exited(int i) const;

    /// Variables labeled true in state i, as indices into source().vars.
    std::vector<int> label_set(int i) const;

    /// Q(i, j); zero map when no edge exists.
    linalg::Superoperator transition(int i, int j) const;

    /// Sum of outgoing edge labels from state i.
    linalg::Superoperator outgoing_sum(int i) const;

    /// True if the chain minus self-loops and exit loop-backs is acyclic.
    bool acyclic_without_loops() const;
};

inline constexpr std::size_t kDefaultStateCap = 100000;

/// BFS closure of `step` from (body, O): the chain of the body alone, with
/// identity self-loops on every empty state.
Qmc build_body_chain(frontend::CheckedProgram program,
                     std::size_t state_cap = kDefaultStateCap);

/// The QMC of the whole program: QC^- plus the exit rules. For every
/// terminal (empty, L): an identity self-loop when the guard is 1, an
/// identity edge back to (body, O) when it is 0. Without an exit guard the
/// body chain is returned unchanged.
Qmc build_program_chain(frontend::CheckedProgram program,
                        std::size_t state_cap = kDefaultStateCap);

struct QmcCheckReport {
    struct StateVerdict {
        int state = 0;
        bool trace_preserving = false;
        double deviation = 0.0;  // max-norm distance of sum_t Q(s,t) from TP
        bool labeling_consistent = true;
    };
    bool pass = false;
    double tol = 0.0;
    std::vector<StateVerdict> states;
};

/// Verifies the QMC conditions: every state's outgoing sum is
/// trace-preserving within tol, and labels match the environments.
QmcCheckReport check_qmc(const Qmc& chain, double tol);

}  // namespace quipmc::semantics
