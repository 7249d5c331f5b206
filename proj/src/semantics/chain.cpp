#include "semantics/chain.hpp"

#include <deque>
#include <set>

namespace quipmc::semantics {

using frontend::GateInstr;
using frontend::IfElseInstr;
using frontend::Instr;
using frontend::LiftInstr;
using frontend::MeasureInstr;
using frontend::ResetInstr;
using linalg::Superoperator;

StepContext::StepContext(std::shared_ptr<const frontend::CheckedProgram> program)
    : program_(std::move(program)) {
    x_instrs_.resize(program_->program.qubits.size());
}

const Instr* StepContext::x_correction(int qubit) {
    auto& slot = x_instrs_.at(qubit);
    if (!slot) {
        int x_gate = -1;
        const auto& gates = program_->program.gates;
        for (std::size_t i = 0; i < gates.size(); ++i)
            if (gates[i].builtin && gates[i].name == "X") x_gate = static_cast<int>(i);
        if (x_gate < 0) throw Error(ErrorKind::Internal, "builtin X gate missing");
        slot = std::make_shared<Instr>(Instr{GateInstr{x_gate, {qubit}}, SourcePos{}});
    }
    return slot.get();
}

std::vector<std::shared_ptr<const Instr>> StepContext::synthesized() const {
    std::vector<std::shared_ptr<const Instr>> out;
    for (const auto& p : x_instrs_)
        if (p) out.push_back(p);
    return out;
}

const Superoperator& StepContext::identity_op() {
    if (!identity_) identity_ = Superoperator::identity(program_->program.dim());
    return *identity_;
}

const Superoperator& StepContext::measure_op(int qubit, int outcome) {
    const auto key = std::make_pair(qubit, outcome);
    auto it = measure_cache_.find(key);
    if (it == measure_cache_.end()) {
        auto [m0, m1] = linalg::measure_superops(qubit, program_->program.qubit_count());
        measure_cache_.emplace(std::make_pair(qubit, 0), std::move(m0));
        measure_cache_.emplace(std::make_pair(qubit, 1), std::move(m1));
        it = measure_cache_.find(key);
    }
    return it->second;
}

const Superoperator& StepContext::gate_op(const GateInstr& gate) {
    const auto key = std::make_pair(gate.gate, gate.targets);
    auto it = gate_cache_.find(key);
    if (it == gate_cache_.end()) {
        const frontend::GateRef& ref = program_->program.gates[gate.gate];
        linalg::CMatrix full =
            linalg::embed_gate(ref.matrix, gate.targets, program_->program.qubit_count());
        it = gate_cache_.emplace(key, linalg::unitary_superop(full)).first;
    }
    return it->second;
}

namespace {

std::vector<const Instr*> rest_of(const std::vector<const Instr*>& residual) {
    return {residual.begin() + 1, residual.end()};
}

std::vector<const Instr*> prepend(const frontend::Body& body,
                                  std::vector<const Instr*> rest) {
    std::vector<const Instr*> out;
    out.reserve(body.instrs.size() + rest.size());
    for (const Instr& i : body.instrs) out.push_back(&i);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

Env set_bit(Env env, int var, int value) {
    const Env bit = Env{1} << var;
    return value ? (env | bit) : (env & ~bit);
}

}  // namespace

std::vector<StepEdge> step(const ChainState& state, StepContext& ctx) {
    std::vector<StepEdge> out;

    if (state.empty()) {
        out.push_back(StepEdge{ctx.identity_op(), state});
        return out;
    }

    const Instr& head = *state.residual.front();
    auto rest = rest_of(state.residual);

    if (const auto* reset = std::get_if<ResetInstr>(&head.op)) {
        out.push_back(StepEdge{ctx.measure_op(reset->qubit, 0), ChainState{rest, state.env}});
        std::vector<const Instr*> corrected;
        corrected.reserve(rest.size() + 1);
        corrected.push_back(ctx.x_correction(reset->qubit));
        corrected.insert(corrected.end(), rest.begin(), rest.end());
        out.push_back(
            StepEdge{ctx.measure_op(reset->qubit, 1), ChainState{std::move(corrected), state.env}});
        return out;
    }

    if (const auto* gate = std::get_if<GateInstr>(&head.op)) {
        out.push_back(StepEdge{ctx.gate_op(*gate), ChainState{std::move(rest), state.env}});
        return out;
    }

    if (const auto* measure = std::get_if<MeasureInstr>(&head.op)) {
        for (int i = 0; i < 2; ++i)
            out.push_back(StepEdge{ctx.measure_op(measure->qubit, i),
                                   ChainState{rest, set_bit(state.env, measure->out_var, i)}});
        return out;
    }

    if (const auto* lift = std::get_if<LiftInstr>(&head.op)) {
        const int value = static_cast<int>(state.env >> lift->in_var & 1);
        out.push_back(StepEdge{ctx.identity_op(),
                               ChainState{std::move(rest), set_bit(state.env, lift->out_var, value)}});
        return out;
    }

    const auto& ifelse = std::get<IfElseInstr>(head.op);
    const bool guard = (state.env >> ifelse.guard_var & 1) != 0;
    const frontend::Body& branch = guard ? ifelse.then_body : ifelse.else_body;
    out.push_back(
        StepEdge{ctx.identity_op(), ChainState{prepend(branch, std::move(rest)), state.env}});
    return out;
}

namespace {

std::string residual_text(const std::vector<const Instr*>& residual,
                          const frontend::Program& program) {
    if (residual.empty()) return "_";
    std::string out;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        if (i > 0) out += "; ";
        out += frontend::instr_to_string(*residual[i], program);
    }
    return out;
}

// Upper bound on distinct residual shapes: one per instruction in the tree,
// plus reset corrections, plus the full body and the empty residual.
std::size_t count_program_points(const frontend::Body& body) {
    std::size_t n = 0;
    for (const Instr& i : body.instrs) {
        ++n;
        if (std::holds_alternative<ResetInstr>(i.op)) {
            ++n;  // the injected X-correction state
        } else if (const auto* ie = std::get_if<IfElseInstr>(&i.op)) {
            n += count_program_points(ie->then_body);
            n += count_program_points(ie->else_body);
        }
    }
    return n;
}

class ChainBuilder {
public:
    ChainBuilder(frontend::CheckedProgram program, bool exit_rules, std::size_t state_cap)
        : ctx_(std::make_shared<frontend::CheckedProgram>(std::move(program))),
          exit_rules_(exit_rules && ctx_.program().exit_guard.has_value()),
          state_cap_(state_cap) {}

    Qmc build() {
        Qmc chain;
        chain.program = ctx_.program_ptr();
        chain.num_qubits = ctx_.program().qubit_count();
        chain.dim = ctx_.program().dim();
        chain.has_exit_rules = exit_rules_;

        ChainState start;
        for (const Instr& i : ctx_.program().body.instrs) start.residual.push_back(&i);
        start.env = 0;
        intern(chain, start);

        std::size_t cursor = 0;
        while (cursor < chain.states.size()) {
            const int idx = static_cast<int>(cursor);
            ++cursor;
            expand(chain, idx);
        }

        chain.synthesized = ctx_.synthesized();
        check_finiteness(chain);
        return chain;
    }

    StepContext& ctx() { return ctx_; }

private:
    int intern(Qmc& chain, const ChainState& state) {
        std::string text = residual_text(state.residual, ctx_.program());
        const auto key = std::make_pair(text, state.env);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        if (chain.states.size() >= state_cap_)
            throw Error(ErrorKind::StateExplosion,
                        "chain exceeds " + std::to_string(state_cap_) + " states");
        const int idx = static_cast<int>(chain.states.size());
        chain.states.push_back(Qmc::State{state.residual, state.env, std::move(text)});
        chain.edges.emplace_back();
        index_.emplace(key, idx);
        return idx;
    }

    void expand(Qmc& chain, int idx) {
        // Copy: intern() may reallocate the state vector while we hold edges.
        const ChainState state{chain.states[idx].residual, chain.states[idx].env};

        if (state.empty() && exit_rules_) {
            const int guard = *ctx_.program().exit_guard;
            const bool exited = (state.env >> guard & 1) != 0;
            if (exited) {
                chain.edges[idx].push_back(Qmc::Edge{idx, ctx_.identity_op(), false});
            } else {
                // (___, L) -I-> (Body_C, O): the environment resets to O.
                chain.edges[idx].push_back(Qmc::Edge{0, ctx_.identity_op(), true});
            }
            return;
        }

        for (StepEdge& e : step(state, ctx_)) {
            const int to = intern(chain, e.next);
            for (const auto& existing : chain.edges[idx])
                if (existing.to == to)
                    throw Error(ErrorKind::Internal, "duplicate edge target in chain build");
            chain.edges[idx].push_back(Qmc::Edge{to, std::move(e.label), false});
        }
    }

    void check_finiteness(const Qmc& chain) const {
        const std::size_t points = count_program_points(ctx_.program().body) + 2;
        const std::size_t vars = ctx_.program().vars.size();
        if (vars >= 40) return;  // cap already enforced; bound would overflow
        const std::size_t bound = points << vars;
        if (chain.states.size() > bound)
            throw Error(ErrorKind::Internal, "finiteness bound violated");
    }

    StepContext ctx_;
    bool exit_rules_;
    std::size_t state_cap_;
    std::map<std::pair<std::string, Env>, int> index_;
};

}  // namespace

bool Qmc::state_exited(int i) const {
    const State& s = states[i];
    if (!s.empty()) return false;
    if (!has_exit_rules) return true;
    const int guard = *source().exit_guard;
    return (s.env >> guard & 1) != 0;
}

std::vector<int> Qmc::label_set(int i) const {
    std::vector<int> out;
    for (std::size_t v = 0; v < source().vars.size(); ++v)
        if (states[i].env >> v & 1) out.push_back(static_cast<int>(v));
    return out;
}

Superoperator Qmc::transition(int i, int j) const {
    for (const Edge& e : edges[i])
        if (e.to == j) return e.op;
    return Superoperator(dim, {linalg::CMatrix::zero(dim, dim)});
}

Superoperator Qmc::outgoing_sum(int i) const {
    Superoperator acc(dim, {});
    for (const Edge& e : edges[i])
        acc.kraus.insert(acc.kraus.end(), e.op.kraus.begin(), e.op.kraus.end());
    if (acc.kraus.empty()) acc.kraus.push_back(linalg::CMatrix::zero(dim, dim));
    return acc;
}

bool Qmc::acyclic_without_loops() const {
    const std::size_t n = states.size();
    std::vector<int> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (const Edge& e : edges[i])
            if (e.to != static_cast<int>(i) && !e.exit_loopback) ++indegree[e.to];

    std::deque<int> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
    std::size_t seen = 0;
    while (!ready.empty()) {
        const int i = ready.front();
        ready.pop_front();
        ++seen;
        for (const Edge& e : edges[i]) {
            if (e.to == i || e.exit_loopback) continue;
            if (--indegree[e.to] == 0) ready.push_back(e.to);
        }
    }
    return seen == n;
}

Qmc build_body_chain(frontend::CheckedProgram program, std::size_t state_cap) {
    return ChainBuilder(std::move(program), false, state_cap).build();
}

Qmc build_program_chain(frontend::CheckedProgram program, std::size_t state_cap) {
    return ChainBuilder(std::move(program), true, state_cap).build();
}

QmcCheckReport check_qmc(const Qmc& chain, double tol) {
    QmcCheckReport report;
    report.tol = tol;
    report.pass = true;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        QmcCheckReport::StateVerdict v;
        v.state = static_cast<int>(i);
        const linalg::CMatrix sum = chain.outgoing_sum(static_cast<int>(i)).kraus_sum();
        v.deviation = sum.max_diff(linalg::CMatrix::identity(chain.dim));
        v.trace_preserving = v.deviation <= tol;

        const auto labels = chain.label_set(static_cast<int>(i));
        Env mask = 0;
        for (int var : labels) mask |= Env{1} << var;
        v.labeling_consistent = mask == chain.states[i].env;

        report.pass = report.pass && v.trace_preserving && v.labeling_consistent;
        report.states.push_back(std::move(v));
    }
    return report;
}

}  // namespace quipmc::semantics
