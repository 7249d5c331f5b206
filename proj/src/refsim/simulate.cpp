#include "refsim/simulate.hpp"

#include <cmath>
#include <map>

namespace quipmc::refsim {

using frontend::GateInstr;
using frontend::IfElseInstr;
using frontend::Instr;
using frontend::LiftInstr;
using frontend::MeasureInstr;
using frontend::ResetInstr;
using linalg::CMatrix;
using linalg::Complex;
using semantics::Env;

namespace {

struct PendingBranch {
    std::vector<Complex> state;
    Env env = 0;
    double weight = 1.0;
    int loops = 0;
    std::vector<const Instr*> cont;
};

class Simulator {
public:
    Simulator(const frontend::CheckedProgram& checked, int max_loops, std::size_t cap)
        : program_(checked.program), max_loops_(std::max(1, max_loops)), cap_(cap) {}

    SimResult run(std::vector<Complex> psi0) {
        const std::size_t dim = program_.dim();
        if (psi0.size() != dim)
            throw Error(ErrorKind::DimensionMismatch, "initial state has wrong dimension");
        double norm = 0.0;
        for (const auto& a : psi0) norm += std::norm(a);
        if (std::abs(norm - 1.0) > 1e-9)
            throw Error(ErrorKind::BadArgument, "initial state is not normalized");

        PendingBranch root;
        root.state = std::move(psi0);
        root.cont = body_pointers();
        // Depth-first with the 0-outcome child explored first.
        stack_.push_back(std::move(root));
        while (!stack_.empty()) {
            PendingBranch b = std::move(stack_.back());
            stack_.pop_back();
            advance(std::move(b));
        }

        SimResult result;
        result.branches = std::move(done_);
        for (const Branch& b : result.branches)
            (b.status == BranchStatus::Terminated ? result.terminated_mass
                                                  : result.residual_mass) += b.weight;
        return result;
    }

private:
    std::vector<const Instr*> body_pointers() const {
        std::vector<const Instr*> out;
        for (const Instr& i : program_.body.instrs) out.push_back(&i);
        return out;
    }

    int qubit_bit(std::size_t index, int qubit) const {
        return static_cast<int>(index >> (program_.qubit_count() - 1 - qubit) & 1u);
    }

    // Probability of outcome `outcome` when measuring `qubit`, and the
    // collapsed normalized state.
    std::pair<double, std::vector<Complex>> project(const std::vector<Complex>& psi,
                                                    int qubit, int outcome) const {
        double p = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i)
            if (qubit_bit(i, qubit) == outcome) p += std::norm(psi[i]);
        std::vector<Complex> out(psi.size(), Complex{0.0, 0.0});
        if (p > 0.0) {
            const double scale = 1.0 / std::sqrt(p);
            for (std::size_t i = 0; i < psi.size(); ++i)
                if (qubit_bit(i, qubit) == outcome) out[i] = psi[i] * scale;
        }
        return {p, std::move(out)};
    }

    std::vector<Complex> apply_gate(const std::vector<Complex>& psi, const GateInstr& g) {
        auto key = std::make_pair(g.gate, g.targets);
        auto it = gate_cache_.find(key);
        if (it == gate_cache_.end()) {
            const frontend::GateRef& ref = program_.gates[g.gate];
            it = gate_cache_
                     .emplace(key, linalg::embed_gate(ref.matrix, g.targets,
                                                      program_.qubit_count()))
                     .first;
        }
        return linalg::mat_vec(it->second, psi);
    }

    std::vector<Complex> apply_x(const std::vector<Complex>& psi, int qubit) const {
        std::vector<Complex> out(psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i)
            out[i ^ (std::size_t{1} << (program_.qubit_count() - 1 - qubit))] = psi[i];
        return out;
    }

    void fork(PendingBranch base, int qubit, int apply_x_on_one,
              const MeasureInstr* store) {
        // Push the 1-branch first so the 0-branch is processed first (LIFO).
        for (int outcome = 1; outcome >= 0; --outcome) {
            auto [p, collapsed] = project(base.state, qubit, outcome);
            if (p <= 0.0) continue;
            PendingBranch child = base;
            child.weight = base.weight * p;
            child.state = std::move(collapsed);
            if (outcome == 1 && apply_x_on_one) child.state = apply_x(child.state, qubit);
            if (store) {
                const Env bit = Env{1} << store->out_var;
                child.env = outcome ? (child.env | bit) : (child.env & ~bit);
            }
            if (++created_ > cap_)
                throw Error(ErrorKind::BranchExplosion,
                            "branch count exceeds " + std::to_string(cap_));
            stack_.push_back(std::move(child));
        }
    }

    void advance(PendingBranch b) {
        while (true) {
            if (b.cont.empty()) {
                ++b.loops;
                const bool exited =
                    !program_.exit_guard || ((b.env >> *program_.exit_guard & 1) != 0);
                if (exited) {
                    finish(std::move(b), BranchStatus::Terminated);
                    return;
                }
                if (b.loops >= max_loops_) {
                    finish(std::move(b), BranchStatus::Residual);
                    return;
                }
                b.env = 0;  // loop-back resets the environment to O
                b.cont = body_pointers();
                continue;
            }

            const Instr& head = *b.cont.front();
            b.cont.erase(b.cont.begin());

            if (const auto* reset = std::get_if<ResetInstr>(&head.op)) {
                fork(std::move(b), reset->qubit, /*apply_x_on_one=*/1, nullptr);
                return;
            }
            if (const auto* gate = std::get_if<GateInstr>(&head.op)) {
                b.state = apply_gate(b.state, *gate);
                continue;
            }
            if (const auto* measure = std::get_if<MeasureInstr>(&head.op)) {
                fork(std::move(b), measure->qubit, /*apply_x_on_one=*/0, measure);
                return;
            }
            if (const auto* lift = std::get_if<LiftInstr>(&head.op)) {
                const Env bit = Env{1} << lift->out_var;
                b.env = (b.env >> lift->in_var & 1) ? (b.env | bit) : (b.env & ~bit);
                continue;
            }
            const auto& ifelse = std::get<IfElseInstr>(head.op);
            const bool guard = (b.env >> ifelse.guard_var & 1) != 0;
            const frontend::Body& branch = guard ? ifelse.then_body : ifelse.else_body;
            std::vector<const Instr*> cont;
            cont.reserve(branch.instrs.size() + b.cont.size());
            for (const Instr& i : branch.instrs) cont.push_back(&i);
            cont.insert(cont.end(), b.cont.begin(), b.cont.end());
            b.cont = std::move(cont);
        }
    }

    void finish(PendingBranch b, BranchStatus status) {
        Branch out;
        out.weight = b.weight;
        out.state = std::move(b.state);
        out.env = b.env;
        out.loops = b.loops;
        out.status = status;
        done_.push_back(std::move(out));
    }

    const frontend::Program& program_;
    int max_loops_;
    std::size_t cap_;
    std::size_t created_ = 0;
    std::vector<PendingBranch> stack_;
    std::vector<Branch> done_;
    std::map<std::pair<int, std::vector<int>>, CMatrix> gate_cache_;
};

}  // namespace

SimResult simulate(const frontend::CheckedProgram& program, std::vector<Complex> psi0,
                   int max_loops, std::size_t branch_cap) {
    return Simulator(program, max_loops, branch_cap).run(std::move(psi0));
}

linalg::DensityMatrix branch_density(const std::vector<Branch>& branches) {
    if (branches.empty()) throw Error(ErrorKind::BadArgument, "no branches");
    const std::size_t dim = branches.front().state.size();
    CMatrix acc(dim, dim);
    for (const Branch& b : branches) {
        if (b.status != BranchStatus::Terminated) continue;
        for (std::size_t i = 0; i < dim; ++i) {
            if (b.state[i] == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < dim; ++j)
                acc.at(i, j) += b.weight * b.state[i] * std::conj(b.state[j]);
        }
    }
    return linalg::DensityMatrix(dim, std::move(acc));
}

}  // namespace quipmc::refsim
