#include "frontend/ast.hpp"

#include <sstream>

#include "support/format.hpp"

namespace quipmc::frontend {

namespace {

std::string body_to_string(const Body& body, const Program& program) {
    std::string out;
    for (std::size_t i = 0; i < body.instrs.size(); ++i) {
        if (i > 0) out += "; ";
        out += instr_to_string(body.instrs[i], program);
    }
    return out;
}

std::string matrix_literal(const linalg::CMatrix& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r > 0) out += "; ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ", ";
            out += format_complex(m.at(r, c));
        }
    }
    out += "]";
    return out;
}

void print_body(std::ostringstream& os, const Body& body, const Program& program,
                int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const Instr& instr : body.instrs) {
        if (const auto* ie = std::get_if<IfElseInstr>(&instr.op)) {
            os << pad << "if (" << program.vars[ie->guard_var].name << ") {\n";
            print_body(os, ie->then_body, program, indent + 1);
            os << pad << "} else {\n";
            print_body(os, ie->else_body, program, indent + 1);
            os << pad << "}\n";
        } else {
            os << pad << instr_to_string(instr, program) << "\n";
        }
    }
}

}  // namespace

bool instr_equal(const Instr& a, const Instr& b) {
    if (a.op.index() != b.op.index()) return false;
    if (const auto* ra = std::get_if<ResetInstr>(&a.op))
        return ra->qubit == std::get<ResetInstr>(b.op).qubit;
    if (const auto* ga = std::get_if<GateInstr>(&a.op)) {
        const auto& gb = std::get<GateInstr>(b.op);
        return ga->gate == gb.gate && ga->targets == gb.targets;
    }
    if (const auto* ma = std::get_if<MeasureInstr>(&a.op)) {
        const auto& mb = std::get<MeasureInstr>(b.op);
        return ma->out_var == mb.out_var && ma->qubit == mb.qubit;
    }
    if (const auto* la = std::get_if<LiftInstr>(&a.op)) {
        const auto& lb = std::get<LiftInstr>(b.op);
        return la->out_var == lb.out_var && la->in_var == lb.in_var;
    }
    const auto& ia = std::get<IfElseInstr>(a.op);
    const auto& ib = std::get<IfElseInstr>(b.op);
    return ia.guard_var == ib.guard_var && body_equal(ia.then_body, ib.then_body) &&
           body_equal(ia.else_body, ib.else_body);
}

bool body_equal(const Body& a, const Body& b) {
    if (a.instrs.size() != b.instrs.size()) return false;
    for (std::size_t i = 0; i < a.instrs.size(); ++i)
        if (!instr_equal(a.instrs[i], b.instrs[i])) return false;
    return true;
}

bool program_equal(const Program& a, const Program& b) {
    if (a.qubits != b.qubits || a.exit_guard != b.exit_guard) return false;
    if (a.vars.size() != b.vars.size()) return false;
    for (std::size_t i = 0; i < a.vars.size(); ++i)
        if (!(a.vars[i] == b.vars[i])) return false;
    if (a.gates.size() != b.gates.size()) return false;
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        const GateRef& ga = a.gates[i];
        const GateRef& gb = b.gates[i];
        if (ga.name != gb.name || ga.arity != gb.arity || ga.builtin != gb.builtin)
            return false;
        if (!ga.builtin && ga.matrix.max_diff(gb.matrix) != 0.0) return false;
    }
    return body_equal(a.body, b.body);
}

std::string instr_to_string(const Instr& instr, const Program& program) {
    if (const auto* r = std::get_if<ResetInstr>(&instr.op))
        return "reset_at " + program.qubits[r->qubit];
    if (const auto* g = std::get_if<GateInstr>(&instr.op)) {
        std::string out = program.gates[g->gate].name + "_at ";
        if (g->targets.size() == 1) return out + program.qubits[g->targets[0]];
        out += "[";
        for (std::size_t i = 0; i < g->targets.size(); ++i) {
            if (i > 0) out += ", ";
            out += program.qubits[g->targets[i]];
        }
        return out + "]";
    }
    if (const auto* m = std::get_if<MeasureInstr>(&instr.op))
        return program.vars[m->out_var].name + " <- measure " + program.qubits[m->qubit];
    if (const auto* l = std::get_if<LiftInstr>(&instr.op))
        return program.vars[l->out_var].name + " <- dynamic_lift " +
               program.vars[l->in_var].name;
    const auto& ie = std::get<IfElseInstr>(instr.op);
    return "if (" + program.vars[ie.guard_var].name + ") { " +
           body_to_string(ie.then_body, program) + " } else { " +
           body_to_string(ie.else_body, program) + " }";
}

std::string pretty_print(const Program& program) {
    std::ostringstream os;
    os << "qubits";
    for (const auto& q : program.qubits) os << " " << q;
    os << "\n";

    bool have_user_gates = false;
    for (const auto& g : program.gates) have_user_gates |= !g.builtin;
    if (have_user_gates) {
        os << "\ngates {\n";
        for (const auto& g : program.gates)
            if (!g.builtin) os << "  " << g.name << " = " << matrix_literal(g.matrix) << "\n";
        os << "}\n";
    }

    os << "\nbody {\n";
    print_body(os, program.body, program, 1);
    os << "}\n";

    if (program.exit_guard)
        os << "\nexitOn " << program.vars[*program.exit_guard].name << "\n";
    return os.str();
}

}  // namespace quipmc::frontend
