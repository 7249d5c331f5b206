#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "linalg/matrix.hpp"
#include "support/error.hpp"

namespace quipmc::frontend {

enum class VarKind { Bit, Bool };

/// A classical name from the program's finite variable set: measurement bits
/// and lifted booleans. Names are unique across both kinds.
struct VarName {
    std::string name;
    VarKind kind = VarKind::Bit;

    bool operator==(const VarName& other) const {
        return name == other.name && kind == other.kind;
    }
};

/// A named unitary, either built in or user-declared with a matrix literal.
struct GateRef {
    std::string name;
    int arity = 1;
    linalg::CMatrix matrix;  // 2^arity x 2^arity, unitary
    bool builtin = true;
};

struct Instr;

struct Body {
    std::vector<Instr> instrs;
};

struct ResetInstr {
    int qubit = 0;
};

struct GateInstr {
    int gate = 0;              // index into Program::gates
    std::vector<int> targets;  // qubit indices, order-significant
};

struct MeasureInstr {
    int out_var = 0;  // Bit
    int qubit = 0;
};

struct LiftInstr {
    int out_var = 0;  // Bool
    int in_var = 0;   // Bit
};

struct IfElseInstr {
    int guard_var = 0;  // Bool
    Body then_body;
    Body else_body;
};

struct Instr {
    std::variant<ResetInstr, GateInstr, MeasureInstr, LiftInstr, IfElseInstr> op;
    SourcePos pos;
};

/// A parsed Quip-E program: a fixed qubit register, the classical variable
/// set, a gate table, the body and an optional exitOn guard. Register order
/// is fixed at declaration and never permuted.
struct Program {
    std::vector<std::string> qubits;  // index = qubit id, qubit 0 most significant
    std::vector<VarName> vars;        // first-appearance order
    std::vector<GateRef> gates;       // builtins first, then user gates
    Body body;
    std::optional<int> exit_guard;    // index into vars, always a Bool

    int qubit_count() const { return static_cast<int>(qubits.size()); }
    std::size_t dim() const { return std::size_t{1} << qubits.size(); }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name == name) return static_cast<int>(i);
        return -1;
    }
    int qubit_index(const std::string& name) const {
        for (std::size_t i = 0; i < qubits.size(); ++i)
            if (qubits[i] == name) return static_cast<int>(i);
        return -1;
    }
};

bool instr_equal(const Instr& a, const Instr& b);
bool body_equal(const Body& a, const Body& b);
bool program_equal(const Program& a, const Program& b);

/// Canonical rendering of one instruction, e.g. `m <- measure q1` or
/// `if (b) { ... } else { ... }` on one line. Used by the pretty-printer,
/// chain-state identity and graph labels.
std::string instr_to_string(const Instr& instr, const Program& program);

/// Canonical program text; parse(pretty_print(p)) reproduces p exactly.
std::string pretty_print(const Program& program);

}  // namespace quipmc::frontend
