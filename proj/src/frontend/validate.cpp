#include "frontend/validate.hpp"

#include <cstdint>

namespace quipmc::frontend {

namespace {

// Bitmask of boolean var indices definitely written after executing `body`
// starting from `defined`.
std::uint64_t walk(const Body& body, std::uint64_t defined, const Program& p) {
    for (const Instr& instr : body.instrs) {
        if (const auto* lift = std::get_if<LiftInstr>(&instr.op)) {
            defined |= std::uint64_t{1} << lift->out_var;
        } else if (const auto* ie = std::get_if<IfElseInstr>(&instr.op)) {
            if (!(defined >> ie->guard_var & 1))
                throw Error(ErrorKind::UndefinedGuard, instr.pos,
                            "guard '" + p.vars[ie->guard_var].name +
                                "' may be read before any dynamic_lift defines it");
            const std::uint64_t after_then = walk(ie->then_body, defined, p);
            const std::uint64_t after_else = walk(ie->else_body, defined, p);
            defined = after_then & after_else;
        }
    }
    return defined;
}

}  // namespace

CheckedProgram validate(Program program) {
    const std::uint64_t defined = walk(program.body, 0, program);
    if (program.exit_guard && !(defined >> *program.exit_guard & 1)) {
        throw Error(ErrorKind::UndefinedGuard,
                    "exit guard '" + program.vars[*program.exit_guard].name +
                        "' is not defined on every path through the body");
    }
    return CheckedProgram{std::move(program)};
}

}  // namespace quipmc::frontend
