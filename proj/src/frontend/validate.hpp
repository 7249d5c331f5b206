#pragma once

#include "frontend/ast.hpp"

namespace quipmc::frontend {

/// A program that passed definite-assignment analysis: every boolean used as
/// an if-guard or as the exit condition is written by a dynamic_lift on every
/// execution path before the use.
struct CheckedProgram {
    Program program;
};

/// Runs the guard-definedness analysis. Throws UndefinedGuard naming the
/// variable and the offending instruction position.
CheckedProgram validate(Program program);

}  // namespace quipmc::frontend
