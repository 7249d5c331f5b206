#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quipmc::qctl {

enum class Rel { Le, Ge, Eq, Lt, Gt };

std::string rel_to_string(Rel rel);

struct PathFormula;

/// State formula: atoms, negation, conjunction and the quantum operator
/// Q~e[PF] (evaluated against the supplied initial state).
struct StateFormula {
    enum class Kind { True, False, AtomVar, AtomState, Terminated, Not, And, QCompare };

    Kind kind = Kind::True;
    std::string var;                      // AtomVar
    long state_index = 0;                 // AtomState (`s = k`)
    std::shared_ptr<const StateFormula> lhs;
    std::shared_ptr<const StateFormula> rhs;  // And only
    Rel rel = Rel::Ge;                    // QCompare
    double bound = 0.0;                   // QCompare
    std::shared_ptr<const PathFormula> path;  // QCompare
};

/// Path formula: next or (bounded) until. `F phi` is sugar for `true U phi`.
struct PathFormula {
    enum class Kind { Next, Until };

    Kind kind = Kind::Next;
    std::shared_ptr<const StateFormula> arg1;  // Next target / until left
    std::shared_ptr<const StateFormula> arg2;  // until right
    std::optional<long> bound;                 // until only
};

using SfPtr = std::shared_ptr<const StateFormula>;
using PfPtr = std::shared_ptr<const PathFormula>;

/// One line of a `.qctl` property file.
struct Query {
    enum class Kind {
        Compare,  // Q~e[PF]           -> bool
        Prob,     // qprob(Q=?[PF], r) or bare Q=?[PF] -> real
        Eval,     // qeval(Q=?[PF], r) -> density matrix
    };

    Kind kind = Kind::Prob;
    SfPtr compare;  // Compare: a QCompare state formula
    PfPtr path;     // Prob / Eval
    std::string text;  // the source line, echoed in results
};

/// Parses one property. Atoms are variable names, `s = k` state predicates,
/// `terminated`, `true` and `false`; operators are `!`, `&` and parentheses.
Query parse_formula(std::string_view text);

/// Parses a property file: one formula per line, `#` comments.
std::vector<Query> parse_property_file(std::string_view text);

}  // namespace quipmc::qctl
