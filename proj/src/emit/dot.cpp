#include "emit/dot.hpp"

#include <sstream>

#include "emit/qpmc.hpp"

namespace quipmc::emit {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string env_text(const semantics::Qmc& chain, int state) {
    const auto labels = chain.label_set(state);
    if (labels.empty()) return "O";
    std::string out = "{";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) out += ",";
        out += chain.source().vars[labels[i]].name;
    }
    return out + "}";
}

std::string residual_summary(const semantics::Qmc& chain, int state) {
    const auto& s = chain.states[state];
    if (s.empty()) return "_";
    std::string head = frontend::instr_to_string(*s.residual.front(), chain.source());
    if (head.size() > 40) head = head.substr(0, 37) + "...";
    if (s.residual.size() > 1) head += " ...+" + std::to_string(s.residual.size() - 1);
    return head;
}

}  // namespace

std::string emit_dot(const semantics::Qmc& chain) {
    const auto names = edge_constant_names(chain);
    std::ostringstream os;
    os << "digraph qmc {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=ellipse];\n";
    for (std::size_t s = 0; s < chain.states.size(); ++s) {
        os << "  s" << s << " [label=\"("
           << escape(residual_summary(chain, static_cast<int>(s))) << ", "
           << escape(env_text(chain, static_cast<int>(s))) << ")\"];\n";
    }
    for (std::size_t s = 0; s < chain.states.size(); ++s) {
        for (std::size_t e = 0; e < chain.edges[s].size(); ++e) {
            const auto& edge = chain.edges[s][e];
            os << "  s" << s << " -> s" << edge.to << " [label=\"" << names[s][e] << "\"";
            if (edge.exit_loopback) os << ", style=dashed";
            os << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace quipmc::emit
