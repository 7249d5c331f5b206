#include "emit/qpmc.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "support/format.hpp"

namespace quipmc::emit {

using linalg::CMatrix;
using linalg::Complex;
using linalg::Superoperator;

namespace {

bool same_superop(const Superoperator& a, const Superoperator& b, double tol) {
    if (a.dim != b.dim || a.kraus.size() != b.kraus.size()) return false;
    for (std::size_t i = 0; i < a.kraus.size(); ++i)
        if (a.kraus[i].max_diff(b.kraus[i]) > tol) return false;
    return true;
}

bool is_projector(const CMatrix& k) {
    return k.is_hermitian(1e-12) && (k * k).max_diff(k) <= 1e-12;
}

std::string matrix_literal(const CMatrix& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r > 0) out += "; ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ", ";
            out += format_complex(m.at(r, c));
        }
    }
    return out + "]";
}

class ConstantTable {
public:
    /// Returns the constant name for `op`, registering it on first use.
    std::string name_for(const Superoperator& op) {
        for (const auto& [name, existing] : entries_)
            if (same_superop(existing, op, 1e-12)) return name;
        std::string name;
        if (op.kraus.size() > 1) {
            name = "K" + std::to_string(kraus_count_++);
        } else if (op.kraus[0].max_diff(CMatrix::identity(op.dim)) <= 1e-12) {
            name = "ID";
        } else if (is_projector(op.kraus[0])) {
            name = "M" + std::to_string(measure_count_++);
        } else {
            name = "U" + std::to_string(unitary_count_++);
        }
        entries_.emplace_back(name, op);
        return name;
    }

    const std::vector<std::pair<std::string, Superoperator>>& entries() const {
        return entries_;
    }

private:
    std::vector<std::pair<std::string, Superoperator>> entries_;
    int measure_count_ = 0;
    int unitary_count_ = 0;
    int kraus_count_ = 0;
};

}  // namespace

std::string emit_qpmc(const semantics::Qmc& chain) {
    ConstantTable constants;
    // Commands first so constants appear in first-use order.
    std::ostringstream commands;
    for (std::size_t s = 0; s < chain.states.size(); ++s) {
        commands << "  [] (s = " << s << ") -> ";
        const auto& edges = chain.edges[s];
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (e > 0) commands << " + ";
            commands << "<<" << constants.name_for(edges[e].op) << ">> : (s' = "
                     << edges[e].to << ")";
        }
        commands << ";\n";
    }

    std::ostringstream out;
    out << "qmc\n";
    out << "// " << chain.num_qubits << " qubit(s), " << chain.states.size()
        << " state(s)\n\n";
    for (const auto& [name, op] : constants.entries()) {
        if (op.kraus.size() == 1) {
            out << "const matrix " << name << " = " << matrix_literal(op.kraus[0]) << ";\n";
        } else {
            out << "const superoperator " << name << " = kraus(";
            for (std::size_t i = 0; i < op.kraus.size(); ++i) {
                if (i > 0) out << ", ";
                out << matrix_literal(op.kraus[i]);
            }
            out << ");\n";
        }
    }

    out << "\nmodule chain\n";
    out << "  s: [0.." << (chain.states.empty() ? 0 : chain.states.size() - 1)
        << "] init 0;\n\n";
    out << commands.str();
    out << "endmodule\n";

    std::ostringstream labels;
    const auto& vars = chain.source().vars;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        std::vector<int> where;
        for (std::size_t s = 0; s < chain.states.size(); ++s)
            if (chain.states[s].env >> v & 1) where.push_back(static_cast<int>(s));
        if (where.empty()) continue;
        labels << "label \"" << vars[v].name << "\" = ";
        for (std::size_t i = 0; i < where.size(); ++i) {
            if (i > 0) labels << " | ";
            labels << "(s = " << where[i] << ")";
        }
        labels << ";\n";
    }
    const std::string label_text = labels.str();
    if (!label_text.empty()) out << "\n" << label_text;
    return out.str();
}

namespace {

class ModelReader {
public:
    explicit ModelReader(std::string_view text) : text_(text) {}

    QpmcModel read() {
        expect_word("qmc");
        while (true) {
            skip_ws();
            if (at_word("const")) {
                read_constant();
            } else if (at_word("module")) {
                read_module();
            } else if (at_word("label")) {
                read_label();
            } else {
                break;
            }
        }
        skip_ws();
        if (i_ < text_.size())
            throw Error(ErrorKind::Syntax, "qpmc reader: trailing input");
        model_.num_states = max_state_ + 1;
        return std::move(model_);
    }

private:
    void skip_ws() {
        while (i_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[i_]))) {
                ++i_;
            } else if (text_[i_] == '/' && i_ + 1 < text_.size() && text_[i_ + 1] == '/') {
                while (i_ < text_.size() && text_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
    }

    bool at_word(std::string_view w) {
        skip_ws();
        if (text_.substr(i_, w.size()) != w) return false;
        const std::size_t after = i_ + w.size();
        if (after < text_.size()) {
            const char c = text_[after];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        return true;
    }

    void expect_word(std::string_view w) {
        if (!at_word(w))
            throw Error(ErrorKind::Syntax,
                        "qpmc reader: expected '" + std::string(w) + "'");
        i_ += w.size();
    }

    void expect_char(char c) {
        skip_ws();
        if (i_ >= text_.size() || text_[i_] != c)
            throw Error(ErrorKind::Syntax,
                        std::string("qpmc reader: expected '") + c + "'");
        ++i_;
    }

    bool try_char(char c) {
        skip_ws();
        if (i_ < text_.size() && text_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    std::string word() {
        skip_ws();
        std::string out;
        while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
                                     text_[i_] == '_'))
            out += text_[i_++];
        if (out.empty()) throw Error(ErrorKind::Syntax, "qpmc reader: expected a word");
        return out;
    }

    long integer() {
        skip_ws();
        std::size_t start = i_;
        while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
        if (i_ == start) throw Error(ErrorKind::Syntax, "qpmc reader: expected an integer");
        return std::strtol(std::string(text_.substr(start, i_ - start)).c_str(), nullptr, 10);
    }

    Complex complex_value() {
        skip_ws();
        std::size_t start = i_;
        auto scan_number = [&]() {
            if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) ++i_;
            while (i_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.'))
                ++i_;
            if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
                ++i_;
                if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) ++i_;
                while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_])))
                    ++i_;
            }
        };
        scan_number();
        double first = std::strtod(std::string(text_.substr(start, i_ - start)).c_str(), nullptr);
        if (i_ < text_.size() && text_[i_] == 'i') {
            ++i_;
            return Complex{0.0, first};
        }
        if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) {
            std::size_t second_start = i_;
            scan_number();
            double second =
                std::strtod(std::string(text_.substr(second_start, i_ - second_start)).c_str(),
                            nullptr);
            if (i_ >= text_.size() || text_[i_] != 'i')
                throw Error(ErrorKind::Syntax, "qpmc reader: expected imaginary part");
            ++i_;
            return Complex{first, second};
        }
        return Complex{first, 0.0};
    }

    CMatrix matrix_literal() {
        expect_char('[');
        std::vector<std::vector<Complex>> rows;
        rows.emplace_back();
        while (!try_char(']')) {
            rows.back().push_back(complex_value());
            if (try_char(',')) continue;
            if (try_char(';')) rows.emplace_back();
        }
        if (rows.back().empty() && rows.size() > 1) rows.pop_back();
        const std::size_t cols = rows.front().size();
        std::vector<Complex> entries;
        for (const auto& r : rows) {
            if (r.size() != cols)
                throw Error(ErrorKind::Syntax, "qpmc reader: ragged matrix");
            entries.insert(entries.end(), r.begin(), r.end());
        }
        return CMatrix(rows.size(), cols, std::move(entries));
    }

    void read_constant() {
        expect_word("const");
        const std::string kind = word();
        const std::string name = word();
        expect_char('=');
        if (kind == "matrix") {
            CMatrix m = matrix_literal();
            const std::size_t dim = m.rows();
            constants_[name] = Superoperator(dim, {std::move(m)});
        } else if (kind == "superoperator") {
            expect_word("kraus");
            expect_char('(');
            std::vector<CMatrix> ks;
            ks.push_back(matrix_literal());
            while (try_char(',')) ks.push_back(matrix_literal());
            expect_char(')');
            const std::size_t dim = ks.front().rows();
            constants_[name] = Superoperator(dim, std::move(ks));
        } else {
            throw Error(ErrorKind::Syntax, "qpmc reader: unknown constant kind " + kind);
        }
        expect_char(';');
    }

    void read_module() {
        expect_word("module");
        word();  // module name
        word();  // state variable name
        expect_char(':');
        expect_char('[');
        integer();
        expect_char('.');
        expect_char('.');
        max_state_ = static_cast<int>(integer());
        expect_char(']');
        expect_word("init");
        model_.init_state = static_cast<int>(integer());
        expect_char(';');

        while (try_char('[')) {
            expect_char(']');
            expect_char('(');
            word();  // s
            expect_char('=');
            const int from = static_cast<int>(integer());
            expect_char(')');
            expect_char('-');
            expect_char('>');
            do {
                expect_char('<');
                expect_char('<');
                const std::string cname = word();
                expect_char('>');
                expect_char('>');
                expect_char(':');
                expect_char('(');
                word();  // s'
                // `s'` lexes as word "s" + the prime character.
                if (try_char('\'')) {
                }
                expect_char('=');
                const int to = static_cast<int>(integer());
                expect_char(')');
                auto it = constants_.find(cname);
                if (it == constants_.end())
                    throw Error(ErrorKind::Syntax,
                                "qpmc reader: undefined constant " + cname);
                model_.transitions[{from, to}] = it->second;
                if (model_.dim == 0) model_.dim = it->second.dim;
            } while (try_char('+'));
            expect_char(';');
        }
        expect_word("endmodule");
    }

    void read_label() {
        expect_word("label");
        expect_char('"');
        std::string name;
        while (i_ < text_.size() && text_[i_] != '"') name += text_[i_++];
        expect_char('"');
        expect_char('=');
        std::set<int>& states = model_.labels[name];
        do {
            expect_char('(');
            word();  // s
            expect_char('=');
            states.insert(static_cast<int>(integer()));
            expect_char(')');
        } while (try_char('|'));
        expect_char(';');
    }

    std::string_view text_;
    std::size_t i_ = 0;
    QpmcModel model_;
    std::map<std::string, Superoperator> constants_;
    int max_state_ = -1;
};

}  // namespace

QpmcModel read_qpmc(std::string_view text) { return ModelReader(text).read(); }

std::vector<std::vector<std::string>> edge_constant_names(const semantics::Qmc& chain) {
    ConstantTable constants;
    std::vector<std::vector<std::string>> out(chain.states.size());
    for (std::size_t s = 0; s < chain.states.size(); ++s)
        for (const auto& e : chain.edges[s]) out[s].push_back(constants.name_for(e.op));
    return out;
}

bool model_matches_chain(const QpmcModel& model, const semantics::Qmc& chain, double tol) {
    if (model.num_states != static_cast<int>(chain.states.size())) return false;
    if (model.init_state != 0) return false;

    std::size_t chain_edges = 0;
    for (std::size_t s = 0; s < chain.states.size(); ++s) {
        for (const auto& e : chain.edges[s]) {
            auto it = model.transitions.find({static_cast<int>(s), e.to});
            if (it == model.transitions.end()) return false;
            if (!same_superop(it->second, e.op, tol)) return false;
            ++chain_edges;
        }
    }
    if (chain_edges != model.transitions.size()) return false;

    const auto& vars = chain.source().vars;
    std::map<std::string, std::set<int>> chain_labels;
    for (std::size_t s = 0; s < chain.states.size(); ++s)
        for (int v : chain.label_set(static_cast<int>(s)))
            chain_labels[vars[v].name].insert(static_cast<int>(s));
    return chain_labels == model.labels;
}

}  // namespace quipmc::emit
