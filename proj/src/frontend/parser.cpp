#include "frontend/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

#include "frontend/gates.hpp"

namespace quipmc::frontend {

namespace {

using linalg::CMatrix;
using linalg::Complex;

constexpr int kMaxVars = 62;  // Env is stored as a 64-bit mask

enum class TokKind { Ident, Number, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    SourcePos pos;
};

bool is_reserved(const std::string& s) {
    static const std::set<std::string> words = {"qubits", "gates",        "body",
                                                "exitOn", "if",           "else",
                                                "measure", "dynamic_lift"};
    return words.count(s) > 0;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token t;
        t.pos = pos();
        if (i_ >= src_.size()) return t;
        const char c = src_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = TokKind::Ident;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                t.text += advance();
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
            t.kind = TokKind::Number;
            while (i_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[i_])) || src_[i_] == '.'))
                t.text += advance();
            if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
                std::size_t save = i_;
                std::string exp;
                exp += advance();
                if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) exp += advance();
                if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                    while (i_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[i_])))
                        exp += advance();
                    t.text += exp;
                } else {
                    i_ = save;  // `e` belongs to the next token
                }
            }
            return t;
        }
        t.kind = TokKind::Punct;
        if (c == '<' && i_ + 1 < src_.size() && src_[i_ + 1] == '-') {
            t.text = "<-";
            i_ += 2;
            col_ += 2;
            return t;
        }
        t.text = advance();
        return t;
    }

private:
    SourcePos pos() const { return SourcePos{line_, col_}; }

    char advance() {
        const char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        while (i_ < src_.size()) {
            const char c = src_[i_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
                continue;
            }
            if (c == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
                continue;
            }
            if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
                continue;
            }
            break;
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) {
        cur_ = lexer_.next();
        program_.gates = builtin_gates();
    }

    Program parse() {
        skip_semis();
        expect_ident("qubits");
        while (cur_.kind == TokKind::Ident && !is_reserved(cur_.text)) {
            register_qubit(cur_.text, cur_.pos);
            bump();
        }
        if (program_.qubits.empty())
            throw Error(ErrorKind::Syntax, cur_.pos, "expected at least one qubit name");

        skip_semis();
        if (at_ident("gates")) parse_gates_section();

        skip_semis();
        expect_ident("body");
        expect_punct("{");
        program_.body = parse_body();
        if (program_.body.instrs.empty())
            throw Error(ErrorKind::Syntax, cur_.pos, "program body must not be empty");

        skip_semis();
        if (at_ident("exitOn")) {
            bump();
            const Token guard = expect_any_ident("exit guard name");
            const int idx = program_.var_index(guard.text);
            if (idx < 0)
                throw Error(ErrorKind::UnknownVariable, guard.pos,
                            "exit guard '" + guard.text + "' is never defined by a dynamic_lift");
            if (program_.vars[idx].kind != VarKind::Bool)
                throw Error(ErrorKind::UnknownVariable, guard.pos,
                            "exit guard '" + guard.text + "' is a bit, not a boolean");
            program_.exit_guard = idx;
        }

        skip_semis();
        if (cur_.kind != TokKind::End)
            throw Error(ErrorKind::Syntax, cur_.pos,
                        "unexpected trailing input '" + cur_.text + "'");
        return std::move(program_);
    }

private:
    void bump() { cur_ = lexer_.next(); }

    // `;` doubles as an optional instruction separator and the matrix row
    // separator; outside matrix literals it is skipped.
    void skip_semis() {
        while (at_punct(";")) bump();
    }

    bool at_ident(const std::string& word) const {
        return cur_.kind == TokKind::Ident && cur_.text == word;
    }
    bool at_punct(const std::string& p) const {
        return cur_.kind == TokKind::Punct && cur_.text == p;
    }

    void expect_ident(const std::string& word) {
        if (!at_ident(word))
            throw Error(ErrorKind::Syntax, cur_.pos,
                        "expected '" + word + "', found '" + cur_.text + "'");
        bump();
    }

    Token expect_any_ident(const std::string& what) {
        if (cur_.kind != TokKind::Ident)
            throw Error(ErrorKind::Syntax, cur_.pos, "expected " + what);
        Token t = cur_;
        bump();
        return t;
    }

    void expect_punct(const std::string& p) {
        if (!at_punct(p))
            throw Error(ErrorKind::Syntax, cur_.pos,
                        "expected '" + p + "', found '" + cur_.text + "'");
        bump();
    }

    void register_qubit(const std::string& name, SourcePos pos) {
        if (program_.qubit_index(name) >= 0)
            throw Error(ErrorKind::DuplicateName, pos, "duplicate qubit '" + name + "'");
        if (program_.qubit_count() >= 10)
            throw Error(ErrorKind::DimensionCap, pos, "register is capped at 10 qubits");
        program_.qubits.push_back(name);
    }

    int register_var(const std::string& name, VarKind kind, SourcePos pos) {
        if (program_.qubit_index(name) >= 0)
            throw Error(ErrorKind::DuplicateName, pos,
                        "'" + name + "' already names a qubit");
        const int idx = program_.var_index(name);
        if (idx >= 0) {
            if (program_.vars[idx].kind != kind)
                throw Error(ErrorKind::DuplicateName, pos,
                            "'" + name + "' is already declared with the other kind");
            return idx;
        }
        if (static_cast<int>(program_.vars.size()) >= kMaxVars)
            throw Error(ErrorKind::BadArgument, pos, "too many classical variables");
        program_.vars.push_back(VarName{name, kind});
        return static_cast<int>(program_.vars.size()) - 1;
    }

    int lookup_qubit(const Token& t) const {
        const int idx = program_.qubit_index(t.text);
        if (idx < 0)
            throw Error(ErrorKind::UnknownVariable, t.pos, "unknown qubit '" + t.text + "'");
        return idx;
    }

    void parse_gates_section() {
        bump();  // gates
        expect_punct("{");
        skip_semis();
        while (!at_punct("}")) {
            const Token name = expect_any_ident("gate name");
            if (is_reserved(name.text))
                throw Error(ErrorKind::Syntax, name.pos,
                            "'" + name.text + "' is a reserved word");
            if (resolve_builtin_name(name.text) || program_.qubit_index(name.text) >= 0)
                throw Error(ErrorKind::DuplicateName, name.pos,
                            "gate '" + name.text + "' shadows an existing name");
            for (const auto& g : program_.gates)
                if (g.name == name.text)
                    throw Error(ErrorKind::DuplicateName, name.pos,
                                "gate '" + name.text + "' is already defined");
            expect_punct("=");
            CMatrix m = parse_matrix();
            int arity = 0;
            while ((std::size_t{1} << arity) < m.rows()) ++arity;
            if ((std::size_t{1} << arity) != m.rows() || m.rows() != m.cols())
                throw Error(ErrorKind::Syntax, name.pos,
                            "gate matrix must be square with power-of-two dimension");
            if (!m.is_unitary(1e-10))
                throw Error(ErrorKind::NotUnitary, name.pos,
                            "gate '" + name.text + "' is not unitary within 1e-10");
            program_.gates.push_back(GateRef{name.text, arity, std::move(m), false});
            skip_semis();
        }
        bump();  // }
    }

    CMatrix parse_matrix() {
        expect_punct("[");
        std::vector<std::vector<Complex>> rows;
        rows.emplace_back();
        while (!at_punct("]")) {
            rows.back().push_back(parse_complex());
            if (at_punct(",")) {
                bump();
            } else if (at_punct(";")) {
                bump();
                rows.emplace_back();
            } else if (!at_punct("]")) {
                throw Error(ErrorKind::Syntax, cur_.pos, "expected ',', ';' or ']' in matrix");
            }
        }
        bump();  // ]
        if (rows.back().empty() && rows.size() > 1) rows.pop_back();
        const std::size_t cols = rows.front().size();
        std::vector<Complex> entries;
        for (const auto& r : rows) {
            if (r.size() != cols)
                throw Error(ErrorKind::Syntax, cur_.pos, "ragged matrix rows");
            entries.insert(entries.end(), r.begin(), r.end());
        }
        return CMatrix(rows.size(), cols, std::move(entries));
    }

    // number ['i'] | 'i', optionally followed by +/- and an imaginary part.
    Complex parse_complex() {
        double sign = 1.0;
        if (at_punct("-")) {
            sign = -1.0;
            bump();
        } else if (at_punct("+")) {
            bump();
        }
        auto [value, imag] = parse_complex_part();
        double re = 0.0, im = 0.0;
        (imag ? im : re) = sign * value;
        if (!imag && (at_punct("+") || at_punct("-"))) {
            const double sign2 = at_punct("+") ? 1.0 : -1.0;
            bump();
            auto [value2, imag2] = parse_complex_part();
            if (!imag2)
                throw Error(ErrorKind::Syntax, cur_.pos,
                            "second term of a complex literal must be imaginary");
            im = sign2 * value2;
        }
        return Complex{re, im};
    }

    std::pair<double, bool> parse_complex_part() {
        if (cur_.kind == TokKind::Ident && cur_.text == "i") {
            bump();
            return {1.0, true};
        }
        if (cur_.kind != TokKind::Number)
            throw Error(ErrorKind::Syntax, cur_.pos, "expected a numeric literal");
        const double v = std::strtod(cur_.text.c_str(), nullptr);
        bump();
        if (cur_.kind == TokKind::Ident && cur_.text == "i") {
            bump();
            return {v, true};
        }
        return {v, false};
    }

    Body parse_body() {
        Body body;
        skip_semis();
        while (!at_punct("}")) {
            if (cur_.kind == TokKind::End)
                throw Error(ErrorKind::Syntax, cur_.pos, "unterminated body; expected '}'");
            body.instrs.push_back(parse_instr());
            skip_semis();
        }
        bump();  // }
        return body;
    }

    Instr parse_instr() {
        const Token head = cur_;
        if (head.kind != TokKind::Ident)
            throw Error(ErrorKind::Syntax, head.pos,
                        "expected an instruction, found '" + head.text + "'");

        if (head.text == "if") return parse_if(head.pos);

        if (head.text == "reset_at") {
            bump();
            const Token q = expect_any_ident("qubit name");
            return Instr{ResetInstr{lookup_qubit(q)}, head.pos};
        }

        if (head.text.size() > 3 && head.text.rfind("_at") == head.text.size() - 3)
            return parse_gate(head);

        // Otherwise this must be `name <- measure q` or `name <- dynamic_lift m`.
        bump();
        if (!at_punct("<-"))
            throw Error(ErrorKind::Syntax, cur_.pos,
                        "expected '<-' after '" + head.text + "'");
        bump();
        if (at_ident("measure")) {
            bump();
            const Token q = expect_any_ident("qubit name");
            const int qubit = lookup_qubit(q);
            const int out = register_var(head.text, VarKind::Bit, head.pos);
            return Instr{MeasureInstr{out, qubit}, head.pos};
        }
        if (at_ident("dynamic_lift")) {
            bump();
            const Token src = expect_any_ident("bit name");
            const int in = program_.var_index(src.text);
            if (in < 0 || program_.vars[in].kind != VarKind::Bit)
                throw Error(ErrorKind::UnknownVariable, src.pos,
                            "dynamic_lift source '" + src.text + "' is not a known bit");
            const int out = register_var(head.text, VarKind::Bool, head.pos);
            return Instr{LiftInstr{out, in}, head.pos};
        }
        throw Error(ErrorKind::Syntax, cur_.pos, "expected 'measure' or 'dynamic_lift'");
    }

    Instr parse_gate(const Token& head) {
        bump();
        const std::string surface = head.text.substr(0, head.text.size() - 3);
        int gate_idx = -1;
        for (std::size_t i = 0; i < program_.gates.size(); ++i)
            if (!program_.gates[i].builtin && program_.gates[i].name == surface)
                gate_idx = static_cast<int>(i);
        if (gate_idx < 0) {
            if (auto canonical = resolve_builtin_name(surface)) {
                for (std::size_t i = 0; i < program_.gates.size(); ++i)
                    if (program_.gates[i].builtin && program_.gates[i].name == *canonical)
                        gate_idx = static_cast<int>(i);
            }
        }
        if (gate_idx < 0)
            throw Error(ErrorKind::UnknownGate, head.pos, "unknown gate '" + surface + "'");

        std::vector<int> targets;
        if (at_punct("[")) {
            bump();
            while (true) {
                const Token q = expect_any_ident("qubit name");
                targets.push_back(lookup_qubit(q));
                if (at_punct(",")) {
                    bump();
                    continue;
                }
                expect_punct("]");
                break;
            }
        } else {
            const Token q = expect_any_ident("qubit name");
            targets.push_back(lookup_qubit(q));
        }

        const GateRef& gate = program_.gates[gate_idx];
        if (static_cast<int>(targets.size()) != gate.arity)
            throw Error(ErrorKind::ArityMismatch, head.pos,
                        "gate '" + surface + "' expects " + std::to_string(gate.arity) +
                            " target(s), got " + std::to_string(targets.size()));
        for (std::size_t i = 0; i < targets.size(); ++i)
            for (std::size_t j = i + 1; j < targets.size(); ++j)
                if (targets[i] == targets[j])
                    throw Error(ErrorKind::DuplicateTarget, head.pos,
                                "duplicate target qubit in gate '" + surface + "'");
        return Instr{GateInstr{gate_idx, std::move(targets)}, head.pos};
    }

    Instr parse_if(SourcePos pos) {
        bump();  // if
        bool parens = at_punct("(");
        if (parens) bump();
        const Token guard = expect_any_ident("guard name");
        const int idx = program_.var_index(guard.text);
        if (idx < 0 || program_.vars[idx].kind != VarKind::Bool)
            throw Error(ErrorKind::UnknownVariable, guard.pos,
                        "guard '" + guard.text + "' is not a known boolean");
        if (parens) expect_punct(")");
        expect_punct("{");
        Body then_body = parse_body();
        expect_ident("else");
        expect_punct("{");
        Body else_body = parse_body();
        if (then_body.instrs.empty() || else_body.instrs.empty())
            throw Error(ErrorKind::Syntax, pos, "if/else branches must not be empty");
        return Instr{IfElseInstr{idx, std::move(then_body), std::move(else_body)}, pos};
    }

    Lexer lexer_;
    Token cur_;
    Program program_;
};

}  // namespace

Program parse_program(std::string_view source) { return Parser(source).parse(); }

}  // namespace quipmc::frontend
