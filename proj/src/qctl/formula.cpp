#include "qctl/formula.hpp"

#include <cctype>
#include <cstdlib>

#include "support/error.hpp"

namespace quipmc::qctl {

std::string rel_to_string(Rel rel) {
    switch (rel) {
        case Rel::Le: return "<=";
        case Rel::Ge: return ">=";
        case Rel::Eq: return "=";
        case Rel::Lt: return "<";
        case Rel::Gt: return ">";
    }
    return "?";
}

namespace {

struct Cursor {
    std::string_view text;
    std::size_t i = 0;

    void skip_ws() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < text.size() && text[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    bool eat(std::string_view s) {
        skip_ws();
        if (text.substr(i, s.size()) == s) {
            i += s.size();
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return i < text.size() ? text[i] : '\0';
    }
    void expect(char c, const char* what) {
        if (!eat(c))
            throw Error(ErrorKind::Syntax,
                        std::string("property: expected '") + c + "' " + what);
    }

    std::string ident() {
        skip_ws();
        std::string out;
        while (i < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
            out += text[i++];
        if (out.empty())
            throw Error(ErrorKind::Syntax, "property: expected an identifier");
        return out;
    }

    long integer() {
        skip_ws();
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw Error(ErrorKind::Syntax, "property: expected an integer");
        return std::strtol(std::string(text.substr(start, i - start)).c_str(), nullptr, 10);
    }

    double number() {
        skip_ws();
        std::size_t start = i;
        while (i < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                text[i] == 'e' || text[i] == 'E' ||
                ((text[i] == '+' || text[i] == '-') && i > start &&
                 (text[i - 1] == 'e' || text[i - 1] == 'E'))))
            ++i;
        if (i == start) throw Error(ErrorKind::Syntax, "property: expected a number");
        return std::strtod(std::string(text.substr(start, i - start)).c_str(), nullptr);
    }
};

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : cur_{text} {}

    Query parse_query() {
        Query q;
        cur_.skip_ws();
        if (cur_.eat("qprob")) {
            cur_.expect('(', "after qprob");
            q.kind = Query::Kind::Prob;
            q.path = parse_qquery_body();
            eat_rho_argument();
            cur_.expect(')', "closing qprob");
        } else if (cur_.eat("qeval")) {
            cur_.expect('(', "after qeval");
            q.kind = Query::Kind::Eval;
            q.path = parse_qquery_body();
            eat_rho_argument();
            cur_.expect(')', "closing qeval");
        } else {
            // Q=?[PF] evaluates as a probability; Q~e[PF] as a bool.
            SfPtr sf = parse_q_operator(true);
            if (sf) {
                q.kind = Query::Kind::Compare;
                q.compare = sf;
            } else {
                q.kind = Query::Kind::Prob;
                q.path = pending_query_path_;
            }
        }
        cur_.skip_ws();
        while (cur_.eat(';')) cur_.skip_ws();
        if (cur_.i != cur_.text.size())
            throw Error(ErrorKind::Syntax, "property: trailing input after formula");
        return q;
    }

private:
    // Q=?[PF] inside qprob/qeval.
    PfPtr parse_qquery_body() {
        if (!cur_.eat('Q'))
            throw Error(ErrorKind::Syntax, "property: expected Q=? query");
        if (!cur_.eat("=?"))
            throw Error(ErrorKind::Syntax, "property: expected '=?' after Q");
        cur_.expect('[', "before path formula");
        PfPtr pf = parse_path();
        cur_.expect(']', "after path formula");
        return pf;
    }

    // Property files may pass the initial state as a trailing argument
    // (e.g. `qeval(Q=? [...], r)`); the name is bound by --init and ignored.
    void eat_rho_argument() {
        if (cur_.eat(',')) cur_.ident();
    }

    // Parses Q~e[PF] or Q=?[PF]. For Q=?, returns nullptr and stores the
    // path in pending_query_path_ (only legal at top level).
    SfPtr parse_q_operator(bool allow_query) {
        if (!cur_.eat('Q'))
            throw Error(ErrorKind::Syntax, "property: expected Q operator");
        Rel rel;
        if (cur_.eat("=?")) {
            if (!allow_query)
                throw Error(ErrorKind::Syntax, "property: Q=? cannot be nested");
            cur_.expect('[', "before path formula");
            pending_query_path_ = parse_path();
            cur_.expect(']', "after path formula");
            return nullptr;
        }
        if (cur_.eat(">=")) rel = Rel::Ge;
        else if (cur_.eat("<=")) rel = Rel::Le;
        else if (cur_.eat('=')) rel = Rel::Eq;
        else if (cur_.eat('>')) rel = Rel::Gt;
        else if (cur_.eat('<')) rel = Rel::Lt;
        else throw Error(ErrorKind::Syntax, "property: expected a relation after Q");
        const double bound = cur_.number();
        cur_.expect('[', "before path formula");
        PfPtr pf = parse_path();
        cur_.expect(']', "after path formula");
        auto sf = std::make_shared<StateFormula>();
        sf->kind = StateFormula::Kind::QCompare;
        sf->rel = rel;
        sf->bound = bound;
        sf->path = pf;
        return sf;
    }

    PfPtr parse_path() {
        auto pf = std::make_shared<PathFormula>();
        if (lookahead_operator('X')) {
            cur_.skip_ws();
            ++cur_.i;
            pf->kind = PathFormula::Kind::Next;
            pf->arg1 = parse_sf();
            return pf;
        }
        if (lookahead_operator('F')) {
            cur_.skip_ws();
            ++cur_.i;
            pf->kind = PathFormula::Kind::Until;
            pf->bound = parse_optional_bound();
            auto t = std::make_shared<StateFormula>();
            t->kind = StateFormula::Kind::True;
            pf->arg1 = t;
            pf->arg2 = parse_sf();
            return pf;
        }
        pf->arg1 = parse_sf();
        cur_.skip_ws();
        if (!cur_.eat('U'))
            throw Error(ErrorKind::Syntax, "property: expected 'U' in path formula");
        pf->kind = PathFormula::Kind::Until;
        pf->bound = parse_optional_bound();
        pf->arg2 = parse_sf();
        return pf;
    }

    std::optional<long> parse_optional_bound() {
        if (cur_.eat("<=")) return cur_.integer();
        return std::nullopt;
    }

    // `X` / `F` act as path operators only when not part of an identifier.
    bool lookahead_operator(char op) {
        cur_.skip_ws();
        if (cur_.i >= cur_.text.size() || cur_.text[cur_.i] != op) return false;
        const std::size_t after = cur_.i + 1;
        if (after < cur_.text.size()) {
            const char c = cur_.text[after];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        return true;
    }

    SfPtr parse_sf() { return parse_and(); }

    SfPtr parse_and() {
        SfPtr left = parse_unary();
        while (cur_.peek() == '&') {
            cur_.eat('&');
            auto node = std::make_shared<StateFormula>();
            node->kind = StateFormula::Kind::And;
            node->lhs = left;
            node->rhs = parse_unary();
            left = node;
        }
        return left;
    }

    SfPtr parse_unary() {
        if (cur_.eat('!')) {
            auto node = std::make_shared<StateFormula>();
            node->kind = StateFormula::Kind::Not;
            node->lhs = parse_unary();
            return node;
        }
        if (cur_.eat('(')) {
            SfPtr inner = parse_sf();
            cur_.expect(')', "closing parenthesis");
            return inner;
        }
        if (cur_.peek() == 'Q' && lookahead_operator('Q')) {
            return parse_q_operator(false);
        }
        auto node = std::make_shared<StateFormula>();
        const std::string name = cur_.ident();
        if (name == "true") {
            node->kind = StateFormula::Kind::True;
        } else if (name == "false") {
            node->kind = StateFormula::Kind::False;
        } else if (name == "terminated") {
            node->kind = StateFormula::Kind::Terminated;
        } else if (name == "s" && cur_.peek() == '=') {
            cur_.eat('=');
            node->kind = StateFormula::Kind::AtomState;
            node->state_index = cur_.integer();
        } else {
            node->kind = StateFormula::Kind::AtomVar;
            node->var = name;
        }
        return node;
    }

    Cursor cur_;
    PfPtr pending_query_path_;
};

}  // namespace

Query parse_formula(std::string_view text) {
    FormulaParser parser(text);
    Query q = parser.parse_query();
    // Canonical echo: the input line minus surrounding whitespace/semicolon.
    std::string trimmed(text);
    while (!trimmed.empty() && (std::isspace(static_cast<unsigned char>(trimmed.back())) ||
                                trimmed.back() == ';'))
        trimmed.pop_back();
    std::size_t start = 0;
    while (start < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[start])))
        ++start;
    q.text = trimmed.substr(start);
    return q;
}

std::vector<Query> parse_property_file(std::string_view text) {
    std::vector<Query> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;

        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) {
            if (end == text.size()) break;
            continue;
        }
        out.push_back(parse_formula(line));
        if (end == text.size()) break;
    }
    return out;
}

}  // namespace quipmc::qctl
