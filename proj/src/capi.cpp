#include "quipmc.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "emit/dot.hpp"
#include "emit/qpmc.hpp"
#include "frontend/parser.hpp"
#include "frontend/validate.hpp"
#include "qctl/eval.hpp"
#include "qctl/formula.hpp"
#include "refsim/simulate.hpp"
#include "semantics/chain.hpp"
#include "support/init_spec.hpp"

using json = nlohmann::json;

namespace {

thread_local std::string g_last_error;

qpe_status status_of(const quipmc::Error& e) {
    using quipmc::ErrorKind;
    switch (e.kind()) {
        case ErrorKind::Syntax:
        case ErrorKind::UnknownGate:
        case ErrorKind::ArityMismatch:
        case ErrorKind::DuplicateTarget:
        case ErrorKind::UnknownVariable:
        case ErrorKind::DuplicateName:
        case ErrorKind::NotUnitary:
            return QPE_ERR_SYNTAX;
        case ErrorKind::UndefinedGuard:
            return QPE_ERR_VALIDATION;
        case ErrorKind::DimensionMismatch:
        case ErrorKind::DimensionCap:
        case ErrorKind::IndexOutOfRange:
            return QPE_ERR_DIMENSION;
        case ErrorKind::StateExplosion:
            return QPE_ERR_STATE_EXPLOSION;
        case ErrorKind::BranchExplosion:
            return QPE_ERR_BRANCH_EXPLOSION;
        case ErrorKind::NonConvergence:
            return QPE_ERR_NO_CONVERGENCE;
        case ErrorKind::Io:
        case ErrorKind::BadArgument:
            return QPE_ERR_BAD_ARG;
        case ErrorKind::Internal:
            return QPE_ERR_INTERNAL;
    }
    return QPE_ERR_INTERNAL;
}

template <typename Fn>
qpe_status guarded(Fn&& fn) {
    try {
        fn();
        return QPE_OK;
    } catch (const quipmc::Error& e) {
        g_last_error = std::string(quipmc::error_kind_name(e.kind())) + ": " + e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QPE_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json matrix_to_json(const quipmc::linalg::CMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m.at(r, c).real(), m.at(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

struct qpe_program {
    quipmc::frontend::CheckedProgram checked;
};

struct qpe_chain {
    quipmc::semantics::Qmc chain;
};

extern "C" {

qpe_status qpe_program_parse(const char* source, qpe_program** out_program) {
    if (!source || !out_program) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] {
        auto parsed = quipmc::frontend::parse_program(source);
        auto checked = quipmc::frontend::validate(std::move(parsed));
        *out_program = new qpe_program{std::move(checked)};
    });
}

void qpe_program_free(qpe_program* program) { delete program; }

int qpe_program_qubit_count(const qpe_program* program) {
    return program ? program->checked.program.qubit_count() : 0;
}

int qpe_program_has_exit_guard(const qpe_program* program) {
    return program && program->checked.program.exit_guard ? 1 : 0;
}

qpe_status qpe_program_pretty(const qpe_program* program, char** out_text) {
    if (!program || !out_text) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded(
        [&] { *out_text = dup_string(quipmc::frontend::pretty_print(program->checked.program)); });
}

qpe_status qpe_chain_build(const qpe_program* program, qpe_chain** out_chain) {
    if (!program || !out_chain) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] {
        *out_chain = new qpe_chain{quipmc::semantics::build_program_chain(program->checked)};
    });
}

qpe_status qpe_chain_build_body(const qpe_program* program, qpe_chain** out_chain) {
    if (!program || !out_chain) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] {
        *out_chain = new qpe_chain{quipmc::semantics::build_body_chain(program->checked)};
    });
}

void qpe_chain_free(qpe_chain* chain) { delete chain; }

int qpe_chain_state_count(const qpe_chain* chain) {
    return chain ? static_cast<int>(chain->chain.states.size()) : 0;
}

qpe_status qpe_chain_verify_tp(const qpe_chain* chain, double tol, char** out_report_json,
                               int* out_pass) {
    if (!chain || !out_report_json) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] {
        const auto report = quipmc::semantics::check_qmc(chain->chain, tol);
        json j;
        j["pass"] = report.pass;
        j["tol"] = report.tol;
        j["states"] = json::array();
        for (const auto& v : report.states) {
            j["states"].push_back({{"state", v.state},
                                   {"trace_preserving", v.trace_preserving},
                                   {"deviation", v.deviation},
                                   {"labeling_consistent", v.labeling_consistent}});
        }
        *out_report_json = dup_string(j.dump(2));
        if (out_pass) *out_pass = report.pass ? 1 : 0;
    });
}

qpe_status qpe_chain_emit_qpmc(const qpe_chain* chain, char** out_text) {
    if (!chain || !out_text) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] { *out_text = dup_string(quipmc::emit::emit_qpmc(chain->chain)); });
}

qpe_status qpe_chain_emit_dot(const qpe_chain* chain, char** out_text) {
    if (!chain || !out_text) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] { *out_text = dup_string(quipmc::emit::emit_dot(chain->chain)); });
}

qpe_status qpe_chain_check(const qpe_chain* chain, const char* properties,
                           const char* init_spec, double fixpoint_tol, int max_iters,
                           int all_rho, char** out_results_json, int* out_any_false) {
    if (!chain || !properties || !out_results_json) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] {
        const auto queries = quipmc::qctl::parse_property_file(properties);
        quipmc::qctl::EvalContext ctx;
        ctx.chain = &chain->chain;
        ctx.rho0 = quipmc::parse_init_density(init_spec ? init_spec : "", chain->chain.dim);
        if (fixpoint_tol > 0) ctx.fixpoint_tol = fixpoint_tol;
        if (max_iters > 0) ctx.max_iters = max_iters;

        bool any_false = false;
        std::string lines;
        for (const auto& q : queries) {
            json rec;
            rec["formula"] = q.text;
            const quipmc::qctl::PathFormula* pf = nullptr;
            if (q.kind == quipmc::qctl::Query::Kind::Compare) {
                rec["kind"] = "bool";
                const bool ok = quipmc::qctl::check(ctx, *q.compare);
                rec["value"] = ok;
                any_false = any_false || !ok;
                pf = q.compare->path.get();
            } else if (q.kind == quipmc::qctl::Query::Kind::Prob) {
                rec["kind"] = "prob";
                rec["value"] = quipmc::qctl::qprob(ctx, *q.path);
                pf = q.path.get();
            } else {
                rec["kind"] = "matrix";
                const auto rho = quipmc::qctl::qeval(ctx, *q.path);
                rec["value"] = matrix_to_json(rho.mat);
                rec["trace"] = rho.trace_real();
                pf = q.path.get();
            }
            if (all_rho && pf) {
                const auto bounds = quipmc::qctl::all_rho_bounds(ctx, *pf);
                rec["all_rho"] = {{"min", bounds.min}, {"max", bounds.max}};
            }
            lines += rec.dump();
            lines += "\n";
        }
        *out_results_json = dup_string(lines);
        if (out_any_false) *out_any_false = any_false ? 1 : 0;
    });
}

qpe_status qpe_simulate(const qpe_program* program, const char* init_spec, int max_loops,
                        char** out_results_json) {
    if (!program || !out_results_json) {
        g_last_error = "null argument";
        return QPE_ERR_BAD_ARG;
    }
    return guarded([&] {
        const auto& p = program->checked.program;
        auto psi0 = quipmc::parse_init_ket(init_spec ? init_spec : "", p.dim());
        const auto result = quipmc::refsim::simulate(program->checked, std::move(psi0),
                                                     max_loops > 0 ? max_loops : 30);
        json j;
        j["qubits"] = p.qubit_count();
        j["terminated_mass"] = result.terminated_mass;
        j["residual_mass"] = result.residual_mass;
        j["branches"] = json::array();
        for (const auto& b : result.branches) {
            json env = json::object();
            for (std::size_t v = 0; v < p.vars.size(); ++v)
                env[p.vars[v].name] = static_cast<int>(b.env >> v & 1);
            json amp = json::array();
            for (const auto& a : b.state) amp.push_back(json::array({a.real(), a.imag()}));
            j["branches"].push_back(
                {{"status",
                  b.status == quipmc::refsim::BranchStatus::Terminated ? "terminated"
                                                                       : "residual"},
                 {"probability", b.weight},
                 {"loops", b.loops},
                 {"env", std::move(env)},
                 {"state", std::move(amp)}});
        }
        *out_results_json = dup_string(j.dump(2));
    });
}

const char* qpe_last_error(void) { return g_last_error.c_str(); }

void qpe_string_free(char* text) { std::free(text); }

}  // extern "C"
