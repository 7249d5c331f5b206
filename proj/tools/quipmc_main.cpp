// quipmc command-line driver. Links only the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "quipmc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFalse = 1;
constexpr int kExitError = 2;

struct Options {
    std::string input;
    std::string props;
    std::string init;
    double tol = 0.0;  // 0 = module default
    int max_iters = 0;
    int max_loops = 0;
    bool json_errors = false;
    bool all_rho = false;
    bool body_chain = false;
    std::string output;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const Options& opt, const std::string& text) {
    if (opt.output.empty() || opt.output == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + opt.output + "'");
    out << text;
}

int fail(const Options& opt, const std::string& message) {
    if (opt.json_errors) {
        std::string escaped;
        for (char c : message) {
            if (c == '"' || c == '\\') escaped += '\\';
            if (c == '\n') {
                escaped += "\\n";
                continue;
            }
            escaped += c;
        }
        std::cerr << "{\"error\": \"" << escaped << "\"}\n";
    } else {
        std::cerr << "quipmc: " << message << "\n";
    }
    return kExitError;
}

int fail_api(const Options& opt) { return fail(opt, qpe_last_error()); }

struct ProgramHandle {
    qpe_program* p = nullptr;
    ~ProgramHandle() { qpe_program_free(p); }
};
struct ChainHandle {
    qpe_chain* c = nullptr;
    ~ChainHandle() { qpe_chain_free(c); }
};
struct ApiString {
    char* s = nullptr;
    ~ApiString() { qpe_string_free(s); }
};

int load(const Options& opt, ProgramHandle& program) {
    const std::string source = read_file(opt.input);
    if (qpe_program_parse(source.c_str(), &program.p) != QPE_OK) return kExitError;
    return kExitOk;
}

int build(const Options& opt, const ProgramHandle& program, ChainHandle& chain) {
    const auto status = opt.body_chain ? qpe_chain_build_body(program.p, &chain.c)
                                       : qpe_chain_build(program.p, &chain.c);
    return status == QPE_OK ? kExitOk : kExitError;
}

// The --init value may be a shorthand (|0101>, maxmixed) or a path to a
// matrix file; files are wrapped into the API's "matrix:" form.
std::string resolve_init(const std::string& init) {
    if (init.empty() || init == "maxmixed" || init.front() == '|' ||
        init.rfind("matrix:", 0) == 0)
        return init;
    return "matrix:" + read_file(init);
}

int cmd_translate(const Options& opt) {
    ProgramHandle program;
    ChainHandle chain;
    if (load(opt, program) || build(opt, program, chain)) return fail_api(opt);
    ApiString text;
    if (qpe_chain_emit_qpmc(chain.c, &text.s) != QPE_OK) return fail_api(opt);
    write_output(opt, text.s);
    return kExitOk;
}

int cmd_graph(const Options& opt) {
    ProgramHandle program;
    ChainHandle chain;
    if (load(opt, program) || build(opt, program, chain)) return fail_api(opt);
    ApiString text;
    if (qpe_chain_emit_dot(chain.c, &text.s) != QPE_OK) return fail_api(opt);
    write_output(opt, text.s);
    return kExitOk;
}

int cmd_verify_tp(const Options& opt) {
    ProgramHandle program;
    ChainHandle chain;
    if (load(opt, program) || build(opt, program, chain)) return fail_api(opt);
    ApiString report;
    int pass = 0;
    const double tol = opt.tol > 0 ? opt.tol : 1e-10;
    if (qpe_chain_verify_tp(chain.c, tol, &report.s, &pass) != QPE_OK) return fail_api(opt);
    write_output(opt, report.s);
    return pass ? kExitOk : kExitPropertyFalse;
}

int cmd_check(const Options& opt) {
    ProgramHandle program;
    ChainHandle chain;
    if (load(opt, program) || build(opt, program, chain)) return fail_api(opt);
    std::string props;
    std::string init;
    try {
        props = read_file(opt.props);
        init = resolve_init(opt.init);
    } catch (const std::exception& e) {
        return fail(opt, e.what());
    }
    ApiString results;
    int any_false = 0;
    if (qpe_chain_check(chain.c, props.c_str(), init.c_str(), opt.tol, opt.max_iters,
                        opt.all_rho ? 1 : 0, &results.s, &any_false) != QPE_OK)
        return fail_api(opt);
    write_output(opt, results.s);
    return any_false ? kExitPropertyFalse : kExitOk;
}

int cmd_simulate(const Options& opt) {
    ProgramHandle program;
    if (load(opt, program)) return fail_api(opt);
    std::string init;
    try {
        init = resolve_init(opt.init);
    } catch (const std::exception& e) {
        return fail(opt, e.what());
    }
    ApiString results;
    if (qpe_simulate(program.p, init.c_str(), opt.max_loops, &results.s) != QPE_OK)
        return fail_api(opt);
    write_output(opt, results.s);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quip-E to quantum Markov chain compiler and QCTL model checker"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("input", opt.input, ".qpe program file")->required();
        cmd->add_option("-o,--output", opt.output, "output path (default stdout)");
        cmd->add_flag("--json", opt.json_errors, "machine-readable errors on stderr");
    };

    CLI::App* translate = app.add_subcommand("translate", "emit QPMC-dialect model code");
    add_common(translate);
    translate->add_flag("--body", opt.body_chain, "translate the body chain QC(body)");

    CLI::App* check = app.add_subcommand("check", "evaluate QCTL properties");
    add_common(check);
    check->add_option("--props", opt.props, ".qctl property file")->required();
    check->add_option("--init", opt.init, "initial state: |0101>, maxmixed, or matrix file");
    check->add_option("--tol", opt.tol, "fixpoint tolerance (default 1e-9)");
    check->add_option("--max-iters", opt.max_iters, "fixpoint iteration cap (default 10000)");
    check->add_flag("--all-rho", opt.all_rho,
                    "also report probability bounds over every initial state");

    CLI::App* simulate = app.add_subcommand("simulate", "run the state-vector simulator");
    add_common(simulate);
    simulate->add_option("--init", opt.init, "initial ket, e.g. |0101>");
    simulate->add_option("--max-loops", opt.max_loops, "body passes before reporting residual mass (default 30)");

    CLI::App* graph = app.add_subcommand("graph", "emit the chain as a DOT digraph");
    add_common(graph);
    graph->add_flag("--body", opt.body_chain, "render the body chain QC(body)");

    CLI::App* verify = app.add_subcommand("verify-tp", "verify the trace-preservation condition per state");
    add_common(verify);
    verify->add_option("--tol", opt.tol, "trace-preservation tolerance (default 1e-10)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (translate->parsed()) return cmd_translate(opt);
        if (check->parsed()) return cmd_check(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (graph->parsed()) return cmd_graph(opt);
        if (verify->parsed()) return cmd_verify_tp(opt);
    } catch (const std::exception& e) {
        return fail(opt, e.what());
    }
    return kExitError;
}
