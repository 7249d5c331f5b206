// Exercises the shared-library C API end to end.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "quipmc.h"

static int failures = 0;

#define EXPECT(cond)                                                      \
    do {                                                                  \
        if (!(cond)) {                                                    \
            std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                   \
        }                                                                 \
    } while (0)

static const char* kCoin =
    "qubits q\n"
    "body {\n"
    "  reset_at q\n"
    "  hadamard_at q\n"
    "  m <- measure q\n"
    "  b <- dynamic_lift m\n"
    "}\n"
    "exitOn b\n";

int main() {
    // Parse errors surface as status codes with messages.
    qpe_program* bad = nullptr;
    EXPECT(qpe_program_parse("qubits q\nbody { FOO_at q }", &bad) == QPE_ERR_SYNTAX);
    EXPECT(std::strlen(qpe_last_error()) > 0);

    qpe_program* undefined_guard = nullptr;
    EXPECT(qpe_program_parse("qubits q\nbody { m <- measure q\nb <- dynamic_lift m\n"
                             "if (b) { m2 <- measure q\nc <- dynamic_lift m2 } else { X_at q } }\n"
                             "exitOn c",
                             &undefined_guard) == QPE_ERR_VALIDATION);

    qpe_program* coin = nullptr;
    EXPECT(qpe_program_parse(kCoin, &coin) == QPE_OK);
    EXPECT(qpe_program_qubit_count(coin) == 1);
    EXPECT(qpe_program_has_exit_guard(coin) == 1);

    char* pretty = nullptr;
    EXPECT(qpe_program_pretty(coin, &pretty) == QPE_OK);
    EXPECT(pretty && std::strstr(pretty, "exitOn b"));
    qpe_string_free(pretty);

    qpe_chain* chain = nullptr;
    EXPECT(qpe_chain_build(coin, &chain) == QPE_OK);
    EXPECT(qpe_chain_state_count(chain) == 8);

    qpe_chain* body_chain = nullptr;
    EXPECT(qpe_chain_build_body(coin, &body_chain) == QPE_OK);
    EXPECT(qpe_chain_state_count(body_chain) == 8);
    qpe_chain_free(body_chain);

    char* report = nullptr;
    int pass = 0;
    EXPECT(qpe_chain_verify_tp(chain, 1e-10, &report, &pass) == QPE_OK);
    EXPECT(pass == 1);
    EXPECT(report && std::strstr(report, "\"pass\": true"));
    qpe_string_free(report);

    char* model = nullptr;
    EXPECT(qpe_chain_emit_qpmc(chain, &model) == QPE_OK);
    EXPECT(model && std::strncmp(model, "qmc\n", 4) == 0);
    qpe_string_free(model);

    char* dot = nullptr;
    EXPECT(qpe_chain_emit_dot(chain, &dot) == QPE_OK);
    EXPECT(dot && std::strstr(dot, "digraph qmc"));
    qpe_string_free(dot);

    char* results = nullptr;
    int any_false = 0;
    EXPECT(qpe_chain_check(chain, "Q=1[F terminated]\nqprob(Q=? [F<=5 terminated], r)\n",
                           "|0>", 0, 0, 0, &results, &any_false) == QPE_OK);
    EXPECT(any_false == 0);
    EXPECT(results && std::strstr(results, "\"value\":true"));
    const char* prob_tag = results ? std::strstr(results, "\"kind\":\"prob\",\"value\":") : nullptr;
    EXPECT(prob_tag != nullptr);
    if (prob_tag) {
        const double p = std::strtod(prob_tag + std::strlen("\"kind\":\"prob\",\"value\":"), nullptr);
        EXPECT(std::fabs(p - 0.5) < 1e-9);
    }
    qpe_string_free(results);

    // A false property flips the flag.
    results = nullptr;
    EXPECT(qpe_chain_check(chain, "Q=0[F terminated]\n", "|0>", 0, 0, 0, &results,
                           &any_false) == QPE_OK);
    EXPECT(any_false == 1);
    qpe_string_free(results);

    // all-rho bounds are attached on demand.
    results = nullptr;
    EXPECT(qpe_chain_check(chain, "qprob(Q=? [F terminated], r)\n", "|0>", 0, 0, 1,
                           &results, &any_false) == QPE_OK);
    EXPECT(results && std::strstr(results, "\"all_rho\""));
    qpe_string_free(results);

    char* sim = nullptr;
    EXPECT(qpe_simulate(coin, "|0>", 10, &sim) == QPE_OK);
    EXPECT(sim && std::strstr(sim, "\"terminated_mass\""));
    EXPECT(sim && std::strstr(sim, "\"residual\""));
    qpe_string_free(sim);

    // Dimension mismatch in the initial state.
    EXPECT(qpe_simulate(coin, "|00>", 10, &sim) == QPE_ERR_DIMENSION);

    qpe_chain_free(chain);
    qpe_program_free(coin);

    if (failures == 0) std::printf("capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
