/* quipmc: Quip-E compiler, quantum Markov chain builder and QCTL checker.
 *
 * C API over the core library. All handles are opaque; functions return a
 * qpe_status and report details through qpe_last_error(). Strings returned
 * through out-parameters are heap-allocated and released with
 * qpe_string_free().
 */

#ifndef QUIPMC_H
#define QUIPMC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpe_status {
    QPE_OK = 0,
    QPE_ERR_SYNTAX = 1,
    QPE_ERR_VALIDATION = 2,    /* undefined guard / bad program structure */
    QPE_ERR_DIMENSION = 3,     /* dimension mismatch or cap exceeded */
    QPE_ERR_STATE_EXPLOSION = 4,
    QPE_ERR_BRANCH_EXPLOSION = 5,
    QPE_ERR_NO_CONVERGENCE = 6,
    QPE_ERR_BAD_ARG = 7,
    QPE_ERR_INTERNAL = 8
} qpe_status;

typedef struct qpe_program qpe_program;
typedef struct qpe_chain qpe_chain;

/* Parses and validates `.qpe` source text. */
qpe_status qpe_program_parse(const char* source, qpe_program** out_program);
void qpe_program_free(qpe_program* program);

int qpe_program_qubit_count(const qpe_program* program);
int qpe_program_has_exit_guard(const qpe_program* program);

/* Canonical pretty-printed source; parsing it reproduces the program. */
qpe_status qpe_program_pretty(const qpe_program* program, char** out_text);

/* Chain of the whole program (exit rules applied when an exitOn guard is
 * present). qpe_chain_build_body builds the body chain QC(Body) instead. */
qpe_status qpe_chain_build(const qpe_program* program, qpe_chain** out_chain);
qpe_status qpe_chain_build_body(const qpe_program* program, qpe_chain** out_chain);
void qpe_chain_free(qpe_chain* chain);

int qpe_chain_state_count(const qpe_chain* chain);

/* Per-state trace-preservation report as JSON; *out_pass is 1 when every
 * state passes at `tol`. */
qpe_status qpe_chain_verify_tp(const qpe_chain* chain, double tol,
                               char** out_report_json, int* out_pass);

qpe_status qpe_chain_emit_qpmc(const qpe_chain* chain, char** out_text);
qpe_status qpe_chain_emit_dot(const qpe_chain* chain, char** out_text);

/* Evaluates a `.qctl` property text (one formula per line, `#` comments)
 * against the chain. Results are newline-delimited JSON records
 * {"formula", "kind": "bool"|"prob"|"matrix", "value", ...}.
 *
 * init_spec: "" or "|b1...bn>" for a basis ket, "maxmixed", or
 * "matrix:[...]" with a bracketed row-major matrix literal.
 * all_rho != 0 adds bounds of the probability over every initial state.
 * *out_any_false is 1 when some boolean property evaluated false. */
qpe_status qpe_chain_check(const qpe_chain* chain, const char* properties,
                           const char* init_spec, double fixpoint_tol, int max_iters,
                           int all_rho, char** out_results_json, int* out_any_false);

/* Branch-enumerating state-vector simulation from a pure initial state;
 * returns a JSON branch table. */
qpe_status qpe_simulate(const qpe_program* program, const char* init_spec,
                        int max_loops, char** out_results_json);

/* Message for the most recent failure on this thread. */
const char* qpe_last_error(void);

void qpe_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* QUIPMC_H */
