// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest (test name "acceptance") or directly.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "emit/qpmc.hpp"
#include "frontend/gates.hpp"
#include "qctl/eval.hpp"
#include "qctl/formula.hpp"
#include "refsim/simulate.hpp"
#include "semantics/chain.hpp"
#include "testutil.hpp"

using namespace quipmc;
using linalg::CMatrix;
using linalg::Complex;
using linalg::DensityMatrix;
using linalg::Superoperator;
using semantics::Env;
using semantics::Qmc;

namespace {

struct Criterion {
    int failures = 0;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        ++failures;
        if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
    }
};

const CMatrix& builtin(const std::string& name) {
    for (const auto& g : frontend::builtin_gates())
        if (g.name == name) return g.matrix;
    throw std::runtime_error("no builtin " + name);
}

Qmc build(const std::string& corpus_name) {
    return semantics::build_program_chain(testutil::load_program(corpus_name));
}

qctl::EvalContext context_for(const Qmc& chain, DensityMatrix rho0) {
    qctl::EvalContext ctx;
    ctx.chain = &chain;
    ctx.rho0 = std::move(rho0);
    return ctx;
}

double prob_of(const Qmc& chain, const DensityMatrix& rho0, const std::string& formula) {
    auto ctx = context_for(chain, rho0);
    const auto q = qctl::parse_formula(formula);
    return qctl::qprob(ctx, *q.path);
}

bool check_of(const Qmc& chain, const DensityMatrix& rho0, const std::string& formula) {
    auto ctx = context_for(chain, rho0);
    const auto q = qctl::parse_formula(formula);
    return qctl::check(ctx, *q.compare);
}

bool edge_is(const Qmc& chain, int from, int to, const Superoperator& expected) {
    for (const auto& e : chain.edges[from])
        if (e.to == to) return e.op.approx_equal(expected, 1e-12);
    return false;
}

Env env_bits(const Qmc& chain, std::initializer_list<const char*> vars) {
    Env env = 0;
    for (const char* v : vars) env |= Env{1} << chain.source().var_index(v);
    return env;
}

// ---------------------------------------------------------------------------

// The five reference translation examples: state
// counts, environment labels and edge superoperators within 1e-12.
Criterion golden_chains() {
    Criterion c;

    {
        const Qmc reset = build("reset.qpe");
        c.require(reset.states.size() == 3, "reset: expected 3 states");
        const auto ms = linalg::measure_superops(0, 1);
        c.require(edge_is(reset, 0, 1, ms.first), "reset: M0 edge");
        c.require(edge_is(reset, 0, 2, ms.second), "reset: M1 edge");
        c.require(edge_is(reset, 2, 1, linalg::unitary_superop(builtin("X"))),
                  "reset: X edge");
        c.require(edge_is(reset, 1, 1, Superoperator::identity(2)), "reset: terminal loop");
        std::size_t edges = 0;
        for (const auto& es : reset.edges) edges += es.size();
        c.require(edges == 4, "reset: expected 4 edges");
    }

    {
        const Qmc hm = build("hmeasure.qpe");
        c.require(hm.states.size() == 4, "hmeasure: expected 4 states");
        const CMatrix ih = linalg::kron(CMatrix::identity(2), builtin("H"));
        c.require(edge_is(hm, 0, 1, linalg::unitary_superop(ih)), "hmeasure: I(x)H edge");
        const auto ms = linalg::measure_superops(0, 2);
        c.require(edge_is(hm, 1, 2, ms.first), "hmeasure: M0(x)I edge");
        c.require(edge_is(hm, 1, 3, ms.second), "hmeasure: M1(x)I edge");
        c.require(hm.states[2].env == 0 && hm.states[3].env == env_bits(hm, {"m"}),
                  "hmeasure: leaf environments");
    }

    {
        const Qmc dm = build("double_measure.qpe");
        c.require(dm.states.size() == 7, "double measure: expected 7 states");
        std::set<Env> leaf_envs;
        for (std::size_t s = 0; s < dm.states.size(); ++s)
            if (dm.states[s].empty()) leaf_envs.insert(dm.states[s].env);
        const std::set<Env> expected = {0, env_bits(dm, {"m1"}), env_bits(dm, {"m2"}),
                                        env_bits(dm, {"m1", "m2"})};
        c.require(leaf_envs == expected, "double measure: 4 leaves with envs 00/01/10/11");
    }

    {
        // Measure/lift/branch: nine states (the measure pair forks, lift and
        // branch selection add identity steps, then the gates and terminals).
        const Qmc ie = build("ifelse.qpe");
        c.require(ie.states.size() == 9, "if-then-else: expected 9 states");
        c.require(edge_is(ie, 5, 7, linalg::unitary_superop(builtin("X"))),
                  "if-then-else: X edge into the 0-terminal");
        c.require(edge_is(ie, 6, 8, linalg::unitary_superop(builtin("H"))),
                  "if-then-else: H edge into the 1-terminal");
    }

    {
        const Qmc ex = build("exiton.qpe");
        c.require(ex.states.size() == 9, "exitOn: expected 9 states");
        int loopbacks = 0;
        for (std::size_t s = 0; s < ex.states.size(); ++s)
            for (const auto& e : ex.edges[s])
                if (e.exit_loopback) {
                    ++loopbacks;
                    c.require(e.to == 0, "exitOn: loop-back targets state 0");
                    c.require(ex.states[s].env == 0, "exitOn: b=0 leaf has env O");
                    c.require(ex.states[e.to].env == 0, "exitOn: target env is O");
                    c.require(e.op.approx_equal(Superoperator::identity(4), 1e-12),
                              "exitOn: loop-back label is the identity");
                }
        c.require(loopbacks == 1, "exitOn: exactly one loop-back");
    }

    return c;
}

// Trace preservation of every state's outgoing sum, on the corpus plus 200
// random programs, at tolerance 1e-10.
Criterion trace_preservation() {
    Criterion c;
    for (const char* name :
         {"reset.qpe", "hmeasure.qpe", "double_measure.qpe", "ifelse.qpe", "exiton.qpe",
          "coin_flip.qpe", "toy.qpe", "dj_const.qpe", "dj_balanced.qpe", "teleport.qpe",
          "teleport_measured.qpe", "qswitch.qpe"}) {
        const auto report = semantics::check_qmc(build(name), 1e-10);
        c.require(report.pass, std::string("corpus chain fails TP: ") + name);
    }

    std::mt19937_64 rng(0xACCE97);
    for (int trial = 0; trial < 200; ++trial) {
        const auto program = testutil::random_program(rng);
        const Qmc chain = semantics::build_program_chain(program);
        const auto report = semantics::check_qmc(chain, 1e-10);
        c.require(report.pass, "random program " + std::to_string(trial) + " fails TP");
    }
    return c;
}

// The state-vector oracle and the chain agree: branch mixtures equal the
// bounded reachability state over the horizon covering the loop cap.
Criterion oracle_equivalence() {
    Criterion c;
    std::mt19937_64 rng(0xACCE97);  // same 200 programs as criterion 2
    const int max_loops = 20;
    for (int trial = 0; trial < 200; ++trial) {
        const auto program = testutil::random_program(rng);
        const Qmc chain = semantics::build_program_chain(program);
        std::mt19937_64 state_rng(1000 + trial);
        for (int shot = 0; shot < 5; ++shot) {
            const auto psi = testutil::random_ket(state_rng, chain.dim);
            const auto sim = refsim::simulate(program, psi, max_loops);
            const auto lhs = refsim::branch_density(sim.branches);
            const auto rhs =
                qctl::reach_exited_density(chain, DensityMatrix::from_ket(psi), max_loops);
            const double diff = lhs.mat.max_diff(rhs.mat);
            c.require(diff <= 1e-9, "program " + std::to_string(trial) + " shot " +
                                        std::to_string(shot) + " deviates by " +
                                        std::to_string(diff));
        }
    }
    return c;
}

// Deutsch-Jozsa, constant and balanced oracles, r = |0001><0001|.
Criterion deutsch_jozsa() {
    Criterion c;
    const DensityMatrix r = DensityMatrix::basis(16, 1);

    const Qmc constant = build("dj_const.qpe");
    c.require(std::abs(prob_of(constant, r,
                               "qprob(Q=? [F (terminated & !b0 & !b1 & !b2)], r)") -
                       1.0) <= 1e-9,
              "constant: all-zero outcome probability 1");
    c.require(std::abs(prob_of(constant, r,
                               "qprob(Q=? [F (terminated & b0 & !b1 & !b2)], r)")) <= 1e-9,
              "constant: b0 outcome probability 0");
    c.require(check_of(constant, r, "Q=1[F(terminated & !b0 & !b1 & !b2)]"),
              "constant: Q=1 all-zero outcome is true");
    c.require(!check_of(constant, r, "Q=1[F(terminated & b0 & !b1 & !b2)]"),
              "constant: Q=1 b0 outcome is false");

    const Qmc balanced = build("dj_balanced.qpe");
    c.require(std::abs(prob_of(balanced, r,
                               "qprob(Q=? [F (terminated & !b0 & !b1 & !b2)], r)")) <= 1e-9,
              "balanced: all-zero outcome probability 0");
    c.require(std::abs(prob_of(balanced, r,
                               "qprob(Q=? [F (terminated & b0 & b1 & !b2)], r)") -
                       1.0) <= 1e-9,
              "balanced: designated outcome probability 1");
    c.require(check_of(balanced, r, "Q>0.5[F(terminated & b0 & b1 & !b2)]"),
              "balanced: Q>0.5 designated outcome is true");
    c.require(check_of(balanced, r, "Q<0.5[F(terminated & !b0 & !b1 & !b2)]"),
              "balanced: Q<0.5 all-zero outcome is true");
    return c;
}

// Teleportation: uniform outcome distribution and exact state transfer.
Criterion teleportation() {
    Criterion c;
    const Qmc measured = build("teleport_measured.qpe");
    std::vector<Complex> zero_in(8, Complex{0, 0});
    zero_in[0] = 1.0;
    const DensityMatrix rho0 = DensityMatrix::from_ket(zero_in);

    const char* combos[] = {"!b0 & !b1", "!b0 & b1", "b0 & !b1", "b0 & b1"};
    for (const char* combo : combos) {
        const double p = prob_of(measured, rho0,
                                 std::string("qprob(Q=? [F (terminated & ") + combo +
                                     ")], r)");
        c.require(std::abs(p - 0.25) <= 1e-9,
                  std::string("outcome ") + combo + " probability 0.25");
        c.require(check_of(measured, rho0,
                           std::string("Q>=0.25[F(terminated & ") + combo + ")]"),
                  std::string("Q>=0.25 for ") + combo);
    }
    c.require(!check_of(measured, rho0, "Q=0[F(terminated & !b0 & !b1 & !b2)]"),
              "Q=0 for the all-zero outcome is false");

    // Transfer fidelity: the reduced output qubit equals the input.
    const Qmc plain = build("teleport.qpe");
    std::mt19937_64 rng(0x7E1E);
    for (int shot = 0; shot < 3; ++shot) {
        const auto psi_in = testutil::random_ket(rng, 2);
        std::vector<Complex> psi(8, Complex{0, 0});
        psi[0] = psi_in[0];  // |psi> (x) |00>
        psi[4] = psi_in[1];
        auto ctx = context_for(plain, DensityMatrix::from_ket(psi));
        const auto q = qctl::parse_formula("qeval(Q=? [F terminated], r)");
        const auto out = qctl::qeval(ctx, *q.path);
        c.require(std::abs(out.trace_real() - 1.0) <= 1e-9, "teleport terminates surely");
        const CMatrix reduced = linalg::partial_trace(out.mat, {2}, 3);
        const CMatrix expected = DensityMatrix::from_ket(psi_in).mat;
        c.require(reduced.max_diff(expected) <= 1e-9,
                  "shot " + std::to_string(shot) + ": output qubit equals the input");
    }
    return c;
}

// Quantum switch, N = 32: thresholds and the underlying probabilities.
Criterion quantum_switch() {
    Criterion c;
    const Qmc chain = build("qswitch.qpe");
    const DensityMatrix rho0 = DensityMatrix::basis(32, 0);

    c.require(check_of(chain, rho0, "Q>=0.25[F(terminated & !b0 & !b1 & !b2 & !b3)]"),
              "solution 0000 passes the threshold");
    c.require(!check_of(chain, rho0, "Q>=0.25[F(terminated & !b0 & !b1 & !b2 & b3)]"),
              "non-solution 0001 fails the threshold");
    c.require(check_of(chain, rho0, "Q>=0.25[F(terminated & b0 & b1 & b2 & b3)]"),
              "solution 1111 passes the threshold");
    c.require(!check_of(chain, rho0, "Q>=0.25[F(terminated & b0 & b1 & b2 & !b3)]"),
              "non-solution 1110 fails the threshold");

    const double p0000 =
        prob_of(chain, rho0, "qprob(Q=? [F (terminated & !b0 & !b1 & !b2 & !b3)], r)");
    const double p1111 =
        prob_of(chain, rho0, "qprob(Q=? [F (terminated & b0 & b1 & b2 & b3)], r)");
    c.require(std::abs(p0000 - 0.25) <= 1e-9, "solution 0000 probability 0.25");
    c.require(std::abs(p1111 - 0.25) <= 1e-9, "solution 1111 probability 0.25");
    return c;
}

// Coin flip: bounded probabilities follow the geometric series exactly and
// the unbounded fixpoint converges to certainty.
Criterion coin_flip() {
    Criterion c;
    const Qmc chain = build("coin_flip.qpe");
    auto ctx = context_for(chain, DensityMatrix::basis(2, 0));

    // One body pass spans five edges on the surviving path, so the horizon
    // covering k loop traversals is 5k steps.
    for (long k = 1; k <= 20; ++k) {
        const auto q = qctl::parse_formula("qprob(Q=? [F<=" + std::to_string(5 * k) +
                                           " terminated], r)");
        const double p = qctl::qprob(ctx, *q.path);
        const double expected = 1.0 - std::pow(2.0, -static_cast<double>(k));
        c.require(std::abs(p - expected) <= 1e-12,
                  "bounded k=" + std::to_string(k) + " off by " +
                      std::to_string(std::abs(p - expected)));
    }

    ctx.max_iters = 10000;
    ctx.fixpoint_tol = 1e-9;
    const auto q = qctl::parse_formula("qprob(Q=? [F terminated], r)");
    try {
        const double p = qctl::qprob(ctx, *q.path);
        c.require(std::abs(p - 1.0) <= 1e-9, "unbounded probability 1");
    } catch (const Error& e) {
        c.require(false, std::string("unbounded evaluation failed: ") + e.what());
    }
    return c;
}

// Emission round-trip at 1e-12 and byte determinism across two runs.
Criterion emission_roundtrip() {
    Criterion c;
    for (const char* name :
         {"reset.qpe", "hmeasure.qpe", "double_measure.qpe", "ifelse.qpe", "exiton.qpe",
          "coin_flip.qpe", "toy.qpe", "dj_const.qpe", "dj_balanced.qpe", "teleport.qpe",
          "teleport_measured.qpe", "qswitch.qpe"}) {
        const Qmc chain = build(name);
        const std::string text = emit::emit_qpmc(chain);
        try {
            const auto model = emit::read_qpmc(text);
            c.require(emit::model_matches_chain(model, chain, 1e-12),
                      std::string("round trip mismatch: ") + name);
        } catch (const Error& e) {
            c.require(false, std::string("reader failed on ") + name + ": " + e.what());
        }
        const Qmc again = build(name);
        c.require(emit::emit_qpmc(again) == text,
                  std::string("emission not deterministic: ") + name);
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        std::function<Criterion()> run;
    };
    const std::vector<Entry> entries = {
        {"1 golden translation chains", golden_chains},
        {"2 trace preservation (corpus + 200 random programs)", trace_preservation},
        {"3 oracle equivalence (200 programs x 5 states)", oracle_equivalence},
        {"4 Deutsch-Jozsa constant/balanced", deutsch_jozsa},
        {"5 teleportation outcomes and fidelity", teleportation},
        {"6 quantum switch N=32", quantum_switch},
        {"7 coin flip bounded and unbounded", coin_flip},
        {"8 emission round-trip and determinism", emission_roundtrip},
    };

    int failed = 0;
    for (const auto& entry : entries) {
        Criterion result;
        try {
            result = entry.run();
        } catch (const std::exception& e) {
            result.failures = 1;
            result.detail = std::string("exception: ") + e.what();
        }
        if (result.failures == 0) {
            std::printf("[PASS] criterion %s\n", entry.label);
        } else {
            ++failed;
            std::printf("[FAIL] criterion %s: %s\n", entry.label, result.detail.c_str());
        }
    }
    return failed == 0 ? 0 : 1;
}
