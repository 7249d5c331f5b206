#include <doctest.h>

#include "emit/dot.hpp"
#include "emit/qpmc.hpp"
#include "semantics/chain.hpp"
#include "testutil.hpp"

using namespace quipmc;
using semantics::Qmc;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("reset model shape") {
    const Qmc chain = semantics::build_program_chain(testutil::load_program("reset.qpe"));
    const std::string text = emit::emit_qpmc(chain);

    CHECK(text.rfind("qmc\n", 0) == 0);
    CHECK(text.find("const matrix M0 = ") != std::string::npos);
    CHECK(text.find("const matrix M1 = ") != std::string::npos);
    CHECK(text.find("const matrix U0 = ") != std::string::npos);  // the X correction
    CHECK(text.find("const matrix ID = ") != std::string::npos);
    CHECK(count_occurrences(text, "[] (s = ") == 3);  // one command per state
    CHECK(count_occurrences(text, "(s' = ") == 4);    // four transitions
    // No classical variables, hence no label lines.
    CHECK(text.find("label") == std::string::npos);
}

TEST_CASE("labels list exactly the states carrying the variable") {
    const Qmc chain =
        semantics::build_program_chain(testutil::load_program("double_measure.qpe"));
    const std::string text = emit::emit_qpmc(chain);
    CHECK(text.find("label \"m1\" = ") != std::string::npos);
    CHECK(text.find("label \"m2\" = ") != std::string::npos);

    const auto model = emit::read_qpmc(text);
    std::set<int> m1_states;
    const int var = chain.source().var_index("m1");
    for (std::size_t s = 0; s < chain.states.size(); ++s)
        if (chain.states[s].env >> var & 1) m1_states.insert(static_cast<int>(s));
    CHECK(model.labels.at("m1") == m1_states);
}

TEST_CASE("round trip reconstructs every corpus chain") {
    for (const char* name :
         {"reset.qpe", "hmeasure.qpe", "double_measure.qpe", "ifelse.qpe", "exiton.qpe",
          "coin_flip.qpe", "toy.qpe", "dj_const.qpe", "dj_balanced.qpe", "teleport.qpe",
          "teleport_measured.qpe", "qswitch.qpe"}) {
        CAPTURE(name);
        const Qmc chain = semantics::build_program_chain(testutil::load_program(name));
        const std::string text = emit::emit_qpmc(chain);
        const auto model = emit::read_qpmc(text);
        CHECK(emit::model_matches_chain(model, chain, 1e-12));
    }
}

TEST_CASE("emission is byte-deterministic") {
    for (int run = 0; run < 2; ++run) {
        const Qmc a = semantics::build_program_chain(testutil::load_program("toy.qpe"));
        const Qmc b = semantics::build_program_chain(testutil::load_program("toy.qpe"));
        CHECK(emit::emit_qpmc(a) == emit::emit_qpmc(b));
        CHECK(emit::emit_dot(a) == emit::emit_dot(b));
    }
}

TEST_CASE("round trip detects a perturbed chain") {
    const Qmc chain = semantics::build_program_chain(testutil::load_program("reset.qpe"));
    const auto model = emit::read_qpmc(emit::emit_qpmc(chain));

    Qmc tweaked = semantics::build_program_chain(testutil::load_program("reset.qpe"));
    tweaked.edges[0][0].op.kraus[0].at(0, 0) += 1e-6;
    CHECK_FALSE(emit::model_matches_chain(model, tweaked, 1e-12));
}

TEST_CASE("dot rendering") {
    const Qmc reset = semantics::build_program_chain(testutil::load_program("reset.qpe"));
    const std::string dot = emit::emit_dot(reset);
    CHECK(dot.rfind("digraph qmc {", 0) == 0);
    CHECK(count_occurrences(dot, "label=\"(") == 3);  // one node label per state
    CHECK(count_occurrences(dot, " -> ") == 4);
    CHECK(dot.find("style=dashed") == std::string::npos);

    const Qmc exiton = semantics::build_program_chain(testutil::load_program("exiton.qpe"));
    const std::string dashed = emit::emit_dot(exiton);
    CHECK(count_occurrences(dashed, "style=dashed") == 1);  // the exit loop-back

    // A single absorbing state renders as one node with its self-loop.
    Qmc tiny = semantics::build_program_chain(testutil::load_program("reset.qpe"));
    tiny.states.erase(tiny.states.begin(), tiny.states.begin() + 1);
    tiny.states.resize(1);
    tiny.states[0].residual.clear();
    tiny.states[0].residual_text = "_";
    tiny.edges.clear();
    tiny.edges.push_back({Qmc::Edge{0, linalg::Superoperator::identity(2), false}});
    const std::string one = emit::emit_dot(tiny);
    CHECK(count_occurrences(one, "label=\"(") == 1);
    CHECK(count_occurrences(one, " -> ") == 1);
}

TEST_CASE("teleportation model dimensions") {
    const Qmc chain =
        semantics::build_program_chain(testutil::load_program("teleport_measured.qpe"));
    const auto model = emit::read_qpmc(emit::emit_qpmc(chain));
    CHECK(model.num_states == 43);
    CHECK(model.dim == 8);
    const std::string dot = emit::emit_dot(chain);
    CHECK(count_occurrences(dot, "label=\"(") == 43);
}

TEST_CASE("kraus-list constants survive the round trip") {
    // Corpus edges are all single-Kraus; force a genuine Kraus list by
    // merging the two measurement branches into one edge.
    Qmc chain = semantics::build_program_chain(testutil::load_program("hmeasure.qpe"));
    REQUIRE(chain.edges[1].size() == 2);
    const auto ms = linalg::measure_superops(0, 2);
    chain.edges[1].clear();
    chain.edges[1].push_back(Qmc::Edge{2, linalg::sum(ms.first, ms.second), false});

    const std::string text = emit::emit_qpmc(chain);
    CHECK(text.find("const superoperator K0 = kraus(") != std::string::npos);
    const auto model = emit::read_qpmc(text);
    CHECK(emit::model_matches_chain(model, chain, 1e-12));
}
