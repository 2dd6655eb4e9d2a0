#include <doctest.h>

#include <sstream>

#include "random_graphs.hpp"
#include "seqimit/cg_format.hpp"
#include "seqimit/fixtures.hpp"
#include "seqimit/oracle.hpp"
#include "seqimit/witness.hpp"

using namespace seqimit;
using seqimit::testing::Rng;

namespace {

std::string data(const std::string& name) { return std::string(SEQIMIT_TEST_DATA) + "/" + name; }

double best_value(const ImitationQuery& q, const DiscreteScm& m) {
    return oracle::best_imitator(m, q.actions, witness_contexts(q), q.target).best_value;
}

}  // namespace

TEST_CASE("witness on the latent chain graph") {
    auto q = parse_query_file(data("fig4.cg"));
    const auto& g = q.diagram;
    auto w = chain_witness(q, g.id("X1"));
    std::vector<std::string> chain;
    for (NodeId v : w.chain) chain.push_back(g.name(v));
    CHECK(chain == std::vector<std::string>{"Y", "U3", "Z3", "U2", "Z2", "U1", "X1"});
    CHECK(w.scm.diagram() == g);
    CHECK(expectation(w.scm, q.target) == 1.0);
    double best = best_value(q, w.scm);
    CHECK(best <= 0.75);
    CHECK(best == doctest::Approx(0.5).epsilon(1e-12));

    // X2 has no latent parent at all
    CHECK_THROWS_AS(chain_witness(q, g.id("X2")), witness_error);
    CHECK_THROWS_AS(chain_witness(q, g.id("Z1")), witness_error);
}

TEST_CASE("witness on the two-action counterexample") {
    auto q = parse_query_file(data("fig1d.cg"));
    auto w = chain_witness(q, q.diagram.id("X1"));
    CHECK(expectation(w.scm, q.target) == 1.0);
    CHECK(best_value(q, w.scm) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a single confounded action") {
    auto q = parse_query("obs X\nlat Y\nedge X -> Y\nedge X <-> Y\norder X Y\nactions X\ntarget Y\n");
    auto w = chain_witness(q, q.diagram.id("X"));
    CHECK(w.chain.size() == 3);
    CHECK(expectation(w.scm, q.target) == 1.0);
    CHECK(best_value(q, w.scm) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("actions outside the confounded component are rejected") {
    auto q = parse_query("obs X Y\nedge X -> Y\norder X Y\nactions X\ntarget Y\n");
    CHECK_THROWS_AS(chain_witness(q, q.diagram.id("X")), witness_error);
    auto far = parse_query("obs X A Y\nedge A -> Y\nedge X <-> A\norder X A Y\nactions X\ntarget Y\n");
    CHECK_THROWS_AS(chain_witness(far, far.diagram.id("X")), witness_error);
}

TEST_CASE("witness listings survive a round trip") {
    auto q = parse_query_file(data("fig4.cg"));
    auto w = chain_witness(q, q.diagram.id("X1"));
    std::stringstream s;
    write_scm(s, w.scm);
    auto back = read_scm(s);
    CHECK(back.diagram() == w.scm.diagram());
    CHECK(back.cardinalities() == w.scm.cardinalities());
    for (NodeId v = 0; v < back.size(); ++v) CHECK(back.table(v) == w.scm.table(v));
}

TEST_CASE("witnesses on random queries") {
    Rng rng(606);
    int built = 0, scored = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        auto q = seqimit::testing::random_query(rng);
        auto verdict = construct_plan(q);
        for (NodeId x : q.actions) {
            std::optional<ChainWitness> w;
            try {
                w = chain_witness(q, x);
            } catch (const witness_error&) {
                continue;
            }
            ++built;
            CAPTURE(serialize_query(q));
            CHECK(w->scm.diagram() == q.diagram);
            CHECK(w->chain.front() == q.target);
            CHECK(w->chain.back() == x);
            CHECK(expectation(w->scm, q.target) == 1.0);
            double best;
            try {
                best = best_value(q, w->scm);
            } catch (const oracle::oracle_error&) {
                continue;
            }
            ++scored;
            CHECK(best <= 1.0 + 1e-12);
            // an imitable query cannot be beaten by any model
            if (verdict.imitable) CHECK(best == doctest::Approx(1.0).epsilon(1e-12));
            if (verdict.missing_actions.contains(x)) CHECK(best < 1.0 - 1e-9);
        }
    }
    CHECK(built > 30);
    CHECK(scored > 30);
}
