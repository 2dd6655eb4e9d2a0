#include <doctest.h>

#include "random_graphs.hpp"
#include "seqimit/cg_format.hpp"
#include "seqimit/fixtures.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/oracle.hpp"
#include "seqimit/separation.hpp"

using namespace seqimit;
using seqimit::testing::Rng;

namespace {

Contexts ctx(const CausalDiagram& g, std::vector<std::vector<std::string>> names) {
    Contexts out;
    for (const auto& n : names) out.push_back(g.set_of(n));
    return out;
}

std::vector<NodeId> subset_of_actions(const ImitationQuery& q, unsigned mask) {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < q.actions.size(); ++i)
        if ((mask >> i) & 1U) out.push_back(q.actions[i]);
    return out;
}

}  // namespace

TEST_CASE("G'_i replaces the parents of later actions") {
    const auto q = fixture("fig1c").query;
    const auto& g = q.diagram;
    const auto c = ctx(g, {{}, {"Z"}});
    CHECK(build_g_prime(q, c, 1) == g);

    auto g1 = build_g_prime(q, c, 0);
    CHECK(g1.parents(g.id("X2")) == g.set_of({"Z"}));
    for (NodeId v = 0; v < g.size(); ++v)
        if (v != g.id("X2")) CHECK(g1.parents(v) == g.parents(v));

    const auto q2c = fixture("fig2c").query;
    const auto& g2c = q2c.diagram;
    auto gp = build_g_prime(q2c, ctx(g2c, {{}, {"Z"}}), 0);
    CHECK_FALSE(has_directed_path(gp, g2c.id("X1"), g2c.id("Y")));
}

TEST_CASE("malformed contexts are rejected") {
    const auto q = fixture("fig1c").query;
    const auto& g = q.diagram;
    CHECK_THROWS_AS(validate_contexts(q, ctx(g, {{}})), diagram_error);
    CHECK_THROWS_AS(validate_contexts(q, ctx(g, {{"Z"}, {}})), diagram_error);
    CHECK_THROWS_AS(validate_contexts(q, ctx(g, {{}, {"U"}})), diagram_error);
    CHECK_THROWS_AS(verify_sequential_pi_backdoor(q, ctx(g, {{}, {"X2"}})), diagram_error);
    CHECK_THROWS_AS(build_g_prime(q, ctx(g, {{}, {"U"}}), 0), diagram_error);
}

TEST_CASE("sequential pi-backdoor on the built-in examples") {
    {
        // X3 <-> X2 <- A -> Y stays open unless A joins the last context
        const auto q = fixture("fig5").query;
        auto r = verify_sequential_pi_backdoor(q, ctx(q.diagram, {{}, {"A"}, {"A", "X2", "C"}}));
        CHECK(r.pass);
        CHECK(r.conditions == std::vector<Condition>{Condition::NonAncestor, Condition::Backdoor, Condition::Backdoor});
        auto without_a = verify_sequential_pi_backdoor(q, ctx(q.diagram, {{}, {"A"}, {"X2", "C"}}));
        CHECK_FALSE(without_a.pass);
        CHECK(without_a.conditions[2] == Condition::Fail);
    }
    {
        const auto q = fixture("fig1d").query;
        auto c = ctx(q.diagram, {{}, {"Z"}});
        auto r = verify_sequential_pi_backdoor(q, c);
        CHECK_FALSE(r.pass);
        CHECK(r.conditions[0] == Condition::Fail);
        CHECK(r.conditions[1] == Condition::Backdoor);
        CHECK(verify_pearl_sequential_backdoor(q, c));
    }
    {
        const auto q = fixture("fig1c").query;
        auto r = verify_sequential_pi_backdoor(q, ctx(q.diagram, {{}, {"Z"}}));
        CHECK(r.pass);
    }
    {
        auto q = parse_query("obs X Y\nedge X -> Y\norder X Y\nactions X\ntarget Y\n");
        CHECK(verify_pearl_sequential_backdoor(q, ctx(q.diagram, {{}})));
    }
}

TEST_CASE("HasValidAdjustment walkthrough") {
    const auto q = fixture("fig2c").query;
    const auto& g = q.diagram;
    CHECK(has_valid_adjustment(q, g.empty_set(), g.id("X2"), g.id("X2")));
    CHECK(has_valid_adjustment(q, g.set_of({"X2", "W"}), g.id("X1"), g.id("X2")));
    // W sits in a singleton component
    CHECK(has_valid_adjustment(q, g.set_of({"X2"}), g.id("W"), g.id("X2")));

    auto off = parse_query("obs A X Y\nedge X -> Y\norder A X Y\nactions X\ntarget Y\n");
    CHECK_THROWS_AS(has_valid_adjustment(off, off.diagram.empty_set(), off.diagram.id("A"), off.diagram.id("X")),
                    diagram_error);
}

TEST_CASE("FindOx on the built-in examples") {
    {
        const auto q = fixture("fig2c").query;
        const auto& g = q.diagram;
        auto ox = find_ox(q);
        CHECK(ox.keys == g.set_of({"X1", "W", "X2"}));
        CHECK(ox.value(g.id("X2")) == g.id("X2"));
        CHECK(ox.value(g.id("W")) == g.id("X2"));
        CHECK(ox.value(g.id("X1")) == g.id("X2"));
        CHECK_FALSE(ox.value(g.id("Z")).has_value());
        CHECK(boundary_actions(q, ox) == g.set_of({"X2"}));
    }
    {
        auto q = parse_query("obs X A Y\nedge A -> Y\norder X A Y\nactions X\ntarget Y\n");
        auto ox = find_ox(q);
        CHECK(ox.keys.contains(q.diagram.id("X")));
        CHECK(boundary_actions(q, ox).empty());
        CHECK(construct_plan(q).imitable);
    }
    {
        const auto q = fixture("fig1d").query;
        CHECK_FALSE(find_ox(q).keys.contains(q.diagram.id("X1")));
    }
    {
        const auto q = fixture("fig5").query;
        CHECK(boundary_actions(q, find_ox(q)) == q.diagram.set_of({"X2", "X3"}));
    }
}

TEST_CASE("construct_plan on the built-in examples") {
    {
        const auto q = fixture("fig2c").query;
        auto v = construct_plan(q);
        REQUIRE(v.imitable);
        CHECK(v.plan.contexts == ctx(q.diagram, {{}, {"Z"}}));
        CHECK(v.plan.conditions == std::vector<Condition>{Condition::NonAncestor, Condition::Backdoor});
        CHECK(v.missing_actions.empty());
    }
    {
        const auto q = fixture("table1_row3").query;
        CHECK(construct_plan(q).imitable);
        CHECK_FALSE(strategy_contexts(q, Strategy::PiBackdoor).has_value());
        CHECK_FALSE(single_action_pi_backdoor(q, q.diagram.id("X1")).has_value());
    }
    {
        const auto q = fixture("table1_row4").query;
        auto v = construct_plan(q);
        CHECK_FALSE(v.imitable);
        CHECK(v.missing_actions == q.diagram.set_of({"X1"}));
    }
    {
        const auto q = fixture("fig5").query;
        auto v = construct_plan(q);
        REQUIRE(v.imitable);
        CHECK(v.plan.contexts == ctx(q.diagram, {{}, {"A"}, {"A", "X2", "C"}}));
    }
}

TEST_CASE("single-action backdoor sets") {
    {
        const auto q = fixture("audiocar").query;
        CHECK(single_action_pi_backdoor(q, q.diagram.id("X")) == q.diagram.set_of({"F", "B", "S"}));
    }
    {
        auto q = parse_query("obs X A Y\nedge A -> Y\norder X A Y\nactions X\ntarget Y\n");
        auto z = single_action_pi_backdoor(q, q.diagram.id("X"));
        REQUIRE(z.has_value());
        CHECK(z->empty());
    }
}

TEST_CASE("context strategies on the highway model") {
    const auto q = fixture("figb1").query;
    const auto& g = q.diagram;
    auto seq = strategy_contexts(q, Strategy::SeqPiBackdoor);
    REQUIRE(seq.has_value());
    CHECK((*seq)[2] == g.set_of({"R1", "X1", "R2", "X2", "R3"}));
    auto all = strategy_contexts(q, Strategy::AllObserved);
    REQUIRE(all.has_value());
    CHECK((*all)[0] == g.set_of({"R1", "A"}));
    CHECK_FALSE(strategy_contexts(q, Strategy::PiBackdoor).has_value());
    auto op = strategy_contexts(q, Strategy::ObservedParents);
    REQUIRE(op.has_value());
    CHECK((*op)[1] == g.set_of({"R2"}));

    CHECK(parse_strategy("seq") == Strategy::SeqPiBackdoor);
    CHECK(strategy_name(Strategy::ObservedParents) == "parents");
    CHECK_THROWS_AS(parse_strategy("bogus"), std::invalid_argument);
}

TEST_CASE("random queries: plans, oracle agreement, maximality, monotonicity") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        auto q = seqimit::testing::random_query(rng);
        CAPTURE(serialize_query(q));
        auto v = construct_plan(q);
        auto v_again = construct_plan(q);
        CHECK(v.imitable == v_again.imitable);
        CHECK(v.plan.contexts == v_again.plan.contexts);
        CHECK(v.ox.entries == v_again.ox.entries);

        CHECK(v.imitable == v.missing_actions.empty());
        CHECK(v.missing_actions == q.action_set() - v.ox.keys);

        // the plan is valid on the query restricted to the covered actions
        auto covered = restrict_actions(q, v.plan.covered_actions);
        if (!covered.actions.empty()) {
            auto rep = verify_sequential_pi_backdoor(covered, v.plan.contexts);
            CHECK(rep.pass);
            CHECK(rep.conditions == v.plan.conditions);
            for (std::size_t i = 0; i < covered.actions.size(); ++i) {
                if (v.plan.conditions[i] != Condition::NonAncestor) continue;
                auto gp = build_g_prime(covered, v.plan.contexts, i);
                CHECK_FALSE(has_directed_path(gp, covered.actions[i], q.target));
            }
        }

        // oracle equivalence and maximality over every action subset
        CHECK(oracle::enumerate_def3(q).has_value() == v.imitable);
        for (unsigned mask = 1; mask < (1U << q.actions.size()); ++mask) {
            auto sub = restrict_actions(q, subset_of_actions(q, mask));
            CHECK(find_ox(sub).keys.is_subset_of(v.ox.keys));
            if (oracle::enumerate_def3(sub).has_value()) CHECK(sub.action_set().is_subset_of(v.ox.keys));
        }

        // keys are observed and mapped values are actions
        for (auto [k, val] : v.ox.entries) {
            CHECK((q.diagram.is_observed(k) || k == q.target));
            CHECK(q.action_set().contains(val));
        }

        // a plan with only backdoor conditions is also a classic sequential backdoor
        if (v.imitable) {
            bool all_backdoor = true;
            for (auto c : v.plan.conditions) all_backdoor = all_backdoor && c == Condition::Backdoor;
            if (all_backdoor) CHECK(verify_pearl_sequential_backdoor(q, v.plan.contexts));
        }

        // per-action backdoor sets imply imitability
        if (strategy_contexts(q, Strategy::PiBackdoor)) CHECK(v.imitable);
    }
}

TEST_CASE("an all-backdoor sequential pi-backdoor plan is also a classic sequential backdoor") {
    Rng rng(404);
    int tested = 0;
    for (int trial = 0; trial < 3000 && tested < 200; ++trial) {
        auto q = seqimit::testing::random_query(rng);
        Contexts c;
        for (NodeId x : q.actions) c.push_back(seqimit::testing::random_subset(rng, before(q.diagram, x) & q.diagram.observed()));
        auto rep = verify_sequential_pi_backdoor(q, c);
        if (!rep.pass) continue;
        bool all_backdoor = true;
        for (auto cond : rep.conditions) all_backdoor = all_backdoor && cond == Condition::Backdoor;
        if (!all_backdoor) continue;
        ++tested;
        CHECK(verify_pearl_sequential_backdoor(q, c));
    }
    CHECK(tested > 20);
}
