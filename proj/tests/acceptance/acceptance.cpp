// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "random_graphs.hpp"
#include "seqimit/cg_format.hpp"
#include "seqimit/experiment.hpp"
#include "seqimit/fixtures.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/oracle.hpp"
#include "seqimit/separation.hpp"
#include "seqimit/witness.hpp"

using namespace seqimit;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

Contexts named(const CausalDiagram& g, std::vector<std::vector<std::string>> names) {
    Contexts out;
    for (const auto& n : names) out.push_back(g.set_of(n));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Outcome verdicts() {
    Outcome o;
    const std::vector<std::pair<std::string, bool>> expected{
        {"fig1c", true},          {"fig1d", false},         {"fig2a", false},       {"fig2b", true},
        {"fig2c", true},          {"fig2d_z_first", true},  {"fig2d_x1_first", false},
        {"table1_row1", true},    {"table1_row2", true},    {"table1_row3", true},  {"table1_row4", false},
        {"figb1", true},          {"fig5", true},
    };
    for (const auto& [name, imitable] : expected) {
        auto q = fixture(name).query;
        o.require(construct_plan(q).imitable == imitable, name + " verdict");
    }
    {
        const auto g = fixture("fig2c").query.diagram;
        const std::vector<std::string> order{"X1", "Z", "W", "X2", "Y"};
        for (std::size_t k = 0; k + 1 < order.size(); ++k)
            o.require(g.id(order[k]) < g.id(order[k + 1]), "fig2c order");
    }
    for (const char* row : {"table1_row1", "table1_row2"}) {
        auto q = fixture(row).query;
        o.require(strategy_contexts(q, Strategy::SeqPiBackdoor).has_value() &&
                      strategy_contexts(q, Strategy::PiBackdoor).has_value(),
                  std::string(row) + " causal methods");
    }
    {
        auto q = fixture("table1_row3").query;
        o.require(strategy_contexts(q, Strategy::SeqPiBackdoor).has_value() &&
                      !strategy_contexts(q, Strategy::PiBackdoor).has_value(),
                  "table1_row3 per-action backdoor");
    }
    {
        auto q = fixture("figb1").query;
        auto v = construct_plan(q);
        const NodeId a = q.diagram.id("A");
        for (const auto& z : v.plan.contexts) o.require(!z.contains(a), "figb1 plan uses A");
    }
    return o;
}

Outcome trace() {
    Outcome o;
    auto q = fixture("fig2c").query;
    const auto& g = q.diagram;
    auto ox = find_ox(q);
    o.require(ox.keys == g.set_of({"X2", "W", "X1"}), "keys");
    for (const char* k : {"X2", "W", "X1"}) o.require(ox.value(g.id(k)) == g.id("X2"), std::string("value of ") + k);
    o.require(boundary_actions(q, ox) == g.set_of({"X2"}), "boundary actions");
    auto v = construct_plan(q);
    o.require(v.plan.contexts == named(g, {{}, {"Z"}}), "plan");
    return o;
}

Outcome sufficiency() {
    Outcome o;
    double worst = 0.0;
    for (const auto& name : fixture_names()) {
        auto f = fixture(name);
        auto v = construct_plan(f.query);
        if (!v.imitable) continue;
        for (std::uint64_t i = 0; i < 100; ++i) {
            auto m = random_scm(f.query.diagram, 2024, i);
            auto p = fit_policy_exact(m, f.query.actions, v.plan.contexts);
            double err = std::abs(expectation(m, f.query.target) - policy_value(m, p, f.query.target));
            worst = std::max(worst, err);
            o.require(err < 1e-9, name + " model " + std::to_string(i));
        }
    }
    if (o.pass) o.detail = "max error " + fmt(worst);
    return o;
}

Outcome bias() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.models = 200;
    cfg.seed = 7;
    auto mean = [](const ExperimentReport& r, Strategy s) { return r.row(s).mean_abs_error; };
    auto run = [&](const char* name) { return run_experiment(fixture(name).query, name, cfg); };

    auto r1 = run("table1_row1");
    o.require(mean(r1, Strategy::AllObserved) > 10 * mean(r1, Strategy::SeqPiBackdoor), "row 1");
    auto r2 = run("table1_row2");
    o.require(mean(r2, Strategy::ObservedParents) > 10 * mean(r2, Strategy::SeqPiBackdoor), "row 2");
    auto r3 = run("table1_row3");
    o.require(mean(r3, Strategy::ObservedParents) > 10 * mean(r3, Strategy::SeqPiBackdoor), "row 3 parents");
    o.require(mean(r3, Strategy::AllObserved) > 10 * mean(r3, Strategy::SeqPiBackdoor), "row 3 all");
    auto r4 = run("table1_row4");
    o.require(r4.row(Strategy::SeqPiBackdoor).not_imitable, "row 4 has no plan");
    o.require(mean(r4, Strategy::ObservedParents) > 0.01, "row 4 parents");
    o.require(mean(r4, Strategy::AllObserved) > 0.01, "row 4 all");
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("row1 AO ") + fmt(mean(r1, Strategy::AllObserved)) +
                " row4 OP " + fmt(mean(r4, Strategy::ObservedParents)) + " row4 AO " +
                fmt(mean(r4, Strategy::AllObserved));
    return o;
}

Outcome adversarial() {
    Outcome o;
    auto best = [](const Fixture& f, std::vector<std::vector<std::string>> c) {
        return oracle::best_imitator(*f.scm, f.query.actions, named(f.query.diagram, c), f.query.target).best_value;
    };
    auto cloning = [](const Fixture& f, const Contexts& c) {
        return policy_value(*f.scm, fit_policy_exact(*f.scm, f.query.actions, c), f.query.target);
    };
    auto expert = [](const Fixture& f) { return expectation(*f.scm, f.query.target); };
    {
        auto f = fixture("propC1");
        o.require(expert(f) == 1.0, "propC1 expert");
        o.require(best(f, {{}, {"Z"}}) == 0.5, "propC1 best");
    }
    {
        auto f = fixture("audiocar_latent_side");
        o.require(expert(f) == 1.0, "audiocar expert");
        o.require(std::abs(best(f, {{"F", "B"}}) - 0.5) < 1e-12, "audiocar best");
    }
    {
        auto f = fixture("substructure1");
        o.require(expert(f) == 1.0, "substructure1 expert");
        auto op = strategy_contexts(f.query, Strategy::ObservedParents);
        o.require(op && std::abs(cloning(f, *op) - 0.5) < 1e-12, "substructure1 cloning");
    }
    for (const char* name : {"substructure2", "figb1"}) {
        auto f = fixture(name);
        const double e = expert(f);
        auto seq = strategy_contexts(f.query, Strategy::SeqPiBackdoor);
        auto all = strategy_contexts(f.query, Strategy::AllObserved);
        o.require(seq && std::abs(cloning(f, *seq) - e) < 1e-9, std::string(name) + " seq");
        double gap = all ? e - cloning(f, *all) : 0.0;
        o.require(gap > 0.05, std::string(name) + " gap " + fmt(gap));
        o.detail += (o.detail.empty() ? "" : "; ") + std::string(name) + " AO gap " + fmt(gap);
    }
    return o;
}

std::vector<ImitationQuery> random_queries() {
    seqimit::testing::Rng rng(500);
    std::vector<ImitationQuery> out;
    while (out.size() < 500) out.push_back(seqimit::testing::random_query(rng));
    return out;
}

Outcome equivalence(const std::vector<ImitationQuery>& qs) {
    Outcome o;
    int imitable = 0;
    for (std::size_t k = 0; k < qs.size(); ++k) {
        bool fast = construct_plan(qs[k]).imitable;
        imitable += fast;
        o.require(oracle::enumerate_def3(qs[k]).has_value() == fast, "query " + std::to_string(k));
    }
    if (o.pass) o.detail = std::to_string(imitable) + " of " + std::to_string(qs.size()) + " imitable";
    return o;
}

Outcome monotonicity(const std::vector<ImitationQuery>& qs) {
    Outcome o;
    for (std::size_t k = 0; k < qs.size(); ++k) {
        const auto& q = qs[k];
        NodeSet keys = find_ox(q).keys;
        for (unsigned mask = 1; mask < (1U << q.actions.size()); ++mask) {
            std::vector<NodeId> sub;
            for (std::size_t i = 0; i < q.actions.size(); ++i)
                if ((mask >> i) & 1U) sub.push_back(q.actions[i]);
            o.require(find_ox(restrict_actions(q, sub)).keys.is_subset_of(keys), "query " + std::to_string(k));
        }
    }
    return o;
}

Outcome dsep() {
    Outcome o;
    seqimit::testing::Rng rng(800);
    std::uniform_int_distribution<std::size_t> total(2, 8);
    std::uniform_real_distribution<double> density(0.2, 0.6);
    int separated = 0;
    for (int graph = 0; graph < 500; ++graph) {
        std::size_t n = total(rng);
        std::uniform_int_distribution<std::size_t> lat(0, std::min<std::size_t>(3, n - 2));
        std::size_t n_lat = lat(rng);
        auto g = seqimit::testing::random_diagram(rng, n - n_lat, n_lat, density(rng));
        for (int k = 0; k < 20; ++k) {
            auto t = seqimit::testing::random_triple(rng, g);
            bool fast = d_separated(g, t.a, t.b, t.given);
            separated += fast;
            o.require(fast == oracle::dsep_by_paths(g, t.a, t.b, t.given), "graph " + std::to_string(graph));
        }
    }
    if (o.pass) o.detail = std::to_string(separated) + " of 10000 separated";
    return o;
}

Outcome witness() {
    Outcome o;
    const std::vector<std::pair<std::string, std::string>> cases{{"fig4.cg", "X1"}, {"fig1d.cg", "X1"}};
    for (const auto& [file, action] : cases) {
        auto q = parse_query_file(std::string(SEQIMIT_TEST_DATA) + "/" + file);
        auto w = chain_witness(q, q.diagram.id(action));
        double e = expectation(w.scm, q.target);
        double b = oracle::best_imitator(w.scm, q.actions, witness_contexts(q), q.target).best_value;
        o.require(e == 1.0, file + " expert");
        o.require(b <= 0.75, file + " best " + fmt(b));
        o.detail += (o.detail.empty() ? "" : "; ") + file + " best " + fmt(b);
    }
    return o;
}

bool report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0 && secs >= limit_s) o.require(false, "took " + fmt(secs) + " s, limit " + fmt(limit_s) + " s");
    std::printf("%s %d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

// With no arguments every criterion runs; otherwise only the listed ids.
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
    auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

    std::vector<ImitationQuery> qs;
    if (wanted(6) || wanted(7)) qs = random_queries();
    const std::vector<std::tuple<int, const char*, double, std::function<Outcome()>>> criteria{
        {1, "fixture verdicts", 1, verdicts},
        {2, "algorithm trace on fig2c", 0, trace},
        {3, "sufficiency of the sequential plan", 60, sufficiency},
        {4, "bias of non-causal cloning", 120, bias},
        {5, "adversarial values", 0, adversarial},
        {6, "oracle equivalence", 120, [&] { return equivalence(qs); }},
        {7, "monotonicity", 0, [&] { return monotonicity(qs); }},
        {8, "d-separation cross-check", 0, dsep},
        {9, "witness generator", 10, witness},
    };
    bool ok = true;
    for (const auto& [id, title, limit, body] : criteria)
        if (wanted(id)) ok &= report(id, title, limit, body);
    return ok ? 0 : 1;
}
