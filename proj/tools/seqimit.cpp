// seqimit: imitability verdicts, plans, fixtures, witnesses and simulations
// for causal diagrams in the .cg text format.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqimit/cg_format.hpp"
#include "seqimit/experiment.hpp"
#include "seqimit/fixtures.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/oracle.hpp"
#include "seqimit/scm.hpp"
#include "seqimit/separation.hpp"
#include "seqimit/witness.hpp"

using namespace seqimit;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kImitable = 0;
constexpr int kError = 1;
constexpr int kNotImitable = 2;

std::string braces(const CausalDiagram& g, const NodeSet& s) {
    std::string out = "{";
    for (NodeId v : s) out += (out.size() > 1 ? ", " : "") + g.name(v);
    return out + "}";
}

std::string joined(const CausalDiagram& g, const NodeSet& s) {
    std::string out;
    for (NodeId v : s) out += (out.empty() ? "" : " ") + g.name(v);
    return out.empty() ? "-" : out;
}

ordered_json verdict_json(const ImitationQuery& q, const Verdict& v) {
    const auto& g = q.diagram;
    ordered_json j;
    j["imitable"] = v.imitable;
    j["ox"] = g.names_of(v.ox.keys);
    j["missing_actions"] = g.names_of(v.missing_actions);
    j["boundary_actions"] = g.names_of(v.plan.boundary_actions);
    j["plan"] = ordered_json::array();
    for (std::size_t i = 0; i < v.plan.covered_actions.size(); ++i) {
        ordered_json step;
        step["action"] = g.name(v.plan.covered_actions[i]);
        step["context"] = g.names_of(v.plan.contexts[i]);
        step["condition"] = static_cast<int>(v.plan.conditions[i]);
        j["plan"].push_back(step);
    }
    return j;
}

const char* condition_text(Condition c) {
    switch (c) {
        case Condition::Backdoor: return "backdoor";
        case Condition::NonAncestor: return "not an ancestor of the target";
        case Condition::Fail: return "fails";
    }
    return "?";
}

int cmd_verdict(const std::string& path, bool json, bool detailed) {
    ImitationQuery q = parse_query_file(path);
    Verdict v = construct_plan(q);
    const auto& g = q.diagram;
    if (json) {
        std::cout << verdict_json(q, v).dump(2) << '\n';
    } else {
        std::cout << (v.imitable ? "imitable" : "not imitable") << '\n';
        if (!v.imitable) std::cout << "missing actions: " << joined(g, v.missing_actions) << '\n';
        if (detailed) {
            std::cout << "ox:";
            for (auto [k, val] : v.ox.entries) std::cout << ' ' << g.name(k) << ':' << g.name(val);
            std::cout << '\n' << "boundary actions: " << joined(g, v.plan.boundary_actions) << '\n';
        }
        std::cout << "plan:\n";
        for (std::size_t i = 0; i < v.plan.covered_actions.size(); ++i)
            std::cout << "  " << g.name(v.plan.covered_actions[i]) << "  context " << braces(g, v.plan.contexts[i])
                      << "  (" << condition_text(v.plan.conditions[i]) << ")\n";
    }
    return v.imitable ? kImitable : kNotImitable;
}

NodeSet parse_set(const CausalDiagram& g, const std::string& text) {
    std::vector<std::string> names;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) names.push_back(item);
    return g.set_of(names);
}

int cmd_dsep(const std::string& path, const std::vector<std::string>& sets) {
    ImitationQuery q = parse_query_file(path);
    const auto& g = q.diagram;
    if (sets.size() < 2 || sets.size() > 3) throw std::invalid_argument("dsep expects A B [GIVEN], comma separated");
    NodeSet a = parse_set(g, sets[0]), b = parse_set(g, sets[1]);
    NodeSet z = sets.size() == 3 ? parse_set(g, sets[2]) : g.empty_set();
    bool sep = d_separated(g, a, b, z);
    std::cout << braces(g, a) << (sep ? " _||_ " : " not _||_ ") << braces(g, b) << " | " << braces(g, z) << '\n';
    return 0;
}

int cmd_ccomp(const std::string& path) {
    ImitationQuery q = parse_query_file(path);
    const auto& g = q.diagram;
    auto parts = c_components(g);
    for (std::size_t i = 0; i < parts.components.size(); ++i) {
        std::cout << braces(g, parts.components[i]);
        if (!parts.witness_latents[i].empty()) std::cout << "  via " << braces(g, parts.witness_latents[i]);
        std::cout << '\n';
    }
    return 0;
}

int cmd_fixtures(const std::string& action, const std::string& name) {
    if (action == "list") {
        for (const auto& n : fixture_names()) std::cout << n << "  " << fixture(n).description << '\n';
        return 0;
    }
    if (action != "run") throw std::invalid_argument("fixtures expects 'list' or 'run NAME'");
    if (name.empty()) throw std::invalid_argument("fixtures run needs a fixture name or 'all'");
    std::vector<std::string> names = name == "all" ? fixture_names() : std::vector<std::string>{name};
    bool ok = true;
    for (const auto& n : names) {
        FixtureReport rep = run_fixture(fixture(n));
        write_fixture_report(std::cout, rep);
        ok = ok && rep.pass();
    }
    return ok ? 0 : kError;
}

int cmd_witness(const std::string& path, const std::string& action) {
    ImitationQuery q = parse_query_file(path);
    const auto& g = q.diagram;
    ChainWitness w = chain_witness(q, g.id(action));
    std::cout << "chain:";
    for (std::size_t k = 0; k < w.chain.size(); ++k) {
        if (k > 0) {
            const bool forward = g.has_edge(w.chain[k - 1], w.chain[k]);
            std::cout << (forward ? " ->" : " <-");
        }
        std::cout << ' ' << g.name(w.chain[k]);
    }
    std::cout << '\n';
    write_scm(std::cout, w.scm);
    const Contexts ctx = witness_contexts(q);
    auto best = oracle::best_imitator(w.scm, q.actions, ctx, q.target);
    std::cout << "expert " << expectation(w.scm, q.target) << '\n';
    std::cout << "best imitator " << best.best_value << " over " << best.policies_evaluated
              << " deterministic policies\n";
    return 0;
}

std::vector<Strategy> parse_methods(const std::string& text) {
    std::vector<Strategy> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_strategy(item));
    if (out.empty()) throw std::invalid_argument("no methods given");
    return out;
}

int cmd_simulate(const std::string& path, const ExperimentConfig& config, const std::string& csv) {
    ImitationQuery q = parse_query_file(path);
    const std::string graph = std::filesystem::path(path).stem().string();
    ExperimentReport rep = run_experiment(q, graph, config);
    if (!csv.empty()) {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot write " + csv);
        write_report_csv(out, rep);
    }
    for (const auto& r : rep.rows) {
        std::cout << graph << "  " << strategy_name(r.method) << "  ";
        if (r.not_imitable)
            std::cout << "not imitable\n";
        else
            std::cout << "mean |E[Y]-E[Y^]| " << r.mean_abs_error << "  std " << r.std << '\n';
    }
    return 0;
}

int cmd_oracle_check(const std::string& path) {
    ImitationQuery q = parse_query_file(path);
    auto start = std::chrono::steady_clock::now();
    Verdict v = construct_plan(q);
    auto mid = std::chrono::steady_clock::now();
    bool found = oracle::enumerate_def3(q).has_value();
    auto end = std::chrono::steady_clock::now();
    auto ms = [](auto d) { return std::chrono::duration<double, std::milli>(d).count(); };
    const bool agree = found == v.imitable;
    std::cout << "verdict " << (v.imitable ? "imitable" : "not imitable") << " (" << ms(mid - start) << " ms)\n";
    std::cout << "oracle " << (found ? "imitable" : "not imitable") << " (" << ms(end - mid) << " ms)\n";
    std::cout << "agreement " << (agree ? "yes" : "no") << '\n';
    return agree ? 0 : kError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide causal imitability of sequential decisions"};
    app.require_subcommand(1);

    std::string graph;
    bool json = false;
    auto add_graph = [&](CLI::App* sub) { sub->add_option("-g,--graph,graph", graph, "query file (.cg)")->required(); };

    auto* check = app.add_subcommand("check", "print the imitability verdict");
    add_graph(check);
    check->add_flag("--json", json, "emit the verdict as JSON");

    auto* plan = app.add_subcommand("plan", "print the verdict with the full adjustment plan");
    add_graph(plan);
    plan->add_flag("--json", json, "emit the verdict as JSON");

    std::vector<std::string> sets;
    auto* dsep = app.add_subcommand("dsep", "test d-separation: A B [GIVEN], comma-separated names");
    dsep->add_option("-g,--graph", graph, "query file (.cg)")->required();
    dsep->add_option("sets", sets, "A B [GIVEN]")->required();

    auto* ccomp = app.add_subcommand("ccomp", "list confounded components");
    add_graph(ccomp);

    std::string fixture_action, fixture_name;
    auto* fixtures = app.add_subcommand("fixtures", "list or run the built-in examples");
    fixtures->add_option("command", fixture_action, "list | run")->required();
    fixtures->add_option("name", fixture_name, "fixture name or 'all'");

    std::string action;
    auto* witness = app.add_subcommand("witness", "build the XOR chain counterexample for an action");
    add_graph(witness);
    witness->add_option("--action", action, "action in the confounded component of the target")->required();

    ExperimentConfig config;
    std::string methods = "seq,pi,parents,all";
    std::string csv;
    auto* simulate = app.add_subcommand("simulate", "clone policies on random models and report errors");
    add_graph(simulate);
    simulate->add_option("--models", config.models, "number of random models")->capture_default_str();
    simulate->add_option("--samples", config.samples, "samples per model, 0 for exact conditionals")
        ->capture_default_str();
    simulate->add_option("--methods", methods, "comma-separated: seq, pi, parents, all")->capture_default_str();
    simulate->add_option("--seed", config.seed, "base seed")->capture_default_str();
    simulate->add_option("--threads", config.threads, "worker threads, 0 for all cores")->capture_default_str();
    simulate->add_option("--csv", csv, "also write the report as CSV");

    std::string oracle_command;
    auto* oracle_cmd = app.add_subcommand("oracle", "cross-check the verdict against exhaustive search");
    oracle_cmd->add_option("command", oracle_command, "check")->required()->check(CLI::IsMember({"check"}));
    oracle_cmd->add_option("-g,--graph", graph, "query file (.cg)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kError;
    }

    try {
        if (*check) return cmd_verdict(graph, json, false);
        if (*plan) return cmd_verdict(graph, json, true);
        if (*dsep) return cmd_dsep(graph, sets);
        if (*ccomp) return cmd_ccomp(graph);
        if (*fixtures) return cmd_fixtures(fixture_action, fixture_name);
        if (*witness) return cmd_witness(graph, action);
        if (*simulate) {
            config.methods = parse_methods(methods);
            return cmd_simulate(graph, config, csv);
        }
        if (*oracle_cmd) return cmd_oracle_check(graph);
    } catch (const parse_error& e) {
        std::cerr << graph << ": " << e.what() << '\n';
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
