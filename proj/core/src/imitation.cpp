#include "seqimit/imitation.hpp"

#include <stdexcept>

#include "seqimit/separation.hpp"

namespace seqimit {

namespace {

// Ancestral graph of the target with the target promoted to observed, plus the
// id mapping back to the query's diagram.
struct TargetView {
    CausalDiagram g;
    std::vector<NodeId> to_orig;
    std::vector<NodeId> from_orig;  // g.size() when absent
    NodeId target = 0;
    CComponentPartition parts;

    explicit TargetView(const ImitationQuery& q) {
        const auto& full = q.diagram;
        NodeSet ys(full.size(), {q.target});
        NodeSet keep = ancestors(full, ys);
        to_orig = keep.to_vector();
        g = induced_subgraph(full, keep);
        from_orig.assign(full.size(), g.size());
        for (NodeId v = 0; v < to_orig.size(); ++v) from_orig[to_orig[v]] = v;
        target = from_orig[q.target];
        g = with_visibility(g, target, Visibility::Observed);
        parts = c_components(g);
    }

    bool contains(NodeId orig) const { return from_orig[orig] != g.size(); }

    NodeSet down(const NodeSet& orig) const {
        NodeSet out(g.size());
        for (NodeId v : orig)
            if (contains(v)) out.insert(from_orig[v]);
        return out;
    }

    NodeSet up(const NodeSet& local) const {
        NodeSet out(from_orig.size());
        for (NodeId v : local) out.insert(to_orig[v]);
        return out;
    }
};

bool adjustment_test(const TargetView& view, const NodeSet& keys, NodeId o, NodeId x) {
    const auto& g = view.g;
    const std::size_t cid = view.parts.component_id(o);
    const NodeSet& comp = view.parts.components[cid];
    NodeSet oc = comp - keys;
    oc.erase(o);
    if (oc.empty()) return true;
    NodeSet cond = oc & before(g, x);
    NodeSet rest = oc - cond;
    if (rest.empty()) return true;

    NodeSet region = effective_parents(g, comp, Relatives::Inclusive) | view.parts.witness_latents[cid];
    CausalDiagram sub = induced_subgraph(g, region);
    NodeSet a = translate(NodeSet(g.size(), {o}), g, sub);
    return d_separated(sub, a, translate(rest, g, sub), translate(cond, g, sub));
}

// Keys and values in view-local ids; non-ancestor actions handled by the caller.
std::map<NodeId, NodeId> grow_keys(const TargetView& view, const ImitationQuery& q) {
    const auto& g = view.g;
    NodeSet local_actions = view.down(q.action_set());
    std::map<NodeId, NodeId> map;
    NodeSet keys(g.size());
    const std::size_t max_passes = g.size() + 1;
    std::size_t passes = 0;
    while (true) {
        const std::size_t before_count = map.size();
        for (NodeId o = g.size(); o-- > 0;) {
            if (g.is_latent(o) || keys.contains(o)) continue;
            NodeSet ch = effective_children(g, NodeSet(g.size(), {o}));
            std::optional<NodeId> chosen;
            if (!ch.empty() && ch.is_subset_of(keys)) {
                NodeId earliest = g.size();
                for (NodeId c : ch) earliest = std::min(earliest, map.at(c));
                if (adjustment_test(view, keys, o, earliest)) chosen = earliest;
            } else if (local_actions.contains(o) && adjustment_test(view, keys, o, o)) {
                chosen = o;
            }
            if (chosen) {
                map.emplace(o, *chosen);
                keys.insert(o);
            }
        }
        if (map.size() == before_count) break;
        if (++passes > max_passes) throw std::logic_error("find_ox: key growth did not terminate");
    }
    return map;
}

OxMap ox_from_view(const TargetView& view, const ImitationQuery& q) {
    OxMap ox;
    ox.keys = NodeSet(q.diagram.size());
    for (auto [k, v] : grow_keys(view, q)) {
        ox.entries.emplace(view.to_orig[k], view.to_orig[v]);
        ox.keys.insert(view.to_orig[k]);
    }
    // An action with no directed path to the target never needs adjusting.
    for (NodeId x : q.actions)
        if (!view.contains(x)) {
            ox.entries.emplace(x, x);
            ox.keys.insert(x);
        }
    return ox;
}

NodeSet boundary_from_view(const TargetView& view, const ImitationQuery& q, const OxMap& ox) {
    NodeSet out(q.diagram.size());
    NodeSet local_keys = view.down(ox.keys);
    for (NodeId x : q.actions) {
        if (!ox.keys.contains(x) || !view.contains(x)) continue;
        NodeSet ch = effective_children(view.g, NodeSet(view.g.size(), {view.from_orig[x]}));
        if (!ch.is_subset_of(local_keys)) out.insert(x);
    }
    return out;
}

}  // namespace

std::optional<NodeId> OxMap::value(NodeId v) const {
    auto it = entries.find(v);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

void validate_contexts(const ImitationQuery& q, const Contexts& contexts) {
    const auto& g = q.diagram;
    if (contexts.size() != q.actions.size()) throw diagram_error("one context set per action expected");
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        const NodeId x = q.actions[i];
        if (contexts[i].universe() != g.size()) throw diagram_error("context set from another diagram");
        for (NodeId z : contexts[i]) {
            if (g.is_latent(z)) throw diagram_error("latent node " + g.name(z) + " in context of " + g.name(x));
            if (z >= x) throw diagram_error("context node " + g.name(z) + " does not precede " + g.name(x));
        }
    }
}

CausalDiagram build_g_prime(const ImitationQuery& q, const Contexts& contexts, std::size_t i) {
    validate_contexts(q, contexts);
    if (i >= q.actions.size()) throw std::out_of_range("build_g_prime: action index out of range");
    const auto& g = q.diagram;
    std::vector<NodeSet> parents;
    parents.reserve(g.size());
    for (NodeId v = 0; v < g.size(); ++v) parents.push_back(g.parents(v));
    for (std::size_t j = i + 1; j < q.actions.size(); ++j) parents[q.actions[j]] = contexts[j];
    return CausalDiagram::from_parent_sets(g.nodes(), std::move(parents));
}

SequentialReport verify_sequential_pi_backdoor(const ImitationQuery& q, const Contexts& contexts) {
    validate_contexts(q, contexts);
    const auto& g = q.diagram;
    SequentialReport report;
    report.conditions.assign(q.actions.size(), Condition::Fail);
    report.pass = true;
    const NodeSet ys(g.size(), {q.target});
    for (std::size_t i = q.actions.size(); i-- > 0;) {
        const NodeId x = q.actions[i];
        CausalDiagram gi = build_g_prime(q, contexts, i);
        Condition c = Condition::Fail;
        if (!has_directed_path(gi, x, q.target)) {
            c = Condition::NonAncestor;
        } else {
            const NodeSet xs(g.size(), {x});
            if (d_separated(mutilate(gi, xs, g.empty_set()), xs, ys, contexts[i])) c = Condition::Backdoor;
        }
        report.conditions[i] = c;
        if (c == Condition::Fail) report.pass = false;
    }
    return report;
}

bool verify_pearl_sequential_backdoor(const ImitationQuery& q, const Contexts& contexts) {
    validate_contexts(q, contexts);
    const auto& g = q.diagram;
    NodeSet cond(g.size());
    for (std::size_t i = 0; i < q.actions.size(); ++i) {
        const NodeId x = q.actions[i];
        cond |= contexts[i];
        NodeSet later(g.size());
        for (std::size_t j = i + 1; j < q.actions.size(); ++j) later.insert(q.actions[j]);
        const NodeSet xs(g.size(), {x});
        if (!cond.contains(q.target)) {
            CausalDiagram gi = mutilate(g, xs, later);
            if (!d_separated(gi, xs, NodeSet(g.size(), {q.target}), cond - xs)) return false;
        }
        cond.insert(x);
    }
    return true;
}

bool has_valid_adjustment(const ImitationQuery& q, const NodeSet& ox_keys, NodeId o_i, NodeId x_i) {
    TargetView view(q);
    if (!view.contains(o_i)) throw diagram_error(q.diagram.name(o_i) + " is not an ancestor of the target");
    if (!q.action_index(x_i)) throw diagram_error(q.diagram.name(x_i) + " is not an action");
    if (q.diagram.is_latent(o_i) && o_i != q.target) throw diagram_error(q.diagram.name(o_i) + " is latent");
    // x_i only enters through before(x_i); it need not lie in the ancestral graph
    NodeSet local_keys = view.down(ox_keys);
    NodeId local_x = view.contains(x_i) ? view.from_orig[x_i] : view.g.size();
    if (!view.contains(x_i)) {
        for (NodeId v = 0; v < view.g.size(); ++v)
            if (view.to_orig[v] > x_i) {
                local_x = v;
                break;
            }
    }
    return adjustment_test(view, local_keys, view.from_orig[o_i], local_x);
}

OxMap find_ox(const ImitationQuery& q) {
    validate_query(q);
    return ox_from_view(TargetView(q), q);
}

NodeSet boundary_actions(const ImitationQuery& q, const OxMap& ox) { return boundary_from_view(TargetView(q), q, ox); }

Verdict construct_plan(const ImitationQuery& q) {
    validate_query(q);
    const auto& g = q.diagram;
    TargetView view(q);
    Verdict verdict;
    verdict.ox = ox_from_view(view, q);
    verdict.missing_actions = q.action_set() - verdict.ox.keys;
    verdict.imitable = verdict.missing_actions.empty();

    auto& plan = verdict.plan;
    for (NodeId x : q.actions)
        if (verdict.ox.keys.contains(x)) plan.covered_actions.push_back(x);
    plan.boundary_actions = boundary_from_view(view, q, verdict.ox);

    NodeSet covered_local = view.down(verdict.ox.keys & q.action_set());
    CausalDiagram cut = mutilate(view.g, covered_local, view.g.empty_set());
    plan.global_boundary = view.up(markov_boundary(cut, view.down(verdict.ox.keys)));

    const NodeSet pool = plan.global_boundary | plan.boundary_actions;
    for (NodeId x : plan.covered_actions) plan.contexts.push_back(pool & before(g, x));
    if (!plan.covered_actions.empty()) {
        auto report = verify_sequential_pi_backdoor(restrict_actions(q, plan.covered_actions), plan.contexts);
        plan.conditions = report.conditions;
    }
    return verdict;
}

std::optional<NodeSet> single_action_pi_backdoor(const ImitationQuery& q, NodeId x_i) {
    if (!q.action_index(x_i)) throw diagram_error(q.diagram.name(x_i) + " is not an action");
    TargetView view(q);
    if (!view.contains(x_i)) return q.diagram.empty_set();
    const auto& g = view.g;
    const NodeId x = view.from_orig[x_i];
    const NodeSet xs(g.size(), {x});
    CausalDiagram cut = mutilate(g, xs, g.empty_set());
    NodeSet mb = markov_boundary(cut, xs);
    if (!mb.is_subset_of(before(g, x))) return std::nullopt;
    if (!d_separated(cut, xs, NodeSet(g.size(), {view.target}), mb)) return std::nullopt;
    return view.up(mb);
}

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::SeqPiBackdoor: return "seq";
        case Strategy::PiBackdoor: return "pi";
        case Strategy::ObservedParents: return "parents";
        case Strategy::AllObserved: return "all";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : all_strategies())
        if (strategy_name(s) == name) return s;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected seq, pi, parents or all)");
}

const std::vector<Strategy>& all_strategies() {
    static const std::vector<Strategy> all{Strategy::SeqPiBackdoor, Strategy::PiBackdoor, Strategy::ObservedParents,
                                           Strategy::AllObserved};
    return all;
}

std::optional<Contexts> strategy_contexts(const ImitationQuery& q, Strategy s) {
    const auto& g = q.diagram;
    Contexts out;
    switch (s) {
        case Strategy::AllObserved:
            for (NodeId x : q.actions) out.push_back(g.observed() & before(g, x));
            return out;
        case Strategy::ObservedParents:
            for (NodeId x : q.actions) out.push_back(g.parents(x) & g.observed());
            return out;
        case Strategy::PiBackdoor:
            for (NodeId x : q.actions) {
                auto z = single_action_pi_backdoor(q, x);
                if (!z) return std::nullopt;
                out.push_back(*z);
            }
            return out;
        case Strategy::SeqPiBackdoor: {
            Verdict v = construct_plan(q);
            if (!v.imitable) return std::nullopt;
            return v.plan.contexts;
        }
    }
    return std::nullopt;
}

ImitationQuery restrict_actions(const ImitationQuery& q, const std::vector<NodeId>& actions) {
    ImitationQuery r;
    r.diagram = q.diagram;
    r.actions = actions;
    r.target = q.target;
    return r;
}

}  // namespace seqimit
