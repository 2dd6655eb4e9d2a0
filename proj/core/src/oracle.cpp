#include "seqimit/oracle.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace seqimit::oracle {

namespace {

void check_sets(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given) {
    const std::size_t n = g.size();
    if (a.universe() != n || b.universe() != n || given.universe() != n)
        throw std::invalid_argument("oracle: node set from another diagram");
    if (a.intersects(b) || a.intersects(given) || b.intersects(given))
        throw std::invalid_argument("oracle: sets must be pairwise disjoint");
}

// Ancestors (inclusive) by plain depth-first search over parent lists.
std::vector<bool> ancestor_flags(const std::vector<NodeSet>& parents, const NodeSet& seeds) {
    std::vector<bool> seen(parents.size(), false);
    std::vector<NodeId> stack(seeds.begin(), seeds.end());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = true;
        for (NodeId p : parents[v]) stack.push_back(p);
    }
    return seen;
}

std::vector<NodeSet> parent_lists(const CausalDiagram& g) {
    std::vector<NodeSet> out;
    for (NodeId v = 0; v < g.size(); ++v) out.push_back(g.parents(v));
    return out;
}

bool moral_separated(const std::vector<NodeSet>& parents, const NodeSet& a, const NodeSet& b, const NodeSet& given) {
    const std::size_t n = parents.size();
    NodeSet seeds = a | b | given;
    auto keep = ancestor_flags(parents, seeds);
    std::vector<std::vector<NodeId>> adj(n);
    auto link = [&](NodeId x, NodeId y) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    };
    for (NodeId v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        auto ps = parents[v].to_vector();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            link(ps[i], v);
            for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
        }
    }
    std::vector<bool> seen(n, false);
    std::vector<NodeId> stack;
    for (NodeId v : a) {
        seen[v] = true;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (b.contains(v)) return false;
        for (NodeId w : adj[v]) {
            if (seen[w] || given.contains(w)) continue;
            seen[w] = true;
            stack.push_back(w);
        }
    }
    return true;
}

}  // namespace

bool dsep_by_paths(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given) {
    check_sets(g, a, b, given);
    const std::size_t n = g.size();
    if (n > kMaxPathNodes) throw oracle_error("dsep_by_paths: graph has more than " + std::to_string(kMaxPathNodes) + " nodes");
    auto in_an_given = ancestor_flags(parent_lists(g), given);

    // neighbours with a flag telling whether the neighbour is a parent of the node
    std::vector<std::vector<std::pair<NodeId, bool>>> nbrs(n);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId p : g.parents(v)) nbrs[v].emplace_back(p, true);
        for (NodeId c : g.children(v)) nbrs[v].emplace_back(c, false);
    }

    std::vector<bool> on_path(n, false);
    // path[k] = node, into[k] = edge between path[k-1] and path[k] points into path[k]
    std::vector<NodeId> path;
    std::vector<bool> into;

    std::function<bool()> extend = [&]() -> bool {
        const NodeId v = path.back();
        if (path.size() > 1 && b.contains(v)) {
            // every interior node was checked on the way, so this path is active
            return true;
        }
        for (auto [w, w_is_parent] : nbrs[v]) {
            if (on_path[w]) continue;
            // edge v - w points into v when w is v's parent
            const bool edge_into_v = w_is_parent;
            if (path.size() > 1) {
                const bool collider = into.back() && edge_into_v;
                const bool active = collider ? in_an_given[v] : !given.contains(v);
                if (!active) continue;
            }
            on_path[w] = true;
            path.push_back(w);
            into.push_back(!w_is_parent);  // into w iff w is v's child
            if (extend()) return true;
            path.pop_back();
            into.pop_back();
            on_path[w] = false;
        }
        return false;
    };

    for (NodeId s : a) {
        path.assign(1, s);
        into.assign(1, false);
        on_path.assign(n, false);
        on_path[s] = true;
        if (extend()) return false;
    }
    return true;
}

bool dsep_by_moralization(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given) {
    check_sets(g, a, b, given);
    return moral_separated(parent_lists(g), a, b, given);
}

std::optional<Contexts> enumerate_def3(const ImitationQuery& q) {
    const auto& g = q.diagram;
    const std::size_t n = q.actions.size();
    std::vector<std::vector<NodeId>> candidates(n);
    unsigned bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (NodeId v = 0; v < q.actions[i]; ++v)
            if (g.is_observed(v)) candidates[i].push_back(v);
        bits += static_cast<unsigned>(candidates[i].size());
    }
    if (bits > kMaxSearchBits)
        throw oracle_error("enumerate_def3: search space of 2^" + std::to_string(bits) + " assignments exceeds the cap");

    const auto base = parent_lists(g);
    Contexts chosen(n, NodeSet(g.size()));

    auto condition_holds = [&](std::size_t i) {
        auto parents = base;
        for (std::size_t j = i + 1; j < n; ++j) parents[q.actions[j]] = chosen[j];
        const NodeId x = q.actions[i];
        const NodeSet ys(g.size(), {q.target});
        if (!ancestor_flags(parents, ys)[x]) return true;  // X_i no longer reaches Y
        for (auto& ps : parents) ps.erase(x);
        return moral_separated(parents, NodeSet(g.size(), {x}), ys, chosen[i]);
    };

    std::function<bool(std::size_t)> search = [&](std::size_t remaining) -> bool {
        if (remaining == 0) return true;
        const std::size_t i = remaining - 1;
        const auto& cand = candidates[i];
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
            NodeSet z(g.size());
            for (std::size_t k = 0; k < cand.size(); ++k)
                if ((mask >> k) & 1U) z.insert(cand[k]);
            chosen[i] = z;
            if (condition_holds(i) && search(i)) return true;
        }
        chosen[i] = NodeSet(g.size());
        return false;
    };

    if (search(n)) return chosen;
    return std::nullopt;
}

namespace {

// Depth-first expectation where each action follows a deterministic choice per context row.
double deterministic_value(const DiscreteScm& m, const std::vector<NodeId>& actions, const Contexts& contexts,
                           const std::vector<std::vector<int>>& choice, NodeId y) {
    const std::size_t n = m.size();
    const auto& g = m.diagram();
    std::vector<int> action_slot(n, -1);
    for (std::size_t i = 0; i < actions.size(); ++i) action_slot[actions[i]] = static_cast<int>(i);
    std::vector<int> value(n, 0);
    double total = 0.0;

    std::function<void(NodeId, double)> walk = [&](NodeId v, double p) {
        if (v == n) {
            total += p * value[y];
            return;
        }
        if (action_slot[v] >= 0) {
            const auto i = static_cast<std::size_t>(action_slot[v]);
            std::size_t row = 0;
            for (NodeId c : contexts[i]) row = row * m.cardinality(c) + static_cast<std::size_t>(value[c]);
            value[v] = choice[i][row];
            walk(v + 1, p);
            return;
        }
        std::size_t row = 0;
        for (NodeId par : g.parents(v)) row = row * m.cardinality(par) + static_cast<std::size_t>(value[par]);
        const auto& t = m.table(v);
        const std::size_t k = m.cardinality(v);
        for (std::size_t val = 0; val < k; ++val) {
            const double q = t[row * k + val];
            if (q == 0.0) continue;
            value[v] = static_cast<int>(val);
            walk(v + 1, p * q);
        }
    };
    walk(0, 1.0);
    return total;
}

}  // namespace

PolicySearchResult best_imitator(const DiscreteScm& m, const std::vector<NodeId>& actions, const Contexts& contexts,
                                 NodeId y) {
    if (actions.size() != contexts.size()) throw oracle_error("best_imitator: one context per action expected");
    const auto& g = m.diagram();
    std::vector<std::size_t> rows(actions.size());
    double log_total = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        rows[i] = 1;
        for (NodeId c : contexts[i]) {
            if (c >= actions[i])
                throw oracle_error("best_imitator: context node " + g.name(c) + " does not precede " +
                                   g.name(actions[i]));
            rows[i] *= m.cardinality(c);
        }
        log_total += static_cast<double>(rows[i]) * std::log2(static_cast<double>(m.cardinality(actions[i])));
    }
    if (log_total > kMaxSearchBits + 1e-9)
        throw oracle_error("best_imitator: more than 2^" + std::to_string(kMaxSearchBits) + " deterministic policies");

    std::vector<std::vector<int>> choice(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) choice[i].assign(rows[i], 0);

    PolicySearchResult result;
    result.best_value = -1.0;
    std::vector<std::vector<int>> best_choice;
    while (true) {
        double v = deterministic_value(m, actions, contexts, choice, y);
        ++result.policies_evaluated;
        if (v > result.best_value) {
            result.best_value = v;
            best_choice = choice;
        }
        // odometer over every (action, row) slot, last slot fastest
        bool carried_out = true;
        for (std::size_t i = actions.size(); i-- > 0 && carried_out;) {
            for (std::size_t r = rows[i]; r-- > 0;) {
                if (++choice[i][r] < static_cast<int>(m.cardinality(actions[i]))) {
                    carried_out = false;
                    break;
                }
                choice[i][r] = 0;
            }
        }
        if (carried_out) break;
    }

    for (std::size_t i = 0; i < actions.size(); ++i) {
        DecisionRule rule;
        rule.action = actions[i];
        rule.context = contexts[i];
        const std::size_t k = m.cardinality(actions[i]);
        rule.table.assign(rows[i] * k, 0.0);
        for (std::size_t r = 0; r < rows[i]; ++r) rule.table[r * k + static_cast<std::size_t>(best_choice[i][r])] = 1.0;
        result.best_policy.rules.push_back(std::move(rule));
    }
    return result;
}

double evaluate_policy(const DiscreteScm& m, const Policy& policy, NodeId y) {
    const std::size_t n = m.size();
    const auto& g = m.diagram();
    std::uint64_t states = 1;
    for (NodeId v = 0; v < n; ++v) {
        states *= m.cardinality(v);
        if (states > kMaxJointStates) throw oracle_error("evaluate_policy: state space too large");
    }
    std::vector<const DecisionRule*> rule_of(n, nullptr);
    for (const auto& r : policy.rules) rule_of.at(r.action) = &r;

    std::vector<int> value(n, 0);
    double total = 0.0;
    for (std::uint64_t s = 0; s < states; ++s) {
        std::uint64_t rest = s;
        for (NodeId v = n; v-- > 0;) {
            value[v] = static_cast<int>(rest % m.cardinality(v));
            rest /= m.cardinality(v);
        }
        double p = 1.0;
        for (NodeId v = 0; v < n && p != 0.0; ++v) {
            const NodeSet& ctx = rule_of[v] ? rule_of[v]->context : g.parents(v);
            const auto& t = rule_of[v] ? rule_of[v]->table : m.table(v);
            std::size_t row = 0;
            for (NodeId c : ctx) row = row * m.cardinality(c) + static_cast<std::size_t>(value[c]);
            p *= t[row * m.cardinality(v) + static_cast<std::size_t>(value[v])];
        }
        total += p * value[y];
    }
    return total;
}

}  // namespace seqimit::oracle
