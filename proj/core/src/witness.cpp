#include "seqimit/witness.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "seqimit/separation.hpp"

namespace seqimit {

namespace {

enum class Role { Constant, Source, Copy, Collider, Action, Target, Tree };

struct Layout {
    std::vector<Role> role;
    std::vector<NodeId> copy_of;                   // Copy: the latent it repeats
    std::vector<std::vector<NodeId>> chain_inputs;  // Collider, Action, Target: latent neighbours on the chain
    std::vector<NodeSet> tree_parents;
};

void check_hypothesis(const ImitationQuery& q, NodeId x_i) {
    const auto& g = q.diagram;
    if (!q.action_set().contains(x_i)) throw witness_error(g.name(x_i) + " is not an action");
    const NodeId y = q.target;
    if (!has_directed_path(g, x_i, y) && x_i != y)
        throw witness_error(g.name(x_i) + " is not an ancestor of " + g.name(y));
    auto gy = ancestral_graph(g, y);
    gy = with_visibility(gy, gy.id(g.name(y)), Visibility::Observed);
    NodeSet comp = c_component_of(gy, NodeSet(gy.size(), {gy.id(g.name(y))}));
    if (!comp.contains(gy.id(g.name(x_i))))
        throw witness_error(g.name(x_i) + " is not in the confounded component of " + g.name(y));
}

// Shortest path Y <- L ... L' -> x_i with latent non-colliders and observed
// non-action colliders in the interior.
std::vector<NodeId> find_chain(const ImitationQuery& q, NodeId x_i, const NodeSet& anc) {
    const auto& g = q.diagram;
    const NodeId y = q.target;
    const NodeSet actions = q.action_set();
    std::vector<NodeId> path{y}, best;
    std::vector<bool> on_path(g.size(), false);
    on_path[y] = true;

    // v is latent; into_v tells whether the path edge reaching v points into it
    std::function<void(NodeId, bool)> walk = [&](NodeId v, bool into_v) {
        if (!best.empty() && path.size() + 1 >= best.size()) return;
        auto step = [&](NodeId w, bool into_w) {
            on_path[w] = true;
            path.push_back(w);
            walk(w, into_w);
            path.pop_back();
            on_path[w] = false;
        };
        if (!into_v) {
            for (NodeId p : g.parents(v))
                if (!on_path[p] && g.is_latent(p) && p != y) step(p, false);
        }
        for (NodeId c : g.children(v)) {
            if (on_path[c] || !anc.contains(c) || c == y) continue;
            if (g.is_latent(c)) {
                step(c, true);
                continue;
            }
            if (c == x_i) {
                path.push_back(c);
                if (best.empty() || path.size() < best.size()) best = path;
                path.pop_back();
                continue;
            }
            if (actions.contains(c)) continue;
            // c is a collider: leave it through another latent parent
            on_path[c] = true;
            path.push_back(c);
            for (NodeId p : g.parents(c))
                if (!on_path[p] && g.is_latent(p) && p != y) step(p, false);
            path.pop_back();
            on_path[c] = false;
        }
    };

    for (NodeId l : g.parents(y)) {
        if (!g.is_latent(l)) continue;
        on_path[l] = true;
        path.push_back(l);
        walk(l, false);
        path.pop_back();
        on_path[l] = false;
    }
    if (best.empty())
        throw witness_error("no latent chain from " + g.name(y) + " to " + g.name(x_i) +
                            " avoids the other actions");
    return best;
}

Layout lay_out(const ImitationQuery& q, NodeId x_i, const NodeSet& anc, const std::vector<NodeId>& chain) {
    const auto& g = q.diagram;
    const std::size_t n = g.size();
    Layout out;
    out.role.assign(n, Role::Constant);
    out.copy_of.assign(n, 0);
    out.chain_inputs.assign(n, {});
    out.tree_parents.assign(n, NodeSet(n));

    NodeSet chain_latents(n);
    for (std::size_t k = 1; k + 1 < chain.size(); ++k) {
        const NodeId v = chain[k];
        if (g.is_observed(v)) {
            out.role[v] = Role::Collider;
            out.chain_inputs[v] = {chain[k - 1], chain[k + 1]};
            continue;
        }
        chain_latents.insert(v);
        out.role[v] = Role::Source;
        for (NodeId u : {chain[k - 1], chain[k + 1]}) {
            if (g.is_latent(u) && u != q.target && g.has_edge(u, v)) {
                out.role[v] = Role::Copy;
                out.copy_of[v] = u;
            }
        }
    }
    out.role[q.target] = Role::Target;
    out.chain_inputs[q.target] = {chain[1]};
    out.role[x_i] = Role::Action;
    out.chain_inputs[x_i] = {chain[chain.size() - 2]};

    NodeSet in_tree(n, {q.target});
    std::vector<NodeId> roots{x_i};
    for (NodeId v : chain)
        if (out.role[v] == Role::Collider) roots.push_back(v);
    std::sort(roots.rbegin(), roots.rend());
    for (NodeId r : roots) {
        std::vector<NodeId> prev(n, r);
        std::vector<bool> seen(n, false);
        std::deque<NodeId> queue{r};
        seen[r] = true;
        NodeId hit = r;
        bool found = false;
        while (!queue.empty() && !found) {
            NodeId v = queue.front();
            queue.pop_front();
            for (NodeId c : g.children(v)) {
                if (seen[c] || !anc.contains(c) || chain_latents.contains(c)) continue;
                seen[c] = true;
                prev[c] = v;
                if (in_tree.contains(c)) {
                    hit = c;
                    found = true;
                    break;
                }
                queue.push_back(c);
            }
        }
        if (!found) throw witness_error("no directed path from " + g.name(r) + " to " + g.name(q.target) +
                                        " avoids the chain");
        for (NodeId v = hit; v != r; v = prev[v]) {
            out.tree_parents[v].insert(prev[v]);
            in_tree.insert(prev[v]);
            if (out.role[prev[v]] == Role::Constant) out.role[prev[v]] = Role::Tree;
        }
    }
    return out;
}

}  // namespace

ChainWitness chain_witness(const ImitationQuery& q, NodeId x_i) {
    check_hypothesis(q, x_i);
    const auto& g = q.diagram;
    const NodeSet anc = ancestors(g, NodeSet(g.size(), {q.target}));
    auto chain = find_chain(q, x_i, anc);
    Layout lay = lay_out(q, x_i, anc, chain);

    const std::vector<std::size_t> cards(g.size(), 2);
    std::vector<std::vector<double>> tables(g.size());
    Assignment a(g.size(), 0);
    for (NodeId v = 0; v < g.size(); ++v) {
        const NodeSet& pa = g.parents(v);
        const std::size_t rows = context_row_count(pa, cards);
        auto& t = tables[v];
        t.assign(rows * 2, 0.0);
        for (std::size_t row = 0; row < rows; ++row) {
            decode_context_row(pa, cards, row, a);
            int tree_xor = 0;
            for (NodeId p : lay.tree_parents[v]) tree_xor ^= a[p];
            int inputs = 0;
            for (NodeId u : lay.chain_inputs[v]) inputs ^= a[u];
            int value = 1;
            switch (lay.role[v]) {
                case Role::Source:
                    t[row * 2] = t[row * 2 + 1] = 0.5;
                    continue;
                case Role::Copy: value = a[lay.copy_of[v]]; break;
                case Role::Collider:
                case Role::Action: value = inputs ^ tree_xor; break;
                case Role::Target: value = inputs == tree_xor ? 1 : 0; break;
                case Role::Tree: value = tree_xor; break;
                case Role::Constant: value = 1; break;
            }
            t[row * 2 + static_cast<std::size_t>(value)] = 1.0;
        }
    }
    return ChainWitness{DiscreteScm(g, cards, std::move(tables)), std::move(chain)};
}

Contexts witness_contexts(const ImitationQuery& q) {
    const auto& g = q.diagram;
    const NodeSet actions = q.action_set();
    Contexts out;
    for (NodeId x : q.actions) {
        NodeSet z(g.size());
        for (NodeId v = 0; v < x; ++v)
            if (g.is_observed(v) && !actions.contains(v)) z.insert(v);
        out.push_back(z);
    }
    return out;
}

}  // namespace seqimit
