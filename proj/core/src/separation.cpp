#include "seqimit/separation.hpp"

#include <numeric>
#include <stdexcept>

namespace seqimit {

namespace {

void require_observed(const CausalDiagram& g, const NodeSet& s, const char* who) {
    for (NodeId v : s)
        if (g.is_latent(v)) throw diagram_error(std::string(who) + ": latent node " + g.name(v) + " not allowed");
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

bool d_separated(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given) {
    const std::size_t n = g.size();
    if (a.universe() != n || b.universe() != n || given.universe() != n)
        throw std::invalid_argument("d_separated: node set from another diagram");
    if (a.intersects(b) || a.intersects(given) || b.intersects(given))
        throw std::invalid_argument("d_separated: sets must be pairwise disjoint");
    if (a.empty() || b.empty()) return true;

    const NodeSet anc_given = ancestors(g, given);
    // Reachability over (node, arrived-from-child) and (node, arrived-from-parent) states.
    NodeSet up_seen(n), down_seen(n);
    std::vector<std::pair<NodeId, bool>> stack;  // bool: travelling up (arrived from a child)
    for (NodeId v : a) stack.emplace_back(v, true);
    while (!stack.empty()) {
        auto [v, up] = stack.back();
        stack.pop_back();
        NodeSet& seen = up ? up_seen : down_seen;
        if (seen.contains(v)) continue;
        seen.insert(v);
        const bool blocked = given.contains(v);
        if (!blocked && b.contains(v)) return false;
        if (up) {
            if (blocked) continue;
            for (NodeId p : g.parents(v)) stack.emplace_back(p, true);
            for (NodeId c : g.children(v)) stack.emplace_back(c, false);
        } else {
            if (!blocked)
                for (NodeId c : g.children(v)) stack.emplace_back(c, false);
            if (anc_given.contains(v))
                for (NodeId p : g.parents(v)) stack.emplace_back(p, true);
        }
    }
    return true;
}

CComponentPartition c_components(const CausalDiagram& g) {
    const std::size_t n = g.size();
    DisjointSets groups(n);
    // Two latents are connected when adjacent, or when they share an observed
    // child (a collider). Any latent-to-latent path whose observed nodes are all
    // colliders is a chain of these two steps.
    for (NodeId v = 0; v < n; ++v) {
        NodeId first_latent_parent = n;
        for (NodeId p : g.parents(v)) {
            if (!g.is_latent(p)) continue;
            if (g.is_latent(v)) groups.unite(p, v);
            if (first_latent_parent == n)
                first_latent_parent = p;
            else if (g.is_observed(v))
                groups.unite(first_latent_parent, p);
        }
    }

    CComponentPartition out;
    out.member_index.assign(n, CComponentPartition::npos);
    std::vector<std::size_t> group_component(n, CComponentPartition::npos);
    for (NodeId v = 0; v < n; ++v) {
        if (g.is_latent(v)) continue;
        NodeId root = n;
        for (NodeId p : g.parents(v))
            if (g.is_latent(p)) {
                root = groups.find(p);
                break;
            }
        std::size_t id;
        if (root == n) {
            id = out.components.size();
            out.components.emplace_back(n);
            out.witness_latents.emplace_back(n);
        } else if (group_component[root] == CComponentPartition::npos) {
            id = group_component[root] = out.components.size();
            out.components.emplace_back(n);
            out.witness_latents.emplace_back(n);
        } else {
            id = group_component[root];
        }
        out.components[id].insert(v);
        out.member_index[v] = id;
    }
    for (NodeId u = 0; u < n; ++u) {
        if (!g.is_latent(u)) continue;
        std::size_t id = group_component[groups.find(u)];
        if (id != CComponentPartition::npos) out.witness_latents[id].insert(u);
    }
    return out;
}

NodeSet c_component_of(const CausalDiagram& g, const CComponentPartition& parts, const NodeSet& s) {
    require_observed(g, s, "c_component_of");
    NodeSet out(g.size());
    for (NodeId v : s) out |= parts.components[parts.member_index[v]];
    return out;
}

NodeSet c_component_of(const CausalDiagram& g, const NodeSet& s) { return c_component_of(g, c_components(g), s); }

NodeSet markov_boundary(const CausalDiagram& g, const NodeSet& s) {
    require_observed(g, s, "markov_boundary");
    NodeSet ch = effective_children(g, s, Relatives::Inclusive);
    NodeSet comp = c_component_of(g, ch);
    return effective_parents(g, comp, Relatives::Inclusive) - s;
}

}  // namespace seqimit
