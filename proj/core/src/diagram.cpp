#include "seqimit/diagram.hpp"

#include <algorithm>

namespace seqimit {

CausalDiagram::CausalDiagram(std::vector<NodeDecl> nodes, const std::vector<NamedEdge>& edges)
    : nodes_(std::move(nodes)) {
    index_names();
    const std::size_t n = nodes_.size();
    parents_.assign(n, NodeSet(n));
    children_.assign(n, NodeSet(n));
    for (const auto& [from, to] : edges) {
        NodeId a = id(from);
        NodeId b = id(to);
        if (a == b) throw diagram_error("self loop on node " + from);
        parents_[b].insert(a);
        children_[a].insert(b);
    }
    // cycle check (Kahn), reported before order violations so the message is precise
    std::vector<std::size_t> indeg(n);
    for (NodeId v = 0; v < n; ++v) indeg[v] = parents_[v].size();
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        ++seen;
        for (NodeId c : children_[v])
            if (--indeg[c] == 0) stack.push_back(c);
    }
    if (seen != n) throw diagram_error("diagram contains a directed cycle");
    for (NodeId v = 0; v < n; ++v)
        for (NodeId p : parents_[v])
            if (p > v)
                throw diagram_error("edge " + nodes_[p].name + " -> " + nodes_[v].name +
                                    " runs against the temporal order");
}

CausalDiagram CausalDiagram::from_parent_sets(std::vector<NodeDecl> nodes, std::vector<NodeSet> parents) {
    CausalDiagram g;
    g.nodes_ = std::move(nodes);
    const std::size_t n = g.nodes_.size();
    if (parents.size() != n) throw diagram_error("parent list size does not match node count");
    g.index_names();
    g.children_.assign(n, NodeSet(n));
    for (NodeId v = 0; v < n; ++v) {
        if (parents[v].universe() != n) throw diagram_error("parent set universe mismatch");
        for (NodeId p : parents[v]) {
            if (p >= v) throw diagram_error("parent " + g.nodes_[p].name + " does not precede " + g.nodes_[v].name);
            g.children_[p].insert(v);
        }
    }
    g.parents_ = std::move(parents);
    return g;
}

void CausalDiagram::index_names() {
    index_.clear();
    for (NodeId v = 0; v < nodes_.size(); ++v) {
        if (nodes_[v].name.empty()) throw diagram_error("empty node name");
        if (!index_.emplace(nodes_[v].name, v).second) throw diagram_error("duplicate node " + nodes_[v].name);
    }
}

std::optional<NodeId> CausalDiagram::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId CausalDiagram::id(std::string_view name) const {
    auto v = find(name);
    if (!v) throw diagram_error("unknown node " + std::string(name));
    return *v;
}

NodeSet CausalDiagram::observed() const {
    NodeSet s(size());
    for (NodeId v = 0; v < size(); ++v)
        if (is_observed(v)) s.insert(v);
    return s;
}

NodeSet CausalDiagram::latent() const { return all_nodes() - observed(); }

NodeSet CausalDiagram::set_of(const std::vector<std::string>& names) const {
    NodeSet s(size());
    for (const auto& n : names) s.insert(id(n));
    return s;
}

std::vector<std::string> CausalDiagram::names_of(const NodeSet& s) const {
    std::vector<std::string> out;
    for (NodeId v : s) out.push_back(name(v));
    return out;
}

std::vector<std::pair<NodeId, NodeId>> CausalDiagram::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId v = 0; v < size(); ++v)
        for (NodeId c : children_[v]) out.emplace_back(v, c);
    return out;
}

std::size_t CausalDiagram::edge_count() const {
    std::size_t n = 0;
    for (const auto& p : parents_) n += p.size();
    return n;
}

bool operator==(const CausalDiagram& a, const CausalDiagram& b) {
    if (a.size() != b.size()) return false;
    for (NodeId v = 0; v < a.size(); ++v)
        if (a.nodes_[v].name != b.nodes_[v].name || a.nodes_[v].visibility != b.nodes_[v].visibility)
            return false;
    return a.parents_ == b.parents_;
}

NodeSet ImitationQuery::action_set() const {
    NodeSet s(diagram.size());
    for (NodeId x : actions) s.insert(x);
    return s;
}

std::optional<std::size_t> ImitationQuery::action_index(NodeId v) const {
    auto it = std::find(actions.begin(), actions.end(), v);
    if (it == actions.end()) return std::nullopt;
    return static_cast<std::size_t>(it - actions.begin());
}

void validate_query(const ImitationQuery& q) {
    const auto& g = q.diagram;
    if (q.actions.empty()) throw diagram_error("no actions given");
    if (q.target >= g.size()) throw diagram_error("target index outside diagram");
    for (std::size_t i = 0; i < q.actions.size(); ++i) {
        NodeId x = q.actions[i];
        if (x >= g.size()) throw diagram_error("action index outside diagram");
        if (!g.is_observed(x)) throw diagram_error("action " + g.name(x) + " is not observed");
        if (x == q.target) throw diagram_error("target " + g.name(x) + " is also an action");
        if (i > 0 && q.actions[i - 1] >= x)
            throw diagram_error("actions are not listed in temporal order at " + g.name(x));
    }
}

ImitationQuery make_query(CausalDiagram diagram, const std::vector<std::string>& actions, const std::string& target) {
    ImitationQuery q;
    for (const auto& a : actions) q.actions.push_back(diagram.id(a));
    q.target = diagram.id(target);
    q.diagram = std::move(diagram);
    validate_query(q);
    return q;
}

NodeSet before(const CausalDiagram& g, NodeId v) { return NodeSet::prefix(g.size(), v); }

NodeSet after(const CausalDiagram& g, NodeId v) { return g.all_nodes() - NodeSet::prefix(g.size(), v + 1); }

NodeSet ancestors(const CausalDiagram& g, const NodeSet& s, Relatives mode) {
    NodeSet out = s;
    // parents precede children, so one descending sweep closes the set
    for (NodeId v = g.size(); v-- > 0;)
        if (out.contains(v)) out |= g.parents(v);
    if (mode == Relatives::Exclusive) {
        NodeSet strict(g.size());
        for (NodeId v : s) strict |= g.parents(v);
        for (NodeId v = g.size(); v-- > 0;)
            if (strict.contains(v)) strict |= g.parents(v);
        return strict;
    }
    return out;
}

NodeSet descendants(const CausalDiagram& g, const NodeSet& s, Relatives mode) {
    NodeSet out(g.size());
    if (mode == Relatives::Inclusive) out = s;
    for (NodeId v : s) out |= g.children(v);
    for (NodeId v = 0; v < g.size(); ++v)
        if (out.contains(v)) out |= g.children(v);
    return out;
}

NodeSet effective_parents(const CausalDiagram& g, const NodeSet& s, Relatives mode) {
    NodeSet result(g.size());
    NodeSet visited_latent(g.size());
    std::vector<NodeId> stack(s.begin(), s.end());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.parents(v)) {
            if (g.is_observed(p)) {
                result.insert(p);
            } else if (!visited_latent.contains(p)) {
                visited_latent.insert(p);
                stack.push_back(p);
            }
        }
    }
    result -= s;
    if (mode == Relatives::Inclusive) result |= s;
    return result;
}

NodeSet effective_children(const CausalDiagram& g, const NodeSet& s, Relatives mode) {
    NodeSet result(g.size());
    NodeSet visited_latent(g.size());
    std::vector<NodeId> stack(s.begin(), s.end());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId c : g.children(v)) {
            if (g.is_observed(c)) {
                result.insert(c);
            } else if (!visited_latent.contains(c)) {
                visited_latent.insert(c);
                stack.push_back(c);
            }
        }
    }
    result -= s;
    if (mode == Relatives::Inclusive) result |= s;
    return result;
}

CausalDiagram mutilate(const CausalDiagram& g, const NodeSet& underline, const NodeSet& overline) {
    std::vector<NodeSet> parents;
    parents.reserve(g.size());
    for (NodeId v = 0; v < g.size(); ++v) {
        if (overline.contains(v)) {
            parents.emplace_back(g.size());
        } else {
            parents.push_back(g.parents(v) - underline);
        }
    }
    return CausalDiagram::from_parent_sets(g.nodes(), std::move(parents));
}

CausalDiagram induced_subgraph(const CausalDiagram& g, const NodeSet& keep) {
    std::vector<NodeId> new_id(g.size(), g.size());
    std::vector<NodeDecl> nodes;
    for (NodeId v : keep) {
        new_id[v] = nodes.size();
        nodes.push_back(g.nodes()[v]);
    }
    std::vector<NodeSet> parents(nodes.size(), NodeSet(nodes.size()));
    for (NodeId v : keep)
        for (NodeId p : g.parents(v))
            if (keep.contains(p)) parents[new_id[v]].insert(new_id[p]);
    return CausalDiagram::from_parent_sets(std::move(nodes), std::move(parents));
}

CausalDiagram ancestral_graph(const CausalDiagram& g, NodeId y) {
    NodeSet s(g.size());
    s.insert(y);
    return induced_subgraph(g, ancestors(g, s));
}

CausalDiagram with_visibility(const CausalDiagram& g, NodeId v, Visibility visibility) {
    auto nodes = g.nodes();
    nodes.at(v).visibility = visibility;
    std::vector<NodeSet> parents;
    for (NodeId u = 0; u < g.size(); ++u) parents.push_back(g.parents(u));
    return CausalDiagram::from_parent_sets(std::move(nodes), std::move(parents));
}

NodeSet translate(const NodeSet& s, const CausalDiagram& from, const CausalDiagram& to) {
    NodeSet out(to.size());
    for (NodeId v : s)
        if (auto t = to.find(from.name(v))) out.insert(*t);
    return out;
}

bool has_directed_path(const CausalDiagram& g, NodeId from, NodeId to) {
    if (from == to) return true;
    if (from > to) return false;
    NodeSet s(g.size());
    s.insert(from);
    return descendants(g, s).contains(to);
}

}  // namespace seqimit
