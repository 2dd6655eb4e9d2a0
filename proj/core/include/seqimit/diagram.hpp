#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqimit/node_set.hpp"

namespace seqimit {

enum class Visibility { Observed, Latent };

struct NodeDecl {
    std::string name;
    Visibility visibility = Visibility::Observed;
};

using NamedEdge = std::pair<std::string, std::string>;

class diagram_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Acyclic causal diagram over observed and latent nodes.
///
/// Nodes are stored in temporal order: a node's index is its temporal
/// position, and every edge points from a lower to a higher index. The
/// diagram is an immutable value; every mutilation returns a new diagram.
class CausalDiagram {
public:
    CausalDiagram() = default;

    /// Throws diagram_error on duplicate names, unknown edge endpoints,
    /// cycles, or edges that run against the given temporal order.
    CausalDiagram(std::vector<NodeDecl> nodes_in_temporal_order, const std::vector<NamedEdge>& edges);

    /// parents[v] must only contain indices < v.
    static CausalDiagram from_parent_sets(std::vector<NodeDecl> nodes_in_temporal_order,
                                          std::vector<NodeSet> parents);

    std::size_t size() const noexcept { return nodes_.size(); }

    const std::string& name(NodeId v) const { return nodes_.at(v).name; }
    Visibility visibility(NodeId v) const { return nodes_.at(v).visibility; }
    bool is_observed(NodeId v) const { return visibility(v) == Visibility::Observed; }
    bool is_latent(NodeId v) const { return visibility(v) == Visibility::Latent; }
    const std::vector<NodeDecl>& nodes() const noexcept { return nodes_; }

    std::optional<NodeId> find(std::string_view name) const;
    /// Throws diagram_error("unknown node ...").
    NodeId id(std::string_view name) const;

    const NodeSet& parents(NodeId v) const { return parents_.at(v); }
    const NodeSet& children(NodeId v) const { return children_.at(v); }
    bool has_edge(NodeId from, NodeId to) const { return children_.at(from).contains(to); }

    NodeSet empty_set() const { return NodeSet(size()); }
    NodeSet all_nodes() const { return NodeSet::full(size()); }
    NodeSet observed() const;
    NodeSet latent() const;

    NodeSet set_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const NodeSet& s) const;

    std::vector<std::pair<NodeId, NodeId>> edges() const;
    std::size_t edge_count() const;

    friend bool operator==(const CausalDiagram& a, const CausalDiagram& b);

private:
    void index_names();

    std::vector<NodeDecl> nodes_;
    std::vector<NodeSet> parents_;
    std::vector<NodeSet> children_;
    std::unordered_map<std::string, NodeId> index_;
};

/// Diagram plus ordered actions X_1..X_n and target Y.
struct ImitationQuery {
    CausalDiagram diagram;
    std::vector<NodeId> actions;
    NodeId target = 0;

    NodeSet action_set() const;
    /// Position of v in `actions`, if it is an action.
    std::optional<std::size_t> action_index(NodeId v) const;

    friend bool operator==(const ImitationQuery&, const ImitationQuery&) = default;
};

/// Validates: actions non-empty, observed, distinct, increasing in temporal
/// order; target not an action.
ImitationQuery make_query(CausalDiagram diagram, const std::vector<std::string>& actions,
                          const std::string& target);
void validate_query(const ImitationQuery& q);

NodeSet before(const CausalDiagram& g, NodeId v);
NodeSet after(const CausalDiagram& g, NodeId v);

enum class Relatives { Exclusive, Inclusive };

NodeSet ancestors(const CausalDiagram& g, const NodeSet& s, Relatives mode = Relatives::Inclusive);
NodeSet descendants(const CausalDiagram& g, const NodeSet& s, Relatives mode = Relatives::Inclusive);

/// pa+(s): observed nodes outside s with a directed path into s whose interior
/// nodes are all latent. Inclusive gives Pa+(s) = pa+(s) ∪ s.
NodeSet effective_parents(const CausalDiagram& g, const NodeSet& s, Relatives mode = Relatives::Exclusive);
/// ch+(s): observed nodes outside s reached from s by a directed path whose
/// interior nodes are all latent. Inclusive gives Ch+(s) = ch+(s) ∪ s.
NodeSet effective_children(const CausalDiagram& g, const NodeSet& s, Relatives mode = Relatives::Exclusive);

/// Removes edges leaving `underline` and edges entering `overline`.
CausalDiagram mutilate(const CausalDiagram& g, const NodeSet& underline, const NodeSet& overline);

/// Induced subgraph on `keep`, temporal order restricted. Node indices are
/// renumbered; use translate() to move sets between the two diagrams.
CausalDiagram induced_subgraph(const CausalDiagram& g, const NodeSet& keep);

/// Induced subgraph on An(y), inclusive.
CausalDiagram ancestral_graph(const CausalDiagram& g, NodeId y);

/// Copy of g with one node's visibility changed.
CausalDiagram with_visibility(const CausalDiagram& g, NodeId v, Visibility visibility);

/// Maps a set over `from` onto `to` by node name; names absent in `to` are dropped.
NodeSet translate(const NodeSet& s, const CausalDiagram& from, const CausalDiagram& to);

/// Directed-path reachability; true when `from` == `to`.
bool has_directed_path(const CausalDiagram& g, NodeId from, NodeId to);

}  // namespace seqimit
