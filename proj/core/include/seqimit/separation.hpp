#pragma once

#include <cstddef>
#include <vector>

#include "seqimit/diagram.hpp"

namespace seqimit {

/// True when every path between a and b is blocked by `given`. A collider
/// opens only when it lies in An(given). Throws std::invalid_argument when the
/// three sets overlap or belong to a different diagram.
bool d_separated(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given);

/// Maximal confounded components over the observed nodes.
struct CComponentPartition {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<NodeSet> components;
    /// component id per node; npos for latent nodes
    std::vector<std::size_t> member_index;
    /// latents whose pairwise connections produce each component (empty for
    /// unconfounded singletons)
    std::vector<NodeSet> witness_latents;

    std::size_t component_id(NodeId v) const { return member_index.at(v); }
};

CComponentPartition c_components(const CausalDiagram& g);

/// Union of maximal components meeting s. Throws diagram_error on a latent in s.
NodeSet c_component_of(const CausalDiagram& g, const NodeSet& s);
NodeSet c_component_of(const CausalDiagram& g, const CComponentPartition& parts, const NodeSet& s);

/// Pa+(C(Ch+(s))) \ s. Throws diagram_error on a latent in s.
NodeSet markov_boundary(const CausalDiagram& g, const NodeSet& s);

}  // namespace seqimit
