#pragma once

#include <cstdint>
#include <random>

#include "seqimit/diagram.hpp"

namespace seqimit::testing {

using Rng = std::mt19937_64;

/// Random diagram with n_observed observed nodes (O0, O1, ...) and n_latent
/// latents (L0, ...) shuffled into a random temporal order; every forward pair
/// is an edge with probability p, or latent_p when the parent is latent.
CausalDiagram random_diagram(Rng& rng, std::size_t n_observed, std::size_t n_latent, double p, double latent_p = -1);

/// Query on a random diagram with 2..6 observed, 0..3 latent nodes and
/// 1..3 actions; the target is an observed node that is not an action.
ImitationQuery random_query(Rng& rng);

/// Disjoint sets over g: a and b nonempty, given possibly empty.
struct Triple {
    NodeSet a, b, given;
};
Triple random_triple(Rng& rng, const CausalDiagram& g);

/// Uniformly random subset of s.
NodeSet random_subset(Rng& rng, const NodeSet& s);

}  // namespace seqimit::testing
