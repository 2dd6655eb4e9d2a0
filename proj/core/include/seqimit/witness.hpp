#pragma once

#include <stdexcept>
#include <vector>

#include "seqimit/diagram.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/scm.hpp"

namespace seqimit {

class witness_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ChainWitness {
    DiscreteScm scm;
    /// Y, the latents and colliders in between, and finally the action.
    std::vector<NodeId> chain;
};

/// Binary XOR-chain model in which the expert reaches E[Y] = 1 while no
/// imitator can recover the latent bit feeding Y.
///
/// The chain is a shortest path Y <- L ... L' -> x_i inside the ancestral
/// graph of Y whose interior latents are non-colliders and whose interior
/// observed nodes are colliders (never actions). Latent runs carry one fair
/// coin; each collider and x_i XOR their chain inputs into a tree of directed
/// paths ending at Y, and Y checks the first coin against the XOR of its tree
/// parents. Everything else is the constant 1.
///
/// Throws witness_error when x_i is not an action, is not in the confounded
/// component of Y, or no such chain exists.
ChainWitness chain_witness(const ImitationQuery& q, NodeId x_i);

/// Contexts used to score a witness: the observed non-action nodes before each
/// action. Earlier actions add nothing for deterministic policies, since
/// they are themselves functions of earlier contexts.
Contexts witness_contexts(const ImitationQuery& q);

}  // namespace seqimit
