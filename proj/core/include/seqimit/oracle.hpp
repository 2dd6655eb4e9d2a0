#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "seqimit/diagram.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/scm.hpp"

// Brute-force references. Nothing here calls into separation, imitation or the
// SCM inference routines, so agreement with them is a real cross-check.
namespace seqimit::oracle {

class oracle_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxPathNodes = 12;
inline constexpr unsigned kMaxSearchBits = 20;

/// Enumerates every simple path between a and b and applies the collider rule
/// literally. Throws oracle_error above kMaxPathNodes nodes.
bool dsep_by_paths(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given);

/// d-separation by moralising the ancestral graph of a, b and given.
bool dsep_by_moralization(const CausalDiagram& g, const NodeSet& a, const NodeSet& b, const NodeSet& given);

/// Tries every context assignment Z_i ⊆ observed ∩ before(X_i), last action
/// first, with subsets in increasing bitmask order over the candidate nodes.
/// Returns the first assignment meeting the per-action conditions, or nullopt.
/// Throws oracle_error when the search space exceeds 2^kMaxSearchBits.
std::optional<Contexts> enumerate_def3(const ImitationQuery& q);

struct PolicySearchResult {
    double best_value = 0.0;
    Policy best_policy;  // every row one-hot
    std::uint64_t policies_evaluated = 0;
};

/// Exhaustive maximum of E[y | do(π)] over deterministic policies with the
/// given contexts. The objective is multilinear in the rule entries, so the
/// maximum over stochastic policies is attained at one of these vertices.
/// Throws oracle_error when there are more than 2^kMaxSearchBits policies.
PolicySearchResult best_imitator(const DiscreteScm& m, const std::vector<NodeId>& actions, const Contexts& contexts,
                                 NodeId y);

/// E[y | do(π)] by full enumeration, independent of scm.cpp's inference.
double evaluate_policy(const DiscreteScm& m, const Policy& policy, NodeId y);

}  // namespace seqimit::oracle
