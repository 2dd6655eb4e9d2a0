#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqimit/diagram.hpp"

namespace seqimit {

/// One context set per action, indexed like ImitationQuery::actions.
using Contexts = std::vector<NodeSet>;

enum class Condition { Fail = 0, Backdoor = 1, NonAncestor = 2 };

struct SequentialReport {
    std::vector<Condition> conditions;  // per action, in action order
    bool pass = false;
};

/// Observed node -> action whose adjustment makes it a non-ancestor of Y.
/// Node ids refer to the query's own diagram.
struct OxMap {
    std::map<NodeId, NodeId> entries;
    NodeSet keys;

    std::optional<NodeId> value(NodeId v) const;
};

struct AdjustmentPlan {
    std::vector<NodeId> covered_actions;
    Contexts contexts;                // parallel to covered_actions
    std::vector<Condition> conditions;  // parallel to covered_actions
    NodeSet boundary_actions;
    NodeSet global_boundary;
};

struct Verdict {
    bool imitable = false;
    OxMap ox;
    AdjustmentPlan plan;
    NodeSet missing_actions;
};

/// G'_i for the 0-based action index i: incoming edges of the later actions
/// X_j (j > i) are replaced by Z_j -> X_j. Only contexts[j] for j > i are read.
CausalDiagram build_g_prime(const ImitationQuery& q, const Contexts& contexts, std::size_t i);

/// Throws diagram_error when a context has the wrong size, holds a latent,
/// or reaches past its action in temporal order.
void validate_contexts(const ImitationQuery& q, const Contexts& contexts);

SequentialReport verify_sequential_pi_backdoor(const ImitationQuery& q, const Contexts& contexts);

/// The classic sequential backdoor: X_i independent of Y given X_{1:i-1} and
/// Z_{1:i}, with X_i's outgoing and later actions' incoming edges removed.
bool verify_pearl_sequential_backdoor(const ImitationQuery& q, const Contexts& contexts);

/// The adjustment test used while growing the key set. Throws diagram_error
/// when o_i is not an ancestor of the target.
bool has_valid_adjustment(const ImitationQuery& q, const NodeSet& ox_keys, NodeId o_i, NodeId x_i);

OxMap find_ox(const ImitationQuery& q);

NodeSet boundary_actions(const ImitationQuery& q, const OxMap& ox);

Verdict construct_plan(const ImitationQuery& q);

/// Backdoor set for a single action taken alone, or nullopt when none exists
/// among the nodes observed before it.
std::optional<NodeSet> single_action_pi_backdoor(const ImitationQuery& q, NodeId x_i);

enum class Strategy { SeqPiBackdoor, PiBackdoor, ObservedParents, AllObserved };

/// Short names used on the command line: seq, pi, parents, all.
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);
const std::vector<Strategy>& all_strategies();

/// Per-action contexts chosen by a strategy; nullopt when the strategy
/// declares the query non-imitable.
std::optional<Contexts> strategy_contexts(const ImitationQuery& q, Strategy s);

/// Query over the same diagram restricted to a subset of its actions.
ImitationQuery restrict_actions(const ImitationQuery& q, const std::vector<NodeId>& actions);

}  // namespace seqimit
