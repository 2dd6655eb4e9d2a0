#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqimit/diagram.hpp"

namespace seqimit {

/// Value of every node, indexed by NodeId.
using Assignment = std::vector<int>;

class scm_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest number of joint states exact inference will walk.
inline constexpr std::uint64_t kMaxJointStates = std::uint64_t{1} << 22;

/// Row of `context` in a table whose rows enumerate the context's values in
/// mixed radix, ascending node order, last node varying fastest.
std::size_t context_row(const NodeSet& context, const std::vector<std::size_t>& cardinalities, const Assignment& a);
std::size_t context_row_count(const NodeSet& context, const std::vector<std::size_t>& cardinalities);
/// Inverse of context_row: writes the context values of `row` into `a`.
void decode_context_row(const NodeSet& context, const std::vector<std::size_t>& cardinalities, std::size_t row,
                        Assignment& a);

/// Discrete SCM given as one conditional table per node, over the node's
/// diagram parents. Table layout: row-major, rows from context_row over the
/// parents, one column per value.
class DiscreteScm {
public:
    DiscreteScm() = default;
    /// Throws scm_error on shape mismatch, cardinality < 2, negative entries
    /// or rows that do not sum to 1 within 1e-12.
    DiscreteScm(CausalDiagram diagram, std::vector<std::size_t> cardinalities, std::vector<std::vector<double>> tables);

    const CausalDiagram& diagram() const noexcept { return diagram_; }
    std::size_t size() const noexcept { return diagram_.size(); }
    std::size_t cardinality(NodeId v) const { return cards_.at(v); }
    const std::vector<std::size_t>& cardinalities() const noexcept { return cards_; }
    const std::vector<double>& table(NodeId v) const { return tables_.at(v); }

    std::size_t row_count(NodeId v) const { return context_row_count(diagram_.parents(v), cards_); }
    std::size_t row_of(NodeId v, const Assignment& a) const { return context_row(diagram_.parents(v), cards_, a); }
    double probability(NodeId v, std::size_t row, int value) const {
        return tables_[v][row * cards_[v] + static_cast<std::size_t>(value)];
    }

    /// Product of all cardinalities, saturating at UINT64_MAX.
    std::uint64_t state_count() const;

private:
    CausalDiagram diagram_;
    std::vector<std::size_t> cards_;
    std::vector<std::vector<double>> tables_;
};

/// π_i(action | context), laid out like a CPT over `context`.
struct DecisionRule {
    NodeId action = 0;
    NodeSet context;
    std::vector<double> table;
};

struct Policy {
    std::vector<DecisionRule> rules;
};

/// Dense joint over all nodes, index in mixed radix with node 0 most significant.
struct JointTable {
    std::vector<std::size_t> cardinalities;
    std::vector<double> probabilities;

    std::size_t index_of(const Assignment& a) const;
    double probability(const Assignment& a) const { return probabilities.at(index_of(a)); }
};

/// Visits every assignment with nonzero probability in depth-first temporal
/// order. Throws scm_error when the state space exceeds kMaxJointStates.
void for_each_state(const DiscreteScm& m, const std::function<void(const Assignment&, double)>& visit);

JointTable exact_joint(const DiscreteScm& m);
std::vector<double> marginal(const DiscreteScm& m, NodeId v);
double expectation(const DiscreteScm& m, NodeId y);

/// P(target | context) as a decision-rule table; rows of zero-mass contexts are uniform.
DecisionRule conditional(const DiscreteScm& m, NodeId target, const NodeSet& context);

/// Behavioural cloning with exact conditionals: π_i = P(X_i | Z_i).
Policy fit_policy_exact(const DiscreteScm& m, const std::vector<NodeId>& actions, const std::vector<NodeSet>& contexts);

/// Replaces each action's mechanism by its decision rule; the action's parents
/// in the returned diagram are exactly the rule's context.
DiscreteScm apply_policy(const DiscreteScm& m, const Policy& policy);

/// E[y | do(π)].
double policy_value(const DiscreteScm& m, const Policy& policy, NodeId y);

/// Binary nodes get P(v=1 | row) ~ Uniform(0,1) per row. Nodes with
/// cardinality k > 2 get rows from a symmetric Dirichlet(1) (normalised
/// exponentials). An empty cardinality list means all binary.
DiscreteScm random_scm(const CausalDiagram& g, std::uint64_t seed, std::uint64_t index = 0,
                       std::vector<std::size_t> cardinalities = {});

struct Dataset {
    std::vector<std::string> columns;  // node names, temporal order
    std::vector<std::size_t> cardinalities;
    std::vector<Assignment> rows;
};

/// Ancestral sampling; deterministic for a given (seed, index).
Dataset sample(const DiscreteScm& m, std::size_t n, std::uint64_t seed, std::uint64_t index = 0);

/// Empirical conditionals over the dataset; unseen contexts default to uniform.
Policy fit_policy_from_samples(const Dataset& data, const std::vector<NodeId>& actions,
                               const std::vector<NodeSet>& contexts);

void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Human-readable CPT listing; probabilities are printed with enough digits
/// for read_scm to restore them exactly.
void write_scm(std::ostream& out, const DiscreteScm& m);

/// Parses the write_scm listing. Lines that do not start with "node" or with
/// whitespace are ignored, so a listing may sit inside other output.
/// Throws scm_error on malformed input.
DiscreteScm read_scm(std::istream& in);

/// Values of a node's parents, addressed by name, handed to mechanism callbacks.
class ParentValues {
public:
    ParentValues(const CausalDiagram& g, NodeId node, const Assignment& a) : g_(g), node_(node), a_(a) {}
    /// Throws scm_error when `name` is not a parent of the node.
    int operator[](std::string_view name) const;

private:
    const CausalDiagram& g_;
    NodeId node_;
    const Assignment& a_;
};

/// Declarative SCM construction over a fixed diagram.
class ScmBuilder {
public:
    using Function = std::function<int(const ParentValues&)>;
    using Mechanism = std::function<std::vector<double>(const ParentValues&)>;

    explicit ScmBuilder(CausalDiagram g);

    ScmBuilder& cardinality(std::string_view node, std::size_t k);
    /// Same distribution for every parent row.
    ScmBuilder& distribution(std::string_view node, std::vector<double> probabilities);
    ScmBuilder& bernoulli(std::string_view node, double p_one);
    /// Deterministic mechanism; the result is reduced modulo the cardinality.
    ScmBuilder& function(std::string_view node, Function f);
    ScmBuilder& mechanism(std::string_view node, Mechanism f);

    /// Throws scm_error when a node has no mechanism.
    DiscreteScm build() const;

private:
    CausalDiagram g_;
    std::vector<std::size_t> cards_;
    using Sized = std::function<std::vector<double>(const ParentValues&, std::size_t)>;
    std::vector<std::optional<Sized>> mechanisms_;
};

}  // namespace seqimit
