#include "seqimit/scm.hpp"

#include <cmath>
#include <limits>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "seqimit/rng.hpp"

namespace seqimit {

namespace {
constexpr double kRowTolerance = 1e-12;

void normalize_rows(std::vector<double>& table, std::size_t card) {
    for (std::size_t r = 0; r * card < table.size(); ++r) {
        double total = 0.0;
        for (std::size_t k = 0; k < card; ++k) total += table[r * card + k];
        for (std::size_t k = 0; k < card; ++k)
            table[r * card + k] = total > 0.0 ? table[r * card + k] / total : 1.0 / static_cast<double>(card);
    }
}
}  // namespace

std::size_t context_row(const NodeSet& context, const std::vector<std::size_t>& cards, const Assignment& a) {
    std::size_t row = 0;
    for (NodeId v : context) row = row * cards[v] + static_cast<std::size_t>(a[v]);
    return row;
}

std::size_t context_row_count(const NodeSet& context, const std::vector<std::size_t>& cards) {
    std::size_t rows = 1;
    for (NodeId v : context) rows *= cards[v];
    return rows;
}

void decode_context_row(const NodeSet& context, const std::vector<std::size_t>& cards, std::size_t row, Assignment& a) {
    auto members = context.to_vector();
    for (auto it = members.rbegin(); it != members.rend(); ++it) {
        a[*it] = static_cast<int>(row % cards[*it]);
        row /= cards[*it];
    }
}

DiscreteScm::DiscreteScm(CausalDiagram diagram, std::vector<std::size_t> cardinalities,
                         std::vector<std::vector<double>> tables)
    : diagram_(std::move(diagram)), cards_(std::move(cardinalities)), tables_(std::move(tables)) {
    const std::size_t n = diagram_.size();
    if (cards_.size() != n || tables_.size() != n) throw scm_error("one cardinality and one table per node expected");
    for (NodeId v = 0; v < n; ++v)
        if (cards_[v] < 2) throw scm_error("node " + diagram_.name(v) + " needs at least two values");
    for (NodeId v = 0; v < n; ++v) {
        const std::size_t rows = row_count(v);
        if (tables_[v].size() != rows * cards_[v])
            throw scm_error("table of " + diagram_.name(v) + " has " + std::to_string(tables_[v].size()) +
                            " entries, expected " + std::to_string(rows * cards_[v]));
        for (std::size_t r = 0; r < rows; ++r) {
            double total = 0.0;
            for (std::size_t k = 0; k < cards_[v]; ++k) {
                double p = tables_[v][r * cards_[v] + k];
                if (!(p >= 0.0)) throw scm_error("negative or NaN entry in table of " + diagram_.name(v));
                total += p;
            }
            if (std::abs(total - 1.0) > kRowTolerance)
                throw scm_error("row " + std::to_string(r) + " of " + diagram_.name(v) + " sums to " +
                                std::to_string(total));
        }
    }
}

std::uint64_t DiscreteScm::state_count() const {
    std::uint64_t total = 1;
    for (auto k : cards_) {
        if (total > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
        total *= k;
    }
    return total;
}

std::size_t JointTable::index_of(const Assignment& a) const {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < cardinalities.size(); ++v) idx = idx * cardinalities[v] + static_cast<std::size_t>(a[v]);
    return idx;
}

void for_each_state(const DiscreteScm& m, const std::function<void(const Assignment&, double)>& visit) {
    if (m.state_count() > kMaxJointStates)
        throw scm_error("joint state space too large for exact inference (" + std::to_string(m.state_count()) +
                        " states, cap " + std::to_string(kMaxJointStates) + ")");
    const std::size_t n = m.size();
    Assignment a(n, 0);
    // explicit stack of (depth, probability so far); value at each depth advanced in place
    std::vector<double> prob(n + 1, 1.0);
    std::vector<std::size_t> row(n, 0);
    std::size_t depth = 0;
    if (n == 0) {
        visit(a, 1.0);
        return;
    }
    a[0] = -1;
    row[0] = m.row_of(0, a);
    while (true) {
        // advance current depth to its next value with nonzero probability
        const std::size_t card = m.cardinality(depth);
        int next = a[depth] + 1;
        while (next < static_cast<int>(card) && m.probability(depth, row[depth], next) == 0.0) ++next;
        if (next >= static_cast<int>(card)) {
            if (depth == 0) return;
            --depth;
            continue;
        }
        a[depth] = next;
        prob[depth + 1] = prob[depth] * m.probability(depth, row[depth], next);
        if (depth + 1 == n) {
            visit(a, prob[n]);
            continue;
        }
        ++depth;
        row[depth] = m.row_of(depth, a);
        a[depth] = -1;
    }
}

JointTable exact_joint(const DiscreteScm& m) {
    JointTable j;
    j.cardinalities = m.cardinalities();
    if (m.state_count() > kMaxJointStates) throw scm_error("joint state space too large for a dense table");
    j.probabilities.assign(static_cast<std::size_t>(m.state_count()), 0.0);
    for_each_state(m, [&](const Assignment& a, double p) { j.probabilities[j.index_of(a)] += p; });
    return j;
}

std::vector<double> marginal(const DiscreteScm& m, NodeId v) {
    std::vector<double> out(m.cardinality(v), 0.0);
    for_each_state(m, [&](const Assignment& a, double p) { out[static_cast<std::size_t>(a[v])] += p; });
    return out;
}

double expectation(const DiscreteScm& m, NodeId y) {
    auto dist = marginal(m, y);
    double e = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) e += static_cast<double>(k) * dist[k];
    return e;
}

DecisionRule conditional(const DiscreteScm& m, NodeId target, const NodeSet& context) {
    DecisionRule rule;
    rule.action = target;
    rule.context = context;
    const auto& cards = m.cardinalities();
    const std::size_t card = cards.at(target);
    rule.table.assign(context_row_count(context, cards) * card, 0.0);
    for_each_state(m, [&](const Assignment& a, double p) {
        rule.table[context_row(context, cards, a) * card + static_cast<std::size_t>(a[target])] += p;
    });
    normalize_rows(rule.table, card);
    return rule;
}

Policy fit_policy_exact(const DiscreteScm& m, const std::vector<NodeId>& actions, const std::vector<NodeSet>& contexts) {
    if (actions.size() != contexts.size()) throw scm_error("one context per action expected");
    Policy pi;
    for (std::size_t i = 0; i < actions.size(); ++i) pi.rules.push_back(conditional(m, actions[i], contexts[i]));
    return pi;
}

DiscreteScm apply_policy(const DiscreteScm& m, const Policy& policy) {
    const auto& g = m.diagram();
    std::vector<NodeSet> parents;
    std::vector<std::vector<double>> tables;
    for (NodeId v = 0; v < g.size(); ++v) {
        parents.push_back(g.parents(v));
        tables.push_back(m.table(v));
    }
    for (const auto& rule : policy.rules) {
        if (rule.action >= g.size()) throw scm_error("policy action outside the model");
        if (rule.context.universe() != g.size()) throw scm_error("policy context from another diagram");
        for (NodeId z : rule.context)
            if (z >= rule.action)
                throw scm_error("context node " + g.name(z) + " does not precede " + g.name(rule.action));
        parents[rule.action] = rule.context;
        tables[rule.action] = rule.table;
    }
    return DiscreteScm(CausalDiagram::from_parent_sets(g.nodes(), std::move(parents)), m.cardinalities(),
                       std::move(tables));
}

double policy_value(const DiscreteScm& m, const Policy& policy, NodeId y) {
    return expectation(apply_policy(m, policy), y);
}

DiscreteScm random_scm(const CausalDiagram& g, std::uint64_t seed, std::uint64_t index,
                       std::vector<std::size_t> cardinalities) {
    if (cardinalities.empty()) cardinalities.assign(g.size(), 2);
    if (cardinalities.size() != g.size()) throw scm_error("one cardinality per node expected");
    auto rng = make_stream(seed, StreamPurpose::RandomScm, index);
    std::vector<std::vector<double>> tables(g.size());
    for (NodeId v = 0; v < g.size(); ++v) {
        const std::size_t card = cardinalities[v];
        if (card < 2) throw scm_error("node " + g.name(v) + " needs at least two values");
        const std::size_t rows = context_row_count(g.parents(v), cardinalities);
        auto& t = tables[v];
        t.resize(rows * card);
        for (std::size_t r = 0; r < rows; ++r) {
            if (card == 2) {
                double u = unit_uniform(rng);
                t[r * 2] = 1.0 - u;
                t[r * 2 + 1] = u;
            } else {
                double total = 0.0;
                for (std::size_t k = 0; k < card; ++k) {
                    double e = -std::log1p(-unit_uniform(rng));
                    t[r * card + k] = e;
                    total += e;
                }
                for (std::size_t k = 0; k < card; ++k) t[r * card + k] /= total;
            }
        }
    }
    return DiscreteScm(g, std::move(cardinalities), std::move(tables));
}

Dataset sample(const DiscreteScm& m, std::size_t n, std::uint64_t seed, std::uint64_t index) {
    const auto& g = m.diagram();
    Dataset d;
    for (NodeId v = 0; v < g.size(); ++v) d.columns.push_back(g.name(v));
    d.cardinalities = m.cardinalities();
    d.rows.reserve(n);
    auto rng = make_stream(seed, StreamPurpose::Sampling, index);
    for (std::size_t s = 0; s < n; ++s) {
        Assignment a(g.size(), 0);
        for (NodeId v = 0; v < g.size(); ++v) {
            const std::size_t row = m.row_of(v, a);
            const std::size_t card = m.cardinality(v);
            double u = unit_uniform(rng);
            int value = static_cast<int>(card) - 1;
            double acc = 0.0;
            for (std::size_t k = 0; k < card; ++k) {
                acc += m.probability(v, row, static_cast<int>(k));
                if (u < acc) {
                    value = static_cast<int>(k);
                    break;
                }
            }
            // guard against rounding that leaves u above the last partial sum
            while (value > 0 && m.probability(v, row, value) == 0.0) --value;
            a[v] = value;
        }
        d.rows.push_back(std::move(a));
    }
    return d;
}

Policy fit_policy_from_samples(const Dataset& data, const std::vector<NodeId>& actions,
                               const std::vector<NodeSet>& contexts) {
    if (actions.size() != contexts.size()) throw scm_error("one context per action expected");
    Policy pi;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        DecisionRule rule;
        rule.action = actions[i];
        rule.context = contexts[i];
        const std::size_t card = data.cardinalities.at(actions[i]);
        rule.table.assign(context_row_count(contexts[i], data.cardinalities) * card, 0.0);
        for (const auto& a : data.rows)
            rule.table[context_row(contexts[i], data.cardinalities, a) * card + static_cast<std::size_t>(a[actions[i]])] +=
                1.0;
        normalize_rows(rule.table, card);
        pi.rules.push_back(std::move(rule));
    }
    return pi;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t c = 0; c < data.columns.size(); ++c) out << (c ? "," : "") << data.columns[c];
    out << '\n';
    for (const auto& row : data.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

void write_scm(std::ostream& out, const DiscreteScm& m) {
    const auto& g = m.diagram();
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    Assignment a(g.size(), 0);
    for (NodeId v = 0; v < g.size(); ++v) {
        out << "node " << g.name(v) << (g.is_latent(v) ? " latent" : " observed") << " card " << m.cardinality(v)
            << " parents";
        for (NodeId p : g.parents(v)) out << ' ' << g.name(p);
        out << '\n';
        for (std::size_t r = 0; r < m.row_count(v); ++r) {
            decode_context_row(g.parents(v), m.cardinalities(), r, a);
            out << " ";
            for (NodeId p : g.parents(v)) out << ' ' << g.name(p) << '=' << a[p];
            out << " :";
            for (std::size_t k = 0; k < m.cardinality(v); ++k) out << ' ' << m.probability(v, r, static_cast<int>(k));
            out << '\n';
        }
    }
    out.precision(old_precision);
}

DiscreteScm read_scm(std::istream& in) {
    std::vector<NodeDecl> nodes;
    std::vector<NamedEdge> edges;
    std::vector<std::size_t> cards;
    std::vector<std::vector<double>> tables;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) { throw scm_error("line " + std::to_string(line_no) + ": " + what); };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("node ", 0) == 0) {
            std::istringstream ls(line.substr(5));
            std::string name, vis, word;
            std::size_t card = 0;
            if (!(ls >> name >> vis >> word >> card) || word != "card") fail("expected 'node NAME VIS card K parents ...'");
            if (vis != "observed" && vis != "latent") fail("visibility must be observed or latent");
            if (!(ls >> word) || word != "parents") fail("expected 'parents'");
            nodes.push_back({name, vis == "latent" ? Visibility::Latent : Visibility::Observed});
            while (ls >> word) edges.emplace_back(word, name);
            cards.push_back(card);
            tables.emplace_back();
        } else if (!line.empty() && (line[0] == ' ' || line[0] == '\t') && !nodes.empty()) {
            auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::istringstream ls(line.substr(colon + 1));
            double p = 0.0;
            std::size_t count = 0;
            while (ls >> p) {
                tables.back().push_back(p);
                ++count;
            }
            if (count != cards.back()) fail("row has " + std::to_string(count) + " entries, expected " +
                                             std::to_string(cards.back()));
        }
    }
    if (nodes.empty()) throw scm_error("no nodes in SCM listing");
    try {
        return DiscreteScm(CausalDiagram(std::move(nodes), edges), std::move(cards), std::move(tables));
    } catch (const diagram_error& e) {
        throw scm_error(e.what());
    }
}

int ParentValues::operator[](std::string_view name) const {
    auto id = g_.find(name);
    if (!id || !g_.parents(node_).contains(*id))
        throw scm_error(std::string(name) + " is not a parent of " + g_.name(node_));
    return a_[*id];
}

ScmBuilder::ScmBuilder(CausalDiagram g) : g_(std::move(g)), cards_(g_.size(), 2), mechanisms_(g_.size()) {}

ScmBuilder& ScmBuilder::cardinality(std::string_view node, std::size_t k) {
    if (k < 2) throw scm_error("cardinality must be at least 2");
    cards_[g_.id(node)] = k;
    return *this;
}

ScmBuilder& ScmBuilder::distribution(std::string_view node, std::vector<double> probabilities) {
    return mechanism(node, [p = std::move(probabilities)](const ParentValues&) { return p; });
}

ScmBuilder& ScmBuilder::bernoulli(std::string_view node, double p_one) {
    return distribution(node, {1.0 - p_one, p_one});
}

ScmBuilder& ScmBuilder::function(std::string_view node, Function f) {
    const NodeId v = g_.id(node);
    mechanisms_[v] = [f = std::move(f)](const ParentValues& pv, std::size_t card) {
        const auto k = static_cast<int>(card);
        std::vector<double> out(static_cast<std::size_t>(k), 0.0);
        out[static_cast<std::size_t>(((f(pv) % k) + k) % k)] = 1.0;
        return out;
    };
    return *this;
}

ScmBuilder& ScmBuilder::mechanism(std::string_view node, Mechanism f) {
    mechanisms_[g_.id(node)] = [f = std::move(f)](const ParentValues& pv, std::size_t) { return f(pv); };
    return *this;
}

DiscreteScm ScmBuilder::build() const {
    std::vector<std::vector<double>> tables(g_.size());
    Assignment a(g_.size(), 0);
    for (NodeId v = 0; v < g_.size(); ++v) {
        if (!mechanisms_[v]) throw scm_error("no mechanism given for " + g_.name(v));
        const std::size_t rows = context_row_count(g_.parents(v), cards_);
        for (std::size_t r = 0; r < rows; ++r) {
            decode_context_row(g_.parents(v), cards_, r, a);
            auto p = (*mechanisms_[v])(ParentValues(g_, v, a), cards_[v]);
            if (p.size() != cards_[v])
                throw scm_error("mechanism of " + g_.name(v) + " returned " + std::to_string(p.size()) + " values");
            tables[v].insert(tables[v].end(), p.begin(), p.end());
        }
    }
    return DiscreteScm(g_, cards_, std::move(tables));
}

}  // namespace seqimit
