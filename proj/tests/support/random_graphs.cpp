#include "random_graphs.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace seqimit::testing {

CausalDiagram random_diagram(Rng& rng, std::size_t n_observed, std::size_t n_latent, double p, double latent_p) {
    std::vector<NodeDecl> nodes;
    for (std::size_t i = 0; i < n_observed; ++i) nodes.push_back({"O" + std::to_string(i), Visibility::Observed});
    for (std::size_t i = 0; i < n_latent; ++i) nodes.push_back({"L" + std::to_string(i), Visibility::Latent});
    std::shuffle(nodes.begin(), nodes.end(), rng);
    if (latent_p < 0) latent_p = p;
    std::bernoulli_distribution coin(p), latent_coin(latent_p);
    std::vector<NodeSet> parents(nodes.size(), NodeSet(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) {
            const bool edge = nodes[i].visibility == Visibility::Latent ? latent_coin(rng) : coin(rng);
            if (edge) parents[j].insert(i);
        }
    return CausalDiagram::from_parent_sets(std::move(nodes), std::move(parents));
}

ImitationQuery random_query(Rng& rng) {
    std::uniform_int_distribution<std::size_t> n_obs(2, 6), n_lat(0, 3);
    std::uniform_real_distribution<double> density(0.2, 0.6);
    ImitationQuery q;
    // latents fan out more so that confounded actions are common
    q.diagram = random_diagram(rng, n_obs(rng), n_lat(rng), density(rng), 0.7);
    const auto observed = q.diagram.observed().to_vector();
    // the target is one of the last two observed nodes, so most actions can reach it
    std::uniform_int_distribution<std::size_t> pick(observed.size() >= 3 ? observed.size() - 2 : 1, observed.size() - 1);
    q.target = observed[pick(rng)];
    std::vector<NodeId> rest;
    for (NodeId v : observed)
        if (v != q.target) rest.push_back(v);
    std::shuffle(rest.begin(), rest.end(), rng);
    std::uniform_int_distribution<std::size_t> n_act(1, std::min<std::size_t>(3, rest.size()));
    rest.resize(n_act(rng));
    std::sort(rest.begin(), rest.end());
    q.actions = rest;
    return q;
}

NodeSet random_subset(Rng& rng, const NodeSet& s) {
    std::bernoulli_distribution coin(0.5);
    NodeSet out(s.universe());
    for (NodeId v : s)
        if (coin(rng)) out.insert(v);
    return out;
}

Triple random_triple(Rng& rng, const CausalDiagram& g) {
    const std::size_t n = g.size();
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_int_distribution<std::size_t> na(1, std::max<std::size_t>(1, n / 3));
    const std::size_t ka = na(rng), kb = na(rng);
    Triple t{NodeSet(n), NodeSet(n), NodeSet(n)};
    std::size_t k = 0;
    for (; k < ka; ++k) t.a.insert(ids[k]);
    for (; k < ka + kb && k < n; ++k) t.b.insert(ids[k]);
    std::bernoulli_distribution coin(0.4);
    for (; k < n; ++k)
        if (coin(rng)) t.given.insert(ids[k]);
    return t;
}

}  // namespace seqimit::testing
