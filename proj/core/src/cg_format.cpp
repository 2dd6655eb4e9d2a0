#include "seqimit/cg_format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace seqimit {

parse_error::parse_error(std::size_t line, const std::string& what)
    : diagram_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct RawEdge {
    std::string from;
    std::string to;
    bool bidirected = false;
    std::size_t line = 0;
};

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' || c == '[' ||
              c == ']'))
            return false;
    return true;
}

RawEdge parse_edge(const std::string& rest, std::size_t line) {
    RawEdge e;
    e.line = line;
    std::size_t pos = rest.find("<->");
    std::size_t len = 3;
    if (pos != std::string::npos) {
        e.bidirected = true;
    } else {
        pos = rest.find("->");
        len = 2;
        if (pos == std::string::npos) throw parse_error(line, "edge needs '->' or '<->'");
    }
    e.from = trim(std::string_view(rest).substr(0, pos));
    e.to = trim(std::string_view(rest).substr(pos + len));
    if (!valid_identifier(e.from) || !valid_identifier(e.to)) throw parse_error(line, "malformed edge '" + rest + "'");
    if (e.from == e.to) throw parse_error(line, "self loop on " + e.from);
    return e;
}

// Returns a node on a directed cycle, if any.
std::optional<std::string> find_cycle(const std::vector<std::string>& names, const std::vector<RawEdge>& edges) {
    std::unordered_map<std::string, std::vector<std::string>> adj;
    for (const auto& e : edges)
        if (!e.bidirected) adj[e.from].push_back(e.to);
    std::unordered_map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    for (const auto& root : names) {
        if (state[root] != 0) continue;
        std::vector<std::pair<std::string, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            auto& out = adj[v];
            if (i == out.size()) {
                state[v] = 2;
                stack.pop_back();
                continue;
            }
            std::string w = out[i++];
            if (state[w] == 1) return w;
            if (state[w] == 0) {
                state[w] = 1;
                stack.emplace_back(w, 0);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

ImitationQuery parse_query(std::string_view text) {
    std::vector<std::string> declared;
    std::unordered_map<std::string, Visibility> visibility;
    std::vector<RawEdge> edges;
    std::optional<std::vector<std::string>> order;
    std::optional<std::vector<std::string>> actions;
    std::optional<std::string> target;
    std::size_t order_line = 0, actions_line = 0, target_line = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto space = line.find_first_of(" \t");
        std::string keyword = line.substr(0, space);
        std::string rest = space == std::string::npos ? std::string() : trim(line.substr(space));

        if (keyword == "obs" || keyword == "lat") {
            auto words = split_words(rest);
            if (words.empty()) throw parse_error(line_no, keyword + " without names");
            for (auto& w : words) {
                if (!valid_identifier(w)) throw parse_error(line_no, "bad node name '" + w + "'");
                if (visibility.count(w)) throw parse_error(line_no, "duplicate node " + w);
                visibility[w] = keyword == "obs" ? Visibility::Observed : Visibility::Latent;
                declared.push_back(w);
            }
        } else if (keyword == "edge") {
            edges.push_back(parse_edge(rest, line_no));
        } else if (keyword == "order") {
            if (order) throw parse_error(line_no, "order given twice");
            order = split_words(rest);
            order_line = line_no;
        } else if (keyword == "actions") {
            if (actions) throw parse_error(line_no, "actions given twice");
            actions = split_words(rest);
            actions_line = line_no;
        } else if (keyword == "target") {
            if (target) throw parse_error(line_no, "target given twice");
            auto words = split_words(rest);
            if (words.size() != 1) throw parse_error(line_no, "target takes exactly one node");
            target = words[0];
            target_line = line_no;
        } else {
            throw parse_error(line_no, "unknown statement '" + keyword + "'");
        }
    }

    for (const auto& e : edges)
        for (const auto* n : {&e.from, &e.to})
            if (!visibility.count(*n)) throw parse_error(e.line, "undeclared node " + *n);
    if (!order) throw parse_error(0, "missing order statement");
    if (!actions) throw parse_error(0, "missing actions statement");
    if (!target) throw parse_error(0, "missing target statement");

    std::unordered_map<std::string, std::size_t> position;
    for (const auto& n : *order) {
        if (!visibility.count(n)) throw parse_error(order_line, "undeclared node " + n + " in order");
        if (!position.emplace(n, position.size()).second)
            throw parse_error(order_line, "order not total: " + n + " listed twice");
    }
    for (const auto& n : declared)
        if (!position.count(n)) throw parse_error(order_line, "order not total: " + n + " missing");

    if (auto v = find_cycle(*order, edges)) throw parse_error(0, "cycle through node " + *v);
    for (const auto& e : edges)
        if (!e.bidirected && position[e.from] > position[e.to])
            throw parse_error(e.line, "order not topological: edge " + e.from + " -> " + e.to);

    // Expand bidirected edges. Each fresh latent sits immediately before the
    // earlier endpoint; several in front of one node keep their edge order.
    std::map<std::size_t, std::vector<std::string>> inserted_before;
    std::map<std::pair<std::string, std::string>, std::size_t> pair_count;
    std::vector<NamedEdge> directed;
    for (const auto& e : edges) {
        if (!e.bidirected) {
            directed.emplace_back(e.from, e.to);
            continue;
        }
        std::size_t k = pair_count[{e.from, e.to}]++;
        std::string u = "_u_" + e.from + "_" + e.to + "_" + std::to_string(k);
        if (visibility.count(u)) throw parse_error(e.line, "duplicate node " + u);
        visibility[u] = Visibility::Latent;
        inserted_before[std::min(position[e.from], position[e.to])].push_back(u);
        directed.emplace_back(u, e.from);
        directed.emplace_back(u, e.to);
    }

    std::vector<NodeDecl> nodes;
    for (std::size_t i = 0; i < order->size(); ++i) {
        if (auto it = inserted_before.find(i); it != inserted_before.end())
            for (const auto& u : it->second) nodes.push_back({u, Visibility::Latent});
        const auto& n = (*order)[i];
        nodes.push_back({n, visibility[n]});
    }

    CausalDiagram g(std::move(nodes), directed);
    for (const auto& a : *actions)
        if (!g.find(a)) throw parse_error(actions_line, "undeclared node " + a + " in actions");
    if (!g.find(*target)) throw parse_error(target_line, "undeclared node " + *target + " as target");
    try {
        return make_query(std::move(g), *actions, *target);
    } catch (const parse_error&) {
        throw;
    } catch (const diagram_error& e) {
        throw parse_error(actions_line, e.what());
    }
}

ImitationQuery parse_query_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw diagram_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_query(buf.str());
}

std::string serialize_query(const ImitationQuery& q) {
    const auto& g = q.diagram;
    std::ostringstream out;
    auto emit_decl = [&](const char* kw, Visibility vis) {
        std::vector<std::string> names;
        for (NodeId v = 0; v < g.size(); ++v)
            if (g.visibility(v) == vis) names.push_back(g.name(v));
        if (names.empty()) return;
        out << kw;
        for (const auto& n : names) out << ' ' << n;
        out << '\n';
    };
    emit_decl("obs", Visibility::Observed);
    emit_decl("lat", Visibility::Latent);
    for (auto [a, b] : g.edges()) out << "edge " << g.name(a) << " -> " << g.name(b) << '\n';
    out << "order";
    for (NodeId v = 0; v < g.size(); ++v) out << ' ' << g.name(v);
    out << "\nactions";
    for (NodeId x : q.actions) out << ' ' << g.name(x);
    out << "\ntarget " << g.name(q.target) << '\n';
    return out.str();
}

}  // namespace seqimit
