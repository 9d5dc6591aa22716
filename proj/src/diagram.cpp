#include "causaldo/diagram.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>

#include "causaldo/error.hpp"

namespace causaldo {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::UnknownEndpoint: return "UnknownEndpoint";
        case ErrorKind::DuplicateEdge: return "DuplicateEdge";
        case ErrorKind::UnknownNode: return "UnknownNode";
        case ErrorKind::TargetIsIntervened: return "TargetIsIntervened";
        case ErrorKind::RootNodeHasNoCoefficients: return "RootNodeHasNoCoefficients";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::AllWeightsUnderflow: return "AllWeightsUnderflow";
        case ErrorKind::NonFiniteResult: return "NonFiniteResult";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Format: return "Format";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

std::optional<std::size_t> CausalDiagram::find(const std::string& name) const noexcept {
    auto it = std::find(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t CausalDiagram::index_of(const std::string& name) const {
    auto idx = find(name);
    CAUSALDO_REQUIRE(idx.has_value(), ErrorKind::UnknownNode, "no node named '" + name + "'");
    return *idx;
}

namespace {

// Called only when Kahn's algorithm left nodes unprocessed. Every leftover
// node has a leftover parent, so walking parents must revisit a node.
std::vector<std::size_t> find_cycle(const std::vector<std::vector<std::size_t>>& parents,
                                    const std::vector<bool>& done) {
    std::size_t start = 0;
    while (done[start]) ++start;
    std::vector<int> position(parents.size(), -1);
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (position[cur] < 0) {
        position[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        auto next = std::find_if(parents[cur].begin(), parents[cur].end(),
                                 [&](std::size_t p) { return !done[p]; });
        cur = *next;
    }
    // path[position[cur]..] walks child -> parent; reverse to read along edges.
    std::vector<std::size_t> cycle(path.begin() + position[cur], path.end());
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
}

}  // namespace

CausalDiagram validate_dag(std::vector<std::string> nodes, std::vector<Edge> edges) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CAUSALDO_REQUIRE(!nodes[i].empty(), ErrorKind::InvalidArgument, "empty node name");
        CAUSALDO_REQUIRE(index.emplace(nodes[i], i).second, ErrorKind::InvalidArgument,
                         "duplicate node '" + nodes[i] + "'");
    }

    std::vector<std::vector<std::size_t>> parents(nodes.size());
    std::vector<std::vector<std::size_t>> children(nodes.size());
    for (const auto& e : edges) {
        auto p = index.find(e.parent);
        auto c = index.find(e.child);
        CAUSALDO_REQUIRE(p != index.end(), ErrorKind::UnknownEndpoint, "edge endpoint '" + e.parent + "'");
        CAUSALDO_REQUIRE(c != index.end(), ErrorKind::UnknownEndpoint, "edge endpoint '" + e.child + "'");
        CAUSALDO_REQUIRE(p->second != c->second, ErrorKind::CycleDetected, "self-loop on '" + e.parent + "'");
        auto& ps = parents[c->second];
        CAUSALDO_REQUIRE(std::find(ps.begin(), ps.end(), p->second) == ps.end(), ErrorKind::DuplicateEdge,
                         e.parent + " -> " + e.child);
        ps.push_back(p->second);
        children[p->second].push_back(c->second);
    }

    std::vector<std::size_t> indegree(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) indegree[i] = parents[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (indegree[i] == 0) ready.push(i);

    std::vector<std::size_t> topo;
    std::vector<bool> done(nodes.size(), false);
    while (!ready.empty()) {
        std::size_t n = ready.top();
        ready.pop();
        topo.push_back(n);
        done[n] = true;
        for (std::size_t c : children[n])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (topo.size() != nodes.size()) {
        auto cycle = find_cycle(parents, done);
        std::string msg;
        for (std::size_t n : cycle) msg += nodes[n] + " -> ";
        msg += nodes[cycle.front()];
        throw Error(ErrorKind::CycleDetected, msg);
    }

    CausalDiagram d;
    d.nodes_ = std::move(nodes);
    d.edges_ = std::move(edges);
    d.parents_ = std::move(parents);
    d.topo_ = std::move(topo);
    return d;
}

std::vector<std::string> topological_order(const CausalDiagram& diagram) {
    std::vector<std::string> out;
    out.reserve(diagram.size());
    for (std::size_t i : diagram.topological_indices()) out.push_back(diagram.nodes()[i]);
    return out;
}

CausalDiagram mutilate(const CausalDiagram& diagram, const std::string& intervened) {
    diagram.index_of(intervened);
    std::vector<Edge> kept;
    for (const auto& e : diagram.edges())
        if (e.child != intervened) kept.push_back(e);
    return validate_dag(diagram.nodes(), std::move(kept));
}

std::vector<std::string> parents(const CausalDiagram& diagram, const std::string& node) {
    std::vector<std::string> out;
    for (std::size_t p : diagram.parent_indices(diagram.index_of(node))) out.push_back(diagram.nodes()[p]);
    return out;
}

std::vector<bool> ancestors_or_self(const CausalDiagram& diagram, std::size_t node) {
    std::vector<bool> mark(diagram.size(), false);
    std::vector<std::size_t> stack{node};
    mark.at(node) = true;
    while (!stack.empty()) {
        std::size_t n = stack.back();
        stack.pop_back();
        for (std::size_t p : diagram.parent_indices(n)) {
            if (!mark[p]) {
                mark[p] = true;
                stack.push_back(p);
            }
        }
    }
    return mark;
}

CausalDiagram chain_diagram() { return validate_dag({"X", "Z", "Y"}, {{"X", "Z"}, {"Z", "Y"}}); }

CausalDiagram confounded_diagram() {
    return validate_dag({"Z", "X", "Y"}, {{"Z", "X"}, {"X", "Y"}, {"Z", "Y"}});
}

}  // namespace causaldo
