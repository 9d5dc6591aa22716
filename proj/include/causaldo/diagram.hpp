#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causaldo {

struct Edge {
    std::string parent;
    std::string child;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A validated DAG over named variables.
///
/// Nodes keep their declaration order. The parents of a node are listed in
/// the order their edges were declared; that order is the canonical
/// coefficient order for everything downstream (posteriors, parameter files).
/// Instances are immutable once built and only come out of validate_dag().
class CausalDiagram {
public:
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    bool has_node(const std::string& name) const noexcept { return find(name).has_value(); }
    std::optional<std::size_t> find(const std::string& name) const noexcept;
    /// Throws UnknownNode.
    std::size_t index_of(const std::string& name) const;

    const std::vector<std::size_t>& parent_indices(std::size_t node) const { return parents_.at(node); }
    /// Declaration order, node indices. Parents always precede children.
    const std::vector<std::size_t>& topological_indices() const noexcept { return topo_; }

    bool is_root(std::size_t node) const { return parents_.at(node).empty(); }

    friend bool operator==(const CausalDiagram& a, const CausalDiagram& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    friend CausalDiagram validate_dag(std::vector<std::string> nodes, std::vector<Edge> edges);

    std::vector<std::string> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::size_t> topo_;
};

/// Builds a diagram, rejecting cycles, undeclared endpoints, self-loops,
/// duplicate edges and duplicate node names.
CausalDiagram validate_dag(std::vector<std::string> nodes, std::vector<Edge> edges);

/// Kahn's algorithm; among ready nodes the earliest-declared goes first.
std::vector<std::string> topological_order(const CausalDiagram& diagram);

/// Copy of the diagram with every edge into `intervened` removed.
CausalDiagram mutilate(const CausalDiagram& diagram, const std::string& intervened);

std::vector<std::string> parents(const CausalDiagram& diagram, const std::string& node);

/// Nodes with a directed path to `node`, plus the node itself, as a mask.
std::vector<bool> ancestors_or_self(const CausalDiagram& diagram, std::size_t node);

/// X -> Z -> Y
CausalDiagram chain_diagram();
/// Z -> X, X -> Y, Z -> Y (Y's parents are [X, Z])
CausalDiagram confounded_diagram();

}  // namespace causaldo
