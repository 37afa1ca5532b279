#ifndef BNSL_GRAPH_HPP
#define BNSL_GRAPH_HPP

#include <string>
#include <utility>
#include <vector>

#include "bnsl/common.hpp"

namespace bnsl {

enum class OpKind { Add, Delete, Reverse };

std::string to_string(OpKind k);

/// A single edge operation on a DAG.
struct EdgeOp {
    OpKind kind = OpKind::Add;
    VarId from = -1;
    VarId to = -1;

    bool operator==(const EdgeOp&) const = default;
};

std::string to_string(const EdgeOp& op);

/// Labeled DAG stored as per-node sorted parent sets. Operations that modify
/// structure return new values or throw; a constructed Dag is always acyclic.
class Dag {
public:
    explicit Dag(std::vector<std::string> labels);
    /// Nodes labeled V1..Vn.
    explicit Dag(int n_nodes);

    int n_nodes() const { return static_cast<int>(parents_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(VarId v) const { return labels_.at(v); }
    VarId index_of(std::string_view label) const;

    const VarSet& parents(VarId v) const { return parents_.at(v); }
    bool has_edge(VarId from, VarId to) const;
    int edge_count() const;
    /// All edges as (from, to), lexicographically sorted.
    std::vector<std::pair<VarId, VarId>> edges() const;
    VarSet children(VarId v) const;

    /// True if adding from->to would close a directed cycle (an existing
    /// directed path to ~> from). Ignores whether the edge already exists.
    bool would_cycle(VarId from, VarId to) const;

    /// Inserts an edge, throwing NotApplicableError on self-loops/duplicates
    /// and CycleError when the insertion would create a cycle.
    void add_edge(VarId from, VarId to);
    void remove_edge(VarId from, VarId to);

    bool operator==(const Dag&) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<VarSet> parents_;
};

/// Partially directed graph over the same labels: compelled edges directed,
/// reversible edges undirected. Directed and undirected sets are disjoint.
class Cpdag {
public:
    explicit Cpdag(std::vector<std::string> labels);

    int n_nodes() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    void add_directed(VarId from, VarId to);
    void add_undirected(VarId a, VarId b);

    bool has_directed(VarId from, VarId to) const;
    bool has_undirected(VarId a, VarId b) const;
    bool adjacent(VarId a, VarId b) const;
    int edge_count() const;

    /// Directed edges as (from, to); undirected as (min, max); both sorted.
    std::vector<std::pair<VarId, VarId>> directed_edges() const;
    std::vector<std::pair<VarId, VarId>> undirected_edges() const;

    bool operator==(const Cpdag&) const = default;

private:
    std::vector<std::string> labels_;
    // adj_[a][b]: 0 none, 1 directed a->b, 2 undirected.
    std::vector<std::vector<std::uint8_t>> adj_;
};

/// Canonical byte encoding of a Dag; byte equality coincides with Dag
/// equality (labels and structure).
using GraphKey = std::string;

GraphKey graph_key(const Dag& g);

/// Returns the graph with `op` applied. Throws NotApplicableError when the
/// operation's precondition fails and CycleError when it would create a cycle.
Dag apply_op(const Dag& g, const EdgeOp& op);

/// Every applicable Add, then Delete, then Reverse, lexicographic by
/// (from, to) within each kind; cycle-creating candidates are excluded.
/// A non-negative max_indegree drops Adds/Reverses that would exceed it.
std::vector<EdgeOp> enumerate_neighbors(const Dag& g, int max_indegree = -1);

/// Nodes whose parent sets differ between g and apply_op(g, op).
VarSet changed_nodes(const Dag& g, const EdgeOp& op);

/// Topological order (parents before children). A constructed Dag is always
/// acyclic so this cannot fail for Dag inputs.
std::vector<VarId> topological_order(const Dag& g);

/// Equivalence-class representative: skeleton plus v-structures, closed under
/// the compelled-edge rules until no further edge can be oriented.
Cpdag dag_to_cpdag(const Dag& g);

}  // namespace bnsl

#endif  // BNSL_GRAPH_HPP
