#include "bnsl/graph.hpp"

#include <algorithm>
#include <sstream>

namespace bnsl {

std::string to_string(OpKind k) {
    switch (k) {
        case OpKind::Add: return "add";
        case OpKind::Delete: return "delete";
        case OpKind::Reverse: return "reverse";
    }
    return "?";
}

std::string to_string(const EdgeOp& op) {
    std::ostringstream os;
    os << to_string(op.kind) << " " << op.from << "->" << op.to;
    return os.str();
}

Dag::Dag(std::vector<std::string> labels)
    : labels_(std::move(labels)), parents_(labels_.size()) {}

Dag::Dag(int n_nodes) : parents_(n_nodes) {
    labels_.reserve(n_nodes);
    for (int i = 0; i < n_nodes; ++i) labels_.push_back("V" + std::to_string(i + 1));
}

VarId Dag::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<VarId>(i);
    throw Error("dag: unknown node label '" + std::string(label) + "'");
}

bool Dag::has_edge(VarId from, VarId to) const {
    return varset_contains(parents_.at(to), from);
}

int Dag::edge_count() const {
    int c = 0;
    for (const auto& p : parents_) c += static_cast<int>(p.size());
    return c;
}

std::vector<std::pair<VarId, VarId>> Dag::edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (VarId to = 0; to < n_nodes(); ++to)
        for (VarId from : parents_[to]) out.emplace_back(from, to);
    std::sort(out.begin(), out.end());
    return out;
}

VarSet Dag::children(VarId v) const {
    VarSet out;
    for (VarId to = 0; to < n_nodes(); ++to)
        if (varset_contains(parents_[to], v)) out.push_back(to);
    return out;
}

bool Dag::would_cycle(VarId from, VarId to) const {
    if (from == to) return true;
    // DFS along existing edges from `to`, looking for `from`.
    std::vector<std::uint8_t> seen(parents_.size(), 0);
    std::vector<VarId> stack{to};
    seen[to] = 1;
    while (!stack.empty()) {
        const VarId cur = stack.back();
        stack.pop_back();
        for (VarId next = 0; next < n_nodes(); ++next) {
            if (!seen[next] && varset_contains(parents_[next], cur)) {
                if (next == from) return true;
                seen[next] = 1;
                stack.push_back(next);
            }
        }
    }
    return false;
}

void Dag::add_edge(VarId from, VarId to) {
    if (from == to) throw NotApplicableError("dag: self-loop " + std::to_string(from));
    if (from < 0 || from >= n_nodes() || to < 0 || to >= n_nodes())
        throw NotApplicableError("dag: node index out of range");
    if (has_edge(from, to)) throw NotApplicableError("dag: duplicate edge");
    if (would_cycle(from, to))
        throw CycleError("dag: edge " + std::to_string(from) + "->" + std::to_string(to) +
                         " creates a cycle");
    varset_insert(parents_[to], from);
}

void Dag::remove_edge(VarId from, VarId to) {
    if (!has_edge(from, to)) throw NotApplicableError("dag: edge absent");
    varset_erase(parents_[to], from);
}

Cpdag::Cpdag(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      adj_(labels_.size(), std::vector<std::uint8_t>(labels_.size(), 0)) {}

void Cpdag::add_directed(VarId from, VarId to) {
    if (from == to) throw Error("cpdag: self-loop");
    if (adj_[from][to] != 0 || adj_[to][from] != 0) throw Error("cpdag: duplicate adjacency");
    adj_[from][to] = 1;
}

void Cpdag::add_undirected(VarId a, VarId b) {
    if (a == b) throw Error("cpdag: self-loop");
    if (adj_[a][b] != 0 || adj_[b][a] != 0) throw Error("cpdag: duplicate adjacency");
    adj_[a][b] = adj_[b][a] = 2;
}

bool Cpdag::has_directed(VarId from, VarId to) const { return adj_[from][to] == 1; }
bool Cpdag::has_undirected(VarId a, VarId b) const { return adj_[a][b] == 2; }
bool Cpdag::adjacent(VarId a, VarId b) const { return adj_[a][b] != 0 || adj_[b][a] != 0; }

int Cpdag::edge_count() const {
    return static_cast<int>(directed_edges().size() + undirected_edges().size());
}

std::vector<std::pair<VarId, VarId>> Cpdag::directed_edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (VarId a = 0; a < n_nodes(); ++a)
        for (VarId b = 0; b < n_nodes(); ++b)
            if (adj_[a][b] == 1) out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<VarId, VarId>> Cpdag::undirected_edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (VarId a = 0; a < n_nodes(); ++a)
        for (VarId b = a + 1; b < n_nodes(); ++b)
            if (adj_[a][b] == 2) out.emplace_back(a, b);
    return out;
}

GraphKey graph_key(const Dag& g) {
    std::ostringstream os;
    os << g.n_nodes() << ";";
    for (const auto& l : g.labels()) os << l << ",";
    os << ";";
    for (VarId v = 0; v < g.n_nodes(); ++v) {
        for (VarId p : g.parents(v)) os << p << ",";
        os << "|";
    }
    return os.str();
}

Dag apply_op(const Dag& g, const EdgeOp& op) {
    Dag out = g;
    switch (op.kind) {
        case OpKind::Add:
            out.add_edge(op.from, op.to);
            break;
        case OpKind::Delete:
            out.remove_edge(op.from, op.to);
            break;
        case OpKind::Reverse:
            out.remove_edge(op.from, op.to);
            out.add_edge(op.to, op.from);
            break;
    }
    return out;
}

std::vector<EdgeOp> enumerate_neighbors(const Dag& g, int max_indegree) {
    const int n = g.n_nodes();
    auto indegree = [&](VarId v) { return static_cast<int>(g.parents(v).size()); };
    std::vector<EdgeOp> out;

    for (VarId from = 0; from < n; ++from) {
        for (VarId to = 0; to < n; ++to) {
            if (from == to || g.has_edge(from, to)) continue;
            if (max_indegree >= 0 && indegree(to) + 1 > max_indegree) continue;
            if (g.would_cycle(from, to)) continue;
            out.push_back({OpKind::Add, from, to});
        }
    }
    const auto edges = g.edges();
    for (const auto& [from, to] : edges) out.push_back({OpKind::Delete, from, to});
    for (const auto& [from, to] : edges) {
        if (max_indegree >= 0 && indegree(from) + 1 > max_indegree) continue;
        // Reversing from->to cycles iff another from ~> to path remains.
        Dag tmp = g;
        tmp.remove_edge(from, to);
        if (tmp.would_cycle(to, from)) continue;
        out.push_back({OpKind::Reverse, from, to});
    }
    return out;
}

VarSet changed_nodes(const Dag& g, const EdgeOp& op) {
    switch (op.kind) {
        case OpKind::Add:
            if (g.has_edge(op.from, op.to)) throw NotApplicableError("changed_nodes: edge present");
            return make_varset({op.to});
        case OpKind::Delete:
            if (!g.has_edge(op.from, op.to)) throw NotApplicableError("changed_nodes: edge absent");
            return make_varset({op.to});
        case OpKind::Reverse:
            if (!g.has_edge(op.from, op.to)) throw NotApplicableError("changed_nodes: edge absent");
            return make_varset({op.from, op.to});
    }
    throw NotApplicableError("changed_nodes: bad op kind");
}

std::vector<VarId> topological_order(const Dag& g) {
    const int n = g.n_nodes();
    std::vector<int> remaining(n);
    for (VarId v = 0; v < n; ++v) remaining[v] = static_cast<int>(g.parents(v).size());
    std::vector<VarId> order;
    order.reserve(n);
    std::vector<VarId> ready;
    for (VarId v = n - 1; v >= 0; --v)
        if (remaining[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        const VarId v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (VarId c = n - 1; c >= 0; --c) {
            if (varset_contains(g.parents(c), v) && --remaining[c] == 0) ready.push_back(c);
        }
    }
    if (static_cast<int>(order.size()) != n) throw CycleError("topological_order: cycle");
    return order;
}

namespace {

// Orientation matrix for CPDAG completion: 0 none, 1 directed, 2 undirected.
using AdjMat = std::vector<std::vector<std::uint8_t>>;

bool adjacent(const AdjMat& m, VarId a, VarId b) { return m[a][b] != 0 || m[b][a] != 0; }

void orient(AdjMat& m, VarId from, VarId to) {
    m[from][to] = 1;
    m[to][from] = 0;
}

// Orients every undirected edge forced by an existing orientation:
// (R1) a->b, b-c, a and c non-adjacent        => b->c
// (R2) a->b->c with a-c                       => a->c
// (R3) a-b, a-c, a-d, c->b, d->b, c,d non-adj => a->b
// Repeats until no rule fires.
void close_orientations(AdjMat& m) {
    const int n = static_cast<int>(m.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (VarId a = 0; a < n; ++a) {
            for (VarId b = 0; b < n; ++b) {
                if (m[a][b] != 1) continue;
                for (VarId c = 0; c < n; ++c) {
                    if (c == a || c == b) continue;
                    if (m[b][c] == 2 && !adjacent(m, a, c)) {
                        orient(m, b, c);
                        changed = true;
                    }
                }
            }
        }
        for (VarId a = 0; a < n; ++a) {
            for (VarId c = 0; c < n; ++c) {
                if (m[a][c] != 2) continue;
                for (VarId b = 0; b < n; ++b) {
                    if (b == a || b == c) continue;
                    if (m[a][b] == 1 && m[b][c] == 1) {
                        orient(m, a, c);
                        changed = true;
                        break;
                    }
                }
            }
        }
        for (VarId a = 0; a < n; ++a) {
            for (VarId b = 0; b < n; ++b) {
                if (m[a][b] != 2) continue;
                for (VarId c = 0; c < n; ++c) {
                    if (c == a || c == b || m[a][c] != 2 || m[c][b] != 1) continue;
                    bool fired = false;
                    for (VarId d = c + 1; d < n; ++d) {
                        if (d == a || d == b || m[a][d] != 2 || m[d][b] != 1) continue;
                        if (adjacent(m, c, d)) continue;
                        orient(m, a, b);
                        changed = true;
                        fired = true;
                        break;
                    }
                    if (fired) break;
                }
            }
        }
    }
}

}  // namespace

Cpdag dag_to_cpdag(const Dag& g) {
    const int n = g.n_nodes();
    AdjMat m(n, std::vector<std::uint8_t>(n, 0));
    for (const auto& [from, to] : g.edges()) m[from][to] = m[to][from] = 2;

    // v-structures x->z<-y with x,y non-adjacent stay directed.
    for (VarId z = 0; z < n; ++z) {
        const VarSet& pa = g.parents(z);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                const VarId x = pa[i], y = pa[j];
                if (g.has_edge(x, y) || g.has_edge(y, x)) continue;
                orient(m, x, z);
                orient(m, y, z);
            }
        }
    }
    close_orientations(m);

    Cpdag out(g.labels());
    for (VarId a = 0; a < n; ++a) {
        for (VarId b = 0; b < n; ++b) {
            if (m[a][b] == 1) out.add_directed(a, b);
            else if (m[a][b] == 2 && a < b) out.add_undirected(a, b);
        }
    }
    return out;
}

}  // namespace bnsl
