#include "bnsl/eval.hpp"

namespace bnsl {

namespace {

void require_same_nodes(const Cpdag& a, const Cpdag& b) {
    if (a.labels() != b.labels()) throw Error("eval: node sets differ");
}

// Orientation-class match on one ordered pair (a < b assumed for undirected).
bool same_edge(const Cpdag& x, const Cpdag& y, VarId a, VarId b) {
    if (x.has_undirected(a, b)) return y.has_undirected(a, b);
    if (x.has_directed(a, b)) return y.has_directed(a, b);
    if (x.has_directed(b, a)) return y.has_directed(b, a);
    return false;
}

}  // namespace

F1Result cpdag_f1(const Cpdag& learned, const Cpdag& truth) {
    require_same_nodes(learned, truth);
    const int n = learned.n_nodes();
    int tp = 0, fp = 0, fn = 0;
    for (VarId a = 0; a < n; ++a) {
        for (VarId b = a + 1; b < n; ++b) {
            const bool in_l = learned.adjacent(a, b);
            const bool in_t = truth.adjacent(a, b);
            if (!in_l && !in_t) continue;
            if (in_l && in_t && same_edge(learned, truth, a, b)) {
                ++tp;
            } else {
                if (in_l) ++fp;
                if (in_t) ++fn;
            }
        }
    }
    F1Result r;
    if (tp + fp + fn == 0) {
        r.precision = r.recall = r.f1 = 1.0;
        return r;
    }
    r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    r.f1 = 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
    return r;
}

double normalized_shd(const Cpdag& learned, const Cpdag& truth) {
    require_same_nodes(learned, truth);
    const int truth_edges = truth.edge_count();
    if (truth_edges == 0) throw Error("normalized_shd: truth graph has no edges");
    const int n = learned.n_nodes();
    int shd = 0;
    for (VarId a = 0; a < n; ++a) {
        for (VarId b = a + 1; b < n; ++b) {
            const bool in_l = learned.adjacent(a, b);
            const bool in_t = truth.adjacent(a, b);
            if (in_l != in_t) ++shd;
            else if (in_l && !same_edge(learned, truth, a, b)) ++shd;
        }
    }
    return static_cast<double>(shd) / truth_edges;
}

}  // namespace bnsl
