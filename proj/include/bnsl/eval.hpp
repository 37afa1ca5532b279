#ifndef BNSL_EVAL_HPP
#define BNSL_EVAL_HPP

#include "bnsl/graph.hpp"

namespace bnsl {

struct F1Result {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Edge-level F1 between CPDAGs on the same node set. An edge counts as a
/// true positive only when adjacency and orientation class both match
/// (directed the same way, or undirected on both sides). Two empty graphs
/// score 1.
F1Result cpdag_f1(const Cpdag& learned, const Cpdag& truth);

/// Structural Hamming distance between CPDAGs (one unit per node pair that
/// differs in presence or orientation class), divided by the truth's edge
/// count. Can exceed 1. Truth must have at least one edge.
double normalized_shd(const Cpdag& learned, const Cpdag& truth);

}  // namespace bnsl

#endif  // BNSL_EVAL_HPP
