#ifndef BNSL_SEARCH_HPP
#define BNSL_SEARCH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/missingness.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

enum class Variant { HC, HCPairwise, HCIPW, HCaIPW };

std::string to_string(Variant v);

struct SearchConfig {
    Variant variant = Variant::HC;
    double alpha = 0.05;          // CI significance for indicator-parent detection
    int max_sepset = 3;
    int max_indegree = -1;        // negative: uncapped
    int max_iterations = 0;       // non-positive: 10 * n^2
    std::uint64_t seed = 0;       // not consumed by search; echoed into the trace
    ExecutionPolicy policy = ExecutionPolicy::Serial;
};

struct TraceEntry {
    int iteration = 0;
    EdgeOp op;
    double delta = 0.0;
    std::int64_t view_size = 0;
    bool weighted = false;
    std::int64_t visited = 0;     // size of the visited-graph record after accepting
};

struct SearchTrace {
    std::vector<TraceEntry> entries;
    std::int64_t evaluated = 0;           // candidates actually scored
    std::int64_t skipped_record = 0;      // blocked by the visited-graph record
    std::int64_t skipped_empty = 0;       // empty deleted view
    std::int64_t skipped_positivity = 0;  // weight estimation failed
    MissingnessModel model;               // detected or supplied indicator parents
    std::uint64_t seed = 0;
};

using SearchResult = std::pair<Dag, SearchTrace>;

/// Greedy ascent on complete data: from the empty graph, repeatedly apply
/// the best strictly improving edge operation. Ties keep the earliest
/// candidate in enumeration order. Throws MissingDataError on missing cells.
SearchResult hill_climb(const CategoricalDataset& d, const SearchConfig& cfg);

/// As hill_climb, but each candidate is scored on the rows where its
/// necessary variables W are all observed, and candidates whose resulting
/// graph was already visited are skipped before scoring.
SearchResult hc_pairwise(const CategoricalDataset& d, const SearchConfig& cfg);

/// As hc_pairwise, but deletion is over the sufficient set U and scores are
/// weighted by inverse probability weights built from the indicator-parent
/// model (detected up front, or supplied).
SearchResult hc_ipw(const CategoricalDataset& d, const SearchConfig& cfg,
                    const MissingnessModel* supplied_model = nullptr);

/// Per candidate: when some indicator parent of W's partially observed
/// members is itself partially observed, fall back to the unweighted
/// pairwise evaluation over W; otherwise evaluate as hc_ipw.
SearchResult hc_aipw(const CategoricalDataset& d, const SearchConfig& cfg,
                     const MissingnessModel* supplied_model = nullptr);

}  // namespace bnsl

#endif  // BNSL_SEARCH_HPP
