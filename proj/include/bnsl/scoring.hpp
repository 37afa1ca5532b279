#ifndef BNSL_SCORING_HPP
#define BNSL_SCORING_HPP

#include <mutex>
#include <optional>
#include <unordered_map>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/missingness.hpp"

namespace bnsl {

struct FamilyScore {
    double value = 0.0;
    std::int64_t n_eff = 0;          // rows of the view the score was taken on
    std::uint64_t context_key = 0;   // see family_context_key
};

/// Key covering everything a family score depends on: the data, the family,
/// the deletion context, and the weights applied.
std::uint64_t family_context_key(const DatasetView& view, VarId child, const VarSet& parents,
                                 const CaseWeights* weights);

/// Memoized family scores. Concurrent lookup/insert is safe; a key is only
/// ever written with one value, so a lost race re-inserts the same score.
class ScoreCache {
public:
    std::optional<FamilyScore> lookup(std::uint64_t key) const;
    void insert(std::uint64_t key, const FamilyScore& score);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::unordered_map<std::uint64_t, FamilyScore> map_;
};

/// BIC of one family on a deleted view:
///   sum_j sum_k N_ijk log(N_ijk / N_ij)  -  log(N)/2 * (r_i - 1) * q_i
/// with 0 log 0 = 0, natural log, N = |view|, and q_i the full Cartesian
/// parent-configuration count. With weights, counts become weighted sums
/// while the penalty keeps N = |view|.
FamilyScore bic_local(const DatasetView& view, VarId child, const VarSet& parents,
                      const CaseWeights* weights = nullptr);

/// Sum of family scores of g, all on the same view and weights.
double total_score(const Dag& g, const DatasetView& view, const CaseWeights* weights = nullptr);

/// total_score(apply_op(g, op)) - total_score(g) computed from the changed
/// families only, old and new on the SAME view and weights.
double score_delta(const Dag& g, const EdgeOp& op, const DatasetView& view,
                   const CaseWeights* weights = nullptr, ScoreCache* cache = nullptr);

}  // namespace bnsl

#endif  // BNSL_SCORING_HPP
