#ifndef BNSL_BASELINES_HPP
#define BNSL_BASELINES_HPP

#include "bnsl/search.hpp"

namespace bnsl {

/// Hill-climbing on the rows with no missing cell in any variable.
/// Throws NoCompleteRowsError when every row has a missing cell.
SearchResult hc_listwise(const CategoricalDataset& d, const SearchConfig& cfg);

/// Single-imputation structural EM: start from column-mode imputation, then
/// alternate hill-climbing on the completed data (with add-one smoothed
/// parameters) with re-imputing each missing cell by the most probable state
/// given its Markov blanket. Stops when the learned graph repeats, the
/// imputation reaches a fixed point, or max_em_iters passes.
SearchResult structural_em(const CategoricalDataset& d, const SearchConfig& cfg,
                           int max_em_iters = 20);

}  // namespace bnsl

#endif  // BNSL_BASELINES_HPP
