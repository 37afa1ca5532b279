#ifndef BNSL_MISSINGNESS_HPP
#define BNSL_MISSINGNESS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

enum class ExecutionPolicy { Serial, Parallel };

/// Detected (or supplied) parent sets of the missing indicators, keyed by the
/// partially observed variable. A variable never parents its own indicator.
struct MissingnessModel {
    std::map<VarId, VarSet> parents_of_indicator;

    bool empty() const { return parents_of_indicator.empty(); }
    /// Pa of V_i's indicator, or empty set when V_i is not a key.
    const VarSet& parents_for(VarId v) const;
    /// Union of indicator parents over the partially observed members of s.
    VarSet indicator_parents_of(const VarSet& s) const;
};

/// Per-row multiplicative weights over a pairwise-deleted view.
struct CaseWeights {
    std::vector<double> weights;   // aligned with the view's rows
    VarSet context;                // the sufficient set U the view was built on
    std::uint64_t fingerprint = 0;
};

/// Builds the fingerprint from context and weight values.
std::uint64_t weights_fingerprint(const VarSet& context, const std::vector<double>& weights);

/// W for a candidate operation: every node with a changed parent set,
/// together with its parents before and after the operation.
VarSet necessary_variables(const Dag& g, const EdgeOp& op);

/// Least fixed point of U <- W plus the indicator parents of every partially
/// observed member of U.
VarSet sufficient_variables(const VarSet& w, const MissingnessModel& m);

struct CiOutcome {
    bool independent = true;
    double g2 = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    std::int64_t rows = 0;
    bool abstained = false;   // too few rows for the table; counted independent
};

/// G-squared test of x against y given s on rows where {x,y} and s are all
/// observed. Degrees of freedom count only strata with support; the test
/// abstains (independent) below 5 * df rows.
CiOutcome ci_test_detail(const CategoricalDataset& d, VarId x, VarId y, const VarSet& s,
                         double alpha);
bool ci_test(const CategoricalDataset& d, VarId x, VarId y, const VarSet& s, double alpha);

/// Same test with x given as an externally defined binary column over all
/// rows (a missing indicator); deletion is over {y} and s only.
CiOutcome ci_test_detail(const CategoricalDataset& d, const std::vector<std::uint8_t>& x, VarId y,
                         const VarSet& s, double alpha);
bool ci_test(const CategoricalDataset& d, const std::vector<std::uint8_t>& x, VarId y,
             const VarSet& s, double alpha);

/// For each partially observed V_i, shrinks Pa_{R_i} from all other variables
/// by removing any V_j with R_i independent of V_j given some subset S of the
/// remaining candidate parents, |S| <= max_sepset. Subsets are tried in
/// increasing size, lexicographically, first separator wins.
MissingnessModel detect_indicator_parents(const CategoricalDataset& d, double alpha,
                                          int max_sepset,
                                          ExecutionPolicy policy = ExecutionPolicy::Serial);

/// Case weights for the rows of `view`: each row's weight is the product over
/// partially observed members V_i of u of
///   P(pa | parents observed) / P(pa | V_i and parents observed)
/// with both probabilities estimated by frequencies on the corresponding
/// pairwise-deleted subsets of d. Requires u within the view context and the
/// indicator parents of u's members inside u. A configuration occurring in
/// the view with zero denominator frequency raises PositivityError.
CaseWeights ipw_weights(const DatasetView& view, const VarSet& u, const MissingnessModel& m,
                        const CategoricalDataset& d);

}  // namespace bnsl

#endif  // BNSL_MISSINGNESS_HPP
