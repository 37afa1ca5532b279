#ifndef BNSL_DATASET_HPP
#define BNSL_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bnsl/common.hpp"

namespace bnsl {

struct VariableMeta {
    std::string name;
    int cardinality = 0;
    std::vector<std::string> state_labels;
};

/// Cell storage: a state index in [0, cardinality) or kMissingCell.
using CellValue = std::int32_t;
inline constexpr CellValue kMissingCell = -1;

inline bool is_missing(CellValue v) { return v == kMissingCell; }

/// Immutable discrete data table with an explicit missing marker per cell.
/// Columns are validated on construction; there is no mutation API.
class CategoricalDataset {
public:
    CategoricalDataset(std::vector<VariableMeta> variables,
                       std::vector<std::vector<CellValue>> columns);

    int n_vars() const { return static_cast<int>(variables_.size()); }
    std::int64_t n_rows() const { return n_rows_; }

    const VariableMeta& variable(VarId v) const { return variables_.at(v); }
    const std::vector<VariableMeta>& variables() const { return variables_; }
    int cardinality(VarId v) const { return variables_[v].cardinality; }

    /// Index of a named variable; throws Error for unknown names.
    VarId index_of(std::string_view name) const;
    bool has_variable(std::string_view name) const;

    CellValue cell(std::int64_t row, VarId v) const { return columns_[v][row]; }
    const std::vector<CellValue>& column(VarId v) const { return columns_[v]; }

    /// Variables with no missing cell.
    const VarSet& fully_observed() const { return fully_observed_; }
    /// Variables with at least one missing cell.
    const VarSet& partially_observed() const { return partially_observed_; }
    bool is_complete() const { return partially_observed_.empty(); }

    std::int64_t missing_count(VarId v) const { return missing_counts_[v]; }

    /// Content hash over shape, variable metadata and cells.
    std::uint64_t fingerprint() const { return fingerprint_; }

    /// Row subset sharing this dataset's variable metadata (cardinalities are
    /// kept even when states vanish from the subset).
    CategoricalDataset subset_rows(const std::vector<std::int64_t>& rows) const;

    /// Copy with selected cells replaced; used by imputation. `fill[k]` gives
    /// the replacement value for cell `cells[k]` = (row, var).
    CategoricalDataset with_cells(const std::vector<std::pair<std::int64_t, VarId>>& cells,
                                  const std::vector<CellValue>& fill) const;

private:
    std::vector<VariableMeta> variables_;
    std::vector<std::vector<CellValue>> columns_;
    std::int64_t n_rows_ = 0;
    std::vector<std::int64_t> missing_counts_;
    VarSet fully_observed_;
    VarSet partially_observed_;
    std::unordered_map<std::string, VarId> name_index_;
    std::uint64_t fingerprint_ = 0;
};

/// Reads a header-row CSV. Every distinct non-missing token of a column
/// becomes a state label; alphabetical label order defines state indices.
/// Empty fields are treated as missing alongside `missing_token`.
CategoricalDataset load_csv(const std::string& path, const std::string& missing_token = "?");
CategoricalDataset parse_csv(std::istream& in, const std::string& missing_token = "?");

/// Binary vector over rows: 1 where the cell of `v` is missing.
std::vector<std::uint8_t> missing_indicator(const CategoricalDataset& d, VarId v);
std::vector<std::uint8_t> missing_indicator(const CategoricalDataset& d, std::string_view name);

/// Row subset of a dataset produced by pairwise deletion over a context set.
/// Holds indices only; the base dataset must outlive the view.
class DatasetView {
public:
    DatasetView(const CategoricalDataset& base, std::vector<std::int64_t> rows, VarSet context);

    const CategoricalDataset& base() const { return *base_; }
    std::int64_t size() const { return static_cast<std::int64_t>(rows_.size()); }
    bool empty() const { return rows_.empty(); }
    std::int64_t row(std::int64_t i) const { return rows_[i]; }
    const std::vector<std::int64_t>& rows() const { return rows_; }
    const VarSet& context() const { return context_; }

    CellValue cell(std::int64_t i, VarId v) const { return base_->cell(rows_[i], v); }

private:
    const CategoricalDataset* base_;
    std::vector<std::int64_t> rows_;
    VarSet context_;
};

/// Retains exactly the rows with no missing cell among `vars`.
DatasetView pairwise_delete(const CategoricalDataset& d, const VarSet& vars);

/// View over all rows with every variable in context; requires complete data.
DatasetView complete_view(const CategoricalDataset& d);

/// Sparse contingency table for one family. Parent configurations are indexed
/// in mixed radix over the sorted parent set (first parent most significant);
/// only configurations with support appear, but `q_full` is the size of the
/// full Cartesian product.
struct CountTable {
    VarId child = -1;
    VarSet parents;
    int child_cardinality = 0;
    std::vector<std::uint64_t> configs;        // sorted, materialized only
    std::vector<std::vector<double>> cells;    // [config][child state]
    std::vector<double> config_totals;         // N_ij (or weighted)
    double q_full = 1.0;
    double total = 0.0;                        // sum over cells
    std::int64_t n_rows = 0;                   // |view|
};

/// Tallies (parent configuration, child state) over the view's rows. With
/// weights, each row contributes its weight instead of 1. The view's context
/// must cover child and parents so no missing cell is ever encountered.
CountTable contingency_counts(const DatasetView& view, VarId child, const VarSet& parents,
                              std::span<const double> weights = {});

/// Mixed-radix index of a row's values over `vars` (sorted), using the base
/// dataset's cardinalities. All cells must be observed.
std::uint64_t config_index(const CategoricalDataset& d, std::int64_t row, const VarSet& vars);

}  // namespace bnsl

#endif  // BNSL_DATASET_HPP
