#include "bnsl/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bnsl {

namespace {

std::uint64_t compute_fingerprint(const std::vector<VariableMeta>& vars,
                                  const std::vector<std::vector<CellValue>>& columns,
                                  std::int64_t n_rows) {
    Fnv1a h;
    h.update_value<std::uint64_t>(vars.size());
    h.update_value<std::int64_t>(n_rows);
    for (const auto& v : vars) {
        h.update_string(v.name);
        h.update_value<int>(v.cardinality);
        for (const auto& s : v.state_labels) h.update_string(s);
    }
    for (const auto& col : columns) h.update_span(col.data(), col.size());
    return h.digest();
}

}  // namespace

CategoricalDataset::CategoricalDataset(std::vector<VariableMeta> variables,
                                       std::vector<std::vector<CellValue>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
    if (variables_.size() != columns_.size())
        throw Error("dataset: variable/column count mismatch");
    n_rows_ = columns_.empty() ? 0 : static_cast<std::int64_t>(columns_[0].size());
    missing_counts_.assign(variables_.size(), 0);

    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& meta = variables_[i];
        const auto& col = columns_[i];
        if (static_cast<std::int64_t>(col.size()) != n_rows_)
            throw Error("dataset: ragged column '" + meta.name + "'");
        if (meta.cardinality < 2)
            throw Error("dataset: variable '" + meta.name + "' has cardinality < 2");
        if (static_cast<int>(meta.state_labels.size()) != meta.cardinality)
            throw Error("dataset: state label count mismatch for '" + meta.name + "'");
        if (!name_index_.emplace(meta.name, static_cast<VarId>(i)).second)
            throw Error("dataset: duplicate variable name '" + meta.name + "'");
        std::int64_t miss = 0;
        for (CellValue v : col) {
            if (is_missing(v)) {
                ++miss;
            } else if (v < 0 || v >= meta.cardinality) {
                throw Error("dataset: out-of-range value in '" + meta.name + "'");
            }
        }
        missing_counts_[i] = miss;
        if (miss == 0)
            fully_observed_.push_back(static_cast<VarId>(i));
        else
            partially_observed_.push_back(static_cast<VarId>(i));
    }
    fingerprint_ = compute_fingerprint(variables_, columns_, n_rows_);
}

VarId CategoricalDataset::index_of(std::string_view name) const {
    auto it = name_index_.find(std::string(name));
    if (it == name_index_.end()) throw Error("dataset: unknown variable '" + std::string(name) + "'");
    return it->second;
}

bool CategoricalDataset::has_variable(std::string_view name) const {
    return name_index_.count(std::string(name)) > 0;
}

CategoricalDataset CategoricalDataset::subset_rows(const std::vector<std::int64_t>& rows) const {
    std::vector<std::vector<CellValue>> cols(columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        cols[c].reserve(rows.size());
        for (std::int64_t r : rows) cols[c].push_back(columns_[c][r]);
    }
    return CategoricalDataset(variables_, std::move(cols));
}

CategoricalDataset CategoricalDataset::with_cells(
    const std::vector<std::pair<std::int64_t, VarId>>& cells,
    const std::vector<CellValue>& fill) const {
    if (cells.size() != fill.size()) throw Error("dataset: cell/fill size mismatch");
    std::vector<std::vector<CellValue>> cols = columns_;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        cols[cells[k].second][cells[k].first] = fill[k];
    }
    return CategoricalDataset(variables_, std::move(cols));
}

// -------------------------------------------------------------------------
// CSV loading

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

CategoricalDataset parse_csv(std::istream& in, const std::string& missing_token) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("csv: empty input");
    const std::vector<std::string> header = split_csv_line(line);
    const std::size_t n_cols = header.size();
    if (n_cols == 0) throw ParseError("csv: empty header");

    std::vector<std::vector<std::string>> raw(n_cols);
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() && in.eof()) break;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != n_cols)
            throw ParseError("csv: row " + std::to_string(row_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(n_cols));
        for (std::size_t c = 0; c < n_cols; ++c) raw[c].push_back(std::move(fields[c]));
    }

    auto missing = [&](const std::string& tok) { return tok.empty() || tok == missing_token; };

    std::vector<VariableMeta> metas(n_cols);
    std::vector<std::vector<CellValue>> columns(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        std::set<std::string> labels;
        for (const auto& tok : raw[c])
            if (!missing(tok)) labels.insert(tok);
        if (labels.size() < 2)
            throw ParseError("csv: column '" + header[c] + "' has fewer than 2 observed states");
        VariableMeta& meta = metas[c];
        meta.name = header[c];
        meta.state_labels.assign(labels.begin(), labels.end());
        meta.cardinality = static_cast<int>(meta.state_labels.size());
        std::map<std::string, CellValue> code;
        for (std::size_t k = 0; k < meta.state_labels.size(); ++k)
            code[meta.state_labels[k]] = static_cast<CellValue>(k);
        columns[c].reserve(raw[c].size());
        for (const auto& tok : raw[c])
            columns[c].push_back(missing(tok) ? kMissingCell : code[tok]);
    }
    return CategoricalDataset(std::move(metas), std::move(columns));
}

CategoricalDataset load_csv(const std::string& path, const std::string& missing_token) {
    std::ifstream in(path);
    if (!in) throw IoError("csv: cannot open '" + path + "'");
    return parse_csv(in, missing_token);
}

std::vector<std::uint8_t> missing_indicator(const CategoricalDataset& d, VarId v) {
    if (v < 0 || v >= d.n_vars()) throw Error("missing_indicator: variable index out of range");
    const auto& col = d.column(v);
    std::vector<std::uint8_t> out(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) out[i] = is_missing(col[i]) ? 1 : 0;
    return out;
}

std::vector<std::uint8_t> missing_indicator(const CategoricalDataset& d, std::string_view name) {
    return missing_indicator(d, d.index_of(name));
}

// -------------------------------------------------------------------------
// Views

DatasetView::DatasetView(const CategoricalDataset& base, std::vector<std::int64_t> rows,
                         VarSet context)
    : base_(&base), rows_(std::move(rows)), context_(std::move(context)) {}

DatasetView pairwise_delete(const CategoricalDataset& d, const VarSet& vars) {
    if (vars.empty()) throw Error("pairwise_delete: empty variable set");
    for (VarId v : vars)
        if (v < 0 || v >= d.n_vars()) throw Error("pairwise_delete: variable index out of range");

    std::vector<std::int64_t> rows;
    rows.reserve(d.n_rows());
    // Fast path: no variable in the context has missing cells.
    bool any_missing = false;
    for (VarId v : vars) any_missing = any_missing || d.missing_count(v) > 0;
    if (!any_missing) {
        rows.resize(d.n_rows());
        for (std::int64_t r = 0; r < d.n_rows(); ++r) rows[r] = r;
        return DatasetView(d, std::move(rows), vars);
    }
    for (std::int64_t r = 0; r < d.n_rows(); ++r) {
        bool keep = true;
        for (VarId v : vars) {
            if (is_missing(d.cell(r, v))) {
                keep = false;
                break;
            }
        }
        if (keep) rows.push_back(r);
    }
    return DatasetView(d, std::move(rows), vars);
}

DatasetView complete_view(const CategoricalDataset& d) {
    if (!d.is_complete()) throw MissingDataError("complete_view: dataset has missing cells");
    VarSet all(d.n_vars());
    for (int i = 0; i < d.n_vars(); ++i) all[i] = i;
    std::vector<std::int64_t> rows(d.n_rows());
    for (std::int64_t r = 0; r < d.n_rows(); ++r) rows[r] = r;
    return DatasetView(d, std::move(rows), std::move(all));
}

// -------------------------------------------------------------------------
// Contingency counting

std::uint64_t config_index(const CategoricalDataset& d, std::int64_t row, const VarSet& vars) {
    std::uint64_t idx = 0;
    for (VarId v : vars) {
        const CellValue cell = d.cell(row, v);
        if (is_missing(cell)) throw Error("config_index: missing cell encountered");
        idx = idx * static_cast<std::uint64_t>(d.cardinality(v)) + static_cast<std::uint64_t>(cell);
    }
    return idx;
}

CountTable contingency_counts(const DatasetView& view, VarId child, const VarSet& parents,
                              std::span<const double> weights) {
    const CategoricalDataset& d = view.base();
    if (varset_contains(parents, child)) throw Error("contingency_counts: child in parent set");
    if (!varset_contains(view.context(), child))
        throw Error("contingency_counts: child outside view context");
    if (!varset_subset(parents, view.context()))
        throw Error("contingency_counts: parent outside view context");
    if (!weights.empty() && static_cast<std::int64_t>(weights.size()) != view.size())
        throw Error("contingency_counts: weight length mismatch");

    CountTable t;
    t.child = child;
    t.parents = parents;
    t.child_cardinality = d.cardinality(child);
    t.n_rows = view.size();

    double q = 1.0;
    std::uint64_t q_int = 1;
    bool q_fits = true;
    for (VarId p : parents) {
        q *= static_cast<double>(d.cardinality(p));
        if (q_fits && q_int > (1ULL << 60) / static_cast<std::uint64_t>(d.cardinality(p)))
            q_fits = false;
        else if (q_fits)
            q_int *= static_cast<std::uint64_t>(d.cardinality(p));
    }
    if (!q_fits) throw Error("contingency_counts: parent configuration space too large");
    t.q_full = q;

    const int r = t.child_cardinality;
    const std::uint64_t dense_limit = 1u << 16;

    if (q_int * static_cast<std::uint64_t>(r) <= dense_limit) {
        std::vector<double> dense(q_int * r, 0.0);
        for (std::int64_t i = 0; i < view.size(); ++i) {
            const std::int64_t row = view.row(i);
            const std::uint64_t j = config_index(d, row, parents);
            const CellValue k = d.cell(row, child);
            if (is_missing(k)) throw Error("contingency_counts: missing child cell");
            const double w = weights.empty() ? 1.0 : weights[i];
            dense[j * r + k] += w;
        }
        for (std::uint64_t j = 0; j < q_int; ++j) {
            double tot = 0.0;
            for (int k = 0; k < r; ++k) tot += dense[j * r + k];
            if (tot > 0.0) {
                t.configs.push_back(j);
                t.cells.emplace_back(dense.begin() + static_cast<std::ptrdiff_t>(j * r),
                                     dense.begin() + static_cast<std::ptrdiff_t>(j * r + r));
                t.config_totals.push_back(tot);
                t.total += tot;
            }
        }
    } else {
        std::unordered_map<std::uint64_t, std::vector<double>> acc;
        for (std::int64_t i = 0; i < view.size(); ++i) {
            const std::int64_t row = view.row(i);
            const std::uint64_t j = config_index(d, row, parents);
            const CellValue k = d.cell(row, child);
            if (is_missing(k)) throw Error("contingency_counts: missing child cell");
            const double w = weights.empty() ? 1.0 : weights[i];
            auto [it, inserted] = acc.try_emplace(j);
            if (inserted) it->second.assign(r, 0.0);
            it->second[k] += w;
        }
        t.configs.reserve(acc.size());
        for (const auto& [j, _] : acc) t.configs.push_back(j);
        std::sort(t.configs.begin(), t.configs.end());
        for (std::uint64_t j : t.configs) {
            auto& counts = acc[j];
            double tot = 0.0;
            for (double c : counts) tot += c;
            t.cells.push_back(std::move(counts));
            t.config_totals.push_back(tot);
            t.total += tot;
        }
    }
    return t;
}

}  // namespace bnsl
