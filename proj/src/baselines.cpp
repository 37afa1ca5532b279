#include "bnsl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace bnsl {

SearchResult hc_listwise(const CategoricalDataset& d, const SearchConfig& cfg) {
    std::vector<std::int64_t> complete_rows;
    for (std::int64_t r = 0; r < d.n_rows(); ++r) {
        bool complete = true;
        for (VarId v : d.partially_observed()) {
            if (is_missing(d.cell(r, v))) {
                complete = false;
                break;
            }
        }
        if (complete) complete_rows.push_back(r);
    }
    if (complete_rows.empty())
        throw NoCompleteRowsError("hc_listwise: every row has a missing cell");

    SearchConfig local = cfg;
    local.variant = Variant::HC;
    if (d.is_complete()) return hill_climb(d, local);
    const CategoricalDataset sub = d.subset_rows(complete_rows);
    return hill_climb(sub, local);
}

namespace {

// Add-one smoothed CPTs of g fitted on complete data. Sparse over parent
// configurations; unobserved configurations fall back to the uniform row.
struct FittedModel {
    const Dag* g = nullptr;
    std::vector<std::unordered_map<std::uint64_t, std::vector<double>>> tables;

    double prob(VarId v, std::uint64_t cfg, int state, int cardinality) const {
        const auto& table = tables[v];
        auto it = table.find(cfg);
        if (it == table.end()) return 1.0 / cardinality;
        return it->second[state];
    }
};

FittedModel fit_smoothed(const Dag& g, const CategoricalDataset& d) {
    const DatasetView view = complete_view(d);
    FittedModel m;
    m.g = &g;
    m.tables.resize(g.n_nodes());
    for (VarId v = 0; v < g.n_nodes(); ++v) {
        const CountTable t = contingency_counts(view, v, g.parents(v));
        const int r = t.child_cardinality;
        for (std::size_t j = 0; j < t.configs.size(); ++j) {
            std::vector<double> p(r);
            const double denom = t.config_totals[j] + r;
            for (int k = 0; k < r; ++k) p[k] = (t.cells[j][k] + 1.0) / denom;
            m.tables[v].emplace(t.configs[j], std::move(p));
        }
    }
    return m;
}

// Mixed-radix parent configuration of `v` in row `r`, with `override_var`
// read as `override_val` instead of the stored cell.
std::uint64_t parent_config(const CategoricalDataset& d, const Dag& g, VarId v, std::int64_t r,
                            VarId override_var, CellValue override_val) {
    std::uint64_t idx = 0;
    for (VarId p : g.parents(v)) {
        const CellValue cell = p == override_var ? override_val : d.cell(r, p);
        idx = idx * static_cast<std::uint64_t>(d.cardinality(p)) + static_cast<std::uint64_t>(cell);
    }
    return idx;
}

}  // namespace

SearchResult structural_em(const CategoricalDataset& d, const SearchConfig& cfg,
                           int max_em_iters) {
    SearchConfig local = cfg;
    local.variant = Variant::HC;
    if (d.is_complete()) return hill_climb(d, local);
    if (max_em_iters < 1) throw ConfigError("structural_em: max_em_iters must be positive");

    std::vector<std::pair<std::int64_t, VarId>> holes;
    for (VarId v : d.partially_observed())
        for (std::int64_t r = 0; r < d.n_rows(); ++r)
            if (is_missing(d.cell(r, v))) holes.emplace_back(r, v);

    // Column modes over observed cells seed the first completion.
    std::vector<CellValue> fill(holes.size());
    {
        std::vector<CellValue> mode(d.n_vars(), 0);
        for (VarId v : d.partially_observed()) {
            std::vector<std::int64_t> freq(d.cardinality(v), 0);
            for (CellValue c : d.column(v))
                if (!is_missing(c)) ++freq[c];
            mode[v] = static_cast<CellValue>(
                std::max_element(freq.begin(), freq.end()) - freq.begin());
        }
        for (std::size_t k = 0; k < holes.size(); ++k) fill[k] = mode[holes[k].second];
    }

    std::unordered_set<GraphKey> seen;
    SearchResult result{Dag(0), SearchTrace{}};

    for (int em = 0; em < max_em_iters; ++em) {
        const CategoricalDataset completed = d.with_cells(holes, fill);
        result = hill_climb(completed, local);
        const Dag& g = result.first;
        if (!seen.insert(graph_key(g)).second) break;

        const FittedModel model = fit_smoothed(g, completed);

        // Re-impute every hole from the previous completion in one batch.
        std::vector<CellValue> next(holes.size());
        for (std::size_t k = 0; k < holes.size(); ++k) {
            const auto [row, v] = holes[k];
            const int r = d.cardinality(v);
            const VarSet kids = g.children(v);
            double best_lp = -std::numeric_limits<double>::infinity();
            CellValue best = 0;
            for (CellValue x = 0; x < r; ++x) {
                double lp = std::log(
                    model.prob(v, parent_config(completed, g, v, row, v, x), x, r));
                for (VarId c : kids) {
                    const CellValue cv = completed.cell(row, c);
                    lp += std::log(model.prob(c, parent_config(completed, g, c, row, v, x), cv,
                                              d.cardinality(c)));
                }
                if (lp > best_lp) {
                    best_lp = lp;
                    best = x;
                }
            }
            next[k] = best;
        }
        if (next == fill) break;
        fill = std::move(next);
    }
    return result;
}

}  // namespace bnsl
