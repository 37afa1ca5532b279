#include "bnsl/missingness.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <unordered_map>

namespace bnsl {

const VarSet& MissingnessModel::parents_for(VarId v) const {
    static const VarSet kEmpty;
    auto it = parents_of_indicator.find(v);
    return it == parents_of_indicator.end() ? kEmpty : it->second;
}

VarSet MissingnessModel::indicator_parents_of(const VarSet& s) const {
    VarSet out;
    for (VarId v : s) out = varset_union(out, parents_for(v));
    return out;
}

std::uint64_t weights_fingerprint(const VarSet& context, const std::vector<double>& weights) {
    Fnv1a h;
    h.update_span(context.data(), context.size());
    h.update_span(weights.data(), weights.size());
    return h.digest();
}

VarSet necessary_variables(const Dag& g, const EdgeOp& op) {
    const Dag g2 = apply_op(g, op);
    VarSet w;
    for (VarId v : changed_nodes(g, op)) {
        varset_insert(w, v);
        w = varset_union(w, g.parents(v));
        w = varset_union(w, g2.parents(v));
    }
    return w;
}

VarSet sufficient_variables(const VarSet& w, const MissingnessModel& m) {
    VarSet u = w;
    bool grew = true;
    while (grew) {
        grew = false;
        VarSet add;
        for (VarId v : u) add = varset_union(add, m.parents_for(v));
        for (VarId v : add) {
            if (!varset_contains(u, v)) {
                varset_insert(u, v);
                grew = true;
            }
        }
    }
    return u;
}

// -------------------------------------------------------------------------
// G-squared conditional independence test

namespace {

constexpr std::int64_t kMinRowsPerDf = 5;

// x values are supplied per base-dataset row by `xval` (already validated
// observed on `rows`); strata are configurations of s.
template <typename XVal>
CiOutcome g2_core(const CategoricalDataset& d, const std::vector<std::int64_t>& rows, XVal&& xval,
                  int rx, VarId y, const VarSet& s, double alpha) {
    CiOutcome out;
    out.rows = static_cast<std::int64_t>(rows.size());
    const int ry = d.cardinality(y);

    std::unordered_map<std::uint64_t, std::vector<double>> strata;
    for (std::int64_t r : rows) {
        const std::uint64_t cfg = s.empty() ? 0 : config_index(d, r, s);
        auto [it, inserted] = strata.try_emplace(cfg);
        if (inserted) it->second.assign(static_cast<std::size_t>(rx) * ry, 0.0);
        const int a = xval(r);
        const CellValue b = d.cell(r, y);
        it->second[static_cast<std::size_t>(a) * ry + b] += 1.0;
    }

    out.df = static_cast<double>(rx - 1) * (ry - 1) * static_cast<double>(strata.size());
    if (out.df <= 0.0 || out.rows == 0) {
        out.abstained = true;
        out.independent = true;
        return out;
    }
    if (out.rows < kMinRowsPerDf * static_cast<std::int64_t>(out.df)) {
        out.abstained = true;
        out.independent = true;
        return out;
    }

    double g2 = 0.0;
    for (const auto& [cfg, cells] : strata) {
        std::vector<double> row_tot(rx, 0.0), col_tot(ry, 0.0);
        double n = 0.0;
        for (int a = 0; a < rx; ++a) {
            for (int b = 0; b < ry; ++b) {
                const double o = cells[static_cast<std::size_t>(a) * ry + b];
                row_tot[a] += o;
                col_tot[b] += o;
                n += o;
            }
        }
        for (int a = 0; a < rx; ++a) {
            for (int b = 0; b < ry; ++b) {
                const double o = cells[static_cast<std::size_t>(a) * ry + b];
                if (o > 0.0) g2 += 2.0 * o * std::log(o * n / (row_tot[a] * col_tot[b]));
            }
        }
    }
    out.g2 = std::max(g2, 0.0);
    out.p_value = boost::math::gamma_q(out.df / 2.0, out.g2 / 2.0);
    out.independent = out.p_value > alpha;
    return out;
}

}  // namespace

CiOutcome ci_test_detail(const CategoricalDataset& d, VarId x, VarId y, const VarSet& s,
                         double alpha) {
    if (x == y || varset_contains(s, x) || varset_contains(s, y))
        throw Error("ci_test: overlapping arguments");
    VarSet ctx = varset_union(make_varset({x, y}), s);
    const DatasetView view = pairwise_delete(d, ctx);
    return g2_core(
        d, view.rows(), [&](std::int64_t r) { return static_cast<int>(d.cell(r, x)); },
        d.cardinality(x), y, s, alpha);
}

bool ci_test(const CategoricalDataset& d, VarId x, VarId y, const VarSet& s, double alpha) {
    return ci_test_detail(d, x, y, s, alpha).independent;
}

CiOutcome ci_test_detail(const CategoricalDataset& d, const std::vector<std::uint8_t>& x, VarId y,
                         const VarSet& s, double alpha) {
    if (static_cast<std::int64_t>(x.size()) != d.n_rows())
        throw Error("ci_test: indicator length mismatch");
    if (varset_contains(s, y)) throw Error("ci_test: y inside conditioning set");
    VarSet ctx = s;
    varset_insert(ctx, y);
    const DatasetView view = pairwise_delete(d, ctx);
    return g2_core(
        d, view.rows(), [&](std::int64_t r) { return static_cast<int>(x[r]); }, 2, y, s, alpha);
}

bool ci_test(const CategoricalDataset& d, const std::vector<std::uint8_t>& x, VarId y,
             const VarSet& s, double alpha) {
    return ci_test_detail(d, x, y, s, alpha).independent;
}

// -------------------------------------------------------------------------
// Indicator-parent detection

namespace {

// Calls fn on every k-subset of items in lexicographic order until fn
// returns true; returns whether any call did.
template <typename Fn>
bool any_combination(const VarSet& items, int k, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n) return false;
    VarSet subset(k);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = items[idx[i]];
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

VarSet detect_for_variable(const CategoricalDataset& d, VarId vi, double alpha, int max_sepset) {
    const std::vector<std::uint8_t> indicator = missing_indicator(d, vi);
    VarSet candidates;
    for (VarId v = 0; v < d.n_vars(); ++v)
        if (v != vi) candidates.push_back(v);

    for (int level = 0; level <= max_sepset; ++level) {
        if (static_cast<int>(candidates.size()) - 1 < level) break;
        const VarSet snapshot = candidates;
        for (VarId vj : snapshot) {
            if (!varset_contains(candidates, vj)) continue;
            VarSet others = candidates;
            varset_erase(others, vj);
            if (static_cast<int>(others.size()) < level) continue;
            const bool separated = any_combination(others, level, [&](const VarSet& sub) {
                return ci_test(d, indicator, vj, sub, alpha);
            });
            if (separated) varset_erase(candidates, vj);
        }
    }
    return candidates;
}

}  // namespace

MissingnessModel detect_indicator_parents(const CategoricalDataset& d, double alpha,
                                          int max_sepset, ExecutionPolicy policy) {
    const VarSet& vm = d.partially_observed();
    std::vector<VarSet> results(vm.size());

    if (policy == ExecutionPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::size_t i = 0; i < vm.size(); ++i)
            results[i] = detect_for_variable(d, vm[i], alpha, max_sepset);
    } else {
        for (std::size_t i = 0; i < vm.size(); ++i)
            results[i] = detect_for_variable(d, vm[i], alpha, max_sepset);
    }

    MissingnessModel model;
    for (std::size_t i = 0; i < vm.size(); ++i)
        model.parents_of_indicator[vm[i]] = std::move(results[i]);
    return model;
}

// -------------------------------------------------------------------------
// Inverse probability weights

CaseWeights ipw_weights(const DatasetView& view, const VarSet& u, const MissingnessModel& m,
                        const CategoricalDataset& d) {
    if (!varset_subset(u, view.context()))
        throw Error("ipw_weights: u outside the view context");
    for (const auto& [vi, pa] : m.parents_of_indicator) {
        if (varset_contains(u, vi) && !varset_subset(pa, u))
            throw Error("ipw_weights: indicator parents of " + d.variable(vi).name +
                        " not inside u (sufficiency violated)");
    }

    CaseWeights out;
    out.weights.assign(view.size(), 1.0);
    out.context = u;

    for (const auto& [vi, pa] : m.parents_of_indicator) {
        if (!varset_contains(u, vi) || pa.empty()) continue;

        const DatasetView num_view = pairwise_delete(d, pa);
        const DatasetView den_view = pairwise_delete(d, varset_union(make_varset({vi}), pa));
        if (num_view.empty() || den_view.empty())
            throw PositivityError("ipw_weights: no rows to estimate the factor for " +
                                  d.variable(vi).name);

        std::unordered_map<std::uint64_t, double> num_cnt, den_cnt;
        for (std::int64_t r : num_view.rows()) ++num_cnt[config_index(d, r, pa)];
        for (std::int64_t r : den_view.rows()) ++den_cnt[config_index(d, r, pa)];
        const double n_num = static_cast<double>(num_view.size());
        const double n_den = static_cast<double>(den_view.size());

        for (std::int64_t i = 0; i < view.size(); ++i) {
            const std::uint64_t cfg = config_index(d, view.row(i), pa);
            auto den_it = den_cnt.find(cfg);
            if (den_it == den_cnt.end() || den_it->second <= 0.0)
                throw PositivityError("ipw_weights: zero denominator for a configuration of the "
                                      "indicator parents of " +
                                      d.variable(vi).name);
            const double p_num = num_cnt[cfg] / n_num;
            const double p_den = den_it->second / n_den;
            out.weights[i] *= p_num / p_den;
        }
    }

    out.fingerprint = weights_fingerprint(out.context, out.weights);
    return out;
}

}  // namespace bnsl
