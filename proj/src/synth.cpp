#include "bnsl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bnsl {

std::string to_string(Density d) { return d == Density::Sparse ? "sparse" : "dense"; }

std::string to_string(Mechanism m) {
    switch (m) {
        case Mechanism::MCAR: return "mcar";
        case Mechanism::MAR: return "mar";
        case Mechanism::MNAR: return "mnar";
    }
    return "?";
}

Mechanism mechanism_from_string(const std::string& s) {
    if (s == "mcar") return Mechanism::MCAR;
    if (s == "mar") return Mechanism::MAR;
    if (s == "mnar") return Mechanism::MNAR;
    throw ConfigError("unknown missingness mechanism '" + s + "'");
}

namespace {

// Engine-independent helpers so outputs stay stable across library versions.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi].
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    const int span = hi - lo + 1;
    return lo + std::min(span - 1, static_cast<int>(uniform01(rng) * span));
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[uniform_int(rng, 0, static_cast<int>(i) - 1)]);
}

int sample_discrete(const std::vector<double>& p, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += p[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(p.size()) - 1;
}

}  // namespace

Dag random_dag(int n, Density density, std::uint64_t seed) {
    if (n < 2) throw ConfigError("random_dag: need at least 2 nodes");
    std::mt19937_64 rng(seed);

    std::vector<VarId> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    shuffle_vec(order, rng);

    const double factor = density == Density::Sparse ? 2.0 : 4.0;
    const double p = std::min(1.0, factor / (n - 1));

    Dag g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) g.add_edge(order[i], order[j]);
    return g;
}

std::vector<int> random_cardinalities(int n, int lo, int hi, std::uint64_t seed) {
    if (lo < 2 || hi < lo) throw ConfigError("random_cardinalities: need 2 <= lo <= hi");
    std::mt19937_64 rng(seed);
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = uniform_int(rng, lo, hi);
    return out;
}

GroundTruth random_cpts(const Dag& g, const std::vector<int>& cardinalities, std::uint64_t seed) {
    if (static_cast<int>(cardinalities.size()) != g.n_nodes())
        throw ConfigError("random_cpts: cardinality count mismatch");
    for (int r : cardinalities)
        if (r < 2) throw ConfigError("random_cpts: cardinality < 2");

    std::mt19937_64 rng(seed);
    GroundTruth gt;
    gt.dag = g;
    gt.cardinalities = cardinalities;
    gt.seed = seed;
    gt.cpts.resize(g.n_nodes());

    for (VarId v = 0; v < g.n_nodes(); ++v) {
        std::uint64_t q = 1;
        for (VarId p : g.parents(v)) q *= static_cast<std::uint64_t>(cardinalities[p]);
        const int r = cardinalities[v];
        gt.cpts[v].resize(q);
        for (std::uint64_t j = 0; j < q; ++j) {
            // Flat Dirichlet via normalized unit exponentials.
            std::vector<double> row(r);
            double sum = 0.0;
            for (int k = 0; k < r; ++k) {
                row[k] = -std::log(1.0 - uniform01(rng));
                sum += row[k];
            }
            if (sum <= 0.0) {
                for (int k = 0; k < r; ++k) row[k] = 1.0 / r;
            } else {
                for (int k = 0; k < r; ++k) row[k] /= sum;
            }
            gt.cpts[v][j] = std::move(row);
        }
    }
    return gt;
}

CategoricalDataset forward_sample(const GroundTruth& gt, std::int64_t n_rows, std::uint64_t seed) {
    const Dag& g = gt.dag;
    const int n = g.n_nodes();
    std::mt19937_64 rng(seed);
    const std::vector<VarId> order = topological_order(g);

    std::vector<std::vector<CellValue>> columns(n, std::vector<CellValue>(n_rows));
    std::vector<CellValue> row_vals(n);
    for (std::int64_t r = 0; r < n_rows; ++r) {
        for (VarId v : order) {
            std::uint64_t cfg = 0;
            for (VarId p : g.parents(v))
                cfg = cfg * static_cast<std::uint64_t>(gt.cardinalities[p]) +
                      static_cast<std::uint64_t>(row_vals[p]);
            row_vals[v] = static_cast<CellValue>(sample_discrete(gt.cpts[v][cfg], rng));
        }
        for (VarId v = 0; v < n; ++v) columns[v][r] = row_vals[v];
    }

    std::vector<VariableMeta> metas(n);
    for (VarId v = 0; v < n; ++v) {
        metas[v].name = g.label(v);
        metas[v].cardinality = gt.cardinalities[v];
        for (int k = 0; k < gt.cardinalities[v]; ++k)
            metas[v].state_labels.push_back("s" + std::to_string(k));
    }
    return CategoricalDataset(std::move(metas), std::move(columns));
}

MissingnessSpec make_missingness_spec(const CategoricalDataset& d, Mechanism mechanism,
                                      std::uint64_t seed, double fraction) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("make_missingness_spec: fraction outside (0, 1]");
    const int n = d.n_vars();
    const int k = static_cast<int>(std::floor(fraction * n));
    std::mt19937_64 rng(seed);

    std::vector<VarId> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    shuffle_vec(pool, rng);
    std::vector<VarId> selected(pool.begin(), pool.begin() + k);

    MissingnessSpec spec;
    spec.mechanism = mechanism;
    spec.partially_observed.assign(selected.begin(), selected.end());
    std::sort(spec.partially_observed.begin(), spec.partially_observed.end());

    if (mechanism == Mechanism::MCAR) {
        for (VarId v : spec.partially_observed) spec.mcar_p[v] = 0.1 + 0.5 * uniform01(rng);
        return spec;
    }

    // Fully observed candidates: unselected variables complete in d.
    std::vector<VarId> observed_pool;
    for (VarId v = 0; v < n; ++v)
        if (!varset_contains(spec.partially_observed, v) && d.missing_count(v) == 0)
            observed_pool.push_back(v);

    if (mechanism == Mechanism::MAR) {
        if (k == 0 || observed_pool.empty())
            throw ConfigError("make_missingness_spec: mar needs a fully observed parent");
        for (VarId v : spec.partially_observed)
            spec.indicator_parents[v] =
                observed_pool[uniform_int(rng, 0, static_cast<int>(observed_pool.size()) - 1)];
        return spec;
    }

    // MNAR: floor(k/2) selected variables get fully observed parents, the
    // rest get another selected variable.
    const int n_observed_parent = k / 2;
    if (k < 2)
        throw ConfigError("make_missingness_spec: mnar needs at least 2 selected variables");
    if (n_observed_parent > 0 && observed_pool.empty())
        throw ConfigError("make_missingness_spec: mnar needs a fully observed parent");
    std::vector<VarId> shuffled = selected;
    shuffle_vec(shuffled, rng);
    for (int i = 0; i < k; ++i) {
        const VarId v = shuffled[i];
        if (i < n_observed_parent) {
            spec.indicator_parents[v] =
                observed_pool[uniform_int(rng, 0, static_cast<int>(observed_pool.size()) - 1)];
        } else {
            VarId parent = v;
            while (parent == v)
                parent = selected[uniform_int(rng, 0, k - 1)];
            spec.indicator_parents[v] = parent;
        }
    }
    return spec;
}

CategoricalDataset inject_missing(const CategoricalDataset& d, const MissingnessSpec& spec,
                                  std::uint64_t seed) {
    for (VarId v : spec.partially_observed)
        if (v < 0 || v >= d.n_vars())
            throw ConfigError("inject_missing: selected variable out of range");

    const bool conditional = spec.mechanism != Mechanism::MCAR;
    std::vector<CellValue> parent_mode(d.n_vars(), -1);
    if (conditional) {
        for (VarId v : spec.partially_observed) {
            auto it = spec.indicator_parents.find(v);
            if (it == spec.indicator_parents.end())
                throw ConfigError("inject_missing: no indicator parent for " + d.variable(v).name);
            const VarId p = it->second;
            if (p < 0 || p >= d.n_vars() || p == v)
                throw ConfigError("inject_missing: bad indicator parent for " +
                                  d.variable(v).name);
            if (d.missing_count(p) > 0)
                throw ConfigError("inject_missing: indicator parent " + d.variable(p).name +
                                  " has missing cells in the input");
            if (spec.mechanism == Mechanism::MAR &&
                varset_contains(spec.partially_observed, p))
                throw ConfigError("inject_missing: mar parent " + d.variable(p).name +
                                  " is itself selected for corruption");
            if (parent_mode[p] < 0) {
                std::vector<std::int64_t> freq(d.cardinality(p), 0);
                for (CellValue c : d.column(p))
                    if (!is_missing(c)) ++freq[c];
                parent_mode[p] = static_cast<CellValue>(
                    std::max_element(freq.begin(), freq.end()) - freq.begin());
            }
        }
    } else {
        for (VarId v : spec.partially_observed) {
            auto it = spec.mcar_p.find(v);
            if (it == spec.mcar_p.end())
                throw ConfigError("inject_missing: no mcar rate for " + d.variable(v).name);
            if (it->second < 0.0 || it->second > 1.0)
                throw ConfigError("inject_missing: mcar rate outside [0, 1]");
        }
    }

    std::vector<std::vector<CellValue>> columns;
    columns.reserve(d.n_vars());
    for (VarId v = 0; v < d.n_vars(); ++v) columns.push_back(d.column(v));

    // One independent substream per corrupted column.
    for (VarId v : spec.partially_observed) {
        std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(v)}));
        if (!conditional) {
            const double p = spec.mcar_p.at(v);
            for (std::int64_t r = 0; r < d.n_rows(); ++r)
                if (uniform01(rng) < p) columns[v][r] = kMissingCell;
        } else {
            const VarId parent = spec.indicator_parents.at(v);
            const CellValue mode = parent_mode[parent];
            for (std::int64_t r = 0; r < d.n_rows(); ++r) {
                const double p = d.cell(r, parent) == mode ? spec.p_high : spec.p_low;
                if (uniform01(rng) < p) columns[v][r] = kMissingCell;
            }
        }
    }
    return CategoricalDataset(d.variables(), std::move(columns));
}

MissingnessModel spec_truth_model(const MissingnessSpec& spec) {
    MissingnessModel m;
    for (VarId v : spec.partially_observed) {
        if (spec.mechanism == Mechanism::MCAR) {
            m.parents_of_indicator[v] = {};
        } else {
            m.parents_of_indicator[v] = make_varset({spec.indicator_parents.at(v)});
        }
    }
    return m;
}

}  // namespace bnsl
