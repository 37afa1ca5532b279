#include "bnsl/search.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace bnsl {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::HC: return "hc";
        case Variant::HCPairwise: return "hc-pairwise";
        case Variant::HCIPW: return "hc-ipw";
        case Variant::HCaIPW: return "hc-aipw";
    }
    return "?";
}

namespace {

std::string varset_key(const VarSet& s) {
    std::ostringstream os;
    for (VarId v : s) os << v << ",";
    return os.str();
}

enum class Skip { None, Record, Empty, Positivity };

struct Candidate {
    double delta = 0.0;
    std::int64_t view_size = 0;
    bool weighted = false;
    Skip skip = Skip::None;
};

class Engine {
public:
    Engine(const CategoricalDataset& d, const SearchConfig& cfg, MissingnessModel model)
        : d_(d), cfg_(cfg), model_(std::move(model)) {}

    SearchResult run() {
        std::vector<std::string> labels;
        labels.reserve(d_.n_vars());
        for (VarId v = 0; v < d_.n_vars(); ++v) labels.push_back(d_.variable(v).name);
        Dag g(std::move(labels));

        const bool use_record = cfg_.variant != Variant::HC;
        record_.insert(graph_key(g));

        if (cfg_.variant == Variant::HC) {
            if (!d_.is_complete())
                throw MissingDataError("hill_climb: data contain missing values");
            full_view_ = std::make_shared<DatasetView>(complete_view(d_));
        }

        SearchTrace trace;
        trace.model = model_;
        trace.seed = cfg_.seed;

        const int n = d_.n_vars();
        const int max_iter = cfg_.max_iterations > 0 ? cfg_.max_iterations : 10 * n * n;

        for (int iter = 1; iter <= max_iter; ++iter) {
            const std::vector<EdgeOp> ops = enumerate_neighbors(g, cfg_.max_indegree);
            std::vector<Candidate> cand(ops.size());

            if (cfg_.policy == ExecutionPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
                for (std::size_t i = 0; i < ops.size(); ++i)
                    cand[i] = evaluate(g, ops[i], use_record);
            } else {
                for (std::size_t i = 0; i < ops.size(); ++i)
                    cand[i] = evaluate(g, ops[i], use_record);
            }

            // Deterministic selection: strict improvement, earliest index wins.
            std::ptrdiff_t best = -1;
            double best_delta = 0.0;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                switch (cand[i].skip) {
                    case Skip::Record: ++trace.skipped_record; continue;
                    case Skip::Empty: ++trace.skipped_empty; continue;
                    case Skip::Positivity: ++trace.skipped_positivity; continue;
                    case Skip::None: break;
                }
                ++trace.evaluated;
                if (cand[i].delta > best_delta) {
                    best_delta = cand[i].delta;
                    best = static_cast<std::ptrdiff_t>(i);
                }
            }
            if (best < 0) break;

            g = apply_op(g, ops[best]);
            if (use_record && !record_.insert(graph_key(g)).second)
                throw Error("search: accepted a graph already in the visited record");

            TraceEntry e;
            e.iteration = iter;
            e.op = ops[best];
            e.delta = best_delta;
            e.view_size = cand[best].view_size;
            e.weighted = cand[best].weighted;
            e.visited = static_cast<std::int64_t>(record_.size());
            trace.entries.push_back(e);
        }
        return {std::move(g), std::move(trace)};
    }

private:
    Candidate evaluate(const Dag& g, const EdgeOp& op, bool use_record) {
        Candidate c;
        if (use_record) {
            const Dag g_nei = apply_op(g, op);
            if (record_.count(graph_key(g_nei))) {
                c.skip = Skip::Record;
                return c;
            }
        }

        std::shared_ptr<const DatasetView> view;
        std::shared_ptr<const CaseWeights> weights;

        switch (cfg_.variant) {
            case Variant::HC:
                view = full_view_;
                break;
            case Variant::HCPairwise:
                view = get_view(necessary_variables(g, op));
                break;
            case Variant::HCIPW: {
                const VarSet u = sufficient_variables(necessary_variables(g, op), model_);
                view = get_view(u);
                if (!view->empty()) {
                    try {
                        weights = get_weights(u, view);
                        c.weighted = true;
                    } catch (const PositivityError&) {
                        c.skip = Skip::Positivity;
                        return c;
                    }
                }
                break;
            }
            case Variant::HCaIPW: {
                const VarSet w = necessary_variables(g, op);
                const VarSet pa_rw = model_.indicator_parents_of(w);
                bool pa_partially_observed = false;
                for (VarId p : pa_rw)
                    pa_partially_observed =
                        pa_partially_observed || d_.missing_count(p) > 0;
                if (pa_partially_observed) {
                    view = get_view(w);
                } else {
                    const VarSet u = sufficient_variables(w, model_);
                    view = get_view(u);
                    if (!view->empty()) {
                        try {
                            weights = get_weights(u, view);
                            c.weighted = true;
                        } catch (const PositivityError&) {
                            c.skip = Skip::Positivity;
                            return c;
                        }
                    }
                }
                break;
            }
        }

        if (view->empty()) {
            c.skip = Skip::Empty;
            return c;
        }
        c.view_size = view->size();
        c.delta = score_delta(g, op, *view, weights.get(), &scores_);
        return c;
    }

    std::shared_ptr<const DatasetView> get_view(const VarSet& ctx) {
        const std::string key = varset_key(ctx);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = views_.find(key);
            if (it != views_.end()) return it->second;
        }
        auto view = std::make_shared<const DatasetView>(pairwise_delete(d_, ctx));
        std::lock_guard<std::mutex> lock(mu_);
        return views_.try_emplace(key, std::move(view)).first->second;
    }

    std::shared_ptr<const CaseWeights> get_weights(const VarSet& u,
                                                   const std::shared_ptr<const DatasetView>& view) {
        const std::string key = varset_key(u);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = weights_.find(key);
            if (it != weights_.end()) return it->second;
        }
        auto w = std::make_shared<const CaseWeights>(ipw_weights(*view, u, model_, d_));
        std::lock_guard<std::mutex> lock(mu_);
        return weights_.try_emplace(key, std::move(w)).first->second;
    }

    const CategoricalDataset& d_;
    const SearchConfig& cfg_;
    MissingnessModel model_;
    ScoreCache scores_;
    std::shared_ptr<const DatasetView> full_view_;
    std::unordered_set<GraphKey> record_;
    std::mutex mu_;
    std::unordered_map<std::string, std::shared_ptr<const DatasetView>> views_;
    std::unordered_map<std::string, std::shared_ptr<const CaseWeights>> weights_;
};

SearchResult run_variant(const CategoricalDataset& d, const SearchConfig& cfg, Variant variant,
                         const MissingnessModel* supplied_model) {
    SearchConfig local = cfg;
    local.variant = variant;
    MissingnessModel model;
    if (variant == Variant::HCIPW || variant == Variant::HCaIPW) {
        model = supplied_model
                    ? *supplied_model
                    : detect_indicator_parents(d, local.alpha, local.max_sepset, local.policy);
    }
    Engine engine(d, local, std::move(model));
    return engine.run();
}

}  // namespace

SearchResult hill_climb(const CategoricalDataset& d, const SearchConfig& cfg) {
    return run_variant(d, cfg, Variant::HC, nullptr);
}

SearchResult hc_pairwise(const CategoricalDataset& d, const SearchConfig& cfg) {
    return run_variant(d, cfg, Variant::HCPairwise, nullptr);
}

SearchResult hc_ipw(const CategoricalDataset& d, const SearchConfig& cfg,
                    const MissingnessModel* supplied_model) {
    return run_variant(d, cfg, Variant::HCIPW, supplied_model);
}

SearchResult hc_aipw(const CategoricalDataset& d, const SearchConfig& cfg,
                     const MissingnessModel* supplied_model) {
    return run_variant(d, cfg, Variant::HCaIPW, supplied_model);
}

}  // namespace bnsl
