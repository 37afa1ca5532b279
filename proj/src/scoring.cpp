#include "bnsl/scoring.hpp"

#include <cmath>

namespace bnsl {

std::uint64_t family_context_key(const DatasetView& view, VarId child, const VarSet& parents,
                                 const CaseWeights* weights) {
    Fnv1a h;
    h.update_value<std::uint64_t>(view.base().fingerprint());
    h.update_value<VarId>(child);
    h.update_span(parents.data(), parents.size());
    h.update_span(view.context().data(), view.context().size());
    h.update_value<std::uint64_t>(weights ? weights->fingerprint : 0);
    return h.digest();
}

std::optional<FamilyScore> ScoreCache::lookup(std::uint64_t key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::insert(std::uint64_t key, const FamilyScore& score) {
    std::lock_guard<std::mutex> lock(mu_);
    map_[key] = score;
}

std::size_t ScoreCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

FamilyScore bic_local(const DatasetView& view, VarId child, const VarSet& parents,
                      const CaseWeights* weights) {
    if (view.empty()) throw EmptyViewError("bic_local: empty view");
    std::span<const double> w;
    if (weights) {
        if (static_cast<std::int64_t>(weights->weights.size()) != view.size())
            throw Error("bic_local: weights do not match view");
        w = weights->weights;
    }
    const CountTable t = contingency_counts(view, child, parents, w);

    double loglik = 0.0;
    for (std::size_t j = 0; j < t.configs.size(); ++j) {
        const double n_ij = t.config_totals[j];
        for (double n_ijk : t.cells[j]) {
            if (n_ijk > 0.0) loglik += n_ijk * std::log(n_ijk / n_ij);
        }
    }
    const double n = static_cast<double>(view.size());
    const double penalty =
        0.5 * std::log(n) * static_cast<double>(t.child_cardinality - 1) * t.q_full;

    FamilyScore out;
    out.value = loglik - penalty;
    out.n_eff = view.size();
    out.context_key = family_context_key(view, child, parents, weights);
    return out;
}

double total_score(const Dag& g, const DatasetView& view, const CaseWeights* weights) {
    double sum = 0.0;
    for (VarId v = 0; v < g.n_nodes(); ++v) sum += bic_local(view, v, g.parents(v), weights).value;
    return sum;
}

namespace {

double cached_family(const DatasetView& view, VarId child, const VarSet& parents,
                     const CaseWeights* weights, ScoreCache* cache) {
    if (!cache) return bic_local(view, child, parents, weights).value;
    const std::uint64_t key = family_context_key(view, child, parents, weights);
    if (auto hit = cache->lookup(key)) return hit->value;
    const FamilyScore s = bic_local(view, child, parents, weights);
    cache->insert(key, s);
    return s.value;
}

}  // namespace

double score_delta(const Dag& g, const EdgeOp& op, const DatasetView& view,
                   const CaseWeights* weights, ScoreCache* cache) {
    const Dag g2 = apply_op(g, op);
    const VarSet changed = changed_nodes(g, op);
    double delta = 0.0;
    for (VarId v : changed) {
        delta += cached_family(view, v, g2.parents(v), weights, cache);
        delta -= cached_family(view, v, g.parents(v), weights, cache);
    }
    return delta;
}

}  // namespace bnsl
