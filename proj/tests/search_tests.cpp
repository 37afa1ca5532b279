#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <random>
#include <set>
#include <vector>

#include "bnsl/eval.hpp"
#include "bnsl/search.hpp"
#include "bnsl/synth.hpp"

using namespace bnsl;

namespace {

// V1 -> V2 -> V3 chain with 0.8/0.2 links and P(V1=1)=0.6.
GroundTruth chain_truth() {
    Dag g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    GroundTruth gt;
    gt.dag = g;
    gt.cardinalities = {2, 2, 2};
    gt.cpts = {
        {{0.4, 0.6}},
        {{0.8, 0.2}, {0.2, 0.8}},
        {{0.8, 0.2}, {0.2, 0.8}},
    };
    return gt;
}

CategoricalDataset independent_pair(std::int64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<CellValue>> cols(2, std::vector<CellValue>(n));
    for (std::int64_t r = 0; r < n; ++r) {
        cols[0][r] = static_cast<CellValue>(rng() % 2);
        cols[1][r] = static_cast<CellValue>(rng() % 2);
    }
    std::vector<VariableMeta> metas{{"V1", 2, {"s0", "s1"}}, {"V2", 2, {"s0", "s1"}}};
    return CategoricalDataset(std::move(metas), std::move(cols));
}

CategoricalDataset coupled_pair(std::int64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<CellValue>> cols(2, std::vector<CellValue>(n));
    for (std::int64_t r = 0; r < n; ++r) {
        const int a = static_cast<int>(rng() % 2);
        cols[0][r] = a;
        cols[1][r] = u(rng) < 0.9 ? a : 1 - a;
    }
    std::vector<VariableMeta> metas{{"V1", 2, {"s0", "s1"}}, {"V2", 2, {"s0", "s1"}}};
    return CategoricalDataset(std::move(metas), std::move(cols));
}

// Erases cells of `target` with p_high where `driver` is 1, else p_low;
// driver < 0 erases at p_low unconditionally.
CategoricalDataset erase_by(const CategoricalDataset& d, VarId target, VarId driver,
                            double p_high, double p_low, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<std::int64_t, VarId>> cells;
    std::vector<CellValue> fill;
    for (std::int64_t r = 0; r < d.n_rows(); ++r) {
        const double p = (driver >= 0 && d.cell(r, driver) == 1) ? p_high : p_low;
        if (u(rng) < p) {
            cells.push_back({r, target});
            fill.push_back(kMissingCell);
        }
    }
    return d.with_cells(cells, fill);
}

// Replays the trace from the empty graph; checks key uniqueness and returns
// the final graph.
Dag replay(const CategoricalDataset& d, const SearchTrace& trace) {
    std::vector<std::string> labels;
    for (VarId v = 0; v < d.n_vars(); ++v) labels.push_back(d.variable(v).name);
    Dag g(std::move(labels));
    std::set<GraphKey> seen{graph_key(g)};
    for (const auto& e : trace.entries) {
        g = apply_op(g, e.op);
        CHECK(seen.insert(graph_key(g)).second);
        CHECK(e.delta > 0.0);
    }
    return g;
}

SearchConfig with_variant(Variant v) {
    SearchConfig cfg;
    cfg.variant = v;
    return cfg;
}

}  // namespace

TEST_CASE("variant names") {
    CHECK(to_string(Variant::HC) == "hc");
    CHECK(to_string(Variant::HCPairwise) == "hc-pairwise");
    CHECK(to_string(Variant::HCIPW) == "hc-ipw");
    CHECK(to_string(Variant::HCaIPW) == "hc-aipw");
}

TEST_CASE("hill_climb: independent columns stay disconnected") {
    const auto d = independent_pair(5000, 3);
    const auto [g, trace] = hill_climb(d, SearchConfig{});
    CHECK(g.edge_count() == 0);
    CHECK(trace.entries.empty());
    CHECK(trace.evaluated >= 2);
}

TEST_CASE("hill_climb: strong dependence becomes one reversible edge") {
    const auto d = coupled_pair(10000, 5);
    const auto [g, trace] = hill_climb(d, SearchConfig{});
    REQUIRE(g.edge_count() == 1);
    const Cpdag c = dag_to_cpdag(g);
    CHECK(c.undirected_edges() == std::vector<std::pair<VarId, VarId>>{{0, 1}});
    CHECK(replay(d, trace) == g);
}

TEST_CASE("hill_climb: chain data recovers the chain class") {
    const auto d = forward_sample(chain_truth(), 20000, 7);
    const auto [g, trace] = hill_climb(d, SearchConfig{});
    const Cpdag learned = dag_to_cpdag(g);
    const Cpdag truth = dag_to_cpdag(chain_truth().dag);
    CHECK(cpdag_f1(learned, truth).f1 == 1.0);
}

TEST_CASE("hill_climb: rejects missing data") {
    const auto d = erase_by(independent_pair(100, 9), 0, -1, 0.0, 0.3, 11);
    CHECK_THROWS_AS(hill_climb(d, SearchConfig{}), MissingDataError);
}

TEST_CASE("hill_climb: result is a local maximum") {
    const auto d = forward_sample(chain_truth(), 5000, 13);
    const auto [g, trace] = hill_climb(d, SearchConfig{});
    const auto view = complete_view(d);
    for (const auto& op : enumerate_neighbors(g))
        CHECK(score_delta(g, op, view) <= 1e-9);
}

TEST_CASE("hill_climb: max_iterations truncates the climb") {
    const auto d = forward_sample(chain_truth(), 5000, 13);
    SearchConfig cfg;
    cfg.max_iterations = 1;
    const auto [g, trace] = hill_climb(d, cfg);
    CHECK(g.edge_count() == 1);
    CHECK(trace.entries.size() == 1);
}

TEST_CASE("hill_climb: max_indegree caps learned parent sets") {
    // V3 depends on both V1 and V2; uncapped the collider family appears.
    Dag g(3);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    GroundTruth gt;
    gt.dag = g;
    gt.cardinalities = {2, 2, 2};
    gt.cpts = {
        {{0.5, 0.5}},
        {{0.5, 0.5}},
        {{0.9, 0.1}, {0.6, 0.4}, {0.4, 0.6}, {0.1, 0.9}},
    };
    const auto d = forward_sample(gt, 20000, 17);
    const auto [full, t1] = hill_climb(d, SearchConfig{});
    bool has_two_parents = false;
    for (VarId v = 0; v < 3; ++v) has_two_parents |= full.parents(v).size() == 2;
    CHECK(has_two_parents);

    SearchConfig capped;
    capped.max_indegree = 1;
    const auto [slim, t2] = hill_climb(d, capped);
    for (VarId v = 0; v < 3; ++v) CHECK(slim.parents(v).size() <= 1);
}

TEST_CASE("complete data: every variant walks the same path") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto gt =
            random_cpts(random_dag(5, Density::Sparse, seed), {2, 3, 2, 2, 3}, seed + 10);
        const auto d = forward_sample(gt, 2000, seed + 20);

        const auto [g_hc, t_hc] = hill_climb(d, with_variant(Variant::HC));
        const auto [g_pw, t_pw] = hc_pairwise(d, with_variant(Variant::HCPairwise));
        const auto [g_ipw, t_ipw] = hc_ipw(d, with_variant(Variant::HCIPW));
        const auto [g_aipw, t_aipw] = hc_aipw(d, with_variant(Variant::HCaIPW));

        CHECK(g_pw == g_hc);
        CHECK(g_ipw == g_hc);
        CHECK(g_aipw == g_hc);
        REQUIRE(t_pw.entries.size() == t_hc.entries.size());
        for (std::size_t i = 0; i < t_hc.entries.size(); ++i) {
            CHECK(t_pw.entries[i].op == t_hc.entries[i].op);
            CHECK(t_ipw.entries[i].op == t_hc.entries[i].op);
            CHECK(t_aipw.entries[i].op == t_hc.entries[i].op);
        }
        CHECK(t_hc.model.empty());
        CHECK(t_pw.skipped_empty == 0);
        CHECK(t_pw.skipped_positivity == 0);
    }
}

TEST_CASE("hc_pairwise: view sizes follow the candidate's deletion set") {
    const auto clean = forward_sample(chain_truth(), 20000, 23);
    const auto d = erase_by(clean, 1, -1, 0.0, 0.3, 29);
    const auto [g, trace] = hc_pairwise(d, with_variant(Variant::HCPairwise));
    REQUIRE_FALSE(trace.entries.empty());
    for (const auto& e : trace.entries) {
        CHECK(e.view_size > 0);
        CHECK(e.view_size <= d.n_rows());
        CHECK_FALSE(e.weighted);
        CHECK(e.visited == e.iteration + 1);
    }
    // Some accepted op touches the corrupted variable, so some view shrank.
    bool shrunk = false;
    for (const auto& e : trace.entries) shrunk |= e.view_size < d.n_rows();
    CHECK(shrunk);
    CHECK(replay(d, trace) == g);
}

TEST_CASE("hc_pairwise: mcar corruption keeps the complete-data answer") {
    int agree = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const auto clean = forward_sample(chain_truth(), 50000, 100 + t);
        const auto corrupted = erase_by(clean, 1, -1, 0.0, 0.3, 200 + t);
        const auto [g_clean, t1] = hill_climb(clean, with_variant(Variant::HC));
        const auto [g_corr, t2] = hc_pairwise(corrupted, with_variant(Variant::HCPairwise));
        if (dag_to_cpdag(g_clean) == dag_to_cpdag(g_corr)) ++agree;
    }
    CHECK(agree >= 18);
}

TEST_CASE("search: never revisits and always terminates on fuzzed data") {
    // Small noisy datasets with heavy missingness; run every variant.
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto gt =
            random_cpts(random_dag(4, Density::Dense, seed), {2, 2, 3, 2}, seed + 40);
        auto d = forward_sample(gt, 60, seed + 80);
        d = erase_by(d, 0, -1, 0.0, 0.35, seed + 120);
        d = erase_by(d, 2, 1, 0.5, 0.15, seed + 160);

        SearchConfig cfg;
        cfg.max_iterations = 600;  // above the 543 distinct four-node DAGs
        for (Variant v : {Variant::HCPairwise, Variant::HCIPW, Variant::HCaIPW}) {
            cfg.variant = v;
            SearchResult res = v == Variant::HCPairwise ? hc_pairwise(d, cfg)
                               : v == Variant::HCIPW    ? hc_ipw(d, cfg)
                                                        : hc_aipw(d, cfg);
            // The visited record admits each graph once, so acceptances are
            // bounded by the number of DAGs; the climb must stop on its own.
            CHECK(static_cast<int>(res.second.entries.size()) < 543);
            CHECK(replay(d, res.second) == res.first);
        }
    }
}

TEST_CASE("hc_ipw: unit-weight model reduces to hc_pairwise") {
    const auto clean = forward_sample(chain_truth(), 30000, 31);
    const auto d = erase_by(clean, 1, -1, 0.0, 0.3, 37);
    MissingnessModel mcar_model;
    mcar_model.parents_of_indicator[1] = {};

    const auto [g_pw, t_pw] = hc_pairwise(d, with_variant(Variant::HCPairwise));
    const auto [g_ipw, t_ipw] = hc_ipw(d, with_variant(Variant::HCIPW), &mcar_model);
    CHECK(g_ipw == g_pw);
    REQUIRE(t_ipw.entries.size() == t_pw.entries.size());
    for (std::size_t i = 0; i < t_pw.entries.size(); ++i) {
        CHECK(t_ipw.entries[i].op == t_pw.entries[i].op);
        CHECK(t_ipw.entries[i].delta == t_pw.entries[i].delta);
        CHECK(t_ipw.entries[i].view_size == t_pw.entries[i].view_size);
    }
}

TEST_CASE("hc_ipw: weighted evaluations appear under a real model") {
    const auto clean = forward_sample(chain_truth(), 30000, 41);
    const auto d = erase_by(clean, 1, 0, 0.6, 0.1, 43);
    MissingnessModel m;
    m.parents_of_indicator[1] = VarSet{0};
    const auto [g, trace] = hc_ipw(d, with_variant(Variant::HCIPW), &m);
    bool any_weighted = false;
    for (const auto& e : trace.entries) any_weighted |= e.weighted;
    CHECK(any_weighted);
    CHECK(trace.model.parents_for(1) == VarSet{0});
    CHECK(replay(d, trace) == g);
}

TEST_CASE("hc_aipw: equals hc_ipw when indicator parents are observed") {
    const auto clean = forward_sample(chain_truth(), 30000, 47);
    const auto d = erase_by(clean, 1, 0, 0.6, 0.1, 53);  // driver V1 complete
    MissingnessModel m;
    m.parents_of_indicator[1] = VarSet{0};

    const auto [g_ipw, t_ipw] = hc_ipw(d, with_variant(Variant::HCIPW), &m);
    const auto [g_aipw, t_aipw] = hc_aipw(d, with_variant(Variant::HCaIPW), &m);
    CHECK(g_aipw == g_ipw);
    REQUIRE(t_aipw.entries.size() == t_ipw.entries.size());
    for (std::size_t i = 0; i < t_ipw.entries.size(); ++i) {
        CHECK(t_aipw.entries[i].op == t_ipw.entries[i].op);
        CHECK(t_aipw.entries[i].delta == t_ipw.entries[i].delta);
        CHECK(t_aipw.entries[i].weighted == t_ipw.entries[i].weighted);
    }
}

TEST_CASE("hc_aipw: falls back to hc_pairwise when every driver is corrupted") {
    auto d = forward_sample(chain_truth(), 30000, 59);
    d = erase_by(d, 1, 0, 0.6, 0.1, 61);
    d = erase_by(d, 0, 1, 0.6, 0.1, 67);  // both drivers now partially observed
    MissingnessModel m;
    m.parents_of_indicator[1] = VarSet{0};
    m.parents_of_indicator[0] = VarSet{1};

    const auto [g_pw, t_pw] = hc_pairwise(d, with_variant(Variant::HCPairwise));
    const auto [g_aipw, t_aipw] = hc_aipw(d, with_variant(Variant::HCaIPW), &m);
    CHECK(g_aipw == g_pw);
    REQUIRE(t_aipw.entries.size() == t_pw.entries.size());
    for (std::size_t i = 0; i < t_pw.entries.size(); ++i) {
        CHECK(t_aipw.entries[i].op == t_pw.entries[i].op);
        CHECK(t_aipw.entries[i].delta == t_pw.entries[i].delta);
        CHECK_FALSE(t_aipw.entries[i].weighted);
    }
}

TEST_CASE("hc_aipw: detection runs when no model is supplied") {
    const auto clean = forward_sample(chain_truth(), 50000, 71);
    const auto d = erase_by(clean, 1, 0, 0.6, 0.1, 73);
    const auto [g, trace] = hc_aipw(d, with_variant(Variant::HCaIPW));
    CHECK(trace.model.parents_for(1) == VarSet{0});
}

TEST_CASE("search: serial and parallel produce identical runs") {
#ifdef _OPENMP
    omp_set_num_threads(2);
#endif
    const auto gt = random_cpts(random_dag(6, Density::Sparse, 81), {2, 2, 3, 2, 2, 3}, 82);
    auto d = forward_sample(gt, 1500, 83);
    d = erase_by(d, 2, 0, 0.5, 0.1, 84);
    d = erase_by(d, 4, -1, 0.0, 0.25, 85);
    MissingnessModel m;
    m.parents_of_indicator[2] = VarSet{0};
    m.parents_of_indicator[4] = {};

    for (Variant v : {Variant::HCPairwise, Variant::HCaIPW}) {
        SearchConfig serial = with_variant(v);
        SearchConfig parallel = with_variant(v);
        parallel.policy = ExecutionPolicy::Parallel;
        SearchResult a = v == Variant::HCPairwise ? hc_pairwise(d, serial)
                                                  : hc_aipw(d, serial, &m);
        SearchResult b = v == Variant::HCPairwise ? hc_pairwise(d, parallel)
                                                  : hc_aipw(d, parallel, &m);
        CHECK(a.first == b.first);
        REQUIRE(a.second.entries.size() == b.second.entries.size());
        for (std::size_t i = 0; i < a.second.entries.size(); ++i) {
            CHECK(a.second.entries[i].op == b.second.entries[i].op);
            CHECK(a.second.entries[i].delta == b.second.entries[i].delta);
        }
        CHECK(a.second.evaluated == b.second.evaluated);
        CHECK(a.second.skipped_record == b.second.skipped_record);
        CHECK(a.second.skipped_empty == b.second.skipped_empty);
    }
}
