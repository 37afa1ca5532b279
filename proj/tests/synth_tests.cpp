#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bnsl/synth.hpp"

using namespace bnsl;

namespace {

GroundTruth two_node_truth() {
    Dag g(2);
    g.add_edge(0, 1);
    GroundTruth gt;
    gt.dag = g;
    gt.cardinalities = {2, 2};
    gt.cpts = {
        {{0.7, 0.3}},               // P(V1)
        {{0.8, 0.2}, {0.1, 0.9}},   // P(V2 | V1=0), P(V2 | V1=1)
    };
    return gt;
}

double column_missing_rate(const CategoricalDataset& d, VarId v) {
    return static_cast<double>(d.missing_count(v)) / static_cast<double>(d.n_rows());
}

}  // namespace

TEST_CASE("random_dag: two nodes always get their single edge") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Dag g = random_dag(2, Density::Sparse, seed);
        CHECK(g.edge_count() == 1);
    }
    CHECK_THROWS_AS(random_dag(1, Density::Sparse, 0), ConfigError);
}

TEST_CASE("random_dag: deterministic per seed, acyclic by construction") {
    const Dag a = random_dag(12, Density::Dense, 99);
    const Dag b = random_dag(12, Density::Dense, 99);
    CHECK(a == b);
    CHECK(a != random_dag(12, Density::Dense, 100));
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        CHECK_NOTHROW(topological_order(random_dag(9, Density::Dense, seed)));
}

TEST_CASE("random_dag: expected edge counts hit the density targets") {
    double sparse_sum = 0.0, dense_sum = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        sparse_sum += random_dag(21, Density::Sparse, 5000 + t).edge_count();
        dense_sum += random_dag(21, Density::Dense, 9000 + t).edge_count();
    }
    // 210 ordered pairs at rates 0.1 / 0.2: means 21 and 42, within 5%.
    CHECK(sparse_sum / trials == doctest::Approx(21.0).epsilon(0.05));
    CHECK(dense_sum / trials == doctest::Approx(42.0).epsilon(0.05));
}

TEST_CASE("random_cardinalities: bounded, deterministic, spread") {
    const auto cards = random_cardinalities(300, 2, 4, 17);
    CHECK(cards == random_cardinalities(300, 2, 4, 17));
    bool seen[5] = {false, false, false, false, false};
    for (int c : cards) {
        REQUIRE(c >= 2);
        REQUIRE(c <= 4);
        seen[c] = true;
    }
    CHECK(seen[2]);
    CHECK(seen[3]);
    CHECK(seen[4]);
    CHECK_THROWS_AS(random_cardinalities(3, 1, 4, 0), ConfigError);
}

TEST_CASE("random_cpts: shapes and row normalization") {
    Dag g(3);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    const auto gt = random_cpts(g, {2, 3, 2}, 23);
    REQUIRE(gt.cpts.size() == 3);
    CHECK(gt.cpts[0].size() == 1);
    CHECK(gt.cpts[1].size() == 1);
    CHECK(gt.cpts[2].size() == 6);  // 2 * 3 parent configurations
    for (const auto& table : gt.cpts)
        for (const auto& row : table) {
            double sum = 0.0;
            for (double p : row) {
                CHECK(p >= 0.0);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    CHECK_THROWS_AS(random_cpts(g, {2, 3}, 0), ConfigError);
}

TEST_CASE("random_cpts: flat Dirichlet cell means") {
    Dag g(1);
    double sum3 = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) sum3 += random_cpts(g, {3}, 40000 + t).cpts[0][0][0];
    CHECK(sum3 / trials == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("random_cpts: binary rows are uniform on [0,1]") {
    Dag g(1);
    const int n = 2000;
    std::vector<double> xs(n);
    for (int t = 0; t < n; ++t) xs[t] = random_cpts(g, {2}, 70000 + t).cpts[0][0][0];
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        ks = std::max(ks, std::abs((i + 1.0) / n - xs[i]));
        ks = std::max(ks, std::abs(xs[i] - static_cast<double>(i) / n));
    }
    // Kolmogorov-Smirnov critical value at the 1% level.
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("forward_sample: joint frequencies match the model") {
    const auto gt = two_node_truth();
    const auto d = forward_sample(gt, 100000, 31);
    CHECK(d.n_rows() == 100000);
    CHECK(d.variable(0).name == "V1");
    CHECK(d.variable(0).state_labels == std::vector<std::string>{"s0", "s1"});

    double joint[2][2] = {{0, 0}, {0, 0}};
    for (std::int64_t r = 0; r < d.n_rows(); ++r)
        joint[d.cell(r, 0)][d.cell(r, 1)] += 1.0 / d.n_rows();
    const double truth[2][2] = {{0.7 * 0.8, 0.7 * 0.2}, {0.3 * 0.1, 0.3 * 0.9}};
    double tv = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) tv += std::abs(joint[a][b] - truth[a][b]);
    CHECK(tv / 2.0 < 0.01);
}

TEST_CASE("forward_sample: deterministic tables sample deterministically") {
    // Edge 1 -> 0 also exercises a non-identity topological order.
    Dag g(2);
    g.add_edge(1, 0);
    GroundTruth gt;
    gt.dag = g;
    gt.cardinalities = {2, 2};
    gt.cpts = {
        {{0.0, 1.0}, {1.0, 0.0}},  // V0 = 1 - V1
        {{0.5, 0.5}},
    };
    const auto d = forward_sample(gt, 2000, 77);
    for (std::int64_t r = 0; r < d.n_rows(); ++r) CHECK(d.cell(r, 0) == 1 - d.cell(r, 1));
}

TEST_CASE("forward_sample: same seed, same data") {
    const auto gt = random_cpts(random_dag(6, Density::Sparse, 3), {2, 3, 2, 2, 3, 2}, 4);
    const auto a = forward_sample(gt, 500, 5);
    const auto b = forward_sample(gt, 500, 5);
    const auto c = forward_sample(gt, 500, 6);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("make_missingness_spec: mcar recipe") {
    const auto gt = random_cpts(random_dag(8, Density::Sparse, 11), {2, 2, 2, 2, 2, 2, 2, 2}, 12);
    const auto d = forward_sample(gt, 200, 13);
    const auto spec = make_missingness_spec(d, Mechanism::MCAR, 14);
    CHECK(spec.mechanism == Mechanism::MCAR);
    CHECK(spec.partially_observed.size() == 4);  // floor(0.5 * 8)
    CHECK(spec.indicator_parents.empty());
    for (VarId v : spec.partially_observed) {
        const double p = spec.mcar_p.at(v);
        CHECK(p >= 0.1);
        CHECK(p <= 0.6);
    }
    // Determinism of the draw.
    const auto again = make_missingness_spec(d, Mechanism::MCAR, 14);
    CHECK(again.partially_observed == spec.partially_observed);
    CHECK(again.mcar_p == spec.mcar_p);
}

TEST_CASE("make_missingness_spec: mar parents come from the observed rest") {
    const auto gt = random_cpts(random_dag(9, Density::Sparse, 21), {2, 2, 2, 2, 2, 2, 2, 2, 2}, 22);
    const auto d = forward_sample(gt, 200, 23);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto spec = make_missingness_spec(d, Mechanism::MAR, seed);
        CHECK(spec.partially_observed.size() == 4);  // floor(0.5 * 9)
        for (VarId v : spec.partially_observed) {
            const VarId p = spec.indicator_parents.at(v);
            CHECK_FALSE(varset_contains(spec.partially_observed, p));
            CHECK(p != v);
        }
    }
    CHECK_THROWS_AS(make_missingness_spec(d, Mechanism::MAR, 0, 1.0), ConfigError);
}

TEST_CASE("make_missingness_spec: mnar splits parent types half and half") {
    const auto gt = random_cpts(random_dag(8, Density::Sparse, 31), {2, 2, 2, 2, 2, 2, 2, 2}, 32);
    const auto d = forward_sample(gt, 200, 33);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto spec = make_missingness_spec(d, Mechanism::MNAR, seed);
        const int k = static_cast<int>(spec.partially_observed.size());
        REQUIRE(k == 4);
        int from_observed = 0, from_selected = 0;
        for (VarId v : spec.partially_observed) {
            const VarId p = spec.indicator_parents.at(v);
            CHECK(p != v);
            if (varset_contains(spec.partially_observed, p))
                ++from_selected;
            else
                ++from_observed;
        }
        CHECK(from_observed == k / 2);
        CHECK(from_selected == k - k / 2);
    }

    // A single selected variable cannot serve as its own driver.
    std::vector<VariableMeta> metas{{"A", 2, {"s0", "s1"}}, {"B", 2, {"s0", "s1"}}};
    const CategoricalDataset tiny(metas, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(make_missingness_spec(tiny, Mechanism::MNAR, 0), ConfigError);
}

TEST_CASE("inject_missing: mcar hits the requested rate") {
    const auto gt = two_node_truth();
    const auto d = forward_sample(gt, 50000, 41);
    MissingnessSpec spec;
    spec.mechanism = Mechanism::MCAR;
    spec.partially_observed = VarSet{1};
    spec.mcar_p[1] = 0.3;
    const auto out = inject_missing(d, spec, 43);
    CHECK(column_missing_rate(out, 1) == doctest::Approx(0.3).epsilon(0.07));
    CHECK(out.missing_count(0) == 0);
}

TEST_CASE("inject_missing: conditional rate mixes p_high and p_low") {
    // Parent roughly uniform: expected rate near 0.5*0.6 + 0.5*0.1 = 0.35.
    Dag g(2);
    GroundTruth gt;
    gt.dag = g;
    gt.cardinalities = {2, 2};
    gt.cpts = {{{0.5, 0.5}}, {{0.5, 0.5}}};
    const auto d = forward_sample(gt, 50000, 47);
    MissingnessSpec spec;
    spec.mechanism = Mechanism::MAR;
    spec.partially_observed = VarSet{1};
    spec.indicator_parents[1] = 0;
    const auto out = inject_missing(d, spec, 49);
    CHECK(column_missing_rate(out, 1) == doctest::Approx(0.35).epsilon(0.06));

    // Erasure concentrates on the parent's modal state.
    std::int64_t miss_mode = 0, n_mode = 0, miss_other = 0, n_other = 0;
    std::int64_t freq1 = 0;
    for (std::int64_t r = 0; r < d.n_rows(); ++r) freq1 += d.cell(r, 0);
    const CellValue mode = freq1 * 2 >= d.n_rows() ? 1 : 0;
    for (std::int64_t r = 0; r < d.n_rows(); ++r) {
        const bool at_mode = d.cell(r, 0) == mode;
        (at_mode ? n_mode : n_other) += 1;
        if (is_missing(out.cell(r, 1))) (at_mode ? miss_mode : miss_other) += 1;
    }
    CHECK(static_cast<double>(miss_mode) / n_mode == doctest::Approx(0.6).epsilon(0.05));
    CHECK(static_cast<double>(miss_other) / n_other == doctest::Approx(0.1).epsilon(0.12));
}

TEST_CASE("inject_missing: only erases, never edits") {
    const auto gt = random_cpts(random_dag(6, Density::Dense, 51), {2, 3, 2, 2, 3, 2}, 52);
    const auto d = forward_sample(gt, 3000, 53);
    const auto spec = make_missingness_spec(d, Mechanism::MNAR, 54);
    const auto out = inject_missing(d, spec, 55);
    for (VarId v = 0; v < d.n_vars(); ++v) {
        const bool selected = varset_contains(spec.partially_observed, v);
        for (std::int64_t r = 0; r < d.n_rows(); ++r) {
            if (is_missing(out.cell(r, v)))
                CHECK(selected);
            else
                CHECK(out.cell(r, v) == d.cell(r, v));
        }
        if (selected) CHECK(out.missing_count(v) > 0);
    }
    CHECK(inject_missing(d, spec, 55).fingerprint() == out.fingerprint());
    CHECK(inject_missing(d, spec, 56).fingerprint() != out.fingerprint());
}

TEST_CASE("inject_missing: validation") {
    const auto gt = two_node_truth();
    const auto d = forward_sample(gt, 100, 61);

    MissingnessSpec self;
    self.mechanism = Mechanism::MNAR;
    self.partially_observed = VarSet{1};
    self.indicator_parents[1] = 1;
    CHECK_THROWS_AS(inject_missing(d, self, 0), ConfigError);

    MissingnessSpec bad_rate;
    bad_rate.mechanism = Mechanism::MCAR;
    bad_rate.partially_observed = VarSet{0};
    bad_rate.mcar_p[0] = 1.5;
    CHECK_THROWS_AS(inject_missing(d, bad_rate, 0), ConfigError);

    MissingnessSpec mar_selected_parent;
    mar_selected_parent.mechanism = Mechanism::MAR;
    mar_selected_parent.partially_observed = make_varset({0, 1});
    mar_selected_parent.indicator_parents[0] = 1;
    mar_selected_parent.indicator_parents[1] = 0;
    CHECK_THROWS_AS(inject_missing(d, mar_selected_parent, 0), ConfigError);
}

TEST_CASE("spec_truth_model: mirrors the spec") {
    MissingnessSpec spec;
    spec.mechanism = Mechanism::MNAR;
    spec.partially_observed = make_varset({1, 3});
    spec.indicator_parents[1] = 0;
    spec.indicator_parents[3] = 1;
    const auto m = spec_truth_model(spec);
    CHECK(m.parents_for(1) == VarSet{0});
    CHECK(m.parents_for(3) == VarSet{1});

    MissingnessSpec mcar;
    mcar.mechanism = Mechanism::MCAR;
    mcar.partially_observed = VarSet{2};
    mcar.mcar_p[2] = 0.4;
    const auto m2 = spec_truth_model(mcar);
    CHECK(m2.parents_of_indicator.size() == 1);
    CHECK(m2.parents_for(2).empty());
}
