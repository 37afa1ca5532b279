#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "bnsl/io.hpp"
#include "bnsl/synth.hpp"

using namespace bnsl;

TEST_CASE("dag edge list: round trip with isolated nodes") {
    Dag g(std::vector<std::string>{"alpha", "beta", "gamma", "delta"});
    g.add_edge(0, 1);
    g.add_edge(2, 1);
    const std::string text = dag_to_edge_list(g);
    std::istringstream in(text);
    const Dag back = parse_dag_edge_list(in);
    CHECK(back == g);
    CHECK(back.label(3) == "delta");  // isolated node survives
}

TEST_CASE("dag edge list: comments and auto-declared nodes") {
    std::istringstream in("# a comment\nA\nB\nA -> B\nC -> A\n");
    const Dag g = parse_dag_edge_list(in);
    CHECK(g.n_nodes() == 3);
    CHECK(g.has_edge(g.index_of("A"), g.index_of("B")));
    CHECK(g.has_edge(g.index_of("C"), g.index_of("A")));
}

TEST_CASE("dag edge list: cycles rejected") {
    std::istringstream in("A -> B\nB -> A\n");
    CHECK_THROWS_AS(parse_dag_edge_list(in), CycleError);
}

TEST_CASE("cpdag edge list: directed and undirected markers") {
    Cpdag c(std::vector<std::string>{"A", "B", "C"});
    c.add_directed(0, 1);
    c.add_undirected(1, 2);
    const std::string text = cpdag_to_edge_list(c);
    CHECK(text.find("A -> B") != std::string::npos);
    CHECK(text.find("B -- C") != std::string::npos);
}

TEST_CASE("dot renders mention every node and edge") {
    Dag g(std::vector<std::string>{"A", "B"});
    g.add_edge(0, 1);
    const std::string dot = dag_to_dot(g);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"A\" -> \"B\"") != std::string::npos);

    Cpdag c(std::vector<std::string>{"A", "B"});
    c.add_undirected(0, 1);
    const std::string cdot = cpdag_to_dot(c);
    CHECK(cdot.find("dir=none") != std::string::npos);
}

TEST_CASE("csv: write then parse returns the same data") {
    const auto gt = random_cpts(random_dag(4, Density::Sparse, 3), {2, 3, 2, 2}, 4);
    auto d = forward_sample(gt, 200, 5);
    d = d.with_cells({{0, 1}, {5, 0}, {9, 3}},
                     {kMissingCell, kMissingCell, kMissingCell});
    std::ostringstream out;
    write_csv(out, d);
    std::istringstream in(out.str());
    const auto back = parse_csv(in);
    REQUIRE(back.n_rows() == d.n_rows());
    REQUIRE(back.n_vars() == d.n_vars());
    for (VarId v = 0; v < d.n_vars(); ++v) {
        CHECK(back.variable(v).name == d.variable(v).name);
        CHECK(back.cardinality(v) == d.cardinality(v));
        for (std::int64_t r = 0; r < d.n_rows(); ++r) CHECK(back.cell(r, v) == d.cell(r, v));
    }
}

TEST_CASE("ground truth: full round trip") {
    const auto gt = random_cpts(random_dag(5, Density::Dense, 7), {2, 3, 2, 4, 2}, 8);
    std::ostringstream out;
    write_ground_truth(out, gt);
    std::istringstream in(out.str());
    const auto back = parse_ground_truth(in);
    CHECK(back.dag == gt.dag);
    CHECK(back.cardinalities == gt.cardinalities);
    CHECK(back.seed == gt.seed);
    REQUIRE(back.cpts.size() == gt.cpts.size());
    for (std::size_t v = 0; v < gt.cpts.size(); ++v) {
        REQUIRE(back.cpts[v].size() == gt.cpts[v].size());
        for (std::size_t j = 0; j < gt.cpts[v].size(); ++j)
            for (std::size_t k = 0; k < gt.cpts[v][j].size(); ++k)
                CHECK(back.cpts[v][j][k] == gt.cpts[v][j][k]);
    }
}

TEST_CASE("ground truth: malformed input rejected") {
    std::istringstream bad_magic("not-a-header\n");
    CHECK_THROWS_AS(parse_ground_truth(bad_magic), ParseError);

    // CPT row that does not sum to one.
    std::istringstream bad_row(
        "bnsl-ground-truth 1\nseed 0\nnode A 2\ncpt A 1\n0.9 0.3\n");
    CHECK_THROWS_AS(parse_ground_truth(bad_row), ParseError);
}

TEST_CASE("missingness spec: round trips through names") {
    const auto gt = random_cpts(random_dag(6, Density::Sparse, 9), {2, 2, 2, 2, 2, 2}, 10);
    const auto d = forward_sample(gt, 100, 11);
    for (Mechanism mech : {Mechanism::MCAR, Mechanism::MAR, Mechanism::MNAR}) {
        const auto spec = make_missingness_spec(d, mech, 12);
        std::ostringstream out;
        write_missingness_spec(out, spec, d);
        std::istringstream in(out.str());
        const auto back = parse_missingness_spec(in, d);
        CHECK(back.mechanism == spec.mechanism);
        CHECK(back.partially_observed == spec.partially_observed);
        CHECK(back.indicator_parents == spec.indicator_parents);
        CHECK(back.mcar_p == spec.mcar_p);
        CHECK(back.p_high == spec.p_high);
        CHECK(back.p_low == spec.p_low);
    }
}

TEST_CASE("missingness model: print and parse") {
    MissingnessModel m;
    m.parents_of_indicator[1] = make_varset({0, 2});
    m.parents_of_indicator[3] = {};
    const std::vector<std::string> names{"A", "B", "C", "D"};
    const std::string text = missingness_model_to_string(m, names);
    CHECK(text.find("R(B): [A C]") != std::string::npos);
    CHECK(text.find("R(D): []") != std::string::npos);

    std::vector<VariableMeta> metas{{"A", 2, {"s0", "s1"}},
                                    {"B", 2, {"s0", "s1"}},
                                    {"C", 2, {"s0", "s1"}},
                                    {"D", 2, {"s0", "s1"}}};
    const CategoricalDataset d(metas, {{0, 1}, {1, 0}, {0, 1}, {1, 0}});
    std::istringstream in(text);
    const auto back = parse_missingness_model(in, d);
    CHECK(back.parents_of_indicator == m.parents_of_indicator);
}

TEST_CASE("trace csv: header and one line per accepted op") {
    SearchTrace trace;
    TraceEntry e;
    e.iteration = 1;
    e.op = {OpKind::Add, 0, 2};
    e.delta = 12.5;
    e.view_size = 90;
    e.weighted = true;
    trace.entries.push_back(e);
    e.iteration = 2;
    e.op = {OpKind::Reverse, 2, 0};
    e.weighted = false;
    trace.entries.push_back(e);

    std::ostringstream out;
    write_trace_csv(out, trace, {"A", "B", "C"});
    const std::string text = out.str();
    CHECK(text.find("iteration,op,from,to,delta,view_size,weighted") != std::string::npos);
    CHECK(text.find("1,add,A,C,") != std::string::npos);
    CHECK(text.find("2,reverse,C,A,") != std::string::npos);

    int newlines = 0;
    for (char ch : text)
        if (ch == '\n') ++newlines;
    CHECK(newlines == 3);
}

TEST_CASE("file round trips over a temp path") {
    const auto tmp = std::string("io_tests_dag.txt");
    Dag g(std::vector<std::string>{"X", "Y"});
    g.add_edge(0, 1);
    write_dag(tmp, g);
    CHECK(read_dag(tmp) == g);
    std::remove(tmp.c_str());
    CHECK_THROWS_AS(read_dag(tmp), IoError);
}
