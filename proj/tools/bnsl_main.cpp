#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "bnsl/baselines.hpp"
#include "bnsl/benchmark.hpp"
#include "bnsl/eval.hpp"
#include "bnsl/io.hpp"
#include "bnsl/search.hpp"
#include "bnsl/synth.hpp"

namespace fs = std::filesystem;
using namespace bnsl;

namespace {

struct SimulateArgs {
    int n = 8;
    std::string density = "sparse";
    std::int64_t rows = 1000;
    int card_min = 2;
    int card_max = 4;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a) {
    if (a.n < 2) throw ConfigError("simulate: need at least 2 variables");
    if (a.rows < 1) throw ConfigError("simulate: need at least 1 row");
    const Density density = a.density == "dense" ? Density::Dense : Density::Sparse;

    const Dag dag = random_dag(a.n, density, derive_seed(a.seed, {1}));
    const auto cards = random_cardinalities(a.n, a.card_min, a.card_max, derive_seed(a.seed, {2}));
    GroundTruth gt = random_cpts(dag, cards, derive_seed(a.seed, {3}));
    gt.seed = a.seed;
    gt.note = to_string(density) + " n=" + std::to_string(a.n);
    const CategoricalDataset data = forward_sample(gt, a.rows, derive_seed(a.seed, {4}));

    fs::create_directories(a.out_dir);
    write_ground_truth(a.out_dir + "/ground_truth.txt", gt);
    write_dag(a.out_dir + "/truth_dag.txt", gt.dag);
    write_csv(a.out_dir + "/data.csv", data);
    std::cout << "seed " << a.seed << "\n"
              << "edges " << gt.dag.edge_count() << "\n"
              << "wrote " << a.out_dir << "/{ground_truth.txt,truth_dag.txt,data.csv}\n";
    return 0;
}

struct CorruptArgs {
    std::string csv;
    std::string mechanism = "mcar";
    std::uint64_t seed = 1;
    double fraction = 0.5;
    double p_high = 0.6;
    double p_low = 0.1;
    std::string missing_token = "?";
    std::string out_dir = ".";
};

int cmd_corrupt(const CorruptArgs& a) {
    const CategoricalDataset d = load_csv(a.csv, a.missing_token);
    MissingnessSpec spec =
        make_missingness_spec(d, mechanism_from_string(a.mechanism), derive_seed(a.seed, {1}),
                              a.fraction);
    spec.p_high = a.p_high;
    spec.p_low = a.p_low;
    const CategoricalDataset corrupted = inject_missing(d, spec, derive_seed(a.seed, {2}));

    fs::create_directories(a.out_dir);
    write_csv(a.out_dir + "/corrupted.csv", corrupted, a.missing_token);
    write_missingness_spec(a.out_dir + "/missingness_spec.txt", spec, d);
    std::cout << "seed " << a.seed << "\n";
    for (VarId v : spec.partially_observed) {
        std::cout << "selected " << d.variable(v).name << " missing "
                  << corrupted.missing_count(v) << "/" << corrupted.n_rows() << "\n";
    }
    std::cout << "wrote " << a.out_dir << "/{corrupted.csv,missingness_spec.txt}\n";
    return 0;
}

struct LearnArgs {
    std::string csv;
    std::string algorithm = "hc-aipw";
    double alpha = 0.05;
    int max_sepset = 3;
    int max_indegree = -1;
    std::uint64_t seed = 0;
    bool parallel = false;
    std::string missing_token = "?";
    std::string out_dir = ".";
};

int cmd_learn(const LearnArgs& a) {
    const CategoricalDataset d = load_csv(a.csv, a.missing_token);
    SearchConfig cfg;
    cfg.alpha = a.alpha;
    cfg.max_sepset = a.max_sepset;
    cfg.max_indegree = a.max_indegree;
    cfg.seed = a.seed;
    cfg.policy = a.parallel ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;

    SearchResult result{Dag(0), SearchTrace{}};
    if (a.algorithm == "hc") result = hill_climb(d, cfg);
    else if (a.algorithm == "hc-pairwise") result = hc_pairwise(d, cfg);
    else if (a.algorithm == "hc-ipw") result = hc_ipw(d, cfg);
    else if (a.algorithm == "hc-aipw") result = hc_aipw(d, cfg);
    else if (a.algorithm == "hc-listwise") result = hc_listwise(d, cfg);
    else if (a.algorithm == "sem") result = structural_em(d, cfg);
    else throw ConfigError("unknown algorithm '" + a.algorithm + "'");

    const auto& [g, trace] = result;
    std::vector<std::string> names;
    for (const auto& meta : d.variables()) names.push_back(meta.name);

    fs::create_directories(a.out_dir);
    write_dag(a.out_dir + "/learned_dag.txt", g);
    write_cpdag(a.out_dir + "/learned_cpdag.txt", dag_to_cpdag(g));
    write_trace_csv(a.out_dir + "/trace.csv", trace, names);

    std::cout << "algorithm " << a.algorithm << "\n"
              << "edges " << g.edge_count() << "\n"
              << "iterations " << trace.entries.size() << "\n";
    if (!trace.model.parents_of_indicator.empty()) {
        std::cout << "detected indicator parents:\n"
                  << missingness_model_to_string(trace.model, names);
    }
    std::cout << "wrote " << a.out_dir << "/{learned_dag.txt,learned_cpdag.txt,trace.csv}\n";
    return 0;
}

int cmd_evaluate(const std::string& learned_path, const std::string& truth_path) {
    const Dag learned = read_dag(learned_path);
    const Dag truth = read_dag(truth_path);
    const Cpdag lc = dag_to_cpdag(learned);
    const Cpdag tc = dag_to_cpdag(truth);
    const F1Result f = cpdag_f1(lc, tc);
    const double shd = normalized_shd(lc, tc);
    std::cout << "f1,precision,recall,shd_normalized\n"
              << f.f1 << "," << f.precision << "," << f.recall << "," << shd << "\n";
    return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_dir, int workers_override) {
    BenchmarkConfig cfg = load_benchmark_config(config_path);
    if (workers_override > 0) cfg.workers = workers_override;
    const BenchmarkOutput out = run_benchmark(cfg);
    write_benchmark_outputs(out_dir, cfg, out);
    int errors = 0;
    for (const auto& r : out.rows)
        if (r.status != "ok") ++errors;
    std::cout << "rows " << out.rows.size() << "\nerrors " << errors << "\nwrote " << out_dir
              << "/{results.csv,summary.csv}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Bayesian-network structure learning with missing data"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a random network and sample data");
    simulate->add_option("--n", sim.n, "Number of variables");
    simulate->add_option("--density", sim.density, "sparse | dense")
        ->check(CLI::IsMember({"sparse", "dense"}));
    simulate->add_option("--rows,-N", sim.rows, "Sample size");
    simulate->add_option("--card-min", sim.card_min, "Minimum cardinality");
    simulate->add_option("--card-max", sim.card_max, "Maximum cardinality");
    simulate->add_option("--seed", sim.seed, "Seed");
    simulate->add_option("--out-dir", sim.out_dir, "Output directory");

    CorruptArgs cor;
    auto* corrupt = app.add_subcommand("corrupt", "Inject missing values into a CSV");
    corrupt->add_option("csv", cor.csv, "Input CSV")->required();
    corrupt->add_option("--mechanism", cor.mechanism, "mcar | mar | mnar")
        ->check(CLI::IsMember({"mcar", "mar", "mnar"}));
    corrupt->add_option("--seed", cor.seed, "Seed");
    corrupt->add_option("--fraction", cor.fraction, "Fraction of variables to corrupt");
    corrupt->add_option("--p-high", cor.p_high, "Removal rate at the parent's modal state");
    corrupt->add_option("--p-low", cor.p_low, "Removal rate otherwise");
    corrupt->add_option("--missing-token", cor.missing_token, "Missing-value token");
    corrupt->add_option("--out-dir", cor.out_dir, "Output directory");

    LearnArgs lrn;
    auto* learn = app.add_subcommand("learn", "Learn a DAG from a CSV");
    learn->add_option("csv", lrn.csv, "Input CSV")->required();
    learn->add_option("--algorithm,-a", lrn.algorithm,
                      "hc | hc-pairwise | hc-ipw | hc-aipw | hc-listwise | sem")
        ->check(CLI::IsMember({"hc", "hc-pairwise", "hc-ipw", "hc-aipw", "hc-listwise", "sem"}));
    learn->add_option("--alpha", lrn.alpha, "CI significance for indicator detection");
    learn->add_option("--max-sepset", lrn.max_sepset, "Largest conditioning set");
    learn->add_option("--max-indegree", lrn.max_indegree, "Parent cap (negative: none)");
    learn->add_option("--seed", lrn.seed, "Seed (logged in the trace)");
    learn->add_flag("--parallel", lrn.parallel, "Use the parallel kernels");
    learn->add_option("--missing-token", lrn.missing_token, "Missing-value token");
    learn->add_option("--out-dir", lrn.out_dir, "Output directory");

    std::string eval_learned, eval_truth;
    auto* evaluate = app.add_subcommand("evaluate", "Compare a learned DAG against the truth");
    evaluate->add_option("learned", eval_learned, "Learned DAG file")->required();
    evaluate->add_option("truth", eval_truth, "Truth DAG file")->required();

    std::string bench_config, bench_out = ".";
    int bench_workers = 0;
    auto* benchmark = app.add_subcommand("benchmark", "Run an experiment grid from a config file");
    benchmark->add_option("config", bench_config, "Config file")->required();
    benchmark->add_option("--out-dir", bench_out, "Output directory");
    benchmark->add_option("--workers", bench_workers, "Override worker count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*corrupt) return cmd_corrupt(cor);
        if (*learn) return cmd_learn(lrn);
        if (*evaluate) return cmd_evaluate(eval_learned, eval_truth);
        if (*benchmark) return cmd_benchmark(bench_config, bench_out, bench_workers);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
