#ifndef BNSL_BENCHMARK_HPP
#define BNSL_BENCHMARK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnsl/synth.hpp"

namespace bnsl {

/// One experiment grid: random networks crossed with sample sizes,
/// missingness mechanisms, algorithms and repeats.
struct BenchmarkConfig {
    int networks = 1;
    int n_vars = 8;
    Density density = Density::Sparse;
    int card_min = 2;
    int card_max = 4;
    std::vector<std::int64_t> sample_sizes{1000};
    std::vector<std::string> mechanisms{"mcar"};   // none | mcar | mar | mnar
    std::vector<std::string> algorithms{"hc-pairwise"};
    int repeats = 1;
    std::uint64_t seed = 1;
    int workers = 1;
    double alpha = 0.05;
    int max_sepset = 3;
    int max_indegree = -1;
    bool parallel_kernels = false;
};

/// Key/value lines "key = value"; '#' comments and [section] headers are
/// ignored. Lists are comma separated.
BenchmarkConfig parse_benchmark_config(std::istream& in);
BenchmarkConfig load_benchmark_config(const std::string& path);

struct BenchmarkRow {
    int network = 0;
    std::int64_t sample_size = 0;
    std::string mechanism;
    std::string algorithm;
    int repeat = 0;
    std::uint64_t cell_seed = 0;
    std::string status = "ok";    // ok, or error:<message>
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double shd = 0.0;
    double wall_ms = 0.0;
};

struct BenchmarkOutput {
    std::vector<BenchmarkRow> rows;   // deterministic order, independent of workers
};

/// Runs the grid. Per-cell seeds derive from (seed, network, sample size
/// index, mechanism index, repeat), so every algorithm in a cell sees the
/// same corrupted dataset. Failures are recorded per row; the run continues.
BenchmarkOutput run_benchmark(const BenchmarkConfig& cfg);

/// results.csv (one row per run) and summary.csv (mean/sd by cell group).
std::string render_results_csv(const BenchmarkConfig& cfg, const BenchmarkOutput& out);
std::string render_summary_csv(const BenchmarkOutput& out);
void write_benchmark_outputs(const std::string& out_dir, const BenchmarkConfig& cfg,
                             const BenchmarkOutput& out);

}  // namespace bnsl

#endif  // BNSL_BENCHMARK_HPP
