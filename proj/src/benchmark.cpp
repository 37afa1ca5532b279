#include "bnsl/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "bnsl/baselines.hpp"
#include "bnsl/eval.hpp"
#include "bnsl/search.hpp"

namespace bnsl {

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

const std::vector<std::string> kKnownAlgorithms{"hc",       "hc-pairwise", "hc-ipw",
                                                "hc-aipw",  "hc-listwise", "sem"};

bool known_algorithm(const std::string& a) {
    for (const auto& k : kKnownAlgorithms)
        if (k == a) return true;
    return false;
}

}  // namespace

BenchmarkConfig parse_benchmark_config(std::istream& in) {
    BenchmarkConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[' && line.back() == ']') continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto bb = s.find_first_not_of(" \t");
            if (bb == std::string::npos) return std::string{};
            const auto ee = s.find_last_not_of(" \t");
            return s.substr(bb, ee - bb + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

        try {
            if (key == "networks") cfg.networks = std::stoi(val);
            else if (key == "n_vars") cfg.n_vars = std::stoi(val);
            else if (key == "density") {
                if (val == "sparse") cfg.density = Density::Sparse;
                else if (val == "dense") cfg.density = Density::Dense;
                else throw ConfigError("config line " + std::to_string(line_no) +
                                       ": density must be sparse or dense");
            } else if (key == "card_min") cfg.card_min = std::stoi(val);
            else if (key == "card_max") cfg.card_max = std::stoi(val);
            else if (key == "sample_sizes") {
                cfg.sample_sizes.clear();
                for (const auto& item : split_list(val)) cfg.sample_sizes.push_back(std::stoll(item));
            } else if (key == "mechanisms") cfg.mechanisms = split_list(val);
            else if (key == "algorithms") cfg.algorithms = split_list(val);
            else if (key == "repeats") cfg.repeats = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "workers") cfg.workers = std::stoi(val);
            else if (key == "alpha") cfg.alpha = std::stod(val);
            else if (key == "max_sepset") cfg.max_sepset = std::stoi(val);
            else if (key == "max_indegree") cfg.max_indegree = std::stoi(val);
            else if (key == "parallel_kernels") cfg.parallel_kernels = val == "1" || val == "true";
            else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                   key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + key);
        }
    }

    if (cfg.networks < 1 || cfg.n_vars < 2 || cfg.repeats < 1 || cfg.workers < 1 ||
        cfg.sample_sizes.empty() || cfg.mechanisms.empty() || cfg.algorithms.empty())
        throw ConfigError("config: incomplete or degenerate grid");
    for (const auto& m : cfg.mechanisms)
        if (m != "none") mechanism_from_string(m);
    for (const auto& a : cfg.algorithms)
        if (!known_algorithm(a)) throw ConfigError("config: unknown algorithm '" + a + "'");
    return cfg;
}

BenchmarkConfig load_benchmark_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_benchmark_config(in);
}

namespace {

struct Cell {
    int network = 0;
    std::size_t size_idx = 0;
    std::size_t mech_idx = 0;
    int repeat = 0;
    std::size_t first_row = 0;   // row index of this cell's first algorithm
};

Dag run_algorithm(const std::string& algorithm, const CategoricalDataset& d,
                  const SearchConfig& scfg) {
    if (algorithm == "hc") return hill_climb(d, scfg).first;
    if (algorithm == "hc-pairwise") return hc_pairwise(d, scfg).first;
    if (algorithm == "hc-ipw") return hc_ipw(d, scfg).first;
    if (algorithm == "hc-aipw") return hc_aipw(d, scfg).first;
    if (algorithm == "hc-listwise") return hc_listwise(d, scfg).first;
    if (algorithm == "sem") return structural_em(d, scfg).first;
    throw ConfigError("unknown algorithm '" + algorithm + "'");
}

void run_cell(const BenchmarkConfig& cfg, const Cell& cell, std::vector<BenchmarkRow>& rows) {
    const std::uint64_t net_seed =
        derive_seed(cfg.seed, {0xA11CE, static_cast<std::uint64_t>(cell.network)});
    const std::uint64_t cell_seed =
        derive_seed(cfg.seed, {static_cast<std::uint64_t>(cell.network), cell.size_idx,
                               cell.mech_idx, static_cast<std::uint64_t>(cell.repeat)});
    const std::int64_t n_rows = cfg.sample_sizes[cell.size_idx];
    const std::string& mechanism = cfg.mechanisms[cell.mech_idx];

    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        BenchmarkRow& row = rows[cell.first_row + a];
        row.network = cell.network;
        row.sample_size = n_rows;
        row.mechanism = mechanism;
        row.algorithm = cfg.algorithms[a];
        row.repeat = cell.repeat;
        row.cell_seed = cell_seed;
    }

    Cpdag truth_cpdag{std::vector<std::string>{}};
    CategoricalDataset* data = nullptr;
    CategoricalDataset storage{std::vector<VariableMeta>{}, {}};
    try {
        const Dag dag = random_dag(cfg.n_vars, cfg.density, derive_seed(net_seed, {1}));
        const auto cards =
            random_cardinalities(cfg.n_vars, cfg.card_min, cfg.card_max, derive_seed(net_seed, {2}));
        const GroundTruth gt = random_cpts(dag, cards, derive_seed(net_seed, {3}));
        truth_cpdag = dag_to_cpdag(gt.dag);

        CategoricalDataset complete = forward_sample(gt, n_rows, derive_seed(cell_seed, {1}));
        if (mechanism == "none") {
            storage = std::move(complete);
        } else {
            const MissingnessSpec spec = make_missingness_spec(
                complete, mechanism_from_string(mechanism), derive_seed(cell_seed, {2}));
            storage = inject_missing(complete, spec, derive_seed(cell_seed, {3}));
        }
        data = &storage;
    } catch (const std::exception& ex) {
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
            rows[cell.first_row + a].status = std::string("error:") + ex.what();
        return;
    }

    SearchConfig scfg;
    scfg.alpha = cfg.alpha;
    scfg.max_sepset = cfg.max_sepset;
    scfg.max_indegree = cfg.max_indegree;
    scfg.seed = cell_seed;
    scfg.policy = cfg.parallel_kernels ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;

    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        BenchmarkRow& row = rows[cell.first_row + a];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Dag learned = run_algorithm(cfg.algorithms[a], *data, scfg);
            const Cpdag learned_cpdag = dag_to_cpdag(learned);
            const F1Result f = cpdag_f1(learned_cpdag, truth_cpdag);
            row.f1 = f.f1;
            row.precision = f.precision;
            row.recall = f.recall;
            row.shd = normalized_shd(learned_cpdag, truth_cpdag);
        } catch (const std::exception& ex) {
            row.status = std::string("error:") + ex.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    }
}

}  // namespace

BenchmarkOutput run_benchmark(const BenchmarkConfig& cfg) {
    std::vector<Cell> cells;
    std::size_t next_row = 0;
    for (int net = 0; net < cfg.networks; ++net) {
        for (std::size_t si = 0; si < cfg.sample_sizes.size(); ++si) {
            for (std::size_t mi = 0; mi < cfg.mechanisms.size(); ++mi) {
                for (int rep = 0; rep < cfg.repeats; ++rep) {
                    cells.push_back({net, si, mi, rep, next_row});
                    next_row += cfg.algorithms.size();
                }
            }
        }
    }

    BenchmarkOutput out;
    out.rows.resize(next_row);

    const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(cells.size())));
    if (workers == 1) {
        for (const Cell& cell : cells) run_cell(cfg, cell, out.rows);
        return out;
    }

    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= cells.size()) return;
                run_cell(cfg, cells[i], out.rows);
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

std::string render_results_csv(const BenchmarkConfig& cfg, const BenchmarkOutput& out) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "network,n_vars,density,sample_size,mechanism,algorithm,repeat,seed,status,"
          "f1,precision,recall,shd_normalized,wall_ms\n";
    for (const auto& r : out.rows) {
        os << r.network << "," << cfg.n_vars << "," << to_string(cfg.density) << ","
           << r.sample_size << "," << r.mechanism << "," << r.algorithm << "," << r.repeat << ","
           << r.cell_seed << "," << r.status << ",";
        if (r.status == "ok")
            os << r.f1 << "," << r.precision << "," << r.recall << "," << r.shd;
        else
            os << ",,,";
        os << "," << r.wall_ms << "\n";
    }
    return os.str();
}

std::string render_summary_csv(const BenchmarkOutput& out) {
    struct Acc {
        int runs = 0;
        int errors = 0;
        double f1_sum = 0, f1_sq = 0, shd_sum = 0, shd_sq = 0;
    };
    std::map<std::tuple<std::int64_t, std::string, std::string>, Acc> groups;
    for (const auto& r : out.rows) {
        Acc& a = groups[{r.sample_size, r.mechanism, r.algorithm}];
        ++a.runs;
        if (r.status != "ok") {
            ++a.errors;
            continue;
        }
        a.f1_sum += r.f1;
        a.f1_sq += r.f1 * r.f1;
        a.shd_sum += r.shd;
        a.shd_sq += r.shd * r.shd;
    }

    std::ostringstream os;
    os << std::setprecision(17);
    os << "sample_size,mechanism,algorithm,runs,errors,f1_mean,f1_sd,shd_mean,shd_sd\n";
    for (const auto& [key, a] : groups) {
        const int ok = a.runs - a.errors;
        double f1_mean = 0, f1_sd = 0, shd_mean = 0, shd_sd = 0;
        if (ok > 0) {
            f1_mean = a.f1_sum / ok;
            shd_mean = a.shd_sum / ok;
            f1_sd = std::sqrt(std::max(0.0, a.f1_sq / ok - f1_mean * f1_mean));
            shd_sd = std::sqrt(std::max(0.0, a.shd_sq / ok - shd_mean * shd_mean));
        }
        os << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key) << ","
           << a.runs << "," << a.errors << "," << f1_mean << "," << f1_sd << "," << shd_mean << ","
           << shd_sd << "\n";
    }
    return os.str();
}

void write_benchmark_outputs(const std::string& out_dir, const BenchmarkConfig& cfg,
                             const BenchmarkOutput& out) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream f(out_dir + "/results.csv");
        if (!f) throw IoError("cannot write results.csv in '" + out_dir + "'");
        f << render_results_csv(cfg, out);
    }
    {
        std::ofstream f(out_dir + "/summary.csv");
        if (!f) throw IoError("cannot write summary.csv in '" + out_dir + "'");
        f << render_summary_csv(out);
    }
}

}  // namespace bnsl
