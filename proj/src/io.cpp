#include "bnsl/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bnsl {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

// Strips comments and surrounding whitespace; empty result means skip.
std::string clean_line(const std::string& raw) {
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = line.find_last_not_of(" \t\r");
    return line.substr(begin, end - begin + 1);
}

}  // namespace

std::string dag_to_edge_list(const Dag& g) {
    std::ostringstream os;
    for (const auto& l : g.labels()) os << l << "\n";
    for (const auto& [from, to] : g.edges()) os << g.label(from) << " -> " << g.label(to) << "\n";
    return os.str();
}

Dag parse_dag_edge_list(std::istream& in) {
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> edges;
    auto declare = [&](const std::string& name) {
        for (const auto& l : labels)
            if (l == name) return;
        labels.push_back(name);
    };

    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = clean_line(raw);
        if (line.empty()) continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) {
            std::istringstream ls(line);
            std::string name, extra;
            ls >> name;
            if (ls >> extra) throw ParseError("dag: bad line '" + line + "'");
            declare(name);
            continue;
        }
        std::string from = clean_line(line.substr(0, arrow));
        std::string to = clean_line(line.substr(arrow + 2));
        if (from.empty() || to.empty()) throw ParseError("dag: bad edge line '" + line + "'");
        declare(from);
        declare(to);
        edges.emplace_back(std::move(from), std::move(to));
    }

    Dag g(labels);
    for (const auto& [from, to] : edges) g.add_edge(g.index_of(from), g.index_of(to));
    return g;
}

void write_dag(const std::string& path, const Dag& g) {
    auto out = open_out(path);
    out << dag_to_edge_list(g);
}

Dag read_dag(const std::string& path) {
    auto in = open_in(path);
    return parse_dag_edge_list(in);
}

std::string cpdag_to_edge_list(const Cpdag& g) {
    std::ostringstream os;
    for (const auto& l : g.labels()) os << l << "\n";
    for (const auto& [from, to] : g.directed_edges())
        os << g.labels()[from] << " -> " << g.labels()[to] << "\n";
    for (const auto& [a, b] : g.undirected_edges())
        os << g.labels()[a] << " -- " << g.labels()[b] << "\n";
    return os.str();
}

void write_cpdag(const std::string& path, const Cpdag& g) {
    auto out = open_out(path);
    out << cpdag_to_edge_list(g);
}

std::string dag_to_dot(const Dag& g) {
    std::ostringstream os;
    os << "digraph G {\n";
    for (const auto& l : g.labels()) os << "  \"" << l << "\";\n";
    for (const auto& [from, to] : g.edges())
        os << "  \"" << g.label(from) << "\" -> \"" << g.label(to) << "\";\n";
    os << "}\n";
    return os.str();
}

std::string cpdag_to_dot(const Cpdag& g) {
    std::ostringstream os;
    os << "digraph G {\n";
    for (const auto& l : g.labels()) os << "  \"" << l << "\";\n";
    for (const auto& [from, to] : g.directed_edges())
        os << "  \"" << g.labels()[from] << "\" -> \"" << g.labels()[to] << "\";\n";
    for (const auto& [a, b] : g.undirected_edges())
        os << "  \"" << g.labels()[a] << "\" -> \"" << g.labels()[b] << "\" [dir=none];\n";
    os << "}\n";
    return os.str();
}

void write_csv(std::ostream& out, const CategoricalDataset& d, const std::string& missing_token) {
    for (VarId v = 0; v < d.n_vars(); ++v) out << (v ? "," : "") << d.variable(v).name;
    out << "\n";
    for (std::int64_t r = 0; r < d.n_rows(); ++r) {
        for (VarId v = 0; v < d.n_vars(); ++v) {
            if (v) out << ",";
            const CellValue c = d.cell(r, v);
            out << (is_missing(c) ? missing_token : d.variable(v).state_labels[c]);
        }
        out << "\n";
    }
}

void write_csv(const std::string& path, const CategoricalDataset& d,
               const std::string& missing_token) {
    auto out = open_out(path);
    write_csv(out, d, missing_token);
}

void write_ground_truth(std::ostream& out, const GroundTruth& gt) {
    const Dag& g = gt.dag;
    out << "bnsl-ground-truth 1\n";
    out << "seed " << gt.seed << "\n";
    if (!gt.note.empty()) out << "note " << gt.note << "\n";
    out << std::setprecision(17);
    for (VarId v = 0; v < g.n_nodes(); ++v)
        out << "node " << g.label(v) << " " << gt.cardinalities[v] << "\n";
    for (const auto& [from, to] : g.edges())
        out << "edge " << g.label(from) << " " << g.label(to) << "\n";
    for (VarId v = 0; v < g.n_nodes(); ++v) {
        out << "cpt " << g.label(v) << " " << gt.cpts[v].size() << "\n";
        for (const auto& row : gt.cpts[v]) {
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
            out << "\n";
        }
    }
}

void write_ground_truth(const std::string& path, const GroundTruth& gt) {
    auto out = open_out(path);
    write_ground_truth(out, gt);
}

GroundTruth parse_ground_truth(std::istream& in) {
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "bnsl-ground-truth" || version != 1)
        throw ParseError("ground truth: bad header");

    GroundTruth gt;
    std::vector<std::string> labels;
    std::vector<int> cards;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::string, std::size_t>> cpt_heads;
    std::vector<std::vector<std::vector<double>>> cpt_blocks;

    while (in >> word) {
        if (word == "seed") {
            in >> gt.seed;
        } else if (word == "note") {
            std::getline(in, gt.note);
            const std::string cleaned = clean_line(gt.note);
            gt.note = cleaned;
        } else if (word == "node") {
            std::string name;
            int card = 0;
            if (!(in >> name >> card) || card < 2) throw ParseError("ground truth: bad node line");
            labels.push_back(name);
            cards.push_back(card);
        } else if (word == "edge") {
            std::string from, to;
            if (!(in >> from >> to)) throw ParseError("ground truth: bad edge line");
            edges.emplace_back(from, to);
        } else if (word == "cpt") {
            std::string name;
            std::size_t rows = 0;
            if (!(in >> name >> rows)) throw ParseError("ground truth: bad cpt header");
            std::size_t node = labels.size();
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == name) node = i;
            if (node == labels.size()) throw ParseError("ground truth: cpt for unknown node");
            std::vector<std::vector<double>> block(rows);
            for (auto& row : block) {
                row.resize(cards[node]);
                for (auto& cell : row)
                    if (!(in >> cell)) throw ParseError("ground truth: truncated cpt");
            }
            cpt_heads.emplace_back(name, rows);
            cpt_blocks.push_back(std::move(block));
        } else {
            throw ParseError("ground truth: unknown keyword '" + word + "'");
        }
    }

    Dag g(labels);
    for (const auto& [from, to] : edges) g.add_edge(g.index_of(from), g.index_of(to));
    gt.dag = g;
    gt.cardinalities = cards;
    gt.cpts.resize(labels.size());
    for (std::size_t i = 0; i < cpt_heads.size(); ++i)
        gt.cpts[g.index_of(cpt_heads[i].first)] = std::move(cpt_blocks[i]);

    for (VarId v = 0; v < g.n_nodes(); ++v) {
        std::uint64_t q = 1;
        for (VarId p : g.parents(v)) q *= static_cast<std::uint64_t>(cards[p]);
        if (gt.cpts[v].size() != q)
            throw ParseError("ground truth: cpt row count mismatch for " + g.label(v));
        for (const auto& row : gt.cpts[v]) {
            double sum = 0.0;
            for (double x : row) sum += x;
            if (std::abs(sum - 1.0) > 1e-6)
                throw ParseError("ground truth: cpt row of " + g.label(v) + " sums to " +
                                 std::to_string(sum));
        }
    }
    return gt;
}

GroundTruth read_ground_truth(const std::string& path) {
    auto in = open_in(path);
    return parse_ground_truth(in);
}

void write_missingness_spec(std::ostream& out, const MissingnessSpec& spec,
                            const CategoricalDataset& d) {
    out << "bnsl-missingness 1\n";
    out << "mechanism " << to_string(spec.mechanism) << "\n";
    out << std::setprecision(17);
    if (spec.mechanism != Mechanism::MCAR)
        out << "p_high " << spec.p_high << "\np_low " << spec.p_low << "\n";
    for (VarId v : spec.partially_observed) {
        if (spec.mechanism == Mechanism::MCAR) {
            out << "var " << d.variable(v).name << " p " << spec.mcar_p.at(v) << "\n";
        } else {
            out << "var " << d.variable(v).name << " parent "
                << d.variable(spec.indicator_parents.at(v)).name << "\n";
        }
    }
}

void write_missingness_spec(const std::string& path, const MissingnessSpec& spec,
                            const CategoricalDataset& d) {
    auto out = open_out(path);
    write_missingness_spec(out, spec, d);
}

MissingnessSpec parse_missingness_spec(std::istream& in, const CategoricalDataset& d) {
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "bnsl-missingness" || version != 1)
        throw ParseError("missingness spec: bad header");

    MissingnessSpec spec;
    while (in >> word) {
        if (word == "mechanism") {
            std::string m;
            in >> m;
            spec.mechanism = mechanism_from_string(m);
        } else if (word == "p_high") {
            in >> spec.p_high;
        } else if (word == "p_low") {
            in >> spec.p_low;
        } else if (word == "var") {
            std::string name, kind;
            if (!(in >> name >> kind)) throw ParseError("missingness spec: bad var line");
            const VarId v = d.index_of(name);
            varset_insert(spec.partially_observed, v);
            if (kind == "p") {
                double p = 0.0;
                in >> p;
                spec.mcar_p[v] = p;
            } else if (kind == "parent") {
                std::string pname;
                in >> pname;
                spec.indicator_parents[v] = d.index_of(pname);
            } else {
                throw ParseError("missingness spec: bad var kind '" + kind + "'");
            }
        } else {
            throw ParseError("missingness spec: unknown keyword '" + word + "'");
        }
    }
    return spec;
}

MissingnessSpec read_missingness_spec(const std::string& path, const CategoricalDataset& d) {
    auto in = open_in(path);
    return parse_missingness_spec(in, d);
}

std::string missingness_model_to_string(const MissingnessModel& m,
                                        const std::vector<std::string>& names) {
    std::ostringstream os;
    for (const auto& [v, parents] : m.parents_of_indicator) {
        os << "R(" << names.at(v) << "): [";
        for (std::size_t i = 0; i < parents.size(); ++i)
            os << (i ? " " : "") << names.at(parents[i]);
        os << "]\n";
    }
    return os.str();
}

MissingnessModel parse_missingness_model(std::istream& in, const CategoricalDataset& d) {
    MissingnessModel m;
    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = clean_line(raw);
        if (line.empty()) continue;
        const auto open = line.find("R(");
        const auto close = line.find("):");
        const auto lb = line.find('[');
        const auto rb = line.find(']');
        if (open != 0 || close == std::string::npos || lb == std::string::npos ||
            rb == std::string::npos || rb < lb)
            throw ParseError("missingness model: bad line '" + line + "'");
        const VarId v = d.index_of(line.substr(2, close - 2));
        VarSet parents;
        std::istringstream ps(line.substr(lb + 1, rb - lb - 1));
        std::string name;
        while (ps >> name) varset_insert(parents, d.index_of(name));
        m.parents_of_indicator[v] = std::move(parents);
    }
    return m;
}

void write_trace_csv(std::ostream& out, const SearchTrace& trace,
                     const std::vector<std::string>& names) {
    out << "iteration,op,from,to,delta,view_size,weighted\n";
    out << std::setprecision(17);
    for (const auto& e : trace.entries) {
        out << e.iteration << "," << to_string(e.op.kind) << "," << names.at(e.op.from) << ","
            << names.at(e.op.to) << "," << e.delta << "," << e.view_size << ","
            << (e.weighted ? 1 : 0) << "\n";
    }
}

void write_trace_csv(const std::string& path, const SearchTrace& trace,
                     const std::vector<std::string>& names) {
    auto out = open_out(path);
    write_trace_csv(out, trace, names);
}

}  // namespace bnsl
