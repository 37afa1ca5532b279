#ifndef BNSL_IO_HPP
#define BNSL_IO_HPP

#include <iosfwd>
#include <string>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/missingness.hpp"
#include "bnsl/search.hpp"
#include "bnsl/synth.hpp"

namespace bnsl {

/// Edge-list text: every node on its own line (in label order), then one
/// "from -> to" per line. '#' starts a comment.
std::string dag_to_edge_list(const Dag& g);
Dag parse_dag_edge_list(std::istream& in);
void write_dag(const std::string& path, const Dag& g);
Dag read_dag(const std::string& path);

/// CPDAG text: node lines, "a -> b" for compelled edges, "a -- b" for
/// reversible edges.
std::string cpdag_to_edge_list(const Cpdag& g);
void write_cpdag(const std::string& path, const Cpdag& g);

std::string dag_to_dot(const Dag& g);
std::string cpdag_to_dot(const Cpdag& g);

/// CSV with header row; cells as state labels, missing as `missing_token`.
void write_csv(std::ostream& out, const CategoricalDataset& d,
               const std::string& missing_token = "?");
void write_csv(const std::string& path, const CategoricalDataset& d,
               const std::string& missing_token = "?");

void write_ground_truth(std::ostream& out, const GroundTruth& gt);
void write_ground_truth(const std::string& path, const GroundTruth& gt);
GroundTruth parse_ground_truth(std::istream& in);
GroundTruth read_ground_truth(const std::string& path);

/// Spec serialization uses variable names; parsing resolves them against d.
void write_missingness_spec(std::ostream& out, const MissingnessSpec& spec,
                            const CategoricalDataset& d);
void write_missingness_spec(const std::string& path, const MissingnessSpec& spec,
                            const CategoricalDataset& d);
MissingnessSpec parse_missingness_spec(std::istream& in, const CategoricalDataset& d);
MissingnessSpec read_missingness_spec(const std::string& path, const CategoricalDataset& d);

/// One "R(V): [P1 P2]" line per partially observed variable.
std::string missingness_model_to_string(const MissingnessModel& m,
                                        const std::vector<std::string>& names);
MissingnessModel parse_missingness_model(std::istream& in, const CategoricalDataset& d);

/// Trace CSV: iteration,op,from,to,delta,view_size,weighted.
void write_trace_csv(std::ostream& out, const SearchTrace& trace,
                     const std::vector<std::string>& names);
void write_trace_csv(const std::string& path, const SearchTrace& trace,
                     const std::vector<std::string>& names);

}  // namespace bnsl

#endif  // BNSL_IO_HPP
