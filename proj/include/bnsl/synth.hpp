#ifndef BNSL_SYNTH_HPP
#define BNSL_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/missingness.hpp"

namespace bnsl {

enum class Density { Sparse, Dense };

std::string to_string(Density d);

/// Generating model: a DAG with one conditional probability table per node.
/// cpts[v][cfg][k] = P(V_v = k | parent configuration cfg), cfg in mixed
/// radix over the sorted parent set (lowest id most significant), matching
/// config_index.
struct GroundTruth {
    Dag dag{0};
    std::vector<int> cardinalities;
    std::vector<std::vector<std::vector<double>>> cpts;
    std::uint64_t seed = 0;
    std::string note;
};

/// Random order DAG: each lower-to-higher ordered pair gets an edge with
/// probability 2/(n-1) (Sparse) or 4/(n-1) (Dense), clamped to [0,1].
Dag random_dag(int n, Density density, std::uint64_t seed);

/// Uniform cardinality per node in [lo, hi].
std::vector<int> random_cardinalities(int n, int lo, int hi, std::uint64_t seed);

/// CPT rows drawn independently from the flat Dirichlet (uniform simplex).
GroundTruth random_cpts(const Dag& g, const std::vector<int>& cardinalities, std::uint64_t seed);

/// I.i.d. rows by ancestral sampling in topological order. States are
/// labeled s0, s1, ...
CategoricalDataset forward_sample(const GroundTruth& gt, std::int64_t n_rows, std::uint64_t seed);

enum class Mechanism { MCAR, MAR, MNAR };

std::string to_string(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

/// Corruption recipe: which variables lose cells and how the removal
/// probability depends on an indicator-parent value (MAR/MNAR) or a flat
/// per-variable rate (MCAR).
struct MissingnessSpec {
    Mechanism mechanism = Mechanism::MCAR;
    VarSet partially_observed;
    std::map<VarId, VarId> indicator_parents;  // MAR/MNAR only
    std::map<VarId, double> mcar_p;            // MCAR only
    double p_high = 0.6;
    double p_low = 0.1;
};

/// Draws a corruption recipe: floor(fraction * n) variables selected;
/// MCAR rates uniform in [0.1, 0.6]; MAR parents drawn from the unselected
/// fully observed variables; MNAR gives floor(half) of the selected a fully
/// observed parent and the rest another selected variable.
MissingnessSpec make_missingness_spec(const CategoricalDataset& d, Mechanism mechanism,
                                      std::uint64_t seed, double fraction = 0.5);

/// Applies the spec: MCAR removes cells i.i.d. at the per-variable rate;
/// MAR/MNAR removes cell (s, V_i) with p_high when the indicator parent sits
/// at its most frequent pre-corruption state in row s, else p_low. Decisions
/// always read pre-corruption parent values.
CategoricalDataset inject_missing(const CategoricalDataset& d, const MissingnessSpec& spec,
                                  std::uint64_t seed);

/// The indicator-parent model the spec induces (keys = selected variables).
MissingnessModel spec_truth_model(const MissingnessSpec& spec);

}  // namespace bnsl

#endif  // BNSL_SYNTH_HPP
