#pragma once

#include <cstdint>
#include <vector>

#include "neurise/conditional.hpp"
#include "neurise/model.hpp"

namespace neurise {

/// W[u][v] = l2 norm of the first-layer weights of variable u's net that
/// read the input block of site v. Diagonal entries are 0 and unused.
struct InputWeightNorms {
    int p = 0;
    std::vector<double> values;  // p*p row-major

    double at(int u, int v) const { return values[static_cast<std::size_t>(u) * static_cast<std::size_t>(p) + static_cast<std::size_t>(v)]; }
    double& at(int u, int v) { return values[static_cast<std::size_t>(u) * static_cast<std::size_t>(p) + static_cast<std::size_t>(v)]; }

    /// All off-diagonal entries, row by row (the pooled histogram data).
    std::vector<double> pooled() const;
};

/// Column norms of one trained conditional net, indexed by site.
void extract_input_norms(const ConditionalModel& model, InputWeightNorms& norms);
InputWeightNorms input_weight_norms(const std::vector<ConditionalModel>& models);

struct StructureFitResult {
    std::vector<ConditionalModel> models;
    InputWeightNorms norms;
    std::vector<std::vector<EpochLog>> histories;
};

/// Trains one net per variable with zero-initialized input weights and the
/// l1 input penalty from config (seed+u per variable), then extracts the
/// input-weight norms. lambda_input <= 0 is accepted with a warning to
/// stderr (the norms are computed either way, as the unregularized
/// control needs them).
StructureFitResult structure_fit(const SampleSet& samples, MlpSpec spec,
                                 const TrainConfig& config);

enum class ThresholdMethod { manual, rule_of_thumb, stddev_outlier };

struct ThresholdParams {
    double manual_tau = 0.0;
    double c = 1.0;            // rule_of_thumb scale
    std::size_t n_samples = 0; // rule_of_thumb sample count
    int p = 0;                 // rule_of_thumb variable count
    double stddev_fraction = 0.5;
};

/// manual: tau as given. rule_of_thumb: c*sqrt(ln p / n).
/// stddev_outlier: mean + f*stddev of the pooled norm distribution
/// (population stddev). Throws invalid_input when all norms are equal
/// (no data-driven threshold exists; use manual mode).
double select_threshold(const InputWeightNorms& norms, ThresholdMethod method,
                        const ThresholdParams& params);

struct StructureResult {
    InputWeightNorms norms;
    double threshold = 0.0;
    ThresholdMethod method = ThresholdMethod::manual;
    std::vector<std::uint8_t> adjacency;            // p*p, symmetric
    std::vector<std::vector<int>> neighborhoods;    // directed: v with W[u][v] > tau

    bool edge(int u, int v) const {
        return adjacency[static_cast<std::size_t>(u) * static_cast<std::size_t>(norms.p) + static_cast<std::size_t>(v)] != 0;
    }
};

/// Adjacency by the OR rule: edge(u,v) iff max(W[u][v], W[v][u]) > tau.
/// Raising tau never adds edges.
StructureResult reconstruct_graph(const InputWeightNorms& norms, double tau,
                                  ThresholdMethod method = ThresholdMethod::manual);

struct StructureMetrics {
    double edge_accuracy = 0.0;     // recovered fraction of true edges
    double nonedge_accuracy = 0.0;  // recovered fraction of true non-edges
    double total_accuracy = 0.0;    // over all unordered pairs
    std::vector<std::pair<int, int>> false_positives;
    std::vector<std::pair<int, int>> false_negatives;
};

/// Ground truth: two sites are neighbors iff they co-occur in some term.
std::vector<std::uint8_t> true_adjacency(const EnergyModel& truth);

StructureMetrics structure_metrics(const StructureResult& result, const EnergyModel& truth);

/// Area under the ROC curve of ranking unordered pairs by
/// max(W[u][v], W[v][u]) against the true adjacency; ties count 1/2.
/// 1.0 means every true edge scores above every non-edge.
double ranking_auc(const InputWeightNorms& norms, const EnergyModel& truth);

}  // namespace neurise
