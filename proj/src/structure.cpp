#include "neurise/structure.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <omp.h>

#include "neurise/parallel.hpp"

namespace neurise {

std::vector<double> InputWeightNorms::pooled() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(p) * static_cast<std::size_t>(p - 1));
    for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v)
            if (u != v) out.push_back(at(u, v));
    return out;
}

void extract_input_norms(const ConditionalModel& model, InputWeightNorms& norms) {
    if (model.flavor == ConditionalFlavor::linear)
        throw invalid_input("input-weight norms require a net-flavored model");
    const MlpSpec& spec = model.net.spec;
    const int width = spec.hidden_width;
    const int block = model.alphabet.q == 2 ? 1 : model.alphabet.q;  // inputs per site
    const double* w = model.net.params.data() + mlp_weight_offset(spec, 0);
    int j = 0;  // input block index
    for (int v = 0; v < model.p; ++v) {
        if (v == model.u) continue;
        double sq = 0.0;
        for (int r = 0; r < width; ++r) {
            const double* row = w + static_cast<std::size_t>(r) * static_cast<std::size_t>(spec.input_dim);
            for (int b = 0; b < block; ++b) {
                const double x = row[j * block + b];
                sq += x * x;
            }
        }
        norms.at(model.u, v) = std::sqrt(sq);
        ++j;
    }
}

InputWeightNorms input_weight_norms(const std::vector<ConditionalModel>& models) {
    if (models.empty()) throw invalid_input("no models to extract norms from");
    InputWeightNorms norms;
    norms.p = models.front().p;
    norms.values.assign(static_cast<std::size_t>(norms.p) * static_cast<std::size_t>(norms.p), 0.0);
    for (const ConditionalModel& m : models) extract_input_norms(m, norms);
    return norms;
}

StructureFitResult structure_fit(const SampleSet& samples, MlpSpec spec,
                                 const TrainConfig& config) {
    if (config.lambda_input <= 0.0)
        std::cerr << "structure_fit: lambda_input <= 0, running unregularized\n";
    const int p = samples.p();
    StructureFitResult result;
    result.models.resize(static_cast<std::size_t>(p));
    result.histories.resize(static_cast<std::size_t>(p));

    const bool go = max_threads() > 1 && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) num_threads(max_threads()) if (go)
    for (int u = 0; u < p; ++u) {
        TrainConfig per_var = config;
        per_var.seed = config.seed + static_cast<std::uint64_t>(u);
        NeuriseFit fit = neurise_fit(u, samples, spec, per_var);
        result.models[static_cast<std::size_t>(u)] = std::move(fit.model);
        result.histories[static_cast<std::size_t>(u)] = std::move(fit.history);
    }
    result.norms = input_weight_norms(result.models);
    return result;
}

double select_threshold(const InputWeightNorms& norms, ThresholdMethod method,
                        const ThresholdParams& params) {
    if (method == ThresholdMethod::manual) return params.manual_tau;
    if (method == ThresholdMethod::rule_of_thumb) {
        if (params.p < 2 || params.n_samples == 0)
            throw invalid_input("rule-of-thumb threshold needs p and the sample count");
        return params.c * std::sqrt(std::log(static_cast<double>(params.p)) /
                                    static_cast<double>(params.n_samples));
    }
    const std::vector<double> pooled = norms.pooled();
    if (pooled.size() < 2) throw invalid_input("need at least 2 norm values");
    const auto [lo, hi] = std::minmax_element(pooled.begin(), pooled.end());
    if (*lo == *hi)
        throw invalid_input("all input-weight norms are equal; no data-driven threshold "
                            "exists, use manual mode");
    double mean = 0.0;
    for (double v : pooled) mean += v;
    mean /= static_cast<double>(pooled.size());
    double var = 0.0;
    for (double v : pooled) var += (v - mean) * (v - mean);
    var /= static_cast<double>(pooled.size());
    return mean + params.stddev_fraction * std::sqrt(var);
}

StructureResult reconstruct_graph(const InputWeightNorms& norms, double tau,
                                  ThresholdMethod method) {
    const int p = norms.p;
    StructureResult result;
    result.norms = norms;
    result.threshold = tau;
    result.method = method;
    result.adjacency.assign(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0);
    result.neighborhoods.resize(static_cast<std::size_t>(p));
    for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v) {
            if (u == v) continue;
            if (norms.at(u, v) > tau)
                result.neighborhoods[static_cast<std::size_t>(u)].push_back(v);
            if (std::max(norms.at(u, v), norms.at(v, u)) > tau) {
                result.adjacency[static_cast<std::size_t>(u) * static_cast<std::size_t>(p) + static_cast<std::size_t>(v)] = 1;
            }
        }
    return result;
}

std::vector<std::uint8_t> true_adjacency(const EnergyModel& truth) {
    const int p = truth.p;
    std::vector<std::uint8_t> adj(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0);
    for (const BasisTerm& t : truth.terms)
        for (std::size_t a = 0; a < t.sites.size(); ++a)
            for (std::size_t b = a + 1; b < t.sites.size(); ++b) {
                if (t.strength == 0.0) continue;
                adj[static_cast<std::size_t>(t.sites[a]) * static_cast<std::size_t>(p) + static_cast<std::size_t>(t.sites[b])] = 1;
                adj[static_cast<std::size_t>(t.sites[b]) * static_cast<std::size_t>(p) + static_cast<std::size_t>(t.sites[a])] = 1;
            }
    return adj;
}

StructureMetrics structure_metrics(const StructureResult& result, const EnergyModel& truth) {
    const int p = truth.p;
    if (result.norms.p != p) throw invalid_input("structure result and truth disagree on p");
    const std::vector<std::uint8_t> adj = true_adjacency(truth);
    StructureMetrics metrics;
    std::size_t edges = 0, nonedges = 0, edge_hits = 0, nonedge_hits = 0;
    for (int u = 0; u < p; ++u)
        for (int v = u + 1; v < p; ++v) {
            const bool truth_edge = adj[static_cast<std::size_t>(u) * static_cast<std::size_t>(p) + static_cast<std::size_t>(v)] != 0;
            const bool guess = result.edge(u, v);
            if (truth_edge) {
                ++edges;
                if (guess)
                    ++edge_hits;
                else
                    metrics.false_negatives.emplace_back(u, v);
            } else {
                ++nonedges;
                if (!guess)
                    ++nonedge_hits;
                else
                    metrics.false_positives.emplace_back(u, v);
            }
        }
    metrics.edge_accuracy = edges == 0 ? 1.0 : static_cast<double>(edge_hits) / static_cast<double>(edges);
    metrics.nonedge_accuracy =
        nonedges == 0 ? 1.0 : static_cast<double>(nonedge_hits) / static_cast<double>(nonedges);
    metrics.total_accuracy = static_cast<double>(edge_hits + nonedge_hits) /
                             static_cast<double>(edges + nonedges);
    return metrics;
}

double ranking_auc(const InputWeightNorms& norms, const EnergyModel& truth) {
    const int p = truth.p;
    if (norms.p != p) throw invalid_input("norms and truth disagree on p");
    const std::vector<std::uint8_t> adj = true_adjacency(truth);
    std::vector<double> edge_scores;
    std::vector<double> nonedge_scores;
    for (int u = 0; u < p; ++u)
        for (int v = u + 1; v < p; ++v) {
            const double score = std::max(norms.at(u, v), norms.at(v, u));
            if (adj[static_cast<std::size_t>(u) * static_cast<std::size_t>(p) + static_cast<std::size_t>(v)] != 0)
                edge_scores.push_back(score);
            else
                nonedge_scores.push_back(score);
        }
    if (edge_scores.empty() || nonedge_scores.empty())
        throw invalid_input("AUC needs both edges and non-edges in the truth");
    double wins = 0.0;
    for (double e : edge_scores)
        for (double ne : nonedge_scores) {
            if (e > ne)
                wins += 1.0;
            else if (e == ne)
                wins += 0.5;
        }
    return wins / (static_cast<double>(edge_scores.size()) *
                   static_cast<double>(nonedge_scores.size()));
}

}  // namespace neurise
