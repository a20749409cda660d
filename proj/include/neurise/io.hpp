#pragma once

#include <optional>
#include <string>

#include "neurise/conditional.hpp"
#include "neurise/energy_net.hpp"
#include "neurise/grise.hpp"
#include "neurise/structure.hpp"

namespace neurise {

/// Model file: JSON {p, q, terms: [{sites, kind, labels|null, strength}]}.
void write_energy_model(const EnergyModel& model, const std::string& path);
EnergyModel read_energy_model(const std::string& path);

/// Sample file: "# p=<p> q=<q>" header, then one whitespace-separated row
/// of symbols per configuration. The header is optional on read; without
/// it (and without an explicit alphabet) q is inferred as max symbol + 1.
void write_samples(const SampleSet& samples, const std::string& path);
SampleSet read_samples(const std::string& path, std::optional<Alphabet> alphabet = std::nullopt);

/// Net file: JSON {spec: {input_dim, d, w, output_dim}, params: [..]}.
/// Doubles survive the round trip bit-exactly.
void write_mlp(const Mlp& net, const std::string& path);
Mlp read_mlp(const std::string& path);

void write_conditional(const ConditionalModel& model, const std::string& path);
ConditionalModel read_conditional(const std::string& path);

void write_energy_net(const EnergyNet& net, const std::string& path);
EnergyNet read_energy_net(const std::string& path);

void write_grise_solution(const GriseSolution& solution, const Alphabet& alphabet, int p,
                          int max_order, TermKind kind, const std::string& path);
/// Rebuilds the partial basis from the stored descriptor and returns the
/// solution as a linear conditional model alongside the raw solution.
std::pair<GriseSolution, ConditionalModel> read_grise_solution(const std::string& path);

void write_structure_result(const StructureResult& result, const std::string& path);
StructureResult read_structure_result(const std::string& path);

/// One norm value per line, the pooled histogram data.
void write_norms_csv(const InputWeightNorms& norms, const std::string& path);

/// epoch,train_loss[,validation_loss]
void write_loss_csv(const std::vector<EpochLog>& history, const std::string& path);

}  // namespace neurise
