#pragma once

#include "neurise/conditional.hpp"
#include "neurise/energy_net.hpp"
#include "neurise/exact.hpp"
#include "neurise/grise.hpp"
#include "neurise/metrics.hpp"

/// Plain serial implementations of the hot kernels, written as directly as
/// possible from the definitions: no design-matrix caching, no chunked
/// reductions, no workspace reuse. Tests compare the production kernels
/// against these, and the benchmark times both.
namespace neurise::reference {

double iso_value(const PartialBasis& basis, const SampleSet& samples,
                 const std::vector<double>& theta);

std::vector<double> iso_gradient(const PartialBasis& basis, const SampleSet& samples,
                                 const std::vector<double>& theta);

ExactDistribution exact_distribution(const EnergyModel& model);

double neuriso_value(const ConditionalModel& model, const SampleSet& samples);

double full_energy_loss(const EnergyNet& net, const SampleSet& samples);

double avg_conditional_error(const std::vector<ConditionalModel>& models,
                             const EnergyModel& truth);

/// Direct O(4^p) transform from the definition of each coefficient.
CoefficientSpectrum fourier_expand(const std::function<double(const Config&)>& f, int p);

}  // namespace neurise::reference
