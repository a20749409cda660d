#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "neurise/conditional.hpp"
#include "neurise/energy_net.hpp"
#include "neurise/exact.hpp"

namespace neurise {

/// Writes the conditional distribution of sigma_u given config (value at u
/// ignored) into out. Must be safe to call from multiple threads.
using ConditionalFn = std::function<void(int u, const Config& config, double* out)>;

ConditionalFn conditional_fn_of_model(const EnergyModel& truth);
ConditionalFn conditional_fn_of_learned(const std::vector<ConditionalModel>& models);

/// Mean over all centers u and all q^(p-1) contexts (uniformly weighted) of
/// the l1 distance between the two conditionals. Symmetric in a and b.
double avg_conditional_error(const ConditionalFn& a, const ConditionalFn& b, int p,
                             const Alphabet& alphabet, std::uint64_t cap = (1ull << 24));

/// Learned per-variable conditionals against the exact conditionals of an
/// explicit model. models must hold one entry per variable, indexed by u.
double avg_conditional_error(const std::vector<ConditionalModel>& models,
                             const EnergyModel& truth, std::uint64_t cap = (1ull << 24));

double tvd_exact(const ExactDistribution& d1, const ExactDistribution& d2);

/// Half the l1 distance between the two empirical state distributions,
/// summed over the union of observed states.
double tvd_empirical(const SampleSet& s1, const SampleSet& s2);

/// Monomial (boolean Fourier) coefficients of a function on p spins,
/// indexed by site-subset bitmask (bit i set means site i is in the
/// subset): c_S = 2^-p sum_sigma f(sigma) prod_{i in S} spin(sigma_i).
struct CoefficientSpectrum {
    int p = 0;
    std::vector<double> coefficients;  // 2^p entries

    double at(std::uint64_t mask) const { return coefficients[mask]; }
};

/// In-place Walsh-Hadamard butterfly; length must be a power of two.
void walsh_hadamard(std::vector<double>& values);

/// Complete spectrum via the fast transform over the full truth table.
/// f must be thread-safe; it receives binary configurations (symbol = 1
/// means spin -1). Default cap: p <= 16.
CoefficientSpectrum fourier_expand(const std::function<double(const Config&)>& f, int p,
                                   int max_p = 16);

/// Single coefficient by direct summation, for p beyond the full-spectrum
/// cap (default cap p <= 20).
double fourier_coefficient(const std::function<double(const Config&)>& f, int p,
                           std::uint64_t subset_mask, int max_p = 20);

/// Spectrum of the embedded partial energy spin(sigma_u)*NN(rest) (or the
/// linear partial energy), as a function of all p variables.
CoefficientSpectrum spectrum_of_partial_energy(const ConditionalModel& model, int max_p = 16);

CoefficientSpectrum spectrum_of_energy_net(const EnergyNet& net, int max_p = 16);

/// Inverse transform: the function table the spectrum represents.
std::vector<double> spectrum_to_table(const CoefficientSpectrum& spectrum);

struct LeadingCoefficient {
    int order = 0;
    double value = 0.0;         // max |c_S| over |S| = order
    std::uint64_t subset = 0;   // argmax mask, lexicographic tie-break on site lists
};

/// Orders 1..max_order.
std::vector<LeadingCoefficient> leading_coefficients(const CoefficientSpectrum& spectrum,
                                                     int max_order);

}  // namespace neurise
