#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dwell/quench.hpp"

namespace dwell {

/// One beat of N_L(t): A cos(omega t) from the eigenpair (m, n), m < n.
struct FrequencyComponent {
    double omega = 0.0;
    double amplitude = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
};

struct FrequencyOptions {
    /// Only states with c_n^2 at or above this enter the pair sum; 0 uses all.
    double coefficient_floor = 1e-6;
    double merge_tolerance = 1e-12;  // beats closer than this are one component
};

/// N_L(t) = mean + sum_k A_k cos(omega_k t).
struct FrequencySpectrum {
    std::vector<FrequencyComponent> components;  // descending |A|
    double mean = 0.5;                           // sum_n c_n^2 <n|N_L|n>
};

FrequencySpectrum frequency_components(const SpectralDecomposition& d, const RegionMatrices& q,
                                       const FrequencyOptions& options = {});

struct DominantSet {
    std::vector<FrequencyComponent> components;
    std::vector<bool> negative;  // parallel to components
    bool empty() const { return components.empty(); }
};

/// Components with A >= threshold, plus negative ones with |A| >= threshold
/// (kept and flagged).
DominantSet dominant(const std::vector<FrequencyComponent>& components, double threshold = 0.01);

/// mean + sum_k A_k cos(omega_k t).
std::vector<double> reconstruct_n_left(const std::vector<FrequencyComponent>& components,
                                       const std::vector<double>& times, double mean = 0.5);

class UndefinedPeriodError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 2 pi over the smallest nonzero dominant frequency.
double tunneling_period(const std::vector<FrequencyComponent>& dominant_components);

}  // namespace dwell
