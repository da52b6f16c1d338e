#include "dwell/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dwell {

FrequencySpectrum frequency_components(const SpectralDecomposition& d, const RegionMatrices& q,
                                       const FrequencyOptions& options)
{
    const std::size_t k = d.overlaps.size();
    if (static_cast<std::size_t>(q.region_I.rows()) != k) {
        throw std::invalid_argument("frequency_components: region matrices do not match the decomposition");
    }
    auto n_left = [&](std::size_t m, std::size_t n) {
        return q.region_I(static_cast<long>(m), static_cast<long>(n)) +
               0.5 * q.region_II(static_cast<long>(m), static_cast<long>(n));
    };

    FrequencySpectrum out;
    out.mean = 0.0;
    std::vector<std::size_t> active;
    for (std::size_t n = 0; n < k; ++n) {
        const double c = d.overlaps[n];
        out.mean += c * c * n_left(n, n);
        if (c != 0.0 && c * c >= options.coefficient_floor) active.push_back(n);
    }

    std::vector<FrequencyComponent> raw;
    raw.reserve(active.size() * (active.size() - (active.empty() ? 0 : 1)) / 2);
    for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = a + 1; b < active.size(); ++b) {
            const std::size_t m = active[a];
            const std::size_t n = active[b];
            const double amp = 2.0 * d.overlaps[m] * d.overlaps[n] * n_left(m, n);
            raw.push_back({std::abs(d.energies[m] - d.energies[n]), amp, m, n});
        }
    }

    // Merge (numerically) identical beat frequencies.
    std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
        return x.omega < y.omega || (x.omega == y.omega && (x.m < y.m || (x.m == y.m && x.n < y.n)));
    });
    for (const auto& c : raw) {
        if (!out.components.empty() &&
            c.omega - out.components.back().omega <= options.merge_tolerance) {
            auto& last = out.components.back();
            if (std::abs(c.amplitude) > std::abs(last.amplitude)) {
                last.m = c.m;
                last.n = c.n;
            }
            last.amplitude += c.amplitude;
            continue;
        }
        out.components.push_back(c);
    }
    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const auto& x, const auto& y) { return std::abs(x.amplitude) > std::abs(y.amplitude); });
    return out;
}

DominantSet dominant(const std::vector<FrequencyComponent>& components, double threshold)
{
    DominantSet out;
    for (const auto& c : components) {
        if (c.amplitude >= threshold) {
            out.components.push_back(c);
            out.negative.push_back(false);
        } else if (-c.amplitude >= threshold) {
            out.components.push_back(c);
            out.negative.push_back(true);
        }
    }
    return out;
}

std::vector<double> reconstruct_n_left(const std::vector<FrequencyComponent>& components,
                                       const std::vector<double>& times, double mean)
{
    std::vector<double> out(times.size(), mean);
    for (std::size_t s = 0; s < times.size(); ++s) {
        for (const auto& c : components) out[s] += c.amplitude * std::cos(c.omega * times[s]);
    }
    return out;
}

double tunneling_period(const std::vector<FrequencyComponent>& dominant_components)
{
    double lowest = 0.0;
    for (const auto& c : dominant_components) {
        if (c.omega <= 1e-12) continue;
        if (lowest == 0.0 || c.omega < lowest) lowest = c.omega;
    }
    if (lowest == 0.0) throw UndefinedPeriodError("no dominant beat frequency: N_L(t) is constant");
    return 2.0 * std::numbers::pi / lowest;
}

}  // namespace dwell
