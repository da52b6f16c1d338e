#pragma once

#include <memory>
#include <optional>

#include "dwell/assembly.hpp"
#include "dwell/eigensolve.hpp"
#include "dwell/frequency.hpp"
#include "dwell/quench.hpp"

namespace dwell {

struct SimulationSetup {
    PotentialSpec potential;
    InteractionKind kind = InteractionKind::Contact;
    double softening = 1.0;
    double mesh_size = 1.0;
    std::size_t eigenpairs = 150;
    double norm_floor = 0.999;
    SolverOptions solver;
    AssemblyOptions assembly;
    FrequencyOptions frequency;
    double dominant_threshold = 0.01;

    InteractionSpec interaction(double strength) const { return {kind, softening, strength}; }
};

/// Everything the quench protocol yields at one interaction strength.
struct QuenchPoint {
    double strength = 0.0;
    std::vector<EigenPair> pairs;
    InitialState initial;
    SpectralDecomposition decomposition;
    RegionMatrices regions;
    FrequencySpectrum spectrum;
    DominantSet dominant;
};

/// Assembles the U-independent operators once (full double well and isolated
/// left well) and evaluates the quench protocol at any U.
class Simulator {
public:
    explicit Simulator(SimulationSetup setup);

    const SimulationSetup& setup() const { return setup_; }
    const OperatorBundle& operators() const { return full_; }
    const IsolatedWell& isolated() const { return isolated_; }

    std::vector<EigenPair> eigenpairs(double strength, SolverReport* report = nullptr) const;
    InitialState initial_state(double strength) const;
    QuenchPoint analyze(double strength) const;

private:
    SimulationSetup setup_;
    OperatorBundle full_;
    IsolatedWell isolated_;
};

}  // namespace dwell
