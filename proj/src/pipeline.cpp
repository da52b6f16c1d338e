#include "dwell/simulator.hpp"

namespace dwell {

namespace {

OperatorBundle assemble_full(const SimulationSetup& s)
{
    auto mesh = std::make_shared<const Mesh2D>(build_1d_mesh(s.potential, s.mesh_size, false));
    return assemble_2d(std::move(mesh), s.potential, s.interaction(0.0), s.assembly);
}

}  // namespace

Simulator::Simulator(SimulationSetup setup)
    : setup_(std::move(setup)),
      full_(assemble_full(setup_)),
      isolated_(setup_.potential, setup_.interaction(0.0), setup_.mesh_size, setup_.assembly)
{
}

std::vector<EigenPair> Simulator::eigenpairs(double strength, SolverReport* report) const
{
    return solve_lowest(full_.hamiltonian(strength), full_.mass, setup_.eigenpairs, setup_.solver, report);
}

InitialState Simulator::initial_state(double strength) const
{
    return isolated_.ground_state(strength, full_.basis, setup_.solver);
}

QuenchPoint Simulator::analyze(double strength) const
{
    QuenchPoint p;
    p.strength = strength;
    p.pairs = eigenpairs(strength);
    p.initial = initial_state(strength);
    p.decomposition = decompose(p.initial, p.pairs, full_.mass, setup_.norm_floor);
    p.regions = project_regions(p.pairs, full_.regions);
    p.spectrum = frequency_components(p.decomposition, p.regions, setup_.frequency);
    p.dominant = dominant(p.spectrum.components, setup_.dominant_threshold);
    return p;
}

}  // namespace dwell
