#include "dwell/quench.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace dwell {

IsolatedWell::IsolatedWell(const PotentialSpec& spec, const InteractionSpec& interaction, double h,
                           const AssemblyOptions& options)
{
    auto mesh = std::make_shared<const Mesh2D>(build_1d_mesh(spec, h, true));
    bundle_ = assemble_2d(std::move(mesh), spec, interaction, options);
}

InitialState IsolatedWell::ground_state(double strength, std::shared_ptr<const BosonicBasis> target,
                                        const SolverOptions& solver) const
{
    const auto pairs = solve_lowest(bundle_.hamiltonian(strength), bundle_.mass, 1, solver);
    if (target->family() != bundle_.basis->family() ||
        target->excludes_diagonal() != bundle_.basis->excludes_diagonal()) {
        throw std::invalid_argument("initial state and target basis use different element families");
    }
    InitialState s;
    s.energy = pairs.front().energy;
    s.coefficients = embed_coefficients(*bundle_.basis, *target, pairs.front().coefficients);
    s.basis = std::move(target);
    return s;
}

InitialState initial_state(const PotentialSpec& spec, const InteractionSpec& interaction, double h,
                           std::shared_ptr<const BosonicBasis> target, const SolverOptions& solver)
{
    return IsolatedWell(spec, interaction, h).ground_state(interaction.strength, std::move(target), solver);
}

SpectralDecomposition decompose(const InitialState& state, const std::vector<EigenPair>& pairs,
                                const SymmetricSparseMatrix& mass, double norm_floor)
{
    if (state.coefficients.size() != mass.rows()) {
        throw std::invalid_argument("decompose: initial state and eigenpairs live in different bases");
    }
    const Vector mg = mass * state.coefficients;
    SpectralDecomposition d;
    d.overlaps.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (p.coefficients.size() != mg.size()) throw std::invalid_argument("decompose: dimension mismatch");
        const double c = p.coefficients.dot(mg);
        d.overlaps.push_back(c);
        d.energies.push_back(p.energy);
        d.captured_norm += c * c;
    }
    if (d.captured_norm < norm_floor) {
        std::ostringstream msg;
        msg << "captured norm " << d.captured_norm << " below floor " << norm_floor
            << "; increase the number of eigenpairs";
        d.warning = msg.str();
    }
    return d;
}

RegionMatrices project_regions(const std::vector<EigenPair>& pairs, const RegionOverlaps& regions)
{
    if (pairs.empty()) return {};
    Eigen::MatrixXd phi(pairs.front().coefficients.size(), static_cast<long>(pairs.size()));
    for (std::size_t n = 0; n < pairs.size(); ++n) phi.col(static_cast<long>(n)) = pairs[n].coefficients;
    auto project = [&](const SymmetricSparseMatrix& s) {
        Eigen::MatrixXd sp = s * phi;
        Eigen::MatrixXd q = phi.transpose() * sp;
        return Eigen::MatrixXd(0.5 * (q + q.transpose()));
    };
    return {project(regions.region_I), project(regions.region_II), project(regions.region_III)};
}

TimeSeries evolve_probabilities(const SpectralDecomposition& d, const RegionMatrices& q,
                                const std::vector<double>& times)
{
    if (times.empty()) throw std::invalid_argument("evolve_probabilities: empty time grid");
    const long k = static_cast<long>(d.overlaps.size());
    if (q.region_I.rows() != k) throw std::invalid_argument("evolve_probabilities: region matrices do not match");

    TimeSeries ts;
    ts.times = times;
    const auto n = times.size();
    ts.p0.resize(n);
    ts.p1.resize(n);
    ts.p2.resize(n);
    ts.n_left.resize(n);

    const Eigen::Map<const Vector> c(d.overlaps.data(), k);
    Vector re(k);
    Vector im(k);
    for (std::size_t s = 0; s < n; ++s) {
        const double t = times[s];
        if (!(t >= 0.0) && !(t < 0.0)) throw std::invalid_argument("evolve_probabilities: NaN time");
        for (long m = 0; m < k; ++m) {
            const double phase = d.energies[static_cast<std::size_t>(m)] * t;
            re[m] = c[m] * std::cos(phase);
            im[m] = c[m] * std::sin(phase);
        }
        // Re(a^H Q a) with a_m = c_m exp(-i E_m t) and real symmetric Q.
        auto form = [&](const Eigen::MatrixXd& qr) { return re.dot(qr * re) + im.dot(qr * im); };
        ts.p2[s] = form(q.region_I);
        ts.p1[s] = form(q.region_II);
        ts.p0[s] = form(q.region_III);
        ts.n_left[s] = ts.p2[s] + 0.5 * ts.p1[s];
    }
    return ts;
}

std::vector<double> uniform_times(double horizon, std::size_t count)
{
    if (count == 0 || !(horizon >= 0.0)) throw std::invalid_argument("uniform_times: bad grid");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) {
        t[i] = count == 1 ? 0.0 : horizon * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return t;
}

}  // namespace dwell
