#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwell/frequency.hpp"
#include "dwell/simulator.hpp"
#include "support.hpp"

using namespace dwell;

namespace {

// Two-level toy: region matrices chosen so that <1|N_L|2> = 1/2.
std::pair<SpectralDecomposition, RegionMatrices> doublet()
{
    SpectralDecomposition d;
    d.overlaps = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    d.energies = {0.010, 0.012};
    d.captured_norm = 1.0;
    RegionMatrices q;
    q.region_I = Eigen::MatrixXd::Constant(2, 2, 0.5);
    q.region_III = Eigen::MatrixXd{{0.5, -0.5}, {-0.5, 0.5}};
    q.region_II = Eigen::MatrixXd::Zero(2, 2);
    return {d, q};
}

}  // namespace

TEST_CASE("single eigenstate has no beats")
{
    auto [d, q] = doublet();
    d.overlaps = {1.0, 0.0};
    const auto s = frequency_components(d, q);
    CHECK(s.components.empty());
    CHECK(s.mean == doctest::Approx(0.5));
}

TEST_CASE("doublet gives one component of amplitude 1/2")
{
    const auto [d, q] = doublet();
    const auto s = frequency_components(d, q);
    REQUIRE(s.components.size() == 1);
    CHECK(s.components[0].amplitude == doctest::Approx(0.5));
    CHECK(s.components[0].omega == doctest::Approx(0.002));
    CHECK(s.components[0].m == 0);
    CHECK(s.components[0].n == 1);
    const auto dom = dominant(s.components);
    CHECK(dom.components.size() == 1);
    CHECK(tunneling_period(dom.components) == doctest::Approx(2.0 * std::numbers::pi / 0.002));

    const auto times = uniform_times(5000.0, 101);
    const auto ts = evolve_probabilities(d, q, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(ts.p1[i] == doctest::Approx(0.0));
        CHECK(ts.p2[i] == doctest::Approx(0.5 * (1.0 + std::cos(0.002 * times[i]))));
    }
}

TEST_CASE("dominant filter keeps amplitudes at or above the threshold")
{
    std::vector<FrequencyComponent> c{{1.0, 0.3, 0, 1}, {2.0, 0.15, 0, 2}, {3.0, 0.005, 1, 2}};
    auto d = dominant(c, 0.01);
    REQUIRE(d.components.size() == 2);
    CHECK(d.components[0].amplitude == 0.3);
    CHECK(d.components[1].amplitude == 0.15);

    c.push_back({4.0, -0.02, 2, 3});
    d = dominant(c, 0.01);
    REQUIRE(d.components.size() == 3);
    CHECK(d.negative[2]);
    CHECK_FALSE(d.negative[0]);

    CHECK(dominant({{1.0, 0.001, 0, 1}}).empty());
}

TEST_CASE("reconstruction and period edge cases")
{
    const auto t = std::vector<double>{0.0, 1.0, 2.0};
    CHECK(reconstruct_n_left({}, t) == std::vector<double>{0.5, 0.5, 0.5});
    const std::vector<FrequencyComponent> one{{2.0 * std::numbers::pi, 0.25, 0, 1}};
    CHECK(tunneling_period(one) == doctest::Approx(1.0));
    const auto r = reconstruct_n_left(one, t);
    CHECK(r[0] == doctest::Approx(0.75));
    CHECK(r[1] == doctest::Approx(0.75));
    CHECK_THROWS_AS(tunneling_period({}), UndefinedPeriodError);
}

TEST_CASE("degenerate beats merge")
{
    SpectralDecomposition d;
    d.overlaps = {0.6, 0.6, 0.52915026221291811};
    d.energies = {1.0, 2.0, 3.0};  // 2-1 and 3-2 share omega = 1
    d.captured_norm = 1.0;
    RegionMatrices q;
    q.region_I = Eigen::MatrixXd{{0.5, 0.2, 0.01}, {0.2, 0.5, 0.1}, {0.01, 0.1, 0.5}};
    q.region_II = Eigen::MatrixXd::Zero(3, 3);
    q.region_III = Eigen::MatrixXd::Identity(3, 3) - q.region_I;
    const auto s = frequency_components(d, q);
    REQUIRE(s.components.size() == 2);
    CHECK(s.components[0].omega == doctest::Approx(1.0));
    CHECK(s.components[0].amplitude == doctest::Approx(2 * 0.6 * 0.6 * 0.2 + 2 * 0.6 * 0.52915026221291811 * 0.1));
    CHECK(s.components[1].omega == doctest::Approx(2.0));
}

TEST_CASE("all components reproduce the time series exactly")
{
    SimulationSetup setup;
    setup.potential = dwell::testing::small_well();
    setup.kind = InteractionKind::HardCoulomb;
    setup.mesh_size = 0.5;
    setup.eigenpairs = 60;
    setup.frequency.coefficient_floor = 0.0;
    const Simulator sim(setup);
    const auto q = sim.analyze(0.6);
    const auto times = uniform_times(20000.0, 400);
    const auto ts = evolve_probabilities(q.decomposition, q.regions, times);
    const auto r = reconstruct_n_left(q.spectrum.components, times, q.spectrum.mean);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(r[i] - ts.n_left[i]));
    CHECK(worst < 1e-9);

    double sum = 0.0;
    for (const auto& c : q.spectrum.components) sum += c.amplitude;
    CHECK(q.spectrum.mean + sum == doctest::Approx(ts.n_left[0]).epsilon(1e-9));

    for (std::size_t k = 1; k < q.spectrum.components.size(); ++k) {
        CHECK(std::abs(q.spectrum.components[k].amplitude) <= std::abs(q.spectrum.components[k - 1].amplitude));
        CHECK(q.spectrum.components[k].omega >= 0.0);
    }
}
