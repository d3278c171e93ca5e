#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wqed/stochastic.hpp"

using namespace wqed;

namespace {

Eigen::VectorXd probe_grid() {
    // 24 points over [-3, 3]; the spacing never lands on zero detuning.
    return Eigen::VectorXd::LinSpaced(24, -3.0, 3.0);
}

}  // namespace

TEST_CASE("lattice depth and ground-band width convert both ways") {
    const double quarter = depth_from_rms(0.25, 1.0 / 32.0);
    CHECK(quarter > 9.5);
    CHECK(quarter < 11.5);

    const double half = depth_from_rms(0.5, 1.0 / 32.0);
    CHECK(half > 160.0);
    CHECK(half < 176.0);

    for (const double spacing : {0.25, 0.5, 1.0}) {
        for (const double rms : {0.003, 1.0 / 32.0, 0.1}) {
            const double depth = depth_from_rms(spacing, rms);
            CHECK(std::abs(rms_from_depth({spacing, depth}) - rms) < 1e-12);
        }
    }

    // Deeper wells pin the atoms ever harder.
    CHECK(rms_from_depth({1.0, 1e12}) < 1e-3);
    CHECK(rms_from_depth({1.0, 16.0}) < rms_from_depth({1.0, 1.0}));

    CHECK_THROWS_AS(rms_from_depth({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(rms_from_depth({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(depth_from_rms(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(depth_from_rms(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("random streams are reproducible and index separated") {
    RngStream a(7, 3);
    RngStream b(7, 3);
    RngStream c(7, 4);

    bool all_equal = true;
    bool any_equal_across = false;
    for (int i = 0; i < 20; ++i) {
        const double va = a.uniform(0.0, 1.0);
        const double vb = b.uniform(0.0, 1.0);
        const double vc = c.uniform(0.0, 1.0);
        all_equal = all_equal && va == vb;
        any_equal_across = any_equal_across || va == vc;
    }
    CHECK(all_equal);
    CHECK(!any_equal_across);
}

TEST_CASE("position sampling per disorder model") {
    const LatticeSpec lattice{5, 0.25, 1.0};
    const Eigen::VectorXd sites = lattice.positions();

    RngStream fixed_stream(1, 0);
    CHECK(sample_positions(FixedPositions{}, lattice, fixed_stream) == sites);

    RngStream zero_stream(1, 0);
    CHECK(sample_positions(GaussianSites{0.0}, lattice, zero_stream) == sites);

    // Law of large numbers on the site displacements.
    const double rms = 0.02;
    RngStream gauss_stream(1, 0);
    double sum = 0.0;
    const int n_draws = 20000;
    for (int i = 0; i < n_draws; ++i) {
        const Eigen::VectorXd x = sample_positions(GaussianSites{rms}, lattice, gauss_stream);
        sum += (x - sites).sum() / static_cast<double>(sites.size());
    }
    const double mean_displacement = sum / n_draws;
    CHECK(std::abs(mean_displacement) <
          5.0 * rms / std::sqrt(double(n_draws) * sites.size()));

    RngStream uniform_stream(1, 0);
    for (int i = 0; i < 50; ++i) {
        const Eigen::VectorXd x = sample_positions(UniformInterval{2.0}, lattice, uniform_stream);
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            CHECK(x[j] >= 1.0);
            CHECK(x[j] <= 3.0);
            if (j > 0) CHECK(x[j] >= x[j - 1]);
        }
    }

    RngStream bad(1, 0);
    CHECK_THROWS_AS(sample_positions(GaussianSites{-0.1}, lattice, bad), std::invalid_argument);
    CHECK_THROWS_AS(sample_positions(UniformInterval{0.0}, lattice, bad), std::invalid_argument);
}

TEST_CASE("pinned ensemble reproduces the deterministic spectrum") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const LatticeSpec lattice{8, 0.25, 0.0};
    const Eigen::VectorXd grid = probe_grid();

    const EnsembleResult r =
        ensemble_spectrum(FixedPositions{}, lattice, p, drive, grid, 5, 123);
    const SpectrumTable direct = spectrum(AtomArray::lattice(lattice), p, drive, grid);

    REQUIRE(r.mean_T.size() == grid.size());
    CHECK(r.n_failed == 0);
    CHECK(r.seed == 123);
    for (int i = 0; i < grid.size(); ++i) {
        CHECK(r.mean_T[i] == direct.rows[static_cast<std::size_t>(i)].T);
        CHECK(r.stderr_T[i] == 0.0);
        CHECK(std::abs(r.mean_coherent_T[i] - r.mean_T[i]) < 1e-15);
    }
}

TEST_CASE("vanishing disorder converges to the pinned lattice") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const LatticeSpec lattice{8, 0.25, 0.0};
    const Eigen::VectorXd grid = probe_grid();

    const EnsembleResult tiny =
        ensemble_spectrum(GaussianSites{1e-6}, lattice, p, drive, grid, 100, 9);
    const EnsembleResult pinned =
        ensemble_spectrum(FixedPositions{}, lattice, p, drive, grid, 1, 9);
    CHECK((tiny.mean_T - pinned.mean_T).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("thread count never changes ensemble values") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const LatticeSpec lattice{8, 0.25, 0.0};
    const Eigen::VectorXd grid = probe_grid();

    const EnsembleResult serial =
        ensemble_spectrum(GaussianSites{1.0 / 16.0}, lattice, p, drive, grid, 64, 77, 1);
    const EnsembleResult threaded =
        ensemble_spectrum(GaussianSites{1.0 / 16.0}, lattice, p, drive, grid, 64, 77, 4);

    CHECK(serial.mean_T == threaded.mean_T);
    CHECK(serial.stderr_T == threaded.stderr_T);
    CHECK(serial.mean_coherent_T == threaded.mean_coherent_T);
    CHECK(serial.n_failed == threaded.n_failed);
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const LatticeSpec lattice{8, 0.25, 0.0};
    const Eigen::VectorXd grid = probe_grid();

    const EnsembleResult small =
        ensemble_spectrum(GaussianSites{1.0 / 16.0}, lattice, p, drive, grid, 100, 5);
    const EnsembleResult large =
        ensemble_spectrum(GaussianSites{1.0 / 16.0}, lattice, p, drive, grid, 400, 5);

    const double ratio = small.stderr_T.mean() / large.stderr_T.mean();
    CHECK(ratio > 1.4);
    CHECK(ratio < 2.8);

    const EnsembleResult lone =
        ensemble_spectrum(GaussianSites{1.0 / 16.0}, lattice, p, drive, grid, 1, 5);
    CHECK(lone.stderr_T.maxCoeff() == 0.0);
}

TEST_CASE("incoherent average dominates the coherent one") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const EnsembleResult r = ensemble_spectrum(
        UniformInterval{2.0}, LatticeSpec{8, 0.25, 0.0}, p, drive, probe_grid(), 200, 31);
    for (int i = 0; i < r.mean_T.size(); ++i)
        CHECK(r.mean_coherent_T[i] <= r.mean_T[i] + 1e-12);
}

TEST_CASE("an ensemble whose every solve is singular reports the failure") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);  // contains 0
    CHECK_THROWS_AS(ensemble_spectrum(FixedPositions{}, LatticeSpec{2, 0.5, 0.0}, p, drive,
                                      grid, 4, 11),
                    std::runtime_error);
}

TEST_CASE("stronger disorder washes out the collective window") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const LatticeSpec lattice{8, 0.25, 0.0};
    const Eigen::VectorXd grid = probe_grid();

    const auto window_mean = [&](const PositionModel& model) {
        return ensemble_spectrum(model, lattice, p, drive, grid, 100, 4).mean_T.mean();
    };

    const double pinned = window_mean(FixedPositions{});
    const double weak = window_mean(GaussianSites{1.0 / 32.0});
    const double uniform = window_mean(UniformInterval{2.0});
    CHECK(pinned > weak);
    CHECK(weak > uniform);
}
