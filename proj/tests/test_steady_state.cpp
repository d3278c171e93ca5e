#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wqed/steady_state.hpp"

using namespace wqed;
using test_helpers::cdist;

namespace {

ScatteringCoefficients scatter(const AtomArray& atoms, const WaveguideParams& p,
                               const DriveField& drive) {
    return scattering_coefficients(solve_steady(atoms, p, drive), atoms, p, drive);
}

}  // namespace

TEST_CASE("resonant lossless atom extinguishes the beam") {
    const WaveguideParams p{};
    Eigen::VectorXd pos(1);
    pos << 0.3;
    const AtomArray atom(pos);
    const DriveField drive{Complex(1.0, 0.0)};

    const PolarizationVector b = solve_steady(atom, p, drive);
    const Complex expected = polarizability(0.0, p) * drive.field_at(0.3, p.k);
    CHECK(cdist(b[0], expected) < 1e-14);

    // Beyond the atom the scattered wave cancels the incident one.
    CHECK(std::abs(total_field(b, atom, p, drive, 1.2)) < 1e-13);
    CHECK(std::abs(total_field(b, atom, p, drive, 57.0)) < 1e-13);

    const ScatteringCoefficients c = scattering_coefficients(b, atom, p, drive);
    CHECK(c.T < 1e-12);
    CHECK(std::abs(c.R - 1.0) < 1e-12);
}

TEST_CASE("single-atom power coefficients at arbitrary detuning and loss") {
    WaveguideParams p;
    p.gamma_t = 2.0;
    Eigen::VectorXd pos(1);
    pos << -0.7;
    const DriveField drive{Complex(1.0, 0.5)};

    for (const double delta : {-3.0, -0.4, 0.0, 0.7, 5.0}) {
        Eigen::VectorXd det(1);
        det << delta;
        const ScatteringCoefficients c = scatter(AtomArray(pos, det), p, drive);
        const double denom = p.gamma_t * p.gamma_t + delta * delta;
        const double t_expected = ((p.gamma_t - p.gamma_w) * (p.gamma_t - p.gamma_w) + delta * delta) / denom;
        const double r_expected = p.gamma_w * p.gamma_w / denom;
        CHECK(std::abs(c.T - t_expected) < 1e-12);
        CHECK(std::abs(c.R - r_expected) < 1e-12);
    }
}

TEST_CASE("wavelength lattice has equal amplitudes with collective enhancement") {
    WaveguideParams p;
    p.gamma_t = 1.5;
    const int n = 5;
    const AtomArray atoms =
        AtomArray::lattice(LatticeSpec{n, 1.0, 0.0}).with_detuning_offset(0.4);
    const DriveField drive{Complex(0.9, 0.0)};

    const PolarizationVector b = solve_steady(atoms, p, drive);
    const Complex eta = reflection_coefficient(0.4, p);
    const Complex expected =
        polarizability(0.4, p) * drive.amplitude / (1.0 - static_cast<double>(n - 1) * eta);
    for (int j = 0; j < n; ++j) CHECK(cdist(b[j], expected) < 1e-10);
}

TEST_CASE("zero drive") {
    const WaveguideParams p{};
    const AtomArray atoms = AtomArray::lattice(LatticeSpec{3, 0.3, 0.0});
    const DriveField off{Complex(0.0, 0.0)};
    CHECK(solve_steady(atoms, p, off).norm() == 0.0);
    CHECK_THROWS_AS(scattering_coefficients(PolarizationVector::Zero(3), atoms, p, off),
                    std::invalid_argument);

    // b = 0 leaves only the incident plane wave.
    CHECK(cdist(total_field(PolarizationVector::Zero(3), atoms, p, DriveField{1.0}, 0.37),
                std::exp(Complex(0.0, p.k * 0.37))) < 1e-15);
}

TEST_CASE("steady-state residual and energy conservation on random configurations") {
    std::mt19937_64 rng(21);
    const DriveField drive{Complex(1.0, 0.0)};
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);
        const bool lossless = trial % 2 == 0;
        WaveguideParams p;
        if (!lossless) p.gamma_t = 1.0 + 2.0 * std::uniform_real_distribution<double>()(rng);
        const AtomArray atoms(test_helpers::random_positions(rng, n, 2.5),
                              test_helpers::random_detunings(rng, n, 5.0));

        const PolarizationVector b = solve_steady(atoms, p, drive);
        const Eigen::MatrixXcd a = evolution_matrix(atoms, p);
        const Eigen::VectorXcd f = drive_vector(atoms, p, drive);
        const double residual = (a * b + f).norm() / f.norm();
        CHECK(residual < 1e-10);

        const ScatteringCoefficients c = scattering_coefficients(b, atoms, p, drive);
        if (lossless) {
            CHECK(std::abs(c.T + c.R - 1.0) < 1e-10);
        } else {
            CHECK(c.T + c.R < 1.0);
        }
    }
}

TEST_CASE("transmission and reflection are detector independent") {
    WaveguideParams p;
    p.gamma_t = 1.3;
    const DriveField drive{Complex(0.6, 0.2)};
    std::mt19937_64 rng(22);
    const AtomArray atoms(test_helpers::random_positions(rng, 4, 1.5),
                          test_helpers::random_detunings(rng, 4, 2.0));
    const PolarizationVector b = solve_steady(atoms, p, drive);
    const ScatteringCoefficients c = scattering_coefficients(b, atoms, p, drive);

    const auto t_at = [&](double x) {
        return total_field(b, atoms, p, drive, x) / drive.field_at(x, p.k);
    };
    CHECK(cdist(t_at(5.0), t_at(23.7)) < 1e-12);
    CHECK(cdist(t_at(5.0), c.t) < 1e-12);

    const auto r_at = [&](double x) {
        const Complex scattered = total_field(b, atoms, p, drive, x) - drive.field_at(x, p.k);
        return scattered / (drive.amplitude * std::exp(Complex(0.0, -p.k * x)));
    };
    CHECK(cdist(r_at(-4.0), r_at(-19.3)) < 1e-12);
    CHECK(cdist(r_at(-4.0), c.r) < 1e-12);
}

TEST_CASE("spectrum applies the grid as a common offset") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    Eigen::VectorXd pos(3), det(3);
    pos << 0.0, 0.41, 0.77;
    det << 0.3, -0.2, 0.0;  // inhomogeneous shifts survive the scan
    const AtomArray atoms(pos, det);
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(21, -2.0, 2.0);

    const SpectrumTable table = spectrum(atoms, p, drive, grid);
    REQUIRE(static_cast<int>(table.rows.size()) == grid.size());
    CHECK(table.detunings == grid);
    for (int i = 0; i < grid.size(); ++i) {
        const ScatteringCoefficients direct =
            scatter(atoms.with_detuning_offset(grid[i]), p, drive);
        CHECK(cdist(table.rows[static_cast<std::size_t>(i)].t, direct.t) == 0.0);
        CHECK(cdist(table.rows[static_cast<std::size_t>(i)].r, direct.r) == 0.0);
    }

    // Thread count changes the schedule, never the values.
    const SpectrumTable threaded = spectrum(atoms, p, drive, grid, 4);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(cdist(table.rows[i].t, threaded.rows[i].t) == 0.0);
        CHECK(cdist(table.rows[i].r, threaded.rows[i].r) == 0.0);
    }
}

TEST_CASE("spectrum grid validation and singular tagging") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const AtomArray atoms = AtomArray::lattice(LatticeSpec{2, 0.5, 0.0});

    CHECK_THROWS_AS(spectrum(atoms, p, drive, Eigen::VectorXd()), std::invalid_argument);
    Eigen::VectorXd decreasing(2);
    decreasing << 1.0, 0.0;
    CHECK_THROWS_AS(spectrum(atoms, p, drive, decreasing), std::invalid_argument);

    // A lossless half-wave pair driven exactly on resonance is singular: the
    // grid point is reported with the failure.
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
    try {
        spectrum(atoms, p, drive, grid);
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        REQUIRE(e.grid_delta().has_value());
        CHECK(*e.grid_delta() == 0.0);
    }
}

TEST_CASE("weak coupling limit is transparent") {
    WaveguideParams p;
    p.gamma_w = 1e-8;
    p.gamma_t = 1.0;
    const DriveField drive{Complex(1.0, 0.0)};
    const AtomArray atoms = AtomArray::lattice(LatticeSpec{6, 0.37, 0.0});
    for (const double delta : {-1.0, 0.0, 2.0}) {
        const ScatteringCoefficients c = scatter(atoms.with_detuning_offset(delta), p, drive);
        CHECK(std::abs(c.T - 1.0) < 1e-6);
    }
}

TEST_CASE("two-atom Fano peak sits near 0.32 gamma_w") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const AtomArray atoms = AtomArray::lattice(LatticeSpec{2, 0.45, 0.0});

    double best_delta = 0.0;
    double best_t = -1.0;
    for (int i = 0; i <= 4000; ++i) {
        const double delta = -1.0 + 2.0 * i / 4000.0;
        const ScatteringCoefficients c = scatter(atoms.with_detuning_offset(delta), p, drive);
        if (c.T > best_t) {
            best_t = c.T;
            best_delta = delta;
        }
    }
    CHECK(best_delta > 0.30);
    CHECK(best_delta < 0.34);
    CHECK(best_t > 0.999);
}

TEST_CASE("half-wave-multiple configurations collapse onto the wavelength lattice") {
    const WaveguideParams p{};
    const DriveField drive{Complex(1.0, 0.0)};
    const int n = 4;
    const AtomArray reference = AtomArray::lattice(LatticeSpec{n, 1.0, 0.0});

    Eigen::VectorXd pos(n);
    pos << 0.0, 0.5, 2.5, 4.0;  // consecutive gaps: 1, 4, 3 half-waves
    const AtomArray stretched(pos);

    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(40, -4.0, 4.0);
    const SpectrumTable a = spectrum(reference, p, drive, grid);
    const SpectrumTable b = spectrum(stretched, p, drive, grid);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(std::abs(a.rows[i].T - b.rows[i].T) < 1e-12);
        CHECK(std::abs(a.rows[i].R - b.rows[i].R) < 1e-12);
    }
}
