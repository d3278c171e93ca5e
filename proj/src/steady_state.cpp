#include "wqed/steady_state.hpp"

#include "wqed/parallel.hpp"

#include <sstream>

namespace wqed {

namespace {

// Guard against rank-deficient systems (dark collective resonances).
constexpr double kRcondFloor = 1e-14;

}  // namespace

PolarizationVector solve_steady(const AtomArray& atoms, const WaveguideParams& params,
                                const DriveField& drive) {
    const Eigen::MatrixXcd a = evolution_matrix(atoms, params);
    const Eigen::VectorXcd f = drive_vector(atoms, params, drive);

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rc = lu.rcond();
    if (!(rc > kRcondFloor)) {
        std::ostringstream msg;
        msg << "solve_steady: steady-state matrix is numerically singular (rcond=" << rc
            << ", n=" << atoms.size() << "); a zero-linewidth collective resonance is being driven";
        throw SingularSystemError(msg.str());
    }
    return lu.solve(-f);
}

Complex total_field(const PolarizationVector& b, const AtomArray& atoms,
                    const WaveguideParams& params, const DriveField& drive, double x) {
    params.validate();
    if (b.size() != atoms.size())
        throw std::invalid_argument("total_field: amplitude vector length must match atom count");
    Complex field = drive.field_at(x, params.k);
    for (int l = 0; l < atoms.size(); ++l)
        field += green_function(x - atoms.positions()[l], params.k) * b[l];
    return field;
}

ScatteringCoefficients scattering_coefficients(const PolarizationVector& b, const AtomArray& atoms,
                                               const WaveguideParams& params,
                                               const DriveField& drive) {
    params.validate();
    if (b.size() != atoms.size())
        throw std::invalid_argument("scattering_coefficients: amplitude vector length must match atom count");
    if (drive.amplitude == Complex(0.0))
        throw std::invalid_argument("scattering_coefficients: drive amplitude must be nonzero");

    const Complex ik(0.0, params.k);
    Complex forward = 0.0;   // sum_l e^{-i k x_l} b_l, radiated with the drive
    Complex backward = 0.0;  // sum_l e^{+i k x_l} b_l, radiated against it
    for (int l = 0; l < atoms.size(); ++l) {
        const Complex phase = std::exp(ik * atoms.positions()[l]);
        forward += b[l] / phase;
        backward += b[l] * phase;
    }
    ScatteringCoefficients out;
    out.t = 1.0 + (ik / (2.0 * drive.amplitude)) * forward;
    out.r = (ik / (2.0 * drive.amplitude)) * backward;
    out.T = std::norm(out.t);
    out.R = std::norm(out.r);
    return out;
}

SpectrumTable spectrum(const AtomArray& atoms, const WaveguideParams& params,
                       const DriveField& drive, const Eigen::VectorXd& grid, int n_threads) {
    params.validate();
    if (grid.size() == 0) throw std::invalid_argument("spectrum: grid must be nonempty");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("spectrum: grid must be strictly increasing");

    SpectrumTable table;
    table.detunings = grid;
    table.rows.resize(static_cast<std::size_t>(grid.size()));

    parallel_for(static_cast<int>(grid.size()), n_threads, [&](int i) {
        const AtomArray shifted = atoms.with_detuning_offset(grid[i]);
        try {
            const PolarizationVector b = solve_steady(shifted, params, drive);
            table.rows[static_cast<std::size_t>(i)] =
                scattering_coefficients(b, shifted, params, drive);
        } catch (const SingularSystemError& e) {
            throw SingularSystemError(std::string(e.what()) + " [grid detuning " +
                                          std::to_string(grid[i]) + "]",
                                      grid[i]);
        }
    });
    return table;
}

}  // namespace wqed
