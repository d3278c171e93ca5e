#pragma once

// Steady-state coupled-dipole solution and the derived transmission /
// reflection coefficients of the driven chain.

#include "wqed/core.hpp"

#include <optional>

namespace wqed {

struct ScatteringCoefficients {
    Complex t{1.0};
    Complex r{0.0};
    double T{1.0};
    double R{0.0};
};

struct SpectrumTable {
    Eigen::VectorXd detunings;               // common detuning offset, units of gamma_w
    std::vector<ScatteringCoefficients> rows;
};

// Raised when the steady-state matrix is numerically singular.  This can
// happen only on exact zero-linewidth collective resonances; the solver
// reports instead of regularizing.  When raised from a spectrum scan the
// offending grid detuning is attached.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what, std::optional<double> grid_delta = {})
        : std::runtime_error(what), grid_delta_(grid_delta) {}
    std::optional<double> grid_delta() const { return grid_delta_; }

private:
    std::optional<double> grid_delta_;
};

// Stationary dipole amplitudes solving A b + F = 0 (dense LU with partial
// pivoting).
PolarizationVector solve_steady(const AtomArray& atoms, const WaveguideParams& params,
                                const DriveField& drive);

// eps0 * E+(x): incident plane wave plus the waves radiated by every dipole.
Complex total_field(const PolarizationVector& b, const AtomArray& atoms,
                    const WaveguideParams& params, const DriveField& drive, double x);

// t, r extracted from the asymptotic field on either side of the chain
// (free-propagation phase stripped, so an empty chain gives t = 1).
ScatteringCoefficients scattering_coefficients(const PolarizationVector& b, const AtomArray& atoms,
                                               const WaveguideParams& params,
                                               const DriveField& drive);

// Scan of a common detuning offset added to every atom's stored detuning.
// Grid must be strictly increasing.  Rows are in grid order and bitwise
// independent of n_threads.
SpectrumTable spectrum(const AtomArray& atoms, const WaveguideParams& params,
                       const DriveField& drive, const Eigen::VectorXd& grid, int n_threads = 1);

}  // namespace wqed
