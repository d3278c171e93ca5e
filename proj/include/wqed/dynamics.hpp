#pragma once

// Time-dependent integration of the driven coupled-dipole equations.
//
// The polarization vector obeys a linear system whose diagonal detunings and
// drive amplitude may vary in time, given as piecewise-linear schedules with
// constant extrapolation beyond the first and last breakpoints.  Integration
// uses an adaptive embedded Runge-Kutta pair that steps exactly onto every
// requested sample time and every schedule breakpoint, so recorded states are
// true solution values rather than interpolants.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wqed/core.hpp"
#include "wqed/eigenmodes.hpp"

namespace wqed {

// Piecewise-linear function of time.  Values at the breakpoints are taken
// exactly; between breakpoints the value is linearly interpolated; outside the
// breakpoint range it is held constant at the nearest endpoint value.
template <typename T>
class PiecewiseLinear {
public:
    PiecewiseLinear(std::vector<double> times, std::vector<T> values)
        : times_(std::move(times)), values_(std::move(values)) {
        if (times_.empty()) {
            throw std::invalid_argument("PiecewiseLinear: at least one breakpoint is required");
        }
        if (times_.size() != values_.size()) {
            throw std::invalid_argument("PiecewiseLinear: times and values differ in length");
        }
        for (std::size_t i = 1; i < times_.size(); ++i) {
            if (!(times_[i] > times_[i - 1])) {
                throw std::invalid_argument(
                    "PiecewiseLinear: breakpoint times must be strictly increasing");
            }
        }
    }

    static PiecewiseLinear constant(T value) {
        return PiecewiseLinear({0.0}, {std::move(value)});
    }

    T value_at(double t) const {
        if (t <= times_.front()) return values_.front();
        if (t >= times_.back()) return values_.back();
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
        const std::size_t lo = hi - 1;
        const double theta = (t - times_[lo]) / (times_[hi] - times_[lo]);
        return values_[lo] + theta * (values_[hi] - values_[lo]);
    }

    const std::vector<double>& times() const { return times_; }
    const std::vector<T>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<T> values_;
};

// Per-atom detunings and drive amplitude as functions of time.
using DetuningSchedule = PiecewiseLinear<Eigen::VectorXd>;
using DriveSchedule = PiecewiseLinear<Complex>;

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

struct EvolveOptions {
    double rtol{1e-10};
    double atol{1e-14};
    double max_step{std::numeric_limits<double>::infinity()};
};

struct Trajectory {
    Eigen::VectorXd times;

    // Column s holds the polarization vector at times[s].
    Eigen::MatrixXcd states;

    // Squared norm of each recorded state.
    Eigen::VectorXd total_excitation;

    // Mode weights per sample (one column per sample), present only when an
    // EigenmodeSet was supplied to evolve.  A vanishing state yields an
    // all-zero column.
    Eigen::MatrixXd weights;
};

// Integrates the polarization from sample_times.front() to sample_times.back()
// starting at b0, recording the state at every sample time.  The schedules
// supply the full time dependence: the detunings stored in `atoms` are not
// consulted, only its geometry.  When `weight_modes` is non-null the overlap
// weights of each recorded state with those modes are stored in the result.
Trajectory evolve(const AtomArray& atoms, const WaveguideParams& params,
                  const DetuningSchedule& detunings, const DriveSchedule& drive,
                  const PolarizationVector& b0, const Eigen::VectorXd& sample_times,
                  const EigenmodeSet* weight_modes = nullptr,
                  const EvolveOptions& options = {});

}  // namespace wqed
