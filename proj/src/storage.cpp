#include "wqed/storage.hpp"

#include <cmath>
#include <limits>

#include "rk45.hpp"
#include "wqed/steady_state.hpp"

namespace wqed {

void StorageConfig::validate() const {
    if (n_atoms < 2) throw std::invalid_argument("StorageConfig: n_atoms must be >= 2");
    if (!(switch_time > 0.0)) throw std::invalid_argument("StorageConfig: switch_time must be > 0");
    if (!(ramp_duration >= 0.0)) {
        throw std::invalid_argument("StorageConfig: ramp_duration must be >= 0");
    }
    if (!(horizon > switch_time + ramp_duration)) {
        throw std::invalid_argument("StorageConfig: horizon must exceed switch_time + ramp_duration");
    }
    if (n_samples < 2) throw std::invalid_argument("StorageConfig: n_samples must be >= 2");
    if (!std::isfinite(drive_amplitude.real()) || !std::isfinite(drive_amplitude.imag())) {
        throw std::invalid_argument("StorageConfig: drive_amplitude must be finite");
    }
}

double check_inverse_sum(const Eigen::VectorXd& detunings, const WaveguideParams& params) {
    params.validate();
    if (detunings.size() == 0) {
        throw std::invalid_argument("check_inverse_sum: at least one detuning is required");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < detunings.size(); ++i) {
        if (detunings[i] == 0.0) {
            throw std::invalid_argument("check_inverse_sum: detunings must be nonzero");
        }
        sum += params.gamma_w / detunings[i];
    }
    return sum;
}

namespace {

double ramp_end(const StorageConfig& config) {
    return config.ramp_duration > 0.0
               ? config.switch_time + config.ramp_duration
               : std::nextafter(config.switch_time, std::numeric_limits<double>::infinity());
}

Eigen::VectorXd phase1_detunings(const StorageConfig& config, const WaveguideParams& params) {
    Eigen::VectorXd d =
        Eigen::VectorXd::Constant(config.n_atoms, config.rest_detuning * params.gamma_w);
    d[0] = config.first_detuning * params.gamma_w;
    return d;
}

DriveSchedule drive_schedule(const StorageConfig& config) {
    return DriveSchedule({config.switch_time, ramp_end(config)},
                         {config.drive_amplitude, Complex(0.0)});
}

Trajectory run_protocol(const StorageConfig& config, const WaveguideParams& params,
                        bool resonant_comparison) {
    config.validate();
    params.validate();
    const int n = config.n_atoms;
    const AtomArray atoms = AtomArray::lattice(LatticeSpec{n, params.wavelength(), 0.0});

    DetuningSchedule detunings =
        resonant_comparison
            ? DetuningSchedule::constant(Eigen::VectorXd::Zero(n))
            : DetuningSchedule({config.switch_time, ramp_end(config)},
                               {phase1_detunings(config, params), Eigen::VectorXd::Zero(n)});
    const DriveSchedule drive = drive_schedule(config);

    PolarizationVector b0 = PolarizationVector::Zero(n);
    if (config.start_from_steady && !resonant_comparison) {
        b0 = solve_steady(atoms.with_detunings(phase1_detunings(config, params)), params,
                          DriveField{config.drive_amplitude});
    }

    const Eigen::VectorXd samples =
        Eigen::VectorXd::LinSpaced(config.n_samples, 0.0, config.horizon);
    const EigenmodeSet modes = canonical_wavelength_modeset(n, params);
    return evolve(atoms, params, detunings, drive, b0, samples, &modes, config.integrator);
}

}  // namespace

Trajectory run_storage_protocol(const StorageConfig& config, const WaveguideParams& params) {
    return run_protocol(config, params, false);
}

Trajectory run_resonant_comparison(const StorageConfig& config, const WaveguideParams& params) {
    // Always starts from the vacuum: with every atom resonant the dark modes
    // are undriven and undamped, so no unique steady state exists to start
    // from.  The bright amplitude is within exp(-upsilon1 t_s) of its steady
    // value by the switch time anyway.
    return run_protocol(config, params, true);
}

TwoModeParams TwoModeParams::lattice_defaults(const WaveguideParams& params) {
    params.validate();
    return TwoModeParams{params.gamma_t + 3.0 * params.gamma_w,
                         -4.0 * params.gamma_w / 3.0,
                         -2.0 * params.gamma_w / std::sqrt(3.0),
                         0.0};
}

namespace {

Complex bright_drive(const WaveguideParams& params, Complex amplitude) {
    return Complex(0.0, 4.0 * params.gamma_w / params.k) * amplitude;
}

}  // namespace

TwoModeTrajectory two_mode_evolve(const TwoModeParams& model, const WaveguideParams& params,
                                  const DriveSchedule& drive,
                                  const Eigen::VectorXd& sample_times,
                                  const TwoModeState& initial, const EvolveOptions& options) {
    params.validate();
    if (sample_times.size() < 1) {
        throw std::invalid_argument("two_mode_evolve: at least one sample time is required");
    }
    for (Eigen::Index s = 1; s < sample_times.size(); ++s) {
        if (!(sample_times[s] > sample_times[s - 1])) {
            throw std::invalid_argument("two_mode_evolve: sample times must be strictly increasing");
        }
    }

    const Complex bright_coef(-model.upsilon1, model.delta + model.delta_prime);
    const Complex coupling(0.0, model.kappa);
    const Complex dark_coef(0.0, model.delta);
    const detail::Rhs rhs = [&](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        Eigen::VectorXcd out(2);
        out[0] = bright_coef * y[0] + coupling * y[1] + bright_drive(params, drive.value_at(t));
        out[1] = dark_coef * y[1] + coupling * y[0];
        return out;
    };
    const detail::Rk45Options rk{options.rtol, options.atol, options.max_step};

    const Eigen::Index n_samples = sample_times.size();
    TwoModeTrajectory traj;
    traj.times = sample_times;
    traj.c1.resize(n_samples);
    traj.cprime.resize(n_samples);

    Eigen::VectorXcd y(2);
    y << initial.c1, initial.cprime;
    traj.c1[0] = y[0];
    traj.cprime[0] = y[1];

    static const std::vector<double> kNoTimes;
    for (Eigen::Index s = 1; s < n_samples; ++s) {
        const double lo = sample_times[s - 1];
        const double hi = sample_times[s];
        double t = lo;
        for (double stop : detail::interior_breakpoints(drive.times(), kNoTimes, lo, hi)) {
            detail::rk45_advance(rhs, t, stop, y, rk);
            t = stop;
        }
        detail::rk45_advance(rhs, t, hi, y, rk);
        traj.c1[s] = y[0];
        traj.cprime[s] = y[1];
    }
    return traj;
}

TwoModeState two_mode_steady(const TwoModeParams& model, const WaveguideParams& params,
                             Complex drive_amplitude) {
    params.validate();
    const Complex m00(-model.upsilon1, model.delta + model.delta_prime);
    const Complex m01(0.0, model.kappa);
    const Complex m11(0.0, model.delta);
    const Complex det = m00 * m11 - m01 * m01;
    const double scale =
        std::max({std::abs(m00) * std::abs(m11), std::abs(m01) * std::abs(m01), 1e-300});
    if (std::abs(det) < 1e-14 * scale) {
        throw std::runtime_error("two_mode_steady: the reduced system has no unique steady state");
    }
    const Complex f = bright_drive(params, drive_amplitude);
    TwoModeState out;
    out.c1 = -f * m11 / det;
    out.cprime = f * m01 / det;
    return out;
}

TwoModeState project_two_mode(const PolarizationVector& b, const EigenmodeSet& modes) {
    if (modes.size() != 4 || b.size() != 4) {
        throw std::invalid_argument("project_two_mode: a four-atom state and mode set are required");
    }
    const Eigen::VectorXcd bright = modes.modes.col(0);
    Eigen::VectorXcd dark = modes.modes.col(1) + modes.modes.col(2) + modes.modes.col(3);
    dark /= dark.norm();
    TwoModeState out;
    out.c1 = bright.cwiseProduct(b).sum();
    out.cprime = dark.cwiseProduct(b).sum();
    return out;
}

}  // namespace wqed
