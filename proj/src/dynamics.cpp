#include "wqed/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "rk45.hpp"

namespace wqed {

namespace detail {

namespace {

// Dormand-Prince coefficients.  The last row of stage weights doubles as the
// fifth-order solution, so the final stage of an accepted step seeds the first
// stage of the next one.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order solutions.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

double error_norm(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y0,
                  const Eigen::VectorXcd& y1, double rtol, double atol) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = std::abs(err[i]) / scale;
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step(const Eigen::VectorXcd& y, const Eigen::VectorXcd& f0, double span,
                    const Rk45Options& options) {
    double d0 = 0.0;
    double d1 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double scale = options.atol + options.rtol * std::abs(y[i]);
        d0 += std::norm(y[i] / scale);
        d1 += std::norm(f0[i] / scale);
    }
    d0 = std::sqrt(d0 / static_cast<double>(y.size()));
    d1 = std::sqrt(d1 / static_cast<double>(y.size()));
    const double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min({h, span, options.max_step});
}

}  // namespace

void rk45_advance(const Rhs& f, double t0, double t1, Eigen::VectorXcd& y,
                  const Rk45Options& options) {
    if (!(t1 > t0)) throw std::invalid_argument("rk45_advance: t1 must exceed t0");

    double t = t0;
    Eigen::VectorXcd k1 = f(t, y);
    double h = initial_step(y, k1, t1 - t0, options);

    Eigen::VectorXcd k2, k3, k4, k5, k6, k7, y5, err;
    while (t < t1) {
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        const double remaining = t1 - t;
        if (remaining <= floor) break;  // nothing resolvable is left of the interval
        bool hits_end = false;
        if (h >= remaining) {
            h = remaining;
            hits_end = true;
        }
        if (h <= floor) {
            throw IntegrationError("time step underflow during adaptive integration", t);
        }

        k2 = f(t + kC2 * h, y + h * (kA21 * k1));
        k3 = f(t + kC3 * h, y + h * (kA31 * k1 + kA32 * k2));
        k4 = f(t + kC4 * h, y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
        k5 = f(t + kC5 * h, y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
        k6 = f(t + h, y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
        y5 = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
        k7 = f(t + h, y5);
        err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

        const double e = error_norm(err, y, y5, options.rtol, options.atol);
        if (e <= 1.0) {
            // Tolerances below the rounding noise of the error estimate keep
            // the step pinned barely above the floor; that acceptance makes no
            // real progress, so treat it the same as an underflow.
            if (!hits_end && h <= std::max(32.0 * floor, 1e-12 * remaining)) {
                throw IntegrationError("time step underflow during adaptive integration", t);
            }
            t = hits_end ? t1 : t + h;
            y.swap(y5);
            k1.swap(k7);
            const double grow = (e == 0.0) ? 5.0 : std::min(5.0, 0.9 * std::pow(e, -0.2));
            h = std::min(h * grow, options.max_step);
        } else if (std::isfinite(e)) {
            h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
        } else {
            h *= 0.2;  // non-finite estimate: shrink toward the floor and bail out there
        }
    }
}

std::vector<double> interior_breakpoints(const std::vector<double>& first,
                                         const std::vector<double>& second, double lo,
                                         double hi) {
    std::vector<double> pts;
    const double guard = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (const auto* src : {&first, &second}) {
        for (double t : *src) {
            if (t > lo + guard && t < hi - guard) pts.push_back(t);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [guard](double a, double b) { return std::abs(a - b) <= guard; }),
              pts.end());
    return pts;
}

}  // namespace detail

namespace {

Eigen::VectorXd guarded_weights(const EigenmodeSet& modes, const Eigen::VectorXcd& b) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(modes.size());
    double total = 0.0;
    for (int m = 0; m < modes.size(); ++m) {
        if (modes.self_orthogonal[static_cast<std::size_t>(m)]) continue;
        const double overlap = std::norm(modes.modes.col(m).cwiseProduct(b).sum());
        w[m] = overlap;
        total += overlap;
    }
    if (total > 0.0) {
        w /= total;
    } else {
        w.setZero();
    }
    return w;
}

}  // namespace

Trajectory evolve(const AtomArray& atoms, const WaveguideParams& params,
                  const DetuningSchedule& detunings, const DriveSchedule& drive,
                  const PolarizationVector& b0, const Eigen::VectorXd& sample_times,
                  const EigenmodeSet* weight_modes, const EvolveOptions& options) {
    params.validate();
    const int n = atoms.size();
    if (b0.size() != n) {
        throw std::invalid_argument("evolve: initial state size does not match the array");
    }
    if (sample_times.size() < 2) {
        throw std::invalid_argument("evolve: at least two sample times are required");
    }
    for (Eigen::Index s = 1; s < sample_times.size(); ++s) {
        if (!(sample_times[s] > sample_times[s - 1])) {
            throw std::invalid_argument("evolve: sample times must be strictly increasing");
        }
    }
    for (const Eigen::VectorXd& v : detunings.values()) {
        if (v.size() != n) {
            throw std::invalid_argument("evolve: detuning schedule entries must have one value per atom");
        }
    }
    if (weight_modes != nullptr && weight_modes->size() != n) {
        throw std::invalid_argument("evolve: mode set size does not match the array");
    }
    if (!(options.rtol > 0.0) || !(options.atol > 0.0) || !(options.max_step > 0.0)) {
        throw std::invalid_argument("evolve: tolerances and max_step must be positive");
    }

    const Eigen::MatrixXcd radiative = evolution_matrix(
        atoms.with_detunings(Eigen::VectorXd::Zero(n)), params);
    const Eigen::VectorXcd unit_drive = drive_vector(atoms, params, DriveField{Complex(1.0)});

    const detail::Rhs rhs = [&](double t, const Eigen::VectorXcd& b) -> Eigen::VectorXcd {
        Eigen::VectorXcd out = radiative * b;
        const Eigen::VectorXd delta = detunings.value_at(t);
        out.array() += Complex(0.0, 1.0) * delta.array().cast<Complex>() * b.array();
        out += drive.value_at(t) * unit_drive;
        return out;
    };
    const detail::Rk45Options rk{options.rtol, options.atol, options.max_step};

    const Eigen::Index n_samples = sample_times.size();
    Trajectory traj;
    traj.times = sample_times;
    traj.states.resize(n, n_samples);
    traj.total_excitation.resize(n_samples);
    if (weight_modes != nullptr) traj.weights.resize(weight_modes->size(), n_samples);

    Eigen::VectorXcd y = b0;
    auto record = [&](Eigen::Index s) {
        traj.states.col(s) = y;
        traj.total_excitation[s] = total_excitation(y);
        if (weight_modes != nullptr) traj.weights.col(s) = guarded_weights(*weight_modes, y);
    };
    record(0);

    for (Eigen::Index s = 1; s < n_samples; ++s) {
        const double lo = sample_times[s - 1];
        const double hi = sample_times[s];
        double t = lo;
        for (double stop : detail::interior_breakpoints(detunings.times(), drive.times(), lo, hi)) {
            detail::rk45_advance(rhs, t, stop, y, rk);
            t = stop;
        }
        detail::rk45_advance(rhs, t, hi, y, rk);
        record(s);
    }
    return traj;
}

}  // namespace wqed
