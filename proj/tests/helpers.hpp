#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "wqed/core.hpp"

namespace test_helpers {

inline double cdist(wqed::Complex a, wqed::Complex b) { return std::abs(a - b); }

// Random sorted positions over [0, span) wavelengths.
inline Eigen::VectorXd random_positions(std::mt19937_64& rng, int n, double span) {
    std::uniform_real_distribution<double> u(0.0, span);
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x[j] = u(rng);
    std::sort(x.data(), x.data() + n);
    return x;
}

inline Eigen::VectorXd random_detunings(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::VectorXd d(n);
    for (int j = 0; j < n; ++j) d[j] = u(rng);
    return d;
}

// Loss ratio gamma_w/gamma_t drawn from [lo, 1]; gamma_w is the unit.
inline wqed::WaveguideParams random_params(std::mt19937_64& rng, double lo = 0.05) {
    std::uniform_real_distribution<double> u(lo, 1.0);
    wqed::WaveguideParams p;
    p.gamma_t = 1.0 / u(rng);
    return p;
}

}  // namespace test_helpers
