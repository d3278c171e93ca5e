#pragma once

// Internal adaptive Dormand-Prince 5(4) stepper shared by the dynamics and
// storage translation-unit implementations.  Advances a complex state vector
// across one smooth segment; callers are responsible for splitting the time
// axis at schedule breakpoints and sample times.

#include <functional>

#include "wqed/core.hpp"

namespace wqed::detail {

using Rhs = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

struct Rk45Options {
    double rtol;
    double atol;
    double max_step;
};

// Advances y from t0 to t1 (t1 > t0), landing on t1 exactly.  Throws
// IntegrationError if the step size underflows.
void rk45_advance(const Rhs& f, double t0, double t1, Eigen::VectorXcd& y,
                  const Rk45Options& options);

// Schedule breakpoints from either list that fall strictly inside (lo, hi),
// sorted and deduplicated.
std::vector<double> interior_breakpoints(const std::vector<double>& first,
                                         const std::vector<double>& second, double lo,
                                         double hi);

}  // namespace wqed::detail
