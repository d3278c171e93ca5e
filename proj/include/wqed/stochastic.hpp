#pragma once

// Positional disorder models and seeded ensemble-averaged spectra.
//
// Reproducibility contract: every realization draws from its own RNG stream,
// derived from (seed, realization index) alone, and the cross-realization
// reduction runs in fixed index order.  Results are therefore bit-identical
// for a given seed regardless of thread count or scheduling.

#include <cstdint>
#include <random>
#include <variant>

#include "wqed/core.hpp"
#include "wqed/steady_state.hpp"

namespace wqed {

// Atom positions pinned exactly at the lattice sites.
struct FixedPositions {};

// Independent Gaussian displacement of each atom about its site, with rms
// width `rms`.  Unbounded: draws are not truncated to the site's unit cell.
struct GaussianSites {
    double rms{0.0};
};

// All atoms drawn independently and uniformly over [origin, origin + length],
// then sorted.
struct UniformInterval {
    double length{1.0};
};

using PositionModel = std::variant<FixedPositions, GaussianSites, UniformInterval>;

// Optical-lattice depth in recoil-energy units together with the site spacing.
struct LatticeDepthSpec {
    double spacing{1.0};
    double depth{1.0};

    void validate() const;
};

// Ground-band Gaussian rms width of a site at the given depth:
//   rms = spacing * depth^(-1/4) / (sqrt(2) * pi)
double rms_from_depth(const LatticeDepthSpec& spec);

// Inverse of rms_from_depth: the depth whose ground-band width equals `rms`.
double depth_from_rms(double spacing, double rms);

// Deterministic per-realization random stream.  Two streams with different
// indices derived from the same seed are statistically independent.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    double normal(double mean, double stddev);
    double uniform(double lo, double hi);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// One position draw for the whole array.  Gaussian draws are made site by
// site in lattice order; uniform draws are sorted before returning.
Eigen::VectorXd sample_positions(const PositionModel& model, const LatticeSpec& lattice,
                                 RngStream& stream);

struct EnsembleResult {
    Eigen::VectorXd detunings;

    // Per-grid-point mean and standard error of |t|^2 across realizations.
    Eigen::VectorXd mean_T;
    Eigen::VectorXd stderr_T;

    // |mean of t|^2: the coherently averaged amplitude's intensity.
    Eigen::VectorXd mean_coherent_T;

    int n_realizations{0};  // requested count
    int n_failed{0};        // realizations dropped due to singular solves
    std::uint64_t seed{0};
};

// Ensemble-averaged transmission spectrum.  Each realization samples one set
// of positions, solves the steady state over the whole grid, and contributes
// |t|^2 and t per point.  A realization whose solve hits a zero-linewidth
// resonance is dropped from the averages and counted in n_failed; if every
// realization fails a std::runtime_error is thrown.
EnsembleResult ensemble_spectrum(const PositionModel& model, const LatticeSpec& lattice,
                                 const WaveguideParams& params, const DriveField& drive,
                                 const Eigen::VectorXd& grid, int n_realizations,
                                 std::uint64_t seed, int n_threads = 1);

}  // namespace wqed
