#include "wqed/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/parallel.hpp"

namespace wqed {

namespace {

constexpr double kRootTwoPi = 4.442882938158366;  // sqrt(2) * pi

// splitmix64 output at position index+1 of the sequence seeded with `seed`.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

void LatticeDepthSpec::validate() const {
    if (!(spacing > 0.0)) throw std::invalid_argument("LatticeDepthSpec: spacing must be > 0");
    if (!(depth > 0.0)) throw std::invalid_argument("LatticeDepthSpec: depth must be > 0");
}

double rms_from_depth(const LatticeDepthSpec& spec) {
    spec.validate();
    return spec.spacing * std::pow(spec.depth, -0.25) / kRootTwoPi;
}

double depth_from_rms(double spacing, double rms) {
    if (!(spacing > 0.0)) throw std::invalid_argument("depth_from_rms: spacing must be > 0");
    if (!(rms > 0.0)) throw std::invalid_argument("depth_from_rms: rms must be > 0");
    const double ratio = spacing / (kRootTwoPi * rms);
    return ratio * ratio * ratio * ratio;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(derive_stream_seed(seed, stream_index)) {}

double RngStream::normal(double mean, double stddev) {
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
}

double RngStream::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(engine_);
}

Eigen::VectorXd sample_positions(const PositionModel& model, const LatticeSpec& lattice,
                                 RngStream& stream) {
    lattice.validate();
    const Eigen::VectorXd sites = lattice.positions();
    return std::visit(
        [&](const auto& m) -> Eigen::VectorXd {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, FixedPositions>) {
                return sites;
            } else if constexpr (std::is_same_v<M, GaussianSites>) {
                if (!(m.rms >= 0.0)) {
                    throw std::invalid_argument("GaussianSites: rms must be >= 0");
                }
                if (m.rms == 0.0) return sites;
                Eigen::VectorXd x(sites.size());
                for (Eigen::Index j = 0; j < sites.size(); ++j) {
                    x[j] = stream.normal(sites[j], m.rms);
                }
                return x;
            } else {
                static_assert(std::is_same_v<M, UniformInterval>);
                if (!(m.length > 0.0)) {
                    throw std::invalid_argument("UniformInterval: length must be > 0");
                }
                Eigen::VectorXd x(sites.size());
                for (Eigen::Index j = 0; j < sites.size(); ++j) {
                    x[j] = stream.uniform(lattice.origin, lattice.origin + m.length);
                }
                std::sort(x.begin(), x.end());
                return x;
            }
        },
        model);
}

EnsembleResult ensemble_spectrum(const PositionModel& model, const LatticeSpec& lattice,
                                 const WaveguideParams& params, const DriveField& drive,
                                 const Eigen::VectorXd& grid, int n_realizations,
                                 std::uint64_t seed, int n_threads) {
    params.validate();
    lattice.validate();
    if (n_realizations < 1) {
        throw std::invalid_argument("ensemble_spectrum: n_realizations must be >= 1");
    }
    if (grid.size() == 0) {
        throw std::invalid_argument("ensemble_spectrum: detuning grid must be nonempty");
    }

    struct Realization {
        bool ok{false};
        Eigen::VectorXd intensity;
        Eigen::VectorXcd amplitude;
    };
    std::vector<Realization> draws(static_cast<std::size_t>(n_realizations));

    parallel_for(n_realizations, n_threads, [&](int r) {
        RngStream stream(seed, static_cast<std::uint64_t>(r));
        const Eigen::VectorXd positions = sample_positions(model, lattice, stream);
        const AtomArray atoms(positions, Eigen::VectorXd::Zero(positions.size()));
        Realization& slot = draws[static_cast<std::size_t>(r)];
        try {
            const SpectrumTable table = spectrum(atoms, params, drive, grid);
            slot.intensity.resize(grid.size());
            slot.amplitude.resize(grid.size());
            for (Eigen::Index i = 0; i < grid.size(); ++i) {
                slot.intensity[i] = table.rows[static_cast<std::size_t>(i)].T;
                slot.amplitude[i] = table.rows[static_cast<std::size_t>(i)].t;
            }
            slot.ok = true;
        } catch (const SingularSystemError&) {
            slot.ok = false;
        }
    });

    int n_ok = 0;
    for (const Realization& d : draws) {
        if (d.ok) ++n_ok;
    }
    if (n_ok == 0) {
        throw std::runtime_error("ensemble_spectrum: every realization hit a singular solve");
    }

    EnsembleResult out;
    out.detunings = grid;
    out.n_realizations = n_realizations;
    out.n_failed = n_realizations - n_ok;
    out.seed = seed;
    out.mean_T = Eigen::VectorXd::Zero(grid.size());
    out.stderr_T = Eigen::VectorXd::Zero(grid.size());
    out.mean_coherent_T = Eigen::VectorXd::Zero(grid.size());

    // Running (Welford) moments, accumulated in realization-index order so the
    // result is independent of the parallel schedule.  The running form keeps
    // the pinned-position case exact: identical draws leave the mean untouched
    // and contribute exactly zero spread.
    Eigen::VectorXcd mean_amplitude = Eigen::VectorXcd::Zero(grid.size());
    Eigen::VectorXd spread = Eigen::VectorXd::Zero(grid.size());
    int k = 0;
    for (const Realization& d : draws) {
        if (!d.ok) continue;
        ++k;
        const Eigen::VectorXd delta = d.intensity - out.mean_T;
        out.mean_T += delta / static_cast<double>(k);
        spread += delta.cwiseProduct(d.intensity - out.mean_T);
        mean_amplitude += (d.amplitude - mean_amplitude) / static_cast<double>(k);
    }
    out.mean_coherent_T = mean_amplitude.cwiseAbs2();

    if (n_ok > 1) {
        out.stderr_T =
            (spread.cwiseMax(0.0) /
             (static_cast<double>(n_ok) * static_cast<double>(n_ok - 1)))
                .cwiseSqrt();
    }
    return out;
}

}  // namespace wqed
