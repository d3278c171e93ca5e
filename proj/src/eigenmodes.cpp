#include "wqed/eigenmodes.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wqed {

namespace {

constexpr double kClusterTol = 1e-8;          // spectral gap below which modes are grouped
constexpr double kSelfOrthogonalTol = 1e-8;   // |v^T v| below this (unit Euclidean v) is flagged
constexpr double kSeedNormTol = 1e-6;         // projected seed shorter than this is discarded

Complex bilinear(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.cwiseProduct(b).sum();
}

int largest_entry(const Eigen::VectorXcd& v) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > best) {
            best = mag;
            imax = i;
        }
    }
    return imax;
}

// Bilinear normalization leaves an overall +-1 free; pick the sign that makes
// the largest entry's real part positive.
void fix_sign(Eigen::VectorXcd& v) {
    const Complex z = v[largest_entry(v)];
    if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) v = -v;
}

// Self-orthogonal vectors keep unit Euclidean norm, which leaves a full phase
// free; rotate the largest entry onto the positive real axis.
void fix_phase(Eigen::VectorXcd& v) {
    const Complex z = v[largest_entry(v)];
    const double mag = std::abs(z);
    if (mag > 0.0) v *= mag / z;
}

// Re-bases the modes in columns [start, stop) of `set`, which share one
// (near-)degenerate eigenvalue.  The subspace is kept; the basis inside it is
// rebuilt from coordinate-axis seeds so the output does not depend on the
// arbitrary degenerate basis the eigensolver happened to return.
void rebase_cluster(EigenmodeSet& set, int start, int stop) {
    const int n = static_cast<int>(set.modes.rows());
    const int m = stop - start;

    if (m == 1) {
        Eigen::VectorXcd v = set.modes.col(start);
        const Complex c = bilinear(v, v);
        if (std::abs(c) < kSelfOrthogonalTol) {
            set.self_orthogonal[static_cast<std::size_t>(start)] = true;
            fix_phase(v);
        } else {
            v /= std::sqrt(c);
            fix_sign(v);
        }
        set.modes.col(start) = v;
        return;
    }

    const Complex mean = set.eigenvalues.segment(start, m).mean();
    for (int j = start; j < stop; ++j) set.eigenvalues[j] = mean;

    // Euclidean projector onto the cluster subspace.
    Eigen::MatrixXcd block = set.modes.middleCols(start, m);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
    Eigen::MatrixXcd thin_q = Eigen::MatrixXcd::Identity(n, m);
    thin_q = qr.householderQ() * thin_q;

    std::vector<Eigen::VectorXcd> accepted;
    std::vector<bool> accepted_flagged;
    accepted.reserve(static_cast<std::size_t>(m));

    auto orthogonalize = [&](Eigen::VectorXcd& w) {
        for (std::size_t i = 0; i < accepted.size(); ++i) {
            if (accepted_flagged[i]) {
                w -= accepted[i].dot(w) * accepted[i];
            } else {
                w -= bilinear(accepted[i], w) * accepted[i];
            }
        }
    };

    // First pass: coordinate-axis seeds in index order.
    for (int i = 0; i < n && static_cast<int>(accepted.size()) < m; ++i) {
        Eigen::VectorXcd w = thin_q * thin_q.row(i).adjoint();
        orthogonalize(w);
        if (w.norm() < kSeedNormTol) continue;
        const Complex c = bilinear(w, w);
        if (std::abs(c) < kSelfOrthogonalTol * w.squaredNorm()) continue;
        w /= std::sqrt(c);
        fix_sign(w);
        accepted.push_back(std::move(w));
        accepted_flagged.push_back(false);
    }

    // Fallback for subspaces the axis seeds cannot span with well-conditioned
    // bilinear norms: reuse the solver's own columns, flagging any direction
    // that stays self-orthogonal.
    for (int j = 0; j < m && static_cast<int>(accepted.size()) < m; ++j) {
        Eigen::VectorXcd w = block.col(j);
        orthogonalize(w);
        if (w.norm() < kSeedNormTol) continue;
        const Complex c = bilinear(w, w);
        if (std::abs(c) < kSelfOrthogonalTol * w.squaredNorm()) {
            w.normalize();
            fix_phase(w);
            accepted.push_back(std::move(w));
            accepted_flagged.push_back(true);
        } else {
            w /= std::sqrt(c);
            fix_sign(w);
            accepted.push_back(std::move(w));
            accepted_flagged.push_back(false);
        }
    }

    if (static_cast<int>(accepted.size()) < m) {
        throw std::runtime_error(
            "decompose: could not build a deterministic basis for a degenerate eigenvalue cluster");
    }

    for (int j = 0; j < m; ++j) {
        set.modes.col(start + j) = accepted[static_cast<std::size_t>(j)];
        set.self_orthogonal[static_cast<std::size_t>(start + j)] =
            accepted_flagged[static_cast<std::size_t>(j)];
    }
}

}  // namespace

EigenmodeSet decompose(const AtomArray& atoms, const WaveguideParams& params) {
    params.validate();
    const int n = atoms.size();
    const AtomArray quiet = atoms.with_detunings(Eigen::VectorXd::Zero(n));
    const Eigen::MatrixXcd a = evolution_matrix(quiet, params);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("decompose: eigenvalue iteration did not converge");
    }
    const Eigen::VectorXcd lam = solver.eigenvalues();
    const Eigen::MatrixXcd vec = solver.eigenvectors();

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const double ui = -lam[i].real();
        const double uj = -lam[j].real();
        if (ui != uj) return ui > uj;
        if (lam[i].imag() != lam[j].imag()) return lam[i].imag() < lam[j].imag();
        return i < j;
    });

    EigenmodeSet out;
    out.eigenvalues.resize(n);
    out.modes.resize(n, n);
    out.self_orthogonal.assign(static_cast<std::size_t>(n), false);
    for (int c = 0; c < n; ++c) {
        out.eigenvalues[c] = lam[order[static_cast<std::size_t>(c)]];
        out.modes.col(c) = vec.col(order[static_cast<std::size_t>(c)]);
    }

    const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
    const double tol = kClusterTol * std::max(1.0, scale);
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && std::abs(out.eigenvalues[stop] - out.eigenvalues[stop - 1]) <= tol) {
            ++stop;
        }
        rebase_cluster(out, start, stop);
        start = stop;
    }

    out.decay_rates = -out.eigenvalues.real();
    out.frequency_shifts = out.eigenvalues.imag();
    out.binorms.resize(n);
    for (int c = 0; c < n; ++c) out.binorms[c] = bilinear(out.modes.col(c), out.modes.col(c));
    return out;
}

Eigen::MatrixXcd wavelength_lattice_basis(int n_atoms) {
    if (n_atoms < 1) throw std::invalid_argument("wavelength_lattice_basis: n_atoms must be >= 1");
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n_atoms, n_atoms);
    basis.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n_atoms)));
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    for (int j = 1; j < n_atoms; ++j) {
        basis(0, j) = -inv_root2;
        basis(j, j) = inv_root2;
    }
    return basis;
}

EigenmodeSet canonical_wavelength_modeset(int n_atoms, const WaveguideParams& params) {
    params.validate();
    EigenmodeSet out;
    out.modes = wavelength_lattice_basis(n_atoms);
    out.eigenvalues.resize(n_atoms);
    out.eigenvalues[0] = Complex(-(params.gamma_t + (n_atoms - 1) * params.gamma_w), 0.0);
    for (int j = 1; j < n_atoms; ++j) {
        out.eigenvalues[j] = Complex(-(params.gamma_t - params.gamma_w), 0.0);
    }
    out.decay_rates = -out.eigenvalues.real();
    out.frequency_shifts = out.eigenvalues.imag();
    out.binorms = Eigen::VectorXcd::Ones(n_atoms);
    out.self_orthogonal.assign(static_cast<std::size_t>(n_atoms), false);
    return out;
}

Eigen::VectorXd mode_weights(const EigenmodeSet& set, const PolarizationVector& b) {
    const int n = set.size();
    if (b.size() != n) {
        throw std::invalid_argument("mode_weights: state size does not match the mode set");
    }
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
    double total = 0.0;
    for (int m = 0; m < n; ++m) {
        if (set.self_orthogonal[static_cast<std::size_t>(m)]) continue;
        const double overlap = std::norm(bilinear(set.modes.col(m), b));
        weights[m] = overlap;
        total += overlap;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("mode_weights: state has no overlap with any normalizable mode");
    }
    return weights / total;
}

std::vector<ModeCharacter> classify(const EigenmodeSet& set, const WaveguideParams& params) {
    params.validate();
    const double tol = 1e-9 * params.gamma_t;
    std::vector<ModeCharacter> labels(static_cast<std::size_t>(set.size()));
    for (int m = 0; m < set.size(); ++m) {
        const double rate = set.decay_rates[m];
        if (rate > params.gamma_t + tol) {
            labels[static_cast<std::size_t>(m)] = ModeCharacter::Superradiant;
        } else if (rate < params.gamma_t - tol) {
            labels[static_cast<std::size_t>(m)] = ModeCharacter::Subradiant;
        } else {
            labels[static_cast<std::size_t>(m)] = ModeCharacter::Neutral;
        }
    }
    return labels;
}

Eigen::VectorXd half_wave_sign_map(const AtomArray& atoms, const WaveguideParams& params) {
    params.validate();
    const double half_wave = 0.5 * params.wavelength();
    const double tol = 1e-9 * params.wavelength();
    const Eigen::VectorXd& x = atoms.positions();
    Eigen::VectorXd sigma(atoms.size());
    for (int j = 0; j < atoms.size(); ++j) {
        const double separation = x[j] - x[0];
        const long long halves = std::llround(separation / half_wave);
        if (std::abs(separation - static_cast<double>(halves) * half_wave) > tol) {
            throw std::invalid_argument(
                "half_wave_sign_map: atom separations must be half-wavelength multiples");
        }
        sigma[j] = (halves % 2 == 0) ? 1.0 : -1.0;
    }
    return sigma;
}

}  // namespace wqed
