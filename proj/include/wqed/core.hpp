#pragma once

// Core model ingredients for a chain of two-level atoms coupled to a single
// guided mode of a 1D waveguide.  Working units throughout the library:
// the waveguide decay rate gamma_w sets the time scale and the guided
// wavelength lambda sets the length scale, so the default wavenumber is
// k = 2*pi.  All rates are amplitude (not intensity) decay rates.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wqed {

using Complex = std::complex<double>;

// Dipole amplitudes, one entry per atom (sorted by position).
using PolarizationVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// ------------------------------------------------------------------
// parameter aggregates
// ------------------------------------------------------------------

// Rates of a single atom: gamma_w into the guided mode, gamma_t total
// (gamma_t - gamma_w leaks into free space or other loss channels).
struct WaveguideParams {
    double gamma_w{1.0};
    double gamma_t{1.0};
    double k{kTwoPi};

    double gamma_loss() const { return gamma_t - gamma_w; }
    double wavelength() const { return kTwoPi / k; }
    bool lossless() const { return gamma_t == gamma_w; }

    void validate() const {
        if (!(gamma_w > 0.0)) throw std::invalid_argument("WaveguideParams: gamma_w must be > 0");
        if (!(gamma_t >= gamma_w)) throw std::invalid_argument("WaveguideParams: gamma_w must not exceed gamma_t");
        if (!(k > 0.0)) throw std::invalid_argument("WaveguideParams: k must be > 0");
        if (!std::isfinite(gamma_w) || !std::isfinite(gamma_t) || !std::isfinite(k))
            throw std::invalid_argument("WaveguideParams: parameters must be finite");
    }
};

// Equally spaced chain; spacing in units of the wavelength.
struct LatticeSpec {
    int n_atoms{1};
    double spacing{1.0};
    double origin{0.0};

    void validate() const {
        if (n_atoms < 1) throw std::invalid_argument("LatticeSpec: n_atoms must be >= 1");
        if (!(spacing > 0.0) && n_atoms > 1) throw std::invalid_argument("LatticeSpec: spacing must be > 0");
        if (!std::isfinite(spacing) || !std::isfinite(origin))
            throw std::invalid_argument("LatticeSpec: spacing and origin must be finite");
    }

    Eigen::VectorXd positions() const {
        validate();
        Eigen::VectorXd x(n_atoms);
        for (int j = 0; j < n_atoms; ++j) x[j] = origin + spacing * j;
        return x;
    }
};

// Incident right-moving drive; amplitude is the field quantity the
// transmission coefficient is normalized against.  The drive detuning from
// atomic resonance lives in the per-atom detunings of AtomArray.
struct DriveField {
    Complex amplitude{1.0};

    Complex field_at(double x, double k) const {
        return amplitude * std::exp(Complex(0.0, k * x));
    }
};

// Atom positions plus per-atom detunings of the drive from each resonance.
// Construction sorts positions ascending and keeps detunings attached;
// coincident atoms are allowed.
class AtomArray {
public:
    AtomArray(Eigen::VectorXd positions, Eigen::VectorXd detunings) {
        if (positions.size() == 0) throw std::invalid_argument("AtomArray: need at least one atom");
        if (positions.size() != detunings.size())
            throw std::invalid_argument("AtomArray: positions and detunings must have equal length");
        for (Eigen::Index j = 0; j < positions.size(); ++j)
            if (!std::isfinite(positions[j]) || !std::isfinite(detunings[j]))
                throw std::invalid_argument("AtomArray: positions and detunings must be finite");

        perm_.resize(static_cast<std::size_t>(positions.size()));
        std::iota(perm_.begin(), perm_.end(), 0);
        std::stable_sort(perm_.begin(), perm_.end(),
                         [&](int a, int b) { return positions[a] < positions[b]; });
        positions_.resize(positions.size());
        detunings_.resize(detunings.size());
        for (Eigen::Index j = 0; j < positions.size(); ++j) {
            positions_[j] = positions[perm_[static_cast<std::size_t>(j)]];
            detunings_[j] = detunings[perm_[static_cast<std::size_t>(j)]];
        }
    }

    explicit AtomArray(const Eigen::VectorXd& positions)
        : AtomArray(positions, Eigen::VectorXd::Zero(positions.size())) {}

    static AtomArray lattice(const LatticeSpec& spec) { return AtomArray(spec.positions()); }

    static AtomArray lattice(const LatticeSpec& spec, const Eigen::VectorXd& detunings) {
        return AtomArray(spec.positions(), detunings);
    }

    int size() const { return static_cast<int>(positions_.size()); }
    const Eigen::VectorXd& positions() const { return positions_; }
    const Eigen::VectorXd& detunings() const { return detunings_; }
    // permutation applied at construction: sorted index j came from input slot perm()[j]
    const std::vector<int>& perm() const { return perm_; }

    AtomArray with_detunings(const Eigen::VectorXd& detunings) const {
        return AtomArray(positions_, detunings);
    }

    AtomArray with_detuning_offset(double offset) const {
        return AtomArray(positions_, detunings_.array() + offset);
    }

private:
    Eigen::VectorXd positions_;
    Eigen::VectorXd detunings_;
    std::vector<int> perm_;
};

// Microscopic inputs for the guided-mode decay rate.
struct DipoleCouplingInputs {
    double reduced_dipole{1.0};   // transition dipole matrix element
    double mode_radius{1.0};      // transverse extent of the guided mode
    double k{1.0};
    double hbar{1.0};
    double epsilon0{1.0};
};

// ------------------------------------------------------------------
// elementary building blocks
// ------------------------------------------------------------------

// 1D guided-mode propagator (i k / 2) e^{i k |x|}.
inline Complex green_function(double x, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("green_function: k must be > 0");
    const Complex ik(0.0, k);
    return (ik / 2.0) * std::exp(ik * std::abs(x));
}

// Linear response of one atom to the local field:
// alpha = -2 gamma_w / (k (delta + i gamma_t)).
inline Complex polarizability(double delta, const WaveguideParams& p) {
    p.validate();
    return -2.0 * p.gamma_w / (p.k * Complex(delta, p.gamma_t));
}

// Single-atom reflection amplitude r^(1) = gamma_w / (i delta - gamma_t);
// equals i*alpha*k/2 and reaches -gamma_w/gamma_t on resonance.
inline Complex reflection_coefficient(double delta, const WaveguideParams& p) {
    p.validate();
    return p.gamma_w / Complex(-p.gamma_t, delta);
}

// Single-atom transmission amplitude 1 + r^(1).
inline Complex transmission_coefficient(double delta, const WaveguideParams& p) {
    return 1.0 + reflection_coefficient(delta, p);
}

// Linear evolution matrix of the dipole amplitudes, db/dt = A b + F:
// A_jj = i delta_j - gamma_t, A_jl = -gamma_w e^{i k |x_j - x_l|}.
// Complex symmetric by construction.
inline Eigen::MatrixXcd evolution_matrix(const AtomArray& atoms, const WaveguideParams& p) {
    p.validate();
    const int n = atoms.size();
    const Eigen::VectorXd& x = atoms.positions();
    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j) {
        a(j, j) = Complex(-p.gamma_t, atoms.detunings()[j]);
        for (int l = j + 1; l < n; ++l) {
            const Complex coupling = -p.gamma_w * std::exp(Complex(0.0, p.k * std::abs(x[j] - x[l])));
            a(j, l) = coupling;
            a(l, j) = coupling;
        }
    }
    return a;
}

// Drive term F_j = (2 i gamma_w / k) D0 e^{i k x_j}.
inline Eigen::VectorXcd drive_vector(const AtomArray& atoms, const WaveguideParams& p,
                                     const DriveField& drive) {
    p.validate();
    const int n = atoms.size();
    Eigen::VectorXcd f(n);
    const Complex scale = Complex(0.0, 2.0 * p.gamma_w / p.k);
    for (int j = 0; j < n; ++j) f[j] = scale * drive.field_at(atoms.positions()[j], p.k);
    return f;
}

// Guided-mode decay rate from the microscopic coupling,
// gamma_w = k D^2 / (2 pi r^2 hbar eps0) with mode radius r.
inline double waveguide_decay_rate(const DipoleCouplingInputs& in) {
    if (!(in.reduced_dipole > 0.0) || !(in.mode_radius > 0.0) || !(in.k > 0.0) ||
        !(in.hbar > 0.0) || !(in.epsilon0 > 0.0))
        throw std::invalid_argument("waveguide_decay_rate: all inputs must be > 0");
    return in.k * in.reduced_dipole * in.reduced_dipole /
           (kTwoPi * in.mode_radius * in.mode_radius * in.hbar * in.epsilon0);
}

// Sum of |b_j|^2; the collective excited-state population.
inline double total_excitation(const PolarizationVector& b) { return b.squaredNorm(); }

}  // namespace wqed
