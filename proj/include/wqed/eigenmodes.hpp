#pragma once

// Collective-mode analysis of the radiative coupling matrix.
//
// The mode structure is a property of the geometry and the decay rates alone,
// so the decomposition always acts on the evolution matrix with every detuning
// set to zero.  Eigenvalues are reported as decay rate and frequency shift
// pairs: an eigenvalue z corresponds to a mode decaying at -Re(z) whose
// resonance is shifted by Im(z).
//
// The coupling matrix is complex symmetric, not Hermitian, so left and right
// eigenvectors coincide under transposition and the natural normalization is
// bilinear: v^T v = 1 (no conjugation).  Vectors for which v^T v vanishes are
// self-orthogonal; they are kept with unit Euclidean norm and flagged instead.

#include <vector>

#include "wqed/core.hpp"

namespace wqed {

enum class ModeCharacter { Superradiant, Subradiant, Neutral };

struct EigenmodeSet {
    // Eigenvalues of the zero-detuning evolution matrix, one per mode,
    // ordered by decay rate (largest first), then by frequency shift.
    Eigen::VectorXcd eigenvalues;

    // decay_rates[n] = -Re(eigenvalues[n]), frequency_shifts[n] = Im(eigenvalues[n]).
    Eigen::VectorXd decay_rates;
    Eigen::VectorXd frequency_shifts;

    // Columns are the mode vectors, bilinearly normalized (v^T v = 1) unless
    // the corresponding self_orthogonal flag is set, in which case the column
    // has unit Euclidean norm instead.
    Eigen::MatrixXcd modes;

    // Bilinear norm v^T v of each stored column: 1 for normalized modes, the
    // residual near-zero value for self-orthogonal ones.
    Eigen::VectorXcd binorms;

    // True for modes whose bilinear norm vanishes; such modes carry no
    // meaningful overlap weight and are excluded from mode_weights.
    std::vector<bool> self_orthogonal;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Diagonalizes the zero-detuning evolution matrix of the array.
//
// Degenerate eigenvalue clusters (grouped within a small spectral tolerance)
// are re-based deterministically: the cluster subspace is fixed, but the basis
// inside it is rebuilt by bilinear Gram-Schmidt seeded from the coordinate
// axes in index order, so repeated runs and reordered inputs agree to the
// last bit.  Cluster members share the cluster-mean eigenvalue.  Every vector
// has its overall sign fixed by requiring the largest-magnitude entry to have
// positive real part.
EigenmodeSet decompose(const AtomArray& atoms, const WaveguideParams& params);

// Exact mode basis of a wavelength-spaced lattice, as columns:
//   column 0:  (1, 1, ..., 1) / sqrt(n)         (the bright, superradiant mode)
//   column j:  (-1, 0, .., 1 at slot j, .., 0) / sqrt(2)   for j = 1..n-1
// The dark columns all share the degenerate dark eigenvalue; they are unit
// bilinear norm and each is bilinearly orthogonal to the bright mode, but they
// are not mutually orthogonal (v_i^T v_j = 1/2 for distinct dark columns).
Eigen::MatrixXcd wavelength_lattice_basis(int n_atoms);

// EigenmodeSet for a wavelength-spaced lattice built from the closed-form
// spectrum rather than a numerical solve: the bright mode decays at
// gamma_t + (n-1) gamma_w, every dark mode at gamma_t - gamma_w, and all
// frequency shifts vanish.  Uses wavelength_lattice_basis as the mode basis.
EigenmodeSet canonical_wavelength_modeset(int n_atoms, const WaveguideParams& params);

// Relative weight of each mode in a polarization state b:
//   w[n] = |v_n^T b|^2 / sum_m |v_m^T b|^2
// Self-orthogonal modes are excluded from both sums.  Throws
// std::invalid_argument if b vanishes (or only overlaps excluded modes),
// since no normalized weight exists there.
Eigen::VectorXd mode_weights(const EigenmodeSet& set, const PolarizationVector& b);

// Labels each mode by comparing its decay rate with the uncoupled rate
// gamma_t: faster is superradiant, slower subradiant, equal (within a small
// relative tolerance) neutral.
std::vector<ModeCharacter> classify(const EigenmodeSet& set, const WaveguideParams& params);

// Sign pattern mapping an array whose atoms sit at half-wavelength multiples
// of each other onto the equivalent wavelength-spaced lattice: sigma[j] = +1
// when atom j is a whole wavelength from atom 0, -1 at an odd half.  Throws
// std::invalid_argument if any separation is off a half-wavelength multiple
// by more than 1e-9 wavelengths.
Eigen::VectorXd half_wave_sign_map(const AtomArray& atoms, const WaveguideParams& params);

}  // namespace wqed
