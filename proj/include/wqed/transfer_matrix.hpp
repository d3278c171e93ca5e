#pragma once

// Exact scattering analytics built from 2x2 transfer matrices: per-atom and
// propagation factors, cascades for arbitrary chains, the closed form for a
// regular lattice, the independent-atom (mean-field) reference, and the
// thick-medium expansion of the optical thickness.
//
// Convention: field vector (right-mover, left-mover); for a matrix M mapping
// the fields left of the chain to the fields right of it, t = 1/M22 and
// r = -M21/M22.  All amplitudes returned to callers are free-propagation
// stripped so that they match the steady-state solver's coefficients.

#include "wqed/core.hpp"
#include "wqed/steady_state.hpp"

#include <variant>

namespace wqed {

using TransferMatrix = Eigen::Matrix2cd;

// A resonantly driven lossless atom reflects everything; its transfer matrix
// has no finite entries.  Returned as a value, not thrown: total reflection
// (t = 0) is a physical result a spectrum scanner needs to handle.
struct TotalReflection {
    double delta{0.0};
    double spacing{-1.0};  // negative when no lattice spacing is involved
    int n_atoms{1};
};

// The thick-medium expansion and the line-shift formula lose meaning when
// the round-trip phase 2kd hits a multiple of pi.
struct HalfWaveSingularity {
    double spacing{0.0};
};

template <typename T>
using PoleOr = std::variant<T, TotalReflection>;

template <typename T>
bool is_pole(const PoleOr<T>& v) {
    return std::holds_alternative<TotalReflection>(v);
}

template <typename T>
const T& value_of(const PoleOr<T>& v) {
    return std::get<T>(v);
}

// t, r, T, R of one atom plus the reflection phase phi = arctan(delta/gamma_t);
// the amplitude satisfies r = -sqrt(R) e^{i phi}.
struct SingleAtomScattering {
    Complex t{1.0};
    Complex r{0.0};
    double T{1.0};
    double R{0.0};
    double phase{0.0};
};

SingleAtomScattering single_atom_scattering(double delta, const WaveguideParams& params);

// Transfer matrix of one atom at detuning delta; TotalReflection when the
// single-atom reflection amplitude equals -1.
PoleOr<TransferMatrix> atom_transfer_matrix(double delta, const WaveguideParams& params);

// Free propagation over dx: diag(e^{i k dx}, e^{-i k dx}).
TransferMatrix propagation_matrix(double dx, double k);

// t and r read off a cascaded matrix; TotalReflection when M22 vanishes.
PoleOr<ScatteringCoefficients> amplitudes_from_matrix(const TransferMatrix& m);

// Full cascade over an arbitrary chain (atom matrices interleaved with
// propagation), reduced to coefficients in the steady-state convention.
PoleOr<ScatteringCoefficients> cascade_amplitudes(const AtomArray& atoms,
                                                  const WaveguideParams& params);

// Two atoms at distance x12 with independent detunings, resummed over all
// internal bounces: t = t2 t1 / (1 - r1 r2 e^{2 i k x12}).
PoleOr<Complex> two_atom_transmission(double delta1, double delta2, double x12,
                                      const WaveguideParams& params);

struct SeriesResult {
    Complex partial_sum{0.0};
    double ratio{0.0};    // magnitude sqrt(R1 R2) of the bounce factor
    bool converges{true};
};

// Partial sums of the bounce expansion behind two_atom_transmission.
// Divergence (ratio >= 1, resonant lossless atoms) is flagged, not summed
// past.
SeriesResult recurrent_scattering_series(double delta1, double delta2, double x12,
                                         const WaveguideParams& params, int n_terms);

// Closed-form transmission of n equally spaced atoms at one common detuning.
// Branch-stable: the result is invariant under the sign of the internal
// square root, and a cancellation-free even-polynomial evaluation takes over
// near half-wave spacings.
PoleOr<Complex> lattice_transmission(int n_atoms, double spacing, double delta,
                                     const WaveguideParams& params);

// Independent-scatterer reference t = (t^(1))^n: no recurrent scattering.
Complex mean_field_transmission(int n_atoms, double delta, const WaveguideParams& params);

// Thick-medium optical thickness -ln T expanded to second order in the
// single-atom response; valid for large n and gamma_w << gamma_t.
std::variant<double, HalfWaveSingularity> optical_thickness_expansion(
    int n_atoms, double spacing, double delta, const WaveguideParams& params);

// Position of the absorption-line maximum predicted by the expansion:
// delta_L = (gamma_w / 2) cot(2 k d).  Caution: dips located on the exact
// transmission curves sit at (gamma_w / 2) cot(k d) instead, independent of
// n and of the loss ratio; the acceptance suite's line-shift check measures
// the discrepancy.  Treat this estimate accordingly.
std::variant<double, HalfWaveSingularity> lattice_line_shift(double spacing,
                                                             const WaveguideParams& params);

}  // namespace wqed
