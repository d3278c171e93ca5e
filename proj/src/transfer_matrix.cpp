#include "wqed/transfer_matrix.hpp"

namespace wqed {

namespace {

constexpr double kPoleTol = 1e-15;        // on |1 + r^(1)|
constexpr double kHalfWaveTol = 1e-9;     // on |sin(2 k d)|
constexpr double kDegenerateBranch = 1e-7;  // switch to the even-polynomial form

bool at_pole(Complex eta) { return std::abs(eta + 1.0) < kPoleTol; }

}  // namespace

SingleAtomScattering single_atom_scattering(double delta, const WaveguideParams& params) {
    SingleAtomScattering s;
    s.r = reflection_coefficient(delta, params);
    s.t = 1.0 + s.r;
    s.T = std::norm(s.t);
    s.R = std::norm(s.r);
    s.phase = std::atan(delta / params.gamma_t);
    return s;
}

PoleOr<TransferMatrix> atom_transfer_matrix(double delta, const WaveguideParams& params) {
    const Complex eta = reflection_coefficient(delta, params);
    if (at_pole(eta)) return TotalReflection{delta, -1.0, 1};
    TransferMatrix m;
    m << (2.0 * eta + 1.0) / (eta + 1.0), eta / (eta + 1.0),
        -eta / (eta + 1.0), 1.0 / (eta + 1.0);
    return m;
}

TransferMatrix propagation_matrix(double dx, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("propagation_matrix: k must be > 0");
    const Complex phase = std::exp(Complex(0.0, k * dx));
    TransferMatrix m = TransferMatrix::Zero();
    m(0, 0) = phase;
    m(1, 1) = 1.0 / phase;
    return m;
}

PoleOr<ScatteringCoefficients> amplitudes_from_matrix(const TransferMatrix& m) {
    if (std::abs(m(1, 1)) < kPoleTol) return TotalReflection{};
    ScatteringCoefficients out;
    out.t = 1.0 / m(1, 1);
    out.r = -m(1, 0) / m(1, 1);
    out.T = std::norm(out.t);
    out.R = std::norm(out.r);
    return out;
}

PoleOr<ScatteringCoefficients> cascade_amplitudes(const AtomArray& atoms,
                                                  const WaveguideParams& params) {
    params.validate();
    const Eigen::VectorXd& x = atoms.positions();
    const int n = atoms.size();

    TransferMatrix m;
    {
        auto first = atom_transfer_matrix(atoms.detunings()[0], params);
        if (is_pole(first)) return TotalReflection{atoms.detunings()[0], -1.0, n};
        m = value_of(first);
    }
    for (int j = 1; j < n; ++j) {
        auto aj = atom_transfer_matrix(atoms.detunings()[j], params);
        if (is_pole(aj)) return TotalReflection{atoms.detunings()[j], -1.0, n};
        m = (value_of(aj) * propagation_matrix(x[j] - x[j - 1], params.k) * m).eval();
    }

    auto amp = amplitudes_from_matrix(m);
    if (is_pole(amp)) return TotalReflection{atoms.detunings()[0], -1.0, n};

    // The cascade relates field values at x_1 and x_n; remove the trivial
    // propagation from t and restore the origin phase of r so both match the
    // steady-state solver's plane-wave coefficients.
    ScatteringCoefficients out = value_of(amp);
    out.t *= std::exp(Complex(0.0, -params.k * (x[n - 1] - x[0])));
    out.r *= std::exp(Complex(0.0, 2.0 * params.k * x[0]));
    out.T = std::norm(out.t);
    out.R = std::norm(out.r);
    return out;
}

PoleOr<Complex> two_atom_transmission(double delta1, double delta2, double x12,
                                      const WaveguideParams& params) {
    params.validate();
    if (!(x12 >= 0.0)) throw std::invalid_argument("two_atom_transmission: x12 must be >= 0");
    const Complex r1 = reflection_coefficient(delta1, params);
    const Complex r2 = reflection_coefficient(delta2, params);
    if (at_pole(r1)) return TotalReflection{delta1, x12, 2};
    if (at_pole(r2)) return TotalReflection{delta2, x12, 2};
    const Complex bounce = r1 * r2 * std::exp(Complex(0.0, 2.0 * params.k * x12));
    return (1.0 + r2) * (1.0 + r1) / (1.0 - bounce);
}

SeriesResult recurrent_scattering_series(double delta1, double delta2, double x12,
                                         const WaveguideParams& params, int n_terms) {
    params.validate();
    if (n_terms < 1) throw std::invalid_argument("recurrent_scattering_series: n_terms must be >= 1");
    const Complex r1 = reflection_coefficient(delta1, params);
    const Complex r2 = reflection_coefficient(delta2, params);
    const Complex q = r1 * r2 * std::exp(Complex(0.0, 2.0 * params.k * x12));

    SeriesResult out;
    out.ratio = std::abs(q);
    out.converges = out.ratio < 1.0;

    const Complex lead = (1.0 + r2) * (1.0 + r1);
    Complex term = lead;
    Complex sum = 0.0;
    for (int m = 0; m < n_terms; ++m) {
        sum += term;
        term *= q;
    }
    out.partial_sum = sum;
    return out;
}

namespace {

// Denominator of the lattice closed form divided by the square root b,
// written as a finite polynomial in b^2 (no square roots, no cancellation):
//   d(b)/b = 2 sum_j [ C(n,2j) p^{n-2j} - q C(n,2j+1) p^{n-2j-1} ] b^{2j}
// with p = a+1, q = a-1.  Exact for every n; used near b = 0.
Complex lattice_denominator_over_b(int n, Complex a, Complex b2) {
    const Complex p = a + 1.0;
    const Complex q = a - 1.0;
    Complex sum = 0.0;
    double binom = 1.0;  // C(n, m), stepped over m
    Complex b2j = 1.0;   // b^{2j}
    // walk m = 0..n, accumulating even-m and odd-m contributions
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        c[static_cast<std::size_t>(m)] = binom;
        binom = binom * (n - m) / (m + 1.0);
    }
    for (int j = 0; 2 * j <= n; ++j) {
        Complex term = c[static_cast<std::size_t>(2 * j)] * std::pow(p, n - 2 * j);
        if (2 * j + 1 <= n) term -= q * c[static_cast<std::size_t>(2 * j + 1)] * std::pow(p, n - 2 * j - 1);
        sum += term * b2j;
        b2j *= b2;
    }
    return 2.0 * sum;
}

}  // namespace

PoleOr<Complex> lattice_transmission(int n_atoms, double spacing, double delta,
                                     const WaveguideParams& params) {
    params.validate();
    if (n_atoms < 1) throw std::invalid_argument("lattice_transmission: n_atoms must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("lattice_transmission: spacing must be > 0");

    const Complex eta = reflection_coefficient(delta, params);
    if (at_pole(eta)) return TotalReflection{delta, spacing, n_atoms};
    if (n_atoms == 1) return Complex(1.0) + eta;

    const int n = n_atoms;
    const Complex xi2 = std::exp(Complex(0.0, 2.0 * params.k * spacing));
    const Complex a = (2.0 * eta + 1.0) * xi2;
    const Complex b2 = (xi2 - 1.0) * ((2.0 * eta + 1.0) * (2.0 * eta + 1.0) * xi2 - 1.0);
    const Complex b = std::sqrt(b2);

    if (std::abs(b) < kDegenerateBranch * std::abs(a) || b == Complex(0.0)) {
        // near-degenerate branch: t = 2 (2(eta+1))^n / (d(b)/b)
        const Complex denom = lattice_denominator_over_b(n, a, b2);
        return 2.0 * std::pow(2.0 * (eta + 1.0), n) / denom;
    }

    // generic branch, rescaled so the n-th powers stay in range
    const Complex up = a + b + 1.0;
    const Complex um = a - b + 1.0;
    const double s = std::max({std::abs(up), std::abs(um), 2.0 * std::abs(eta + 1.0)});
    const Complex denom = (a + b - 1.0) * std::pow(um / s, n) + (-a + b + 1.0) * std::pow(up / s, n);
    return 2.0 * b * std::pow(2.0 * (eta + 1.0) / s, n) / denom;
}

Complex mean_field_transmission(int n_atoms, double delta, const WaveguideParams& params) {
    params.validate();
    if (n_atoms < 1) throw std::invalid_argument("mean_field_transmission: n_atoms must be >= 1");
    return std::pow(transmission_coefficient(delta, params), n_atoms);
}

std::variant<double, HalfWaveSingularity> optical_thickness_expansion(
    int n_atoms, double spacing, double delta, const WaveguideParams& params) {
    params.validate();
    if (n_atoms < 1) throw std::invalid_argument("optical_thickness_expansion: n_atoms must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("optical_thickness_expansion: spacing must be > 0");

    const double phase = 2.0 * params.k * spacing;
    if (std::abs(std::sin(phase)) < kHalfWaveTol) return HalfWaveSingularity{spacing};
    const double cot = std::cos(phase) / std::sin(phase);
    const double gt = params.gamma_t;
    const double gw = params.gamma_w;
    const double lorentz = gt * gt + delta * delta;
    const double first = 2.0 * gt * gw * n_atoms / lorentz;
    const double second =
        2.0 * gw * gw * n_atoms * (gt * gt + gt * delta * cot - delta * delta) / (lorentz * lorentz);
    return first + second;
}

std::variant<double, HalfWaveSingularity> lattice_line_shift(double spacing,
                                                             const WaveguideParams& params) {
    params.validate();
    if (!(spacing > 0.0)) throw std::invalid_argument("lattice_line_shift: spacing must be > 0");
    const double phase = 2.0 * params.k * spacing;
    if (std::abs(std::sin(phase)) < kHalfWaveTol) return HalfWaveSingularity{spacing};
    return 0.5 * params.gamma_w * std::cos(phase) / std::sin(phase);
}

}  // namespace wqed
