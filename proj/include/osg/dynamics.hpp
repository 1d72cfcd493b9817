#ifndef OSG_DYNAMICS_HPP
#define OSG_DYNAMICS_HPP

#include <array>
#include <cmath>
#include <complex>

#include "osg/packets.hpp"
#include "osg/params.hpp"

namespace osg {

/// Which initial configuration evolves: the one-excitation family, the
/// two-excitation family, or a single atom.
enum class Scenario { psi, phi, one_atom };

// ---------------------------------------------------------------------------
// Coefficient sets of the reduced density matrices.
//
// Canonical two-qubit basis ordering everywhere: |++>, |+->, |-+>, |-->.
// ---------------------------------------------------------------------------

/// One-excitation family (initial state cos(g)|+-> + sin(g)|-+>).
struct CoeffsPsi {
    double a1;   ///< population of |+->
    double a2;   ///< population of |-+>
    Complex a3;  ///< coherence between |+-> and |-+> (real under symmetric inputs)
    double a4;   ///< population of |-->
};

/// Two-excitation family (initial state cos(g)|++> + sin(g)|-->).
struct CoeffsPhi {
    Complex b1;  ///< coherence between |++> and |-->
    double b2;   ///< population of |++>
    double b3;   ///< population of |+->
    double b4;   ///< population of |-+>; equals b3 for identical atoms
    double b5;   ///< population of |-->
};

/// Single-atom reduced matrix [[q1, q2], [conj(q2), q3]] in basis |+>, |->.
struct CoeffsOneAtom {
    double q1;
    Complex q2;
    double q3;
};

/// Two-qubit density matrix with X structure in the canonical basis.
struct XState {
    std::array<double, 4> diag;  ///< populations of |++>, |+->, |-+>, |-->
    Complex inner;               ///< element (|+->, |-+>)
    Complex outer;               ///< element (|++>, |-->)

    double trace() const { return diag[0] + diag[1] + diag[2] + diag[3]; }
};

// ---------------------------------------------------------------------------
// Shared time-dependent inputs.
//
// Every closed form below depends on time only through these four numbers.
// Exposing the decomposition lets tests drive limits directly (for example
// zeroing the decay exponent to recover undamped Rabi oscillations).
// ---------------------------------------------------------------------------

struct RotatingTerms {
    double rabi_phase;     ///< Omega0 * t
    double gamma_exp;      ///< decay exponent Gamma(t)
    double optical_phase;  ///< omega * t
    double cubic_phase;    ///< m * a0^2 * t^3 / hbar (fractions of it appear below)
};

inline RotatingTerms rotating_terms(double t, const PhysicalParams& p,
                                    const DerivedConstants& c) {
    const GaussianPacket pkt{p.x0, p.dx0};
    RotatingTerms r{};
    r.rabi_phase = c.omega0 * t;
    r.gamma_exp = kinematics(t, pkt, c).gamma_exp;
    r.optical_phase = c.omega * t;
    r.cubic_phase = c.mass * c.a0 * c.a0 * t * t * t / c.hbar;
    return r;
}

inline CoeffsPsi coeffs_psi_at(double gamma, const RotatingTerms& r) {
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double damped = std::cos(r.rabi_phase) * std::exp(-r.gamma_exp);
    const double half = std::cos(r.rabi_phase / 2.0);
    CoeffsPsi a{};
    a.a1 = 0.5 * cg * cg * (1.0 + damped);
    a.a2 = 0.5 * sg * sg * (1.0 + damped);
    a.a3 = Complex(sg * cg * half * half * std::exp(-r.gamma_exp / 2.0), 0.0);
    a.a4 = 0.5 * (1.0 - damped);
    return a;
}

inline CoeffsPhi coeffs_phi_at(double gamma, const RotatingTerms& r) {
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double damped = std::cos(r.rabi_phase) * std::exp(-r.gamma_exp);
    const double half = std::cos(r.rabi_phase / 2.0);
    CoeffsPhi b{};
    // Both qubits are excited in the cos(gamma) branch, so the coherence
    // accumulates the channel phase twice: the net phase is
    // -(2*omega*t - m*a0^2*t^3/(6*hbar)).
    const double phase = -(2.0 * r.optical_phase - r.cubic_phase / 6.0);
    b.b1 = std::polar(sg * cg * half * half * std::exp(-r.gamma_exp / 2.0), phase);
    b.b2 = 0.25 * cg * cg * (1.0 + damped) * (1.0 + damped);
    b.b3 = 0.25 * cg * cg * (1.0 - damped * damped);
    b.b4 = b.b3;
    b.b5 = sg * sg + 0.25 * cg * cg * (1.0 - damped) * (1.0 - damped);
    return b;
}

inline CoeffsOneAtom coeffs_one_atom_at(double gamma, const RotatingTerms& r) {
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double damped = std::cos(r.rabi_phase) * std::exp(-r.gamma_exp);
    CoeffsOneAtom q{};
    q.q1 = 0.5 * cg * cg * (1.0 + damped);
    const double phase = -(r.optical_phase - r.cubic_phase / 12.0);
    q.q2 = std::polar(cg * sg * std::cos(r.rabi_phase / 2.0) * std::exp(-r.gamma_exp / 4.0),
                      phase);
    q.q3 = 1.0 - q.q1;
    return q;
}

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

inline CoeffsPsi coeffs_psi(double t, const PhysicalParams& p, const DerivedConstants& c) {
    return coeffs_psi_at(p.gamma, rotating_terms(t, p, c));
}

inline CoeffsPhi coeffs_phi(double t, const PhysicalParams& p, const DerivedConstants& c) {
    return coeffs_phi_at(p.gamma, rotating_terms(t, p, c));
}

inline CoeffsOneAtom coeffs_one_atom(double t, const PhysicalParams& p,
                                     const DerivedConstants& c) {
    return coeffs_one_atom_at(p.gamma, rotating_terms(t, p, c));
}

inline XState rho_psi(double t, const PhysicalParams& p, const DerivedConstants& c) {
    const CoeffsPsi a = coeffs_psi(t, p, c);
    return XState{{0.0, a.a1, a.a2, a.a4}, a.a3, Complex(0.0, 0.0)};
}

inline XState rho_phi(double t, const PhysicalParams& p, const DerivedConstants& c) {
    const CoeffsPhi b = coeffs_phi(t, p, c);
    return XState{{b.b2, b.b3, b.b4, b.b5}, Complex(0.0, 0.0), b.b1};
}

} // namespace osg

#endif // OSG_DYNAMICS_HPP
