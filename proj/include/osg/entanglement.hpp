#ifndef OSG_ENTANGLEMENT_HPP
#define OSG_ENTANGLEMENT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "osg/dynamics.hpp"
#include "osg/errors.hpp"
#include "osg/packets.hpp"
#include "osg/params.hpp"

namespace osg {

inline Eigen::Matrix4cd to_matrix(const XState& rho) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = rho.diag[static_cast<std::size_t>(i)];
    m(1, 2) = rho.inner;
    m(2, 1) = std::conj(rho.inner);
    m(0, 3) = rho.outer;
    m(3, 0) = std::conj(rho.outer);
    return m;
}

// ---------------------------------------------------------------------------
// Concurrence.
// ---------------------------------------------------------------------------

/// Closed form for the one-excitation family: C = 2*|a3|.
inline double concurrence_closed_psi(const CoeffsPsi& a) { return 2.0 * std::abs(a.a3); }

struct PhiConcurrence {
    double d;  ///< signed pre-max quantity 2*(|b1| - b3)
    double c;  ///< concurrence max(0, d)
};

/// Closed form for the two-excitation family.
inline PhiConcurrence concurrence_closed_phi(const CoeffsPhi& b) {
    const double d = 2.0 * (std::abs(b.b1) - b.b3);
    return PhiConcurrence{d, std::max(0.0, d)};
}

/// Concurrence of one family at one time, by both routes.
struct ConcurrenceSample {
    double t;
    double c_closed;   ///< closed form: 2*|a3|, or max(0, 2*(|b1| - b3))
    double c_general;  ///< general spin-flip concurrence of the assembled state
    double d_value;    ///< signed pre-max quantity; equals c_closed when never negative
};

/// General two-qubit concurrence from the spin-flipped product rho * rho~.
/// Eigenvalues of the product are real non-negative for valid states; small
/// negative real parts are numerical noise and get clipped, anything below
/// -1e-8 signals a positivity violation upstream.
inline double concurrence_wootters(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    const Eigen::Matrix4cd rho_tilde = flip * rho.conjugate() * flip;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(rho * rho_tilde, false);
    std::array<double, 4> roots{};
    for (int i = 0; i < 4; ++i) {
        const double re = solver.eigenvalues()(i).real();
        if (re < -1e-8)
            throw NumericalError("concurrence_wootters: eigenvalue real part " +
                                 std::to_string(re) + " below -1e-8");
        roots[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, re));
    }
    std::sort(roots.begin(), roots.end(), std::greater<double>());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

inline double concurrence_wootters(const XState& rho) {
    return concurrence_wootters(to_matrix(rho));
}

inline ConcurrenceSample concurrence_sample(double t, Scenario scenario,
                                            const PhysicalParams& p,
                                            const DerivedConstants& c) {
    ConcurrenceSample s{};
    s.t = t;
    if (scenario == Scenario::psi) {
        s.c_closed = concurrence_closed_psi(coeffs_psi(t, p, c));
        s.d_value = s.c_closed;
        s.c_general = concurrence_wootters(rho_psi(t, p, c));
    } else if (scenario == Scenario::phi) {
        const PhiConcurrence pc = concurrence_closed_phi(coeffs_phi(t, p, c));
        s.c_closed = pc.c;
        s.d_value = pc.d;
        s.c_general = concurrence_wootters(rho_phi(t, p, c));
    } else {
        throw ValidationError("concurrence_sample: scenario must be psi or phi");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Partial transpose and the separability test.
// ---------------------------------------------------------------------------

/// Transposition on the second qubit in the canonical basis. For X states
/// this swaps the inner and outer coherences between the anti-diagonal
/// corners and the central block.
inline Eigen::Matrix4cd partial_transpose(const XState& rho) {
    Eigen::Matrix4cd sigma = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) sigma(i, i) = rho.diag[static_cast<std::size_t>(i)];
    sigma(0, 3) = rho.inner;
    sigma(3, 0) = std::conj(rho.inner);
    sigma(1, 2) = rho.outer;
    sigma(2, 1) = std::conj(rho.outer);
    return sigma;
}

struct PptReport {
    std::array<double, 4> eigenvalues;  ///< ascending
    double min_eig;
    bool separable;
};

/// Eigenvalues of the partial transpose by two routes: the 2x2-block closed
/// forms of the X structure, and a general Hermitian solve. Disagreement
/// beyond 1e-8 means an implementation bug, not physics.
inline PptReport ppt_report(const XState& rho) {
    const auto block = [](double da, double db, Complex off) {
        const double mid = 0.5 * (da + db);
        const double rad = std::sqrt(0.25 * (da - db) * (da - db) + std::norm(off));
        return std::array<double, 2>{mid - rad, mid + rad};
    };
    const auto corner = block(rho.diag[0], rho.diag[3], rho.inner);
    const auto center = block(rho.diag[1], rho.diag[2], rho.outer);
    std::array<double, 4> closed{corner[0], corner[1], center[0], center[1]};
    std::sort(closed.begin(), closed.end());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(partial_transpose(rho),
                                                           Eigen::EigenvaluesOnly);
    double max_diff = 0.0;
    for (int i = 0; i < 4; ++i)
        max_diff = std::max(max_diff,
                            std::abs(closed[static_cast<std::size_t>(i)] -
                                     solver.eigenvalues()(i)));
    if (max_diff > 1e-8)
        throw NumericalError("ppt_report: block formulas and general solver disagree by " +
                             std::to_string(max_diff));

    PptReport rep{};
    rep.eigenvalues = closed;
    rep.min_eig = closed[0];
    rep.separable = rep.min_eig >= -1e-12;
    return rep;
}

// ---------------------------------------------------------------------------
// Final extinction time of the two-excitation concurrence.
// ---------------------------------------------------------------------------

struct TimeGrid {
    double t_max;
    std::size_t n_samples;
};

struct DeathTime {
    double t_scan;      ///< last zero crossing of d(t), refined by bisection
    double t_envelope;  ///< root of the peak-envelope condition
};

/// Last instant with positive d(t) = 2*(|b1| - b3). d oscillates at the Rabi
/// frequency under a monotonically decaying envelope, so transient zeros
/// occur long before the envelope itself dies; t_scan is the supremum of
/// positive-d times, t_envelope the root of
/// (cot(gamma)/4) * (exp(Gamma/2) - exp(-3*Gamma/2)) = 1,
/// which bounds t_scan from above within one Rabi period.
///
/// Returns nullopt when d is never positive (gamma at 0 or pi/2); throws
/// ScanTooShort when d is still positive at t_max or the envelope has not
/// crossed within the scan.
inline std::optional<DeathTime> sudden_death_time(const PhysicalParams& p,
                                                  const DerivedConstants& c,
                                                  const TimeGrid& scan) {
    if (!(scan.t_max > 0.0) || scan.n_samples < 2)
        throw ValidationError("scan: t_max must be > 0 and n_samples >= 2");
    const double step = scan.t_max / static_cast<double>(scan.n_samples - 1);
    if (c.omega0 > 0.0 && step > (2.0 * std::numbers::pi / c.omega0) / 50.0)
        throw ValidationError("scan: step too coarse to resolve the Rabi period");

    const auto d_of = [&](double t) {
        return concurrence_closed_phi(coeffs_phi(t, p, c)).d;
    };
    // values at the rounding scale of sin/cos at the interval endpoints are
    // a mathematical zero, not entanglement
    constexpr double kFloor = 1e-15;

    std::ptrdiff_t last_pos = -1;
    for (std::size_t i = 0; i < scan.n_samples; ++i) {
        const double t = step * static_cast<double>(i);
        if (d_of(t) > kFloor) last_pos = static_cast<std::ptrdiff_t>(i);
    }
    if (last_pos < 0) return std::nullopt;
    if (last_pos == static_cast<std::ptrdiff_t>(scan.n_samples - 1))
        throw ScanTooShort("sudden_death_time: d(t) still positive at t_max");

    double lo = step * static_cast<double>(last_pos);
    double hi = lo + step;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * scan.t_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        (d_of(mid) > kFloor ? lo : hi) = mid;
    }
    const double t_scan = 0.5 * (lo + hi);

    const GaussianPacket pkt{p.x0, p.dx0};
    const double cot = std::cos(p.gamma) / std::sin(p.gamma);
    const auto envelope_dead = [&](double t) {
        const double g = kinematics(t, pkt, c).gamma_exp;
        return (cot / 4.0) * (std::exp(g / 2.0) - std::exp(-1.5 * g)) >= 1.0;
    };
    if (!envelope_dead(scan.t_max))
        throw ScanTooShort("sudden_death_time: envelope still positive at t_max");
    double elo = 0.0, ehi = scan.t_max;
    for (int it = 0; it < 200 && (ehi - elo) > 1e-15 * scan.t_max; ++it) {
        const double mid = 0.5 * (elo + ehi);
        (envelope_dead(mid) ? ehi : elo) = mid;
    }
    return DeathTime{t_scan, 0.5 * (elo + ehi)};
}

// ---------------------------------------------------------------------------
// Displayed lower bound on b3/|b1| that drives the extinction.
// ---------------------------------------------------------------------------

struct BoundCheck {
    double lhs;  ///< b3 / |b1|
    double rhs;  ///< (cot(gamma)/2) * sinh(Gamma/2)
    bool holds;
};

inline BoundCheck death_bound_check(double t, const PhysicalParams& p,
                                    const DerivedConstants& c) {
    const CoeffsPhi b = coeffs_phi(t, p, c);
    const double mag = std::abs(b.b1);
    if (mag < 1e-300)
        throw DegenerateInput("death_bound_check: |b1| vanishes at this sample");
    BoundCheck r{};
    r.lhs = b.b3 / mag;
    const double cot = std::cos(p.gamma) / std::sin(p.gamma);
    const double g = rotating_terms(t, p, c).gamma_exp;
    r.rhs = (cot / 2.0) * std::sinh(g / 2.0);
    // exact inequality mathematically; allow rounding-level slack only
    r.holds = r.lhs >= r.rhs || (r.rhs - r.lhs) <= 1e-12 * std::max(1.0, std::abs(r.rhs));
    return r;
}

} // namespace osg

#endif // OSG_ENTANGLEMENT_HPP
