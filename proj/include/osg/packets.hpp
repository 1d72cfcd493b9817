#ifndef OSG_PACKETS_HPP
#define OSG_PACKETS_HPP

#include <cmath>
#include <complex>
#include <numbers>

#include "osg/errors.hpp"
#include "osg/params.hpp"

namespace osg {

using Complex = std::complex<double>;

/// Which of the two scattered branches of a split packet.
enum class Branch { plus, minus };

/// Minimum-uncertainty Gaussian wavepacket at t = 0.
struct GaussianPacket {
    double center;  ///< m
    double spread;  ///< m, > 0
};

/// Relative kinematics of the two scattered branches at time t.
struct KinematicSplit {
    double dx;         ///< branch separation in position, m (negative by convention)
    double dp;         ///< branch separation in momentum, kg*m/s
    double gamma_exp;  ///< squared phase-space distance; decay exponent of all coherences
    double xplus;      ///< center of the plus branch, m
    double xminus;     ///< center of the minus branch, m
    double beta_re;    ///< Re of the complex squared width, m^2
    double beta_im;    ///< Im of the complex squared width, m^2
};

/// Rabi frequency seen by a packet centered at pkt.center.
inline double rabi_frequency(const GaussianPacket& pkt, const DerivedConstants& c) {
    return 2.0 * c.mass * c.a0 * pkt.center / c.hbar;
}

inline KinematicSplit kinematics(double t, const GaussianPacket& pkt,
                                 const DerivedConstants& c) {
    KinematicSplit s{};
    s.dx = -c.a0 * t * t;
    s.dp = -2.0 * c.mass * c.a0 * t;
    const double sp = kHbar / (2.0 * pkt.spread);  // momentum spread of this packet
    s.gamma_exp = s.dx * s.dx / (8.0 * pkt.spread * pkt.spread) +
                  s.dp * s.dp / (8.0 * sp * sp);
    s.xplus = pkt.center - c.a0 * t * t / 2.0;
    s.xminus = pkt.center + c.a0 * t * t / 2.0;
    s.beta_re = pkt.spread * pkt.spread;
    s.beta_im = c.hbar * t / (2.0 * c.mass);
    return s;
}

/// Position amplitude of one scattered branch at time t. Normalized for all t.
inline Complex split_amplitude(double x, double t, Branch branch,
                               const GaussianPacket& pkt, const DerivedConstants& c) {
    const KinematicSplit s = kinematics(t, pkt, c);
    const Complex beta(s.beta_re, s.beta_im);
    const double sgn = (branch == Branch::plus) ? 1.0 : -1.0;
    const double xc = (branch == Branch::plus) ? s.xplus : s.xminus;
    const Complex pref = std::sqrt(pkt.spread / (std::sqrt(2.0 * std::numbers::pi) * beta));
    const Complex kick = std::exp(Complex(0.0, -sgn * t * c.mass * c.a0 * x / c.hbar));
    const Complex envelope = std::exp(-(x - xc) * (x - xc) / (4.0 * beta));
    return pref * kick * envelope;
}

/// Position amplitude of the unscattered (freely spreading) packet.
inline Complex free_amplitude(double x, double t, const GaussianPacket& pkt,
                              const DerivedConstants& c) {
    const Complex beta(pkt.spread * pkt.spread, c.hbar * t / (2.0 * c.mass));
    const Complex pref = std::sqrt(pkt.spread / (std::sqrt(2.0 * std::numbers::pi) * beta));
    const Complex envelope = std::exp(-(x - pkt.center) * (x - pkt.center) / (4.0 * beta));
    return pref * envelope;
}

/// Scalar product of the minus branch with the plus branch,
/// <minus|plus> = exp(-i*Omega0*t) * exp(-Gamma(t)).
inline Complex overlap_pm(double t, const GaussianPacket& pkt, const DerivedConstants& c) {
    const double gam = kinematics(t, pkt, c).gamma_exp;
    const double omega0 = rabi_frequency(pkt, c);
    return std::polar(std::exp(-gam), -omega0 * t);
}

/// Scalar product of the free packet with one scattered branch,
/// <free|branch> = exp(i*(m*a0^2*t^3/(4*hbar) -/+ Omega0*t/2)) * exp(-Gamma(t)/4).
inline Complex overlap_free_pm(double t, Branch branch, const GaussianPacket& pkt,
                               const DerivedConstants& c) {
    const double gam = kinematics(t, pkt, c).gamma_exp;
    const double omega0 = rabi_frequency(pkt, c);
    const double sgn = (branch == Branch::plus) ? 1.0 : -1.0;
    const double phase =
        c.mass * c.a0 * c.a0 * t * t * t / (4.0 * c.hbar) - sgn * omega0 * t / 2.0;
    return std::polar(std::exp(-gam / 4.0), phase);
}

} // namespace osg

#endif // OSG_PACKETS_HPP
