#ifndef OSG_PARAMS_HPP
#define OSG_PARAMS_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "osg/errors.hpp"

namespace osg {

/// Reduced Planck constant, J*s (CODATA 2018).
inline constexpr double kHbar = 1.054571817e-34;
/// Speed of light in vacuum, m/s (exact).
inline constexpr double kLightSpeed = 2.99792458e8;

/// Largest admissible packet-spread-to-wavelength ratio. The closed forms
/// assume the coupling is linear across the packet; beyond this ratio the
/// model stops describing the physics and inputs are rejected outright.
inline constexpr double kLinearizationThreshold = 1.0 / 20.0;

/// Experiment inputs, all SI. Both atoms share the same values.
struct PhysicalParams {
    double mass;          ///< atomic mass, kg
    double coupling_eps;  ///< atom-field coupling strength, 1/s
    double wavelength;    ///< cavity mode wavelength, m
    double x0;            ///< initial packet center measured from a field node, m
    double dx0;           ///< initial position spread, m
    double gamma;         ///< superposition angle of the initial qubit state, rad
};

/// Quantities derived once from PhysicalParams and shared by every module.
/// `mass` is carried along so downstream closed forms need only this struct.
struct DerivedConstants {
    double k;       ///< mode wavenumber 2*pi/wavelength, 1/m
    double omega;   ///< mode angular frequency c*k, 1/s
    double a0;      ///< acceleration scale of the packet splitting, m/s^2
    double dp0;     ///< initial momentum spread hbar/(2*dx0), kg*m/s
    double omega0;  ///< Rabi frequency 2*eps*k*x0, 1/s
    double mass;    ///< copy of PhysicalParams::mass, kg
    double hbar;    ///< kHbar
    double c;       ///< kLightSpeed
};

/// Throws ValidationError naming the first violated field.
inline void validate(const PhysicalParams& p) {
    if (!(p.mass > 0.0)) throw ValidationError("mass: must be > 0");
    if (!(p.coupling_eps >= 0.0)) throw ValidationError("coupling_eps: must be >= 0");
    if (!(p.wavelength > 0.0)) throw ValidationError("wavelength: must be > 0");
    if (!(p.dx0 > 0.0)) throw ValidationError("dx0: must be > 0");
    if (!(p.gamma >= 0.0 && p.gamma <= std::numbers::pi / 2.0))
        throw ValidationError("gamma: must lie in [0, pi/2]");
    if (p.dx0 / p.wavelength > kLinearizationThreshold)
        throw ValidationError("dx0: spread/wavelength exceeds linearization threshold " +
                              std::to_string(kLinearizationThreshold));
}

inline DerivedConstants derive_constants(const PhysicalParams& p) {
    validate(p);
    DerivedConstants d{};
    d.k = 2.0 * std::numbers::pi / p.wavelength;
    d.omega = kLightSpeed * d.k;
    d.a0 = p.coupling_eps * kHbar * d.k / p.mass;
    d.dp0 = kHbar / (2.0 * p.dx0);
    d.omega0 = 2.0 * p.coupling_eps * d.k * p.x0;
    d.mass = p.mass;
    d.hbar = kHbar;
    d.c = kLightSpeed;
    return d;
}

/// Accumulated channel phase of an excited subsystem:
/// omega*t plus the cubic term picked up by the accelerated branches.
inline double theta0(double t, const DerivedConstants& c) {
    return c.omega * t + c.mass * c.a0 * c.a0 * t * t * t / (6.0 * c.hbar);
}

} // namespace osg

#endif // OSG_PARAMS_HPP
