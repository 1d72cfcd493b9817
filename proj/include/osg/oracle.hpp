#ifndef OSG_ORACLE_HPP
#define OSG_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "osg/dynamics.hpp"
#include "osg/entanglement.hpp"
#include "osg/errors.hpp"
#include "osg/packets.hpp"
#include "osg/params.hpp"

namespace osg {

// ---------------------------------------------------------------------------
// Spatial grid and grid wavefunctions.
// ---------------------------------------------------------------------------

/// Uniform periodic grid with n_points samples on [x_min, x_max).
struct Grid {
    double x_min;
    double x_max;
    std::size_t n_points;

    double dx() const { return (x_max - x_min) / static_cast<double>(n_points); }
    double x_at(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
    bool operator==(const Grid&) const = default;
};

inline Grid make_grid(double x_min, double x_max, std::size_t n_points) {
    if (!(x_max > x_min)) throw ValidationError("grid: x_max must exceed x_min");
    if (n_points < 1024 || (n_points & (n_points - 1)) != 0)
        throw ValidationError("grid: n_points must be a power of two >= 1024");
    return Grid{x_min, x_max, n_points};
}

/// Default domain: 40 initial spreads either side of the packet center,
/// 8192 points. Satisfies the momentum bound up to a few milliseconds for
/// the reference parameter set.
inline Grid default_grid(const PhysicalParams& p) {
    return make_grid(p.x0 - 40.0 * p.dx0, p.x0 + 40.0 * p.dx0, 8192);
}

/// Checks that the grid can represent the dynamics up to t_max: branch
/// centers stay inside the domain with 6 spreads of margin, and dx keeps the
/// kicked packet below half the Nyquist momentum.
inline void validate_grid(const Grid& g, const GaussianPacket& pkt,
                          const DerivedConstants& c, double t_max) {
    const KinematicSplit s = kinematics(t_max, pkt, c);
    const double spread_t = std::sqrt(s.beta_re * s.beta_re + s.beta_im * s.beta_im) /
                            pkt.spread;  // |beta|/spread: packet width at t_max
    const double lo = std::min(s.xplus, s.xminus) - 6.0 * spread_t;
    const double hi = std::max(s.xplus, s.xminus) + 6.0 * spread_t;
    if (lo < g.x_min || hi > g.x_max)
        throw ValidationError("grid: domain does not cover branch centers +- 6 spreads");
    const double kick = std::abs(s.dp);
    if (kick > 0.0 && g.dx() > std::numbers::pi * c.hbar / (4.0 * kick))
        throw ValidationError("grid: dx too coarse for the momentum kick at t_max");
}

struct GridWavefunction {
    Grid grid;
    std::vector<Complex> samples;  ///< amplitude, units m^(-1/2)
};

/// Trapezoid quadrature of conj(f) * g.
inline Complex numeric_overlap(const GridWavefunction& f, const GridWavefunction& g) {
    if (!(f.grid == g.grid)) throw GridMismatch("numeric_overlap: grids differ");
    Complex acc(0.0, 0.0);
    const std::size_t n = f.samples.size();
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(f.samples[i]) * g.samples[i];
    acc -= 0.5 * (std::conj(f.samples[0]) * g.samples[0] +
                  std::conj(f.samples[n - 1]) * g.samples[n - 1]);
    return acc * f.grid.dx();
}

inline double norm(const GridWavefunction& f) {
    return std::sqrt(std::abs(numeric_overlap(f, f)));
}

inline double mean_position(const GridWavefunction& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        acc += f.grid.x_at(i) * std::norm(f.samples[i]);
    return acc * f.grid.dx();
}

/// Initial minimum-uncertainty packet sampled on the grid, renormalized so
/// the trapezoid norm is exactly 1.
inline GridWavefunction initial_packet(const Grid& g, const GaussianPacket& pkt) {
    GridWavefunction f{g, std::vector<Complex>(g.n_points)};
    const double pref = std::pow(2.0 * std::numbers::pi * pkt.spread * pkt.spread, -0.25);
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double d = g.x_at(i) - pkt.center;
        f.samples[i] = pref * std::exp(-d * d / (4.0 * pkt.spread * pkt.spread));
    }
    const double n0 = norm(f);
    for (auto& v : f.samples) v /= n0;
    return f;
}

// ---------------------------------------------------------------------------
// FFT (power-of-two radix-2) and the split-operator stepper.
// ---------------------------------------------------------------------------

namespace detail {

/// Complex product spelled out in components; keeps the hot loops free of
/// the checked libcall the compiler emits for std::complex multiplication.
inline Complex cmul(Complex a, Complex b) {
    return Complex(a.real() * b.real() - a.imag() * b.imag(),
                   a.real() * b.imag() + a.imag() * b.real());
}

/// Radix-2 transform with precomputed twiddles. tw[len/2 + j] holds
/// exp(-2*pi*i*j/len) for every stage length.
struct FftPlan {
    std::size_t n;
    std::vector<Complex> tw;

    explicit FftPlan(std::size_t size) : n(size), tw(size) {
        for (std::size_t len = 2; len <= n; len <<= 1)
            for (std::size_t j = 0; j < len / 2; ++j)
                tw[len / 2 + j] = std::polar(
                    1.0, -2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(len));
    }

    void run(std::vector<Complex>& a, bool inverse) const {
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len / 2;
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const Complex w = inverse ? std::conj(tw[half + j]) : tw[half + j];
                    const Complex u = a[i + j];
                    const Complex v = cmul(a[i + j + half], w);
                    a[i + j] = u + v;
                    a[i + j + half] = u - v;
                }
            }
        }
        if (inverse) {
            const double scale = 1.0 / static_cast<double>(n);
            for (auto& v : a) v *= scale;
        }
    }
};

inline void fft_radix2(std::vector<Complex>& a, bool inverse) {
    FftPlan(a.size()).run(a, inverse);
}

/// Angular wavenumbers in FFT ordering.
inline std::vector<double> k_grid(const Grid& g) {
    std::vector<double> k(g.n_points);
    const double dk = 2.0 * std::numbers::pi / (g.x_max - g.x_min);
    const std::size_t half = g.n_points / 2;
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double idx = (i < half) ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(g.n_points);
        k[i] = dk * idx;
    }
    return k;
}

inline void check_boundary(const GridWavefunction& f) {
    double peak = 0.0;
    for (const auto& v : f.samples) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(f.samples.front()), std::abs(f.samples.back()));
    if (edge > 1e-8 * peak)
        throw GridViolation("propagation: wavefunction reached the grid boundary");
}

/// Second-order split steps under H = p^2/2m + sign * m * a0 * x, no channel
/// phase bookkeeping. Kinetic half-steps are merged across the loop.
inline void strang_steps(GridWavefunction& f, int sign, double dt, std::size_t steps,
                         const DerivedConstants& c, std::size_t check_every = 256) {
    if (steps == 0) return;
    const std::size_t n = f.grid.n_points;
    const FftPlan plan(n);
    const std::vector<double> ks = k_grid(f.grid);
    std::vector<Complex> kin_half(n), kin_full(n), pot(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ek = c.hbar * ks[i] * ks[i] / (2.0 * c.mass);
        kin_half[i] = std::polar(1.0, -ek * dt / 2.0);
        kin_full[i] = cmul(kin_half[i], kin_half[i]);
        const double v = static_cast<double>(sign) * c.mass * c.a0 * f.grid.x_at(i);
        pot[i] = std::polar(1.0, -v * dt / c.hbar);
    }
    auto& s = f.samples;
    plan.run(s, false);
    for (std::size_t i = 0; i < n; ++i) s[i] = cmul(s[i], kin_half[i]);
    plan.run(s, true);
    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) s[i] = cmul(s[i], pot[i]);
        plan.run(s, false);
        const auto& kin = (step + 1 == steps) ? kin_half : kin_full;
        for (std::size_t i = 0; i < n; ++i) s[i] = cmul(s[i], kin[i]);
        plan.run(s, true);
        if ((step + 1) % check_every == 0) check_boundary(f);
    }
}

/// Constant phase that separates the raw channel evolution from the
/// x-representation branch amplitude convention.
inline Complex channel_phase(int sign, double t, const DerivedConstants& c) {
    if (sign == 0) return Complex(1.0, 0.0);
    return std::polar(1.0, c.mass * c.a0 * c.a0 * t * t * t / (6.0 * c.hbar));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Channel propagation.
// ---------------------------------------------------------------------------

struct OracleSettings {
    double dt_max = 1e-7;  ///< upper bound on the split step
    int workers = 3;       ///< concurrent channel propagations (1..3)
};

/// Evolves psi0 for time t under the dressed-channel Hamiltonian selected by
/// sign (+1 / -1: opposite linear potentials, 0: free motion), using `steps`
/// second-order split-operator steps. The returned function matches the
/// closed-form branch amplitude convention (constant channel phase included).
inline GridWavefunction propagate_channel(const GridWavefunction& psi0, int sign,
                                          double t, std::size_t steps,
                                          const DerivedConstants& c) {
    if (sign != -1 && sign != 0 && sign != 1)
        throw ValidationError("propagate_channel: sign must be -1, 0 or +1");
    if (t < 0.0) throw ValidationError("propagate_channel: t must be >= 0");
    GridWavefunction f = psi0;
    if (t == 0.0) return f;
    if (steps < 100) throw ValidationError("propagate_channel: steps must be >= 100");
    detail::strang_steps(f, sign, t / static_cast<double>(steps), steps, c);
    detail::check_boundary(f);
    const Complex ph = detail::channel_phase(sign, t, c);
    for (auto& v : f.samples) v *= ph;
    return f;
}

/// The three dressed-channel wavefunctions of one atom at a common time.
struct ChannelSet {
    double t;
    GridWavefunction plus;    ///< scattered branch under +m*a0*x
    GridWavefunction minus;   ///< scattered branch under -m*a0*x
    GridWavefunction ground;  ///< free channel
};

/// Propagates all three channels once, capturing snapshots at the requested
/// times (ascending, >= 0). Each snapshot carries the channel phase for its
/// absolute time, so entries assembled from it match the closed forms
/// including phases.
inline std::vector<ChannelSet> propagate_channels(const Grid& g, const GaussianPacket& pkt,
                                                  const DerivedConstants& c,
                                                  const std::vector<double>& times,
                                                  const OracleSettings& settings = {}) {
    if (times.empty()) return {};
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
        throw ValidationError("times: must be ascending and non-negative");
    validate_grid(g, pkt, c, times.back());

    const auto run_channel = [&](int sign) {
        std::vector<GridWavefunction> out;
        out.reserve(times.size());
        GridWavefunction f = initial_packet(g, pkt);
        double t_now = 0.0;
        for (double t : times) {
            const double span = t - t_now;
            if (span > 0.0) {
                const auto steps = static_cast<std::size_t>(std::ceil(span / settings.dt_max));
                detail::strang_steps(f, sign, span / static_cast<double>(steps), steps, c);
                t_now = t;
            }
            detail::check_boundary(f);
            GridWavefunction snap = f;
            const Complex ph = detail::channel_phase(sign, t, c);
            for (auto& v : snap.samples) v *= ph;
            const double drift = std::abs(norm(snap) - 1.0);
            if (drift > 1e-8)
                throw NumericalError("channel norm drifted by " + std::to_string(drift));
            out.push_back(std::move(snap));
        }
        return out;
    };

    std::vector<std::vector<GridWavefunction>> per_channel(3);
    const int signs[3] = {+1, -1, 0};
    if (settings.workers > 1) {
        std::vector<std::future<std::vector<GridWavefunction>>> futs;
        for (int sign : signs)
            futs.push_back(std::async(std::launch::async, run_channel, sign));
        for (std::size_t i = 0; i < 3; ++i) per_channel[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < 3; ++i) per_channel[i] = run_channel(signs[i]);
    }

    std::vector<ChannelSet> sets;
    sets.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        sets.push_back(ChannelSet{times[i], std::move(per_channel[0][i]),
                                  std::move(per_channel[1][i]),
                                  std::move(per_channel[2][i])});
    return sets;
}

// ---------------------------------------------------------------------------
// Reduced density matrices by numeric partial trace.
//
// The joint state is expanded over dressed channels: each branch is a product
// of per-atom channel functions tagged with qubit and photon-number labels
// and the constant phase exp(-i * theta0 * N) of its N excitations. Tracing
// over fields and translations reduces to quadrature overlaps between the
// channel functions.
// ---------------------------------------------------------------------------

namespace detail {

/// Gram matrix over {ground, plus+minus, plus-minus} for one atom.
struct ChannelGram {
    std::array<std::array<Complex, 3>, 3> g;

    explicit ChannelGram(const ChannelSet& ch) {
        GridWavefunction sum{ch.plus.grid, ch.plus.samples};
        GridWavefunction dif{ch.plus.grid, ch.plus.samples};
        for (std::size_t i = 0; i < ch.plus.samples.size(); ++i) {
            sum.samples[i] += ch.minus.samples[i];
            dif.samples[i] -= ch.minus.samples[i];
        }
        const GridWavefunction* f[3] = {&ch.ground, &sum, &dif};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    numeric_overlap(*f[i], *f[j]);
                g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    std::conj(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
    }

    /// <f_a | f_b> with indices 0 = ground, 1 = plus+minus, 2 = plus-minus.
    Complex at(int a, int b) const {
        return g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
};

/// One product term of the dressed expansion: coeff * |fA fB> |qA qB> |na nb>.
struct Term {
    Complex coeff;
    int fa, fb;  ///< channel-function index per atom (0 ground, 1 sum, 2 diff)
    int qa, qb;  ///< qubit labels, 0 = |+>, 1 = |->
    int na, nb;  ///< photon numbers
};

inline Eigen::Matrix4cd assemble_two_qubit(const std::vector<Term>& terms,
                                           const ChannelGram& gram) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (const Term& s : terms)
        for (const Term& sp : terms) {
            if (s.na != sp.na || s.nb != sp.nb) continue;
            const Complex w = s.coeff * std::conj(sp.coeff) * gram.at(sp.fa, s.fa) *
                              gram.at(sp.fb, s.fb);
            rho(2 * s.qa + s.qb, 2 * sp.qa + sp.qb) += w;
        }
    return rho;
}

} // namespace detail

/// Reduced two-qubit density matrix at the snapshot time, canonical basis.
inline Eigen::Matrix4cd rho_from_channels(const ChannelSet& ch, Scenario scenario,
                                          double gamma, const DerivedConstants& c) {
    const detail::ChannelGram gram(ch);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const Complex ph1 = std::polar(1.0, -theta0(ch.t, c));
    std::vector<detail::Term> terms;
    if (scenario == Scenario::psi) {
        const Complex alpha = 0.5 * cg * ph1;
        const Complex beta = 0.5 * sg * ph1;
        terms = {
            {alpha, 1, 0, 0, 1, 0, 0},  // |+->, fields |00>
            {alpha, 2, 0, 1, 1, 1, 0},  // |-->, fields |10>
            {beta, 0, 1, 1, 0, 0, 0},   // |-+>, fields |00>
            {beta, 0, 2, 1, 1, 0, 1},   // |-->, fields |01>
        };
    } else if (scenario == Scenario::phi) {
        const Complex kappa = 0.25 * cg * ph1 * ph1;  // two excitations
        terms = {
            {kappa, 1, 1, 0, 0, 0, 0},           // |++>, fields |00>
            {kappa, 1, 2, 0, 1, 0, 1},           // |+->, fields |01>
            {kappa, 2, 1, 1, 0, 1, 0},           // |-+>, fields |10>
            {kappa, 2, 2, 1, 1, 1, 1},           // |-->, fields |11>
            {Complex(sg, 0.0), 0, 0, 1, 1, 0, 0} // |-->, fields |00>
        };
    } else {
        throw ValidationError("rho_from_channels: scenario must be psi or phi");
    }
    return detail::assemble_two_qubit(terms, gram);
}

/// Reduced one-atom density matrix at the snapshot time, basis |+>, |->.
inline Eigen::Matrix2cd rho_one_atom_from_channels(const ChannelSet& ch, double gamma,
                                                   const DerivedConstants& c) {
    const detail::ChannelGram gram(ch);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const Complex ph1 = std::polar(1.0, -theta0(ch.t, c));
    // terms: coeff, channel index, qubit label, photon number
    struct OneTerm {
        Complex coeff;
        int f, q, n;
    };
    const OneTerm terms[3] = {
        {0.5 * cg * ph1, 1, 0, 0},
        {0.5 * cg * ph1, 2, 1, 1},
        {Complex(sg, 0.0), 0, 1, 0},
    };
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (const OneTerm& s : terms)
        for (const OneTerm& sp : terms) {
            if (s.n != sp.n) continue;
            rho(s.q, sp.q) += s.coeff * std::conj(sp.coeff) * gram.at(sp.f, s.f);
        }
    return rho;
}

/// Single-time convenience wrappers over the snapshot driver.
inline Eigen::Matrix4cd numeric_rho(double t, Scenario scenario, const PhysicalParams& p,
                                    const DerivedConstants& c, const Grid& g,
                                    const OracleSettings& settings = {}) {
    const GaussianPacket pkt{p.x0, p.dx0};
    const auto sets = propagate_channels(g, pkt, c, {t}, settings);
    return rho_from_channels(sets.front(), scenario, p.gamma, c);
}

inline Eigen::Matrix2cd numeric_rho_one_atom(double t, const PhysicalParams& p,
                                             const DerivedConstants& c, const Grid& g,
                                             const OracleSettings& settings = {}) {
    const GaussianPacket pkt{p.x0, p.dx0};
    const auto sets = propagate_channels(g, pkt, c, {t}, settings);
    return rho_one_atom_from_channels(sets.front(), p.gamma, c);
}

/// Concurrence of the numerically reconstructed state.
inline double numeric_concurrence(double t, Scenario scenario, const PhysicalParams& p,
                                  const DerivedConstants& c, const Grid& g,
                                  const OracleSettings& settings = {}) {
    return concurrence_wootters(numeric_rho(t, scenario, p, c, g, settings));
}

} // namespace osg

#endif // OSG_ORACLE_HPP
