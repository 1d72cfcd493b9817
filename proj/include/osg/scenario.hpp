#ifndef OSG_SCENARIO_HPP
#define OSG_SCENARIO_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "osg/dynamics.hpp"
#include "osg/entanglement.hpp"
#include "osg/errors.hpp"
#include "osg/oracle.hpp"
#include "osg/params.hpp"

namespace osg {

enum class OutputFormat { csv, json };

/// Everything a run needs. Flat key=value config documents mirror these
/// fields one to one (physical parameters flattened to their own names).
struct ScenarioConfig {
    Scenario scenario = Scenario::psi;
    PhysicalParams physical{};
    double t_max = 3e-3;
    std::size_t n_samples = 3000;
    std::vector<double> gammas;
    bool run_oracle = false;
    bool zero_optical_phase = false;
    OutputFormat output_format = OutputFormat::csv;
    std::string output_path;  ///< empty: write dataset to stdout
};

/// Reference experiment: centimeter mode, 10^4/s coupling, 10^-26 kg atom,
/// packet centered a tenth of a wavelength from the node with lambda/50 spread.
inline PhysicalParams reference_params() {
    PhysicalParams p{};
    p.mass = 1e-26;
    p.coupling_eps = 1e4;
    p.wavelength = 1e-2;
    p.x0 = p.wavelength / 10.0;
    p.dx0 = p.wavelength / 50.0;
    p.gamma = std::numbers::pi / 4.0;
    return p;
}

inline std::vector<double> reference_gammas() {
    return {std::numbers::pi / 4.0, std::numbers::pi / 6.0, std::numbers::pi / 12.0};
}

inline std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::psi: return "psi";
        case Scenario::phi: return "phi";
        case Scenario::one_atom: return "one_atom";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string& s) {
    if (s == "psi") return Scenario::psi;
    if (s == "phi") return Scenario::phi;
    if (s == "one_atom") return Scenario::one_atom;
    throw ConfigError("scenario: unknown value '" + s + "'");
}

/// Named configurations reproducing the four reference datasets.
/// fig1/fig3 sweep the one-excitation family (concurrence and the negative
/// transpose eigenvalue live in different columns of the same dataset);
/// fig2/fig4 sweep the two-excitation family.
inline std::optional<ScenarioConfig> preset(const std::string& name) {
    ScenarioConfig cfg{};
    cfg.physical = reference_params();
    cfg.gammas = reference_gammas();
    if (name == "fig1" || name == "fig3")
        cfg.scenario = Scenario::psi;
    else if (name == "fig2" || name == "fig4")
        cfg.scenario = Scenario::phi;
    else
        return std::nullopt;
    cfg.output_path = name + ".csv";
    return cfg;
}

// ---------------------------------------------------------------------------
// Config document parsing and serialization.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, int line, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number at line " + std::to_string(line));
    }
    if (pos != v.size())
        throw ConfigError(key + ": trailing characters at line " + std::to_string(line));
    return out;
}

inline bool parse_bool(const std::string& key, int line, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected true/false at line " + std::to_string(line));
}

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Scientific notation with 17 significant digits; round-trip safe and
/// byte-stable across runs.
inline std::string format_e17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace detail

inline void validate_config(const ScenarioConfig& cfg) {
    if (cfg.n_samples < 2) throw ConfigError("n_samples: must be >= 2");
    if (!(cfg.t_max > 0.0)) throw ConfigError("t_max: must be > 0");
    if (cfg.gammas.empty()) throw ConfigError("gammas: must not be empty");
    for (double g : cfg.gammas)
        if (!(g >= 0.0 && g <= std::numbers::pi / 2.0))
            throw ConfigError("gammas: value " + detail::format_g17(g) +
                              " outside [0, pi/2]");
    PhysicalParams p = cfg.physical;
    p.gamma = cfg.gammas.front();
    try {
        validate(p);
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
}

/// Parses a flat key=value document ('#' starts a comment). Unknown keys are
/// rejected. Every key except `scenario` has a default.
inline ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg{};
    cfg.physical = reference_params();
    cfg.gammas = reference_gammas();
    bool have_scenario = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = detail::trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at line " + std::to_string(line));
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));

        if (key == "scenario") {
            cfg.scenario = parse_scenario(val);
            have_scenario = true;
        } else if (key == "mass") {
            cfg.physical.mass = detail::parse_double(key, line, val);
        } else if (key == "coupling_eps") {
            cfg.physical.coupling_eps = detail::parse_double(key, line, val);
        } else if (key == "wavelength") {
            cfg.physical.wavelength = detail::parse_double(key, line, val);
        } else if (key == "x0") {
            cfg.physical.x0 = detail::parse_double(key, line, val);
        } else if (key == "dx0") {
            cfg.physical.dx0 = detail::parse_double(key, line, val);
        } else if (key == "t_max") {
            cfg.t_max = detail::parse_double(key, line, val);
        } else if (key == "n_samples") {
            const double v = detail::parse_double(key, line, val);
            if (v < 0.0 || v != std::floor(v))
                throw ConfigError("n_samples: not a non-negative integer at line " +
                                  std::to_string(line));
            cfg.n_samples = static_cast<std::size_t>(v);
        } else if (key == "gammas") {
            cfg.gammas.clear();
            std::istringstream gs(val);
            std::string item;
            while (std::getline(gs, item, ','))
                cfg.gammas.push_back(detail::parse_double(key, line, detail::trim(item)));
            if (cfg.gammas.empty()) throw ConfigError("gammas: empty list at line " +
                                                      std::to_string(line));
        } else if (key == "run_oracle") {
            cfg.run_oracle = detail::parse_bool(key, line, val);
        } else if (key == "zero_optical_phase") {
            cfg.zero_optical_phase = detail::parse_bool(key, line, val);
        } else if (key == "output_format") {
            if (val == "csv") cfg.output_format = OutputFormat::csv;
            else if (val == "json") cfg.output_format = OutputFormat::json;
            else throw ConfigError("output_format: expected csv or json at line " +
                                   std::to_string(line));
        } else if (key == "output_path") {
            cfg.output_path = val;
        } else {
            throw ConfigError("unknown key '" + key + "' at line " + std::to_string(line));
        }
    }
    if (!have_scenario) throw ConfigError("scenario: missing (psi, phi or one_atom)");
    validate_config(cfg);
    return cfg;
}

inline std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "scenario=" << scenario_name(cfg.scenario) << "\n";
    out << "mass=" << detail::format_g17(cfg.physical.mass) << "\n";
    out << "coupling_eps=" << detail::format_g17(cfg.physical.coupling_eps) << "\n";
    out << "wavelength=" << detail::format_g17(cfg.physical.wavelength) << "\n";
    out << "x0=" << detail::format_g17(cfg.physical.x0) << "\n";
    out << "dx0=" << detail::format_g17(cfg.physical.dx0) << "\n";
    out << "t_max=" << detail::format_g17(cfg.t_max) << "\n";
    out << "n_samples=" << cfg.n_samples << "\n";
    out << "gammas=";
    for (std::size_t i = 0; i < cfg.gammas.size(); ++i)
        out << (i ? "," : "") << detail::format_g17(cfg.gammas[i]);
    out << "\n";
    out << "run_oracle=" << (cfg.run_oracle ? "true" : "false") << "\n";
    out << "zero_optical_phase=" << (cfg.zero_optical_phase ? "true" : "false") << "\n";
    out << "output_format=" << (cfg.output_format == OutputFormat::csv ? "csv" : "json")
        << "\n";
    out << "output_path=" << cfg.output_path << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Dataset evaluation.
// ---------------------------------------------------------------------------

struct DeathSummary {
    double gamma;
    std::optional<DeathTime> death;  ///< nullopt: never entangled
};

struct RunSummary {
    std::vector<DeathSummary> death_times;          ///< phi scenario only
    std::optional<double> oracle_max_discrepancy;   ///< when run_oracle
    std::size_t rows_written = 0;
};

inline std::vector<std::string> dataset_columns(Scenario s) {
    switch (s) {
        case Scenario::psi:
            return {"t", "gamma", "gamma_exp", "a1", "a2", "re_a3", "im_a3", "a4",
                    "concurrence_closed", "concurrence_general", "min_ppt_eig",
                    "separable"};
        case Scenario::phi:
            return {"t", "gamma", "gamma_exp", "re_b1", "im_b1", "b2", "b3", "b5",
                    "concurrence_closed", "concurrence_general", "d_value",
                    "min_ppt_eig", "separable"};
        case Scenario::one_atom:
            return {"t", "gamma", "gamma_exp", "q1", "re_q2", "im_q2", "q3"};
    }
    return {};
}

namespace detail {

inline Eigen::Matrix2cd one_atom_matrix(const CoeffsOneAtom& q) {
    Eigen::Matrix2cd m;
    m(0, 0) = q.q1;
    m(0, 1) = q.q2;
    m(1, 0) = std::conj(q.q2);
    m(1, 1) = q.q3;
    return m;
}

inline std::vector<double> evaluate_row(Scenario scenario, double t, double gamma,
                                        const PhysicalParams& p,
                                        const DerivedConstants& c) {
    const RotatingTerms rt = rotating_terms(t, p, c);
    PhysicalParams pg = p;
    pg.gamma = gamma;
    switch (scenario) {
        case Scenario::psi: {
            const CoeffsPsi a = coeffs_psi_at(gamma, rt);
            const XState rho{{0.0, a.a1, a.a2, a.a4}, a.a3, Complex(0.0, 0.0)};
            const PptReport rep = ppt_report(rho);
            const ConcurrenceSample cs = concurrence_sample(t, Scenario::psi, pg, c);
            return {t, gamma, rt.gamma_exp, a.a1, a.a2, a.a3.real(), a.a3.imag(), a.a4,
                    cs.c_closed, cs.c_general, rep.min_eig, rep.separable ? 1.0 : 0.0};
        }
        case Scenario::phi: {
            const CoeffsPhi b = coeffs_phi_at(gamma, rt);
            const XState rho{{b.b2, b.b3, b.b4, b.b5}, Complex(0.0, 0.0), b.b1};
            const PptReport rep = ppt_report(rho);
            const ConcurrenceSample cs = concurrence_sample(t, Scenario::phi, pg, c);
            return {t, gamma, rt.gamma_exp, b.b1.real(), b.b1.imag(), b.b2, b.b3, b.b5,
                    cs.c_closed, cs.c_general, cs.d_value, rep.min_eig,
                    rep.separable ? 1.0 : 0.0};
        }
        case Scenario::one_atom: {
            const CoeffsOneAtom q = coeffs_one_atom_at(gamma, rt);
            return {t, gamma, rt.gamma_exp, q.q1, q.q2.real(), q.q2.imag(), q.q3};
        }
    }
    return {};
}

inline double oracle_row_discrepancy(Scenario scenario, const ChannelSet& ch,
                                     double gamma, double t, const PhysicalParams& p,
                                     const DerivedConstants& c) {
    PhysicalParams pg = p;
    pg.gamma = gamma;
    if (scenario == Scenario::one_atom) {
        const Eigen::Matrix2cd num = rho_one_atom_from_channels(ch, gamma, c);
        const Eigen::Matrix2cd cls = one_atom_matrix(coeffs_one_atom(t, pg, c));
        return (num - cls).cwiseAbs().maxCoeff();
    }
    const Eigen::Matrix4cd num = rho_from_channels(ch, scenario, gamma, c);
    const Eigen::Matrix4cd cls = to_matrix(scenario == Scenario::psi ? rho_psi(t, pg, c)
                                                                     : rho_phi(t, pg, c));
    return (num - cls).cwiseAbs().maxCoeff();
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& cols,
                      const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    const bool has_flag = cols.back() == "separable";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            if (has_flag && i + 1 == row.size())
                out << (row[i] != 0.0 ? "1" : "0");
            else
                out << format_e17(row[i]);
        }
        out << "\n";
    }
}

inline nlohmann::json config_json(const ScenarioConfig& cfg) {
    return nlohmann::json{
        {"scenario", scenario_name(cfg.scenario)},
        {"mass", cfg.physical.mass},
        {"coupling_eps", cfg.physical.coupling_eps},
        {"wavelength", cfg.physical.wavelength},
        {"x0", cfg.physical.x0},
        {"dx0", cfg.physical.dx0},
        {"t_max", cfg.t_max},
        {"n_samples", cfg.n_samples},
        {"gammas", cfg.gammas},
        {"run_oracle", cfg.run_oracle},
        {"zero_optical_phase", cfg.zero_optical_phase},
        {"output_format", cfg.output_format == OutputFormat::csv ? "csv" : "json"},
        {"output_path", cfg.output_path}};
}

inline void write_json(std::ostream& out, const ScenarioConfig& cfg,
                       const DerivedConstants& c, const std::vector<std::string>& cols,
                       const std::vector<std::vector<double>>& rows,
                       const RunSummary& summary) {
    nlohmann::json meta;
    meta["config"] = config_json(cfg);
    meta["derived_constants"] = {{"k", c.k},         {"omega", c.omega},
                                 {"a0", c.a0},       {"dp0", c.dp0},
                                 {"omega0", c.omega0}, {"hbar", c.hbar},
                                 {"c", c.c}};
    if (!summary.death_times.empty()) {
        nlohmann::json deaths = nlohmann::json::array();
        for (const auto& d : summary.death_times) {
            nlohmann::json e{{"gamma", d.gamma}};
            if (d.death) {
                e["t_scan"] = d.death->t_scan;
                e["t_envelope"] = d.death->t_envelope;
            } else {
                e["never_entangled"] = true;
            }
            deaths.push_back(e);
        }
        meta["death_times"] = deaths;
    }
    if (summary.oracle_max_discrepancy)
        meta["oracle_max_discrepancy"] = *summary.oracle_max_discrepancy;

    nlohmann::json jrows = nlohmann::json::array();
    const bool has_flag = cols.back() == "separable";
    for (const auto& row : rows) {
        nlohmann::json r;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (has_flag && i + 1 == row.size())
                r[cols[i]] = row[i] != 0.0;
            else
                r[cols[i]] = row[i];
        }
        jrows.push_back(r);
    }
    out << nlohmann::json{{"metadata", meta}, {"rows", jrows}}.dump(2) << "\n";
}

} // namespace detail

/// Evaluates the full (gamma, t) sweep, writes the dataset, and returns the
/// summary. Oracle comparison, when requested, shares one channel propagation
/// across every gamma and scenario row.
inline RunSummary run_scenario(const ScenarioConfig& cfg) {
    validate_config(cfg);
    PhysicalParams p = cfg.physical;
    p.gamma = cfg.gammas.front();
    DerivedConstants c = derive_constants(p);
    if (cfg.zero_optical_phase) c.omega = 0.0;

    std::vector<double> times(cfg.n_samples);
    for (std::size_t i = 0; i < cfg.n_samples; ++i)
        times[i] = cfg.t_max * static_cast<double>(i) /
                   static_cast<double>(cfg.n_samples - 1);

    std::vector<ChannelSet> channels;
    if (cfg.run_oracle) {
        const GaussianPacket pkt{p.x0, p.dx0};
        channels = propagate_channels(default_grid(p), pkt, c, times);
    }

    RunSummary summary{};
    const std::vector<std::string> cols = dataset_columns(cfg.scenario);
    std::vector<std::vector<double>> rows;
    rows.reserve(cfg.gammas.size() * cfg.n_samples);
    double max_disc = 0.0;
    for (double gamma : cfg.gammas) {
        for (std::size_t i = 0; i < cfg.n_samples; ++i) {
            rows.push_back(detail::evaluate_row(cfg.scenario, times[i], gamma, p, c));
            if (cfg.run_oracle) {
                const double disc = detail::oracle_row_discrepancy(
                    cfg.scenario, channels[i], gamma, times[i], p, c);
                max_disc = std::max(max_disc, disc);
                if (disc > 1e-6)
                    throw ToleranceError("oracle mismatch " + detail::format_g17(disc) +
                                         " at t=" + detail::format_g17(times[i]) +
                                         ", gamma=" + detail::format_g17(gamma));
            }
        }
        if (cfg.scenario == Scenario::phi) {
            PhysicalParams pg = p;
            pg.gamma = gamma;
            std::size_t n_scan = cfg.n_samples;
            if (c.omega0 > 0.0) {
                const double step_needed = (2.0 * std::numbers::pi / c.omega0) / 50.0;
                const auto n_min =
                    static_cast<std::size_t>(std::ceil(cfg.t_max / step_needed)) + 2;
                n_scan = std::max(n_scan, n_min);
            }
            summary.death_times.push_back(
                DeathSummary{gamma, sudden_death_time(pg, c, TimeGrid{cfg.t_max, n_scan})});
        }
    }
    if (cfg.run_oracle) summary.oracle_max_discrepancy = max_disc;
    summary.rows_written = rows.size();

    const auto emit = [&](std::ostream& out) {
        if (cfg.output_format == OutputFormat::csv)
            detail::write_csv(out, cols, rows);
        else
            detail::write_json(out, cfg, c, cols, rows, summary);
        if (!out) throw IoError("failed while writing dataset");
    };
    if (cfg.output_path.empty()) {
        emit(std::cout);
    } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) throw IoError("cannot open output path '" + cfg.output_path + "'");
        emit(out);
    }
    return summary;
}

} // namespace osg

#endif // OSG_SCENARIO_HPP
