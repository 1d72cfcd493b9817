// Scenario runner: sweeps time (and superposition angle) for one of the
// three reduced-dynamics cases, emits the dataset as CSV or JSON, and
// optionally cross-checks every entry against the grid oracle.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osg/scenario.hpp"

namespace {

osg::ScenarioConfig build_config(const CLI::App& app, const std::string& config_path,
                                 const std::string& preset_name) {
    if (!config_path.empty() && !preset_name.empty())
        throw osg::ConfigError("give either --config or --preset, not both");
    osg::ScenarioConfig cfg;
    if (!preset_name.empty()) {
        auto p = osg::preset(preset_name);
        if (!p) throw osg::ConfigError("unknown preset '" + preset_name + "'");
        cfg = *p;
    } else if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw osg::ConfigError("cannot read config file '" + config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        cfg = osg::parse_config(text.str());
    } else {
        throw osg::ConfigError("one of --config or --preset is required");
    }
    return cfg;
}

void print_summary(std::ostream& out, const osg::RunSummary& s) {
    out << "rows=" << s.rows_written << "\n";
    for (const auto& d : s.death_times) {
        out << "gamma=" << osg::detail::format_e17(d.gamma);
        if (d.death)
            out << " death_scan=" << osg::detail::format_e17(d.death->t_scan)
                << " death_envelope=" << osg::detail::format_e17(d.death->t_envelope);
        else
            out << " death=never_entangled";
        out << "\n";
    }
    if (s.oracle_max_discrepancy)
        out << "oracle_max_discrepancy=" << osg::detail::format_e17(*s.oracle_max_discrepancy)
            << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement decay of two atoms coupled to their own motion"};
    std::string config_path, preset_name, scenario_str, format_str, out_path;
    std::vector<double> gammas;
    double t_max = 0.0;
    std::size_t samples = 0;
    bool oracle = false, zero_phase = false;

    app.add_option("--config", config_path, "config file (key=value lines)");
    app.add_option("--preset", preset_name, "named preset: fig1, fig2, fig3 or fig4");
    app.add_option("--scenario", scenario_str, "psi, phi or one_atom");
    app.add_option("--gamma", gammas, "superposition angle in rad (repeatable)");
    app.add_option("--t-max", t_max, "sweep end time, s");
    app.add_option("--samples", samples, "number of time samples");
    app.add_flag("--oracle", oracle, "cross-check closed forms against the grid oracle");
    app.add_flag("--zero-optical-phase", zero_phase,
                 "drop the optical frequency from output coherence phases");
    app.add_option("--format", format_str, "csv or json");
    app.add_option("--out", out_path, "output path ('-' or empty: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        osg::ScenarioConfig cfg = build_config(app, config_path, preset_name);
        if (app.count("--scenario")) cfg.scenario = osg::parse_scenario(scenario_str);
        if (app.count("--gamma")) cfg.gammas = gammas;
        if (app.count("--t-max")) cfg.t_max = t_max;
        if (app.count("--samples")) cfg.n_samples = samples;
        if (oracle) cfg.run_oracle = true;
        if (zero_phase) cfg.zero_optical_phase = true;
        if (app.count("--format")) {
            if (format_str == "csv") cfg.output_format = osg::OutputFormat::csv;
            else if (format_str == "json") cfg.output_format = osg::OutputFormat::json;
            else throw osg::ConfigError("output_format: expected csv or json");
        }
        if (app.count("--out")) cfg.output_path = (out_path == "-") ? "" : out_path;

        const osg::RunSummary summary = osg::run_scenario(cfg);
        print_summary(cfg.output_path.empty() ? std::cerr : std::cout, summary);
        return 0;
    } catch (const osg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const osg::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const osg::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 3;
    }
}
