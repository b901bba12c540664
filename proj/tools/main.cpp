// figint: figure integrals over Jordan regions and the Green/Gauss
// theorem checks they support.  See README.md for the study catalog.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "figint/cli.hpp"

namespace {

struct FlagSet {
    std::string levels;
    std::string domain;
    std::string config_path;
};

void add_common_flags(CLI::App* cmd, figint::RunConfig& cfg, FlagSet& raw) {
    cmd->add_option("--region", cfg.region,
                    "Region: square | disk:N | lshape | icosphere:D | cube | <file>");
    cmd->add_option("--field", cfg.field, "Field spec, e.g. rot or weier:a=0.5,b=3,K=30");
    cmd->add_option("--levels", raw.levels, "Dyadic refinement levels, e.g. 4..9");
    cmd->add_option("--domain", raw.domain, "Grid bounds x0,x1,y0,y1[,z0,z1]");
    cmd->add_option("--tol-line", [&cfg](const CLI::results_t& r) {
        cfg.tol_line = figint::detail::config_number(r[0], "tol-line");
        return true;
    }, "Line-integral tolerance (default 1e-4)");
    cmd->add_option("--tol-figure", [&cfg](const CLI::results_t& r) {
        cfg.tol_figure = figint::detail::config_number(r[0], "tol-figure");
        return true;
    }, "Figure-integral gap tolerance (default: achieved gap)");
    cmd->add_option("--order", cfg.order, "Gauss-Legendre nodes per panel (default 8)");
    cmd->add_option("--hq", cfg.hq, "Quadrature panel width (default: finest cell side)");
    cmd->add_option("--max-seg", [&cfg](const CLI::results_t& r) {
        cfg.max_seg = figint::detail::config_number(r[0], "max-seg");
        return true;
    }, "Polyline resolution for line integrals (default 2e-5)");
    cmd->add_option("--flux-depth", cfg.flux_depth, "Surface subdivision depth (default 2)");
    cmd->add_option("--out", cfg.out, "CSV output path (default: stdout)");
    cmd->add_option("--threads", cfg.threads, "Worker threads (default 1)");
    cmd->add_option("--samples", cfg.samples, "Random samples for additivity (default 1000)");
    cmd->add_option("--seed", cfg.seed, "RNG seed for additivity (default 1)");
    cmd->add_option("--config", raw.config_path, "Run-manifest file (flags win on conflict)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Figure integrals of additive rectangle functions over Jordan regions"};
    app.require_subcommand(1);

    figint::RunConfig cfg;
    FlagSet raw;

    CLI::App* jordan = app.add_subcommand("jordan", "Inner/outer Jordan content study");
    CLI::App* green = app.add_subcommand("green", "Green's theorem verification");
    CLI::App* gauss = app.add_subcommand("gauss", "Divergence theorem verification (3D)");
    CLI::App* additivity = app.add_subcommand("additivity", "Rectangle-function additivity study");
    for (CLI::App* cmd : {jordan, green, gauss, additivity}) add_common_flags(cmd, cfg, raw);

    try {
        app.parse(argc, argv);

        if (jordan->parsed()) cfg.command = figint::Command::Jordan;
        if (green->parsed()) cfg.command = figint::Command::Green;
        if (gauss->parsed()) cfg.command = figint::Command::Gauss;
        if (additivity->parsed()) cfg.command = figint::Command::Additivity;

        CLI::App* active = app.get_subcommands().front();
        if (!raw.levels.empty()) cfg.levels = figint::parse_levels(raw.levels);
        if (!raw.domain.empty()) cfg.domain = figint::parse_domain(raw.domain);

        if (!raw.config_path.empty()) {
            const auto entries = figint::load_config_file(raw.config_path, cfg.command);
            for (const auto& e : entries) {
                const std::string flag = "--" + e.key;
                const bool flag_given =
                    active->count(flag) > 0 || (e.key == "levels" && !raw.levels.empty()) ||
                    (e.key == "domain" && !raw.domain.empty());
                if (flag_given) continue; // flags win on conflict
                try {
                    figint::apply_config_key(cfg, e.key, e.value);
                } catch (const figint::ConfigError& err) {
                    throw figint::ConfigError(raw.config_path + ":" + std::to_string(e.line) +
                                              ": " + err.what());
                }
            }
        }

        return figint::run(cfg);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints help/message
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const figint::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
