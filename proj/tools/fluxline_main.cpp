#include "CLI11.hpp"

#include "fluxline/cli.hpp"
#include "fluxline/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fluxline: nanowire-superinductance fluxonium modeling"};
    app.set_version_flag("--version", fluxline::kVersion);
    app.require_subcommand(1);

    fluxline::cli::RunConfig cfg;

    auto add_common = [&](CLI::App* cmd, bool needs_data) {
        cmd->add_option("--device", cfg.device_path, "device JSON file")->required();
        cmd->add_option("--out", cfg.out_path, "output file")->required();
        cmd->add_option("--threads", cfg.threads, "worker threads");
        cmd->add_option("--seed", cfg.seed, "RNG seed recorded in provenance");
        if (needs_data)
            cmd->add_option("--data", cfg.data_path, "input data CSV")->required();
    };
    auto add_flux_range = [&](CLI::App* cmd) {
        cmd->add_option("--flux-start", cfg.flux_start, "first flux, rad");
        cmd->add_option("--flux-stop", cfg.flux_stop, "last flux, rad");
        cmd->add_option("--flux-points", cfg.flux_points, "grid size");
    };

    auto* spectrum = app.add_subcommand("spectrum", "flux-sweep transition catalog CSV");
    add_common(spectrum, false);
    add_flux_range(spectrum);
    spectrum->add_option("--levels", cfg.levels, "eigenlevels per flux point");
    spectrum->add_option("--max-photon", cfg.max_photon, "highest photon order");
    spectrum->add_flag("--two-mode", cfg.two_mode, "use the two-mode nanowire model");

    auto* fit = app.add_subcommand("fit", "fit device parameters to spectroscopy data");
    add_common(fit, true);
    fit->add_flag("--two-mode", cfg.two_mode, "fit the nanowire topology instead");
    fit->add_flag("!--no-flux-cal", cfg.flux_cal, "disable flux offset/scale co-fit");

    auto* modes = app.add_subcommand("modes", "normal-mode table of the nanowire ladder");
    add_common(modes, false);

    auto* kinetic = app.add_subcommand("kinetic", "kinetic inductance from geometry");
    add_common(kinetic, false);

    auto* t1curve = app.add_subcommand("t1-curve", "per-channel T1 vs flux CSV");
    add_common(t1curve, false);
    add_flux_range(t1curve);

    auto* lossfit = app.add_subcommand("loss-fit", "fit Q_L, Q_C to measured T1 data");
    add_common(lossfit, true);

    auto* map = app.add_subcommand("drive-map", "steady-state population over two tone axes");
    add_common(map, false);
    map->add_option("--flux", cfg.phi_ext, "operating flux, rad");
    map->add_option("--levels", cfg.levels, "retained eigenlevels");
    map->add_option("--grid", cfg.grid, "points per axis");
    map->add_option("--span1", cfg.span1, "half width of axis 1, GHz");
    map->add_option("--span2", cfg.span2, "half width of axis 2, GHz");
    map->add_option("--tone1", cfg.sweep_tone_1, "index of the first swept tone");
    map->add_option("--tone2", cfg.sweep_tone_2, "index of the second swept tone");
    map->add_option("--targets", cfg.targets, "comma-separated labels summed as the signal");

    auto* pulse = app.add_subcommand("pulse-t1", "three-pulse preparation and T1 fit");
    add_common(pulse, false);
    pulse->add_option("--flux", cfg.phi_ext, "operating flux, rad");
    pulse->add_option("--levels", cfg.levels, "retained eigenlevels");
    pulse->add_option("--wait-min", cfg.wait_min, "first wait time, s");
    pulse->add_option("--wait-max", cfg.wait_max, "last wait time, s");
    pulse->add_option("--wait-points", cfg.wait_points, "wait grid size");
    pulse->add_option("--fluxon-rate", cfg.fluxon_rate, "injected fluxon decay rate, 1/s");
    pulse->add_option("--plasmon-rate", cfg.plasmon_rate, "injected plasmon decay rate, 1/s");

    CLI11_PARSE(app, argc, argv);

    for (auto* cmd : {spectrum, fit, modes, kinetic, t1curve, lossfit, map, pulse}) {
        if (cmd->parsed()) {
            cfg.command = cmd->get_name();
            break;
        }
    }
    return fluxline::cli::run(cfg);
}
