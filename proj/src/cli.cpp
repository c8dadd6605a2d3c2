#include "fluxline/cli.hpp"

#include <iostream>
#include <sstream>

#include "json.hpp"

#include "fluxline/io.hpp"
#include "fluxline/version.hpp"

namespace fluxline::cli {

namespace {

using nlohmann::json;

std::vector<double> flux_grid(const RunConfig& c) {
    std::vector<double> grid;
    if (c.flux_points < 1) throw ParameterError("flux_points must be >= 1");
    for (int i = 0; i < c.flux_points; ++i)
        grid.push_back(c.flux_points == 1
                           ? c.flux_start
                           : c.flux_start +
                                 (c.flux_stop - c.flux_start) * i / (c.flux_points - 1.0));
    return grid;
}

std::string canonical_config(const RunConfig& c, const std::string& device_text,
                             const std::string& data_text) {
    // The worker-pool size is an execution detail: outputs are identical
    // across thread counts, so it stays out of the config hash.
    std::ostringstream s;
    s << "command=" << c.command << ";seed=" << c.seed
      << ";flux_start=" << io::format_double(c.flux_start)
      << ";flux_stop=" << io::format_double(c.flux_stop) << ";flux_points=" << c.flux_points
      << ";levels=" << c.levels << ";max_photon=" << c.max_photon << ";two_mode=" << c.two_mode
      << ";flux_cal=" << c.flux_cal << ";phi_ext=" << io::format_double(c.phi_ext)
      << ";grid=" << c.grid << ";span1=" << io::format_double(c.span1)
      << ";span2=" << io::format_double(c.span2) << ";tones=" << c.sweep_tone_1 << ","
      << c.sweep_tone_2 << ";targets=" << c.targets
      << ";wait=" << io::format_double(c.wait_min) << ".." << io::format_double(c.wait_max)
      << "x" << c.wait_points << ";fluxon_rate=" << io::format_double(c.fluxon_rate)
      << ";plasmon_rate=" << io::format_double(c.plasmon_rate) << ";device=" << device_text
      << ";data=" << data_text;
    return s.str();
}

io::Provenance make_provenance(const RunConfig& c, const std::string& device_text,
                               const std::string& data_text) {
    io::Provenance p;
    p.version = kVersion;
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(
                      io::fnv1a_hash(canonical_config(c, device_text, data_text))));
    p.config_hash = hex;
    p.seed = c.seed;
    return p;
}

const SingleModeParams& need_single_mode(const io::DeviceFile& dev) {
    if (!dev.single_mode) throw ParameterError("device file lacks a single_mode section");
    return *dev.single_mode;
}

std::vector<StateLabel> parse_targets(const std::string& spec) {
    std::vector<StateLabel> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_label(item));
    }
    if (out.empty()) throw ParameterError("no target states given");
    return out;
}

LabeledSpectrum labeled_at(const io::DeviceFile& dev, const RunConfig& c) {
    const SingleModeParams& p = need_single_mode(dev);
    const EigenSolution sol =
        diagonalize(build_single_mode_hamiltonian(p, FluxBias{c.phi_ext}), c.levels);
    return label_states(sol, p, FluxBias{c.phi_ext});
}

void run_spectrum(const RunConfig& c, const io::DeviceFile& dev, const io::Provenance& prov) {
    SweepOptions opts;
    opts.levels = c.levels;
    opts.max_photon = c.max_photon;
    opts.threads = c.threads;
    const std::vector<double> grid = flux_grid(c);
    SweepResult sweep;
    if (c.two_mode) {
        if (!dev.topology) throw ParameterError("two-mode spectrum needs a topology section");
        const TwoModeParams p = two_mode_from_topology(*dev.topology, need_single_mode(dev).e_j);
        sweep = flux_sweep(p, grid, opts);
    } else {
        sweep = flux_sweep(need_single_mode(dev), grid, opts);
    }
    io::write_sweep_csv(c.out_path, prov, sweep);
}

void run_modes(const RunConfig& c, const io::DeviceFile& dev, const io::Provenance& prov) {
    if (!dev.topology) throw ParameterError("modes needs a topology section");
    std::optional<double> l_j;
    if (dev.single_mode) l_j = constants::josephson_inductance(dev.single_mode->e_j);
    const auto modes = normal_modes(build_ladder(*dev.topology, l_j));
    io::write_modes_csv(c.out_path, prov, modes);
}

void run_kinetic(const RunConfig& c, const io::DeviceFile& dev, io::Provenance prov) {
    if (!dev.geometry) throw ParameterError("kinetic needs a geometry section");
    const double l_k = kinetic_inductance(*dev.geometry);
    json j;
    j["L_k_H"] = l_k;
    j["sheet_inductance_H_per_sq"] = l_k / dev.geometry->squares();
    j["squares"] = dev.geometry->squares();
    j["provenance"] = json::parse(io::provenance_line(prov).substr(2));
    io::write_text(c.out_path, j.dump(2) + "\n");
}

void run_fit(const RunConfig& c, const io::DeviceFile& dev, const io::Provenance& prov) {
    const SpectroscopyDataset data = io::read_dataset_csv(c.data_path);
    FitReport report;
    if (c.two_mode) {
        if (!dev.topology) throw ParameterError("two-mode fit needs a topology section");
        TwoModeFitOptions opts;
        opts.e_j_init = need_single_mode(dev).e_j;
        opts.simplex.threads = c.threads;
        opts.simplex.seed = c.seed;
        report = fit_two_mode(data, *dev.topology, TwoModeFitMask{}, opts);
    } else {
        SingleModeFitOptions opts;
        opts.simplex.threads = c.threads;
        opts.simplex.seed = c.seed;
        report = fit_single_mode(data, need_single_mode(dev), c.flux_cal, opts);
    }
    json j = json::parse(io::fit_report_to_json(report));
    j["provenance"] = json::parse(io::provenance_line(prov).substr(2));
    io::write_text(c.out_path, j.dump(2) + "\n");
}

void run_t1_curve(const RunConfig& c, const io::DeviceFile& dev, const io::Provenance& prov) {
    if (!dev.loss) throw ParameterError("t1-curve needs a loss section");
    T1CurveOptions opts;
    opts.threads = c.threads;
    if (dev.resonator && dev.resonator->g > 0.0) opts.resonator = dev.resonator;
    const auto curve = t1_curve(need_single_mode(dev), *dev.loss, flux_grid(c), opts);
    io::write_t1_curve_csv(c.out_path, prov, curve);
}

void run_loss_fit(const RunConfig& c, const io::DeviceFile& dev, const io::Provenance& prov) {
    if (!dev.loss) throw ParameterError("loss-fit needs a loss section with initial Q values");
    const auto data = io::read_t1_data_csv(c.data_path);
    const QualityFactorFit fit = fit_quality_factors(data, need_single_mode(dev), *dev.loss);
    json j = json::parse(io::loss_fit_to_json(fit));
    j["provenance"] = json::parse(io::provenance_line(prov).substr(2));
    io::write_text(c.out_path, j.dump(2) + "\n");
}

void run_drive_map(const RunConfig& c, const io::DeviceFile& dev, io::Provenance prov) {
    if (!dev.loss) throw ParameterError("drive-map needs a loss section");
    if (dev.drives.size() < 2) throw ParameterError("drive-map needs at least two drives");
    const int n_tones = static_cast<int>(dev.drives.size());
    if (c.sweep_tone_1 < 0 || c.sweep_tone_1 >= n_tones || c.sweep_tone_2 < 0 ||
        c.sweep_tone_2 >= n_tones)
        throw ParameterError("swept tone index out of range");

    const LabeledSpectrum s = labeled_at(dev, c);
    const auto collapse = collapse_from_loss(s, *dev.loss);
    DrivePlan plan;
    plan.tones = dev.drives;
    plan.level_count = c.levels;

    const double f1 = plan.tones[c.sweep_tone_1].frequency;
    const double f2 = plan.tones[c.sweep_tone_2].frequency;
    DriveMapOptions opts;
    opts.threads = c.threads;
    opts.targets = parse_targets(c.targets);
    const PopulationMap map = drive_map(
        s, plan, {c.sweep_tone_1, Eigen::VectorXd::LinSpaced(c.grid, f1 - c.span1, f1 + c.span1)},
        {c.sweep_tone_2, Eigen::VectorXd::LinSpaced(c.grid, f2 - c.span2, f2 + c.span2)},
        collapse, opts);

    json extra;
    extra["phi_ext_rad"] = c.phi_ext;
    extra["axis1_tone"] = c.sweep_tone_1;
    extra["axis2_tone"] = c.sweep_tone_2;
    extra["grid"] = c.grid;
    prov.extra_json = extra.dump();
    io::write_map_csv(c.out_path, prov, map);
}

void run_pulse_t1(const RunConfig& c, const io::DeviceFile& dev, io::Provenance prov) {
    if (!dev.loss) throw ParameterError("pulse-t1 needs a loss section");
    const LabeledSpectrum s = labeled_at(dev, c);

    std::vector<CollapseOp> collapse;
    if (c.fluxon_rate > 0.0 || c.plasmon_rate > 0.0) {
        // Injected two-channel model: plasmon decay inside each well, fluxon
        // decay between the well ground states.
        for (int i = 1; i < s.size(); ++i)
            for (int j = 0; j < i; ++j) {
                const bool same_well = s.labels[i].well_index == s.labels[j].well_index;
                if (same_well && s.labels[i].rank == s.labels[j].rank + 1 && c.plasmon_rate > 0.0)
                    collapse.push_back({i, j, c.plasmon_rate});
                if (!same_well && s.labels[i].rank == 0 && s.labels[j].rank == 0 &&
                    c.fluxon_rate > 0.0)
                    collapse.push_back({i, j, c.fluxon_rate});
            }
    } else {
        collapse = collapse_from_loss(s, *dev.loss);
    }

    std::vector<PulseSpec> pulses = dev.pulses;
    if (pulses.empty()) {
        // Default protocol: g0 -> f0 (two photon), f0 -> h0, h0 -> e-1.
        const StateLabel g0 = parse_label("g0"), f0 = parse_label("f0"), h0 = parse_label("h0"),
                         em1 = parse_label("e-1");
        for (const auto& [a, b] : {std::pair{g0, f0}, std::pair{f0, h0}, std::pair{h0, em1}}) {
            PulseSpec pulse;
            pulse.target = std::make_pair(a, b);
            const int ia = s.index_of(a), ib = s.index_of(b);
            if (ia < 0 || ib < 0)
                throw NumericalError("pulse-t1: protocol state " + a.str() + " or " + b.str() +
                                     " not among the retained levels");
            pulse.carrier = std::abs(s.energies(ib) - s.energies(ia));
            pulses.push_back(pulse);
        }
    }

    std::vector<double> waits;
    for (int i = 0; i < c.wait_points; ++i)
        waits.push_back(c.wait_min + (c.wait_max - c.wait_min) * i /
                                         std::max(1, c.wait_points - 1));
    const PulseT1Result result = pulse_sequence_t1(s, pulses, collapse, waits);

    json extra;
    extra["fitted_t1_s"] = result.fitted_t1;
    extra["fit_ok"] = result.fit_ok;
    if (!result.diagnostic.empty()) extra["fit_diagnostic"] = result.diagnostic;
    prov.extra_json = extra.dump();
    io::write_pulse_trace_csv(c.out_path, prov, result);
    std::cout << "fitted_t1_s=" << io::format_double(result.fitted_t1) << "\n";
}

} // namespace

int run(const RunConfig& config) {
    std::string device_text, data_text;
    try {
        if (config.out_path.empty()) throw ParameterError("an output path is required");
        if (config.device_path.empty()) throw ParameterError("a device file is required");
        device_text = io::read_text(config.device_path);
        if (!config.data_path.empty()) data_text = io::read_text(config.data_path);
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const io::DeviceFile dev = io::load_device(config.device_path);
        const io::Provenance prov = make_provenance(config, device_text, data_text);
        if (config.command == "spectrum") run_spectrum(config, dev, prov);
        else if (config.command == "modes") run_modes(config, dev, prov);
        else if (config.command == "kinetic") run_kinetic(config, dev, prov);
        else if (config.command == "fit") run_fit(config, dev, prov);
        else if (config.command == "t1-curve") run_t1_curve(config, dev, prov);
        else if (config.command == "loss-fit") run_loss_fit(config, dev, prov);
        else if (config.command == "drive-map") run_drive_map(config, dev, prov);
        else if (config.command == "pulse-t1") run_pulse_t1(config, dev, prov);
        else throw ParameterError("unknown command: " + config.command);
        return 0;
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!config.out_path.empty()) {
            try {
                io::write_text(config.out_path + ".diagnostics.txt",
                               std::string("numerical failure: ") + e.what() + "\n");
            } catch (...) {
            }
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace fluxline::cli
