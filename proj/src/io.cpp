#include "fluxline/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fluxline/version.hpp"

namespace fluxline::io {

using nlohmann::json;

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string provenance_line(const Provenance& p) {
    json j;
    j["tool"] = "fluxline";
    j["version"] = p.version.empty() ? kVersion : p.version;
    j["config_hash"] = p.config_hash;
    j["seed"] = p.seed;
    std::string created = p.created_utc;
    if (created.empty()) {
        std::time_t t = 0;
        if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
            t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
        else
            t = std::time(nullptr);
        char buf[32];
        std::tm tm_utc{};
        gmtime_r(&t, &tm_utc);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        created = buf;
    }
    j["created_utc"] = created;
    if (!p.extra_json.empty()) {
        const json extra = json::parse(p.extra_json);
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    }
    return "# " + j.dump();
}

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

double need(const json& j, const char* key) {
    if (!j.contains(key)) throw IoError(std::string("missing key ") + key);
    return j.at(key).get<double>();
}

} // namespace

DeviceFile load_device(const std::string& path) {
    const json j = parse_file(path);
    DeviceFile d;
    if (j.contains("single_mode")) {
        const auto& s = j["single_mode"];
        d.single_mode = SingleModeParams{need(s, "E_C_GHz"), need(s, "E_L_GHz"),
                                         need(s, "E_J_GHz")};
        d.single_mode->validate();
    }
    if (j.contains("topology")) {
        const auto& t = j["topology"];
        CircuitTopology topo;
        topo.l_nw = need(t, "L_nw_H");
        topo.c_nw = need(t, "C_nw_F");
        topo.c_0 = t.value("C_0_F", 0.0);
        topo.c_g = t.value("C_g_F", 0.0);
        topo.c_j = t.value("C_J_F", 4e-15);
        topo.n_cells = t.value("n_cells", 64);
        topo.validate();
        d.topology = topo;
    }
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        NanowireGeometry geo;
        geo.length = need(g, "length_m");
        geo.width = need(g, "width_m");
        geo.thickness = need(g, "thickness_m");
        if (g.contains("n_s_per_m3")) geo.n_s = g["n_s_per_m3"].get<double>();
        geo.validate();
        d.geometry = geo;
    }
    if (j.contains("resonator")) {
        const auto& r = j["resonator"];
        d.resonator = ResonatorParams{need(r, "omega_r_GHz"), need(r, "Q_loaded"),
                                      r.value("g_GHz", 0.0)};
        d.resonator->validate();
    }
    if (j.contains("loss")) {
        const auto& l = j["loss"];
        d.loss = LossModel{need(l, "Q_L"), need(l, "Q_C"), l.value("T_K", 0.020)};
        d.loss->validate();
    }
    if (j.contains("drives")) {
        for (const auto& t : j["drives"]) {
            DriveTone tone;
            tone.frequency = need(t, "freq_GHz");
            tone.amplitude = need(t, "amp_GHz");
            tone.photon_order = t.value("photon_order", 1);
            if (t.contains("target")) {
                const std::string spec = t["target"].get<std::string>();
                const auto arrow = spec.find("->");
                if (arrow == std::string::npos)
                    throw IoError("drive target must look like 'g0->f0'");
                tone.target = std::make_pair(parse_label(spec.substr(0, arrow)),
                                             parse_label(spec.substr(arrow + 2)));
            }
            tone.validate();
            d.drives.push_back(tone);
        }
    }
    if (j.contains("pulses")) {
        for (const auto& t : j["pulses"]) {
            PulseSpec pulse;
            pulse.sigma = t.value("sigma_s", 15e-9);
            pulse.carrier = t.value("carrier_GHz", 0.0);
            pulse.area = t.value("area_rad", M_PI);
            pulse.truncation = t.value("truncation_sigmas", 4.0);
            if (t.contains("target")) {
                const std::string spec = t["target"].get<std::string>();
                const auto arrow = spec.find("->");
                if (arrow == std::string::npos)
                    throw IoError("pulse target must look like 'g0->f0'");
                pulse.target = std::make_pair(parse_label(spec.substr(0, arrow)),
                                              parse_label(spec.substr(arrow + 2)));
            }
            pulse.validate();
            d.pulses.push_back(pulse);
        }
    }
    return d;
}

std::string device_to_json(const DeviceFile& d) {
    json j;
    if (d.single_mode) {
        j["single_mode"] = {{"E_C_GHz", d.single_mode->e_c},
                            {"E_L_GHz", d.single_mode->e_l},
                            {"E_J_GHz", d.single_mode->e_j}};
    }
    if (d.topology) {
        j["topology"] = {{"L_nw_H", d.topology->l_nw}, {"C_nw_F", d.topology->c_nw},
                         {"C_0_F", d.topology->c_0},   {"C_g_F", d.topology->c_g},
                         {"C_J_F", d.topology->c_j},   {"n_cells", d.topology->n_cells}};
    }
    if (d.geometry) {
        j["geometry"] = {{"length_m", d.geometry->length},
                         {"width_m", d.geometry->width},
                         {"thickness_m", d.geometry->thickness}};
        if (d.geometry->n_s) j["geometry"]["n_s_per_m3"] = *d.geometry->n_s;
    }
    if (d.resonator) {
        j["resonator"] = {{"omega_r_GHz", d.resonator->omega_r},
                          {"Q_loaded", d.resonator->q_loaded},
                          {"g_GHz", d.resonator->g}};
    }
    if (d.loss) {
        j["loss"] = {{"Q_L", d.loss->q_l}, {"Q_C", d.loss->q_c}, {"T_K", d.loss->temperature}};
    }
    if (!d.drives.empty()) {
        j["drives"] = json::array();
        for (const auto& t : d.drives) {
            json tone = {{"freq_GHz", t.frequency},
                         {"amp_GHz", t.amplitude},
                         {"photon_order", t.photon_order}};
            if (t.target)
                tone["target"] = t.target->first.str() + "->" + t.target->second.str();
            j["drives"].push_back(tone);
        }
    }
    if (!d.pulses.empty()) {
        j["pulses"] = json::array();
        for (const auto& pulse : d.pulses) {
            json p = {{"sigma_s", pulse.sigma},
                      {"carrier_GHz", pulse.carrier},
                      {"area_rad", pulse.area},
                      {"truncation_sigmas", pulse.truncation}};
            if (pulse.target)
                p["target"] = pulse.target->first.str() + "->" + pulse.target->second.str();
            j["pulses"].push_back(p);
        }
    }
    return j.dump(2);
}

void save_device(const DeviceFile& d, const std::string& path) {
    write_text(path, device_to_json(d) + "\n");
}

int CsvTable::column_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(columns.size()); ++i)
        if (columns[i] == name) return i;
    return -1;
}

void write_csv(const std::string& path, const Provenance& prov,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << provenance_line(prov) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.push_back("");
        return cells;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (table.provenance.empty()) table.provenance = line;
            continue;
        }
        if (!have_header) {
            table.columns = split(line);
            have_header = true;
        } else {
            table.rows.push_back(split(line));
        }
    }
    if (!have_header) throw IoError("no header row in " + path);
    return table;
}

void write_sweep_csv(const std::string& path, const Provenance& prov, const SweepResult& sweep) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : sweep.points) {
        if (!pt.ok) continue;
        for (const auto& t : pt.transitions) {
            rows.push_back({format_double(pt.phi_ext), t.from.str(), t.to.str(),
                            std::to_string(t.photon_order), format_double(t.frequency),
                            format_double(t.dipole_n), format_double(t.dipole_phi),
                            to_string(t.kind)});
        }
    }
    write_csv(path, prov,
              {"phi_ext_rad", "from_label", "to_label", "photon_order", "freq_GHz", "dipole_n",
               "dipole_phi", "kind"},
              rows);
}

void write_t1_curve_csv(const std::string& path, const Provenance& prov,
                        const std::vector<T1Point>& curve) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : curve) {
        if (!pt.ok) continue;
        const auto inv = [](double g) { return g > 0.0 ? 1.0 / g : 0.0; };
        rows.push_back({format_double(pt.phi_ext), format_double(pt.omega_q),
                        format_double(pt.rates.t1_total), format_double(inv(pt.rates.gamma_ind)),
                        format_double(inv(pt.rates.gamma_cap)),
                        format_double(inv(pt.rates.gamma_purcell))});
    }
    write_csv(path, prov,
              {"phi_ext_rad", "freq_GHz", "t1_total_s", "t1_ind_s", "t1_cap_s", "t1_purcell_s"},
              rows);
}

void write_modes_csv(const std::string& path, const Provenance& prov,
                     const std::vector<ModeRecord>& modes) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& m : modes) {
        rows.push_back({format_double(m.frequency),
                        m.symmetry == ModeSymmetry::antisymmetric ? "antisymmetric" : "symmetric",
                        format_double(m.port_difference), format_double(m.c_eff),
                        format_double(m.l_eff)});
    }
    write_csv(path, prov, {"freq_GHz", "symmetry", "port_difference", "C_eff_F", "L_eff_H"},
              rows);
}

void write_map_csv(const std::string& path, const Provenance& prov, const PopulationMap& map) {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < map.axis1.size(); ++i)
        for (int j = 0; j < map.axis2.size(); ++j)
            rows.push_back({format_double(map.axis1(i)), format_double(map.axis2(j)),
                            format_double(map.values(i, j)), map.flagged(i, j) ? "1" : "0"});
    write_csv(path, prov, {"axis1_GHz", "axis2_GHz", "population", "flagged"}, rows);
}

void write_pulse_trace_csv(const std::string& path, const Provenance& prov,
                           const PulseT1Result& result) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < result.wait_times.size(); ++i)
        rows.push_back({format_double(result.wait_times[i]), format_double(result.population[i]),
                        format_double(result.readout[i])});
    write_csv(path, prov, {"t_wait_s", "population", "readout_au"}, rows);
}

void write_dataset_csv(const std::string& path, const Provenance& prov,
                       const SpectroscopyDataset& data) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : data.points) {
        std::string hint;
        if (p.label_hint) hint = p.label_hint->first.str() + "->" + p.label_hint->second.str();
        rows.push_back({format_double(p.phi_ext), format_double(p.freq),
                        std::to_string(p.photon_order), hint, format_double(p.weight)});
    }
    write_csv(path, prov, {"phi_ext_rad", "freq_GHz", "photon_order", "label_hint", "weight"},
              rows);
}

SpectroscopyDataset read_dataset_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int c_phi = table.column_index("phi_ext_rad");
    const int c_f = table.column_index("freq_GHz");
    if (c_phi < 0 || c_f < 0) throw IoError("dataset needs phi_ext_rad and freq_GHz columns");
    const int c_p = table.column_index("photon_order");
    const int c_h = table.column_index("label_hint");
    const int c_w = table.column_index("weight");
    SpectroscopyDataset data;
    for (const auto& row : table.rows) {
        SpectroscopyPoint pt;
        pt.phi_ext = std::stod(row[c_phi]);
        pt.freq = std::stod(row[c_f]);
        if (c_p >= 0 && !row[c_p].empty()) pt.photon_order = std::stoi(row[c_p]);
        if (c_w >= 0 && !row[c_w].empty()) pt.weight = std::stod(row[c_w]);
        if (c_h >= 0 && !row[c_h].empty()) {
            const auto arrow = row[c_h].find("->");
            if (arrow != std::string::npos)
                pt.label_hint = std::make_pair(parse_label(row[c_h].substr(0, arrow)),
                                               parse_label(row[c_h].substr(arrow + 2)));
        }
        data.points.push_back(pt);
    }
    data.validate();
    return data;
}

std::vector<T1Datum> read_t1_data_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int c_f = table.column_index("freq_GHz");
    const int c_t = table.column_index("t1_s");
    if (c_f < 0 || c_t < 0) throw IoError("t1 data needs freq_GHz and t1_s columns");
    const int c_s = table.column_index("sigma_t1_s");
    std::vector<T1Datum> data;
    for (const auto& row : table.rows) {
        T1Datum d;
        d.omega_q = std::stod(row[c_f]);
        d.t1 = std::stod(row[c_t]);
        if (c_s >= 0 && !row[c_s].empty()) d.sigma = std::stod(row[c_s]);
        data.push_back(d);
    }
    return data;
}

std::string fit_report_to_json(const FitReport& report) {
    json j;
    if (std::holds_alternative<SingleModeParams>(report.params)) {
        const auto& p = std::get<SingleModeParams>(report.params);
        j["model"] = "single_mode";
        j["params"] = {{"E_C_GHz", p.e_c}, {"E_L_GHz", p.e_l}, {"E_J_GHz", p.e_j}};
    } else {
        const auto& p = std::get<TwoModeParams>(report.params);
        j["model"] = "two_mode";
        j["params"] = {{"C_eff_F", {p.c_eff[0], p.c_eff[1]}},
                       {"L_eff_H", {p.l_eff[0], p.l_eff[1]}},
                       {"q_offset_2e", {p.q_offset[0], p.q_offset[1]}},
                       {"E_J_GHz", p.e_j},
                       {"L_J_H", p.l_j}};
        j["fitted_L_nw_H"] = report.fitted_l_nw;
        j["fitted_Z_nw_Ohm"] = report.fitted_z_nw;
        j["high_branch_out_of_window"] = report.high_branch_out_of_window;
    }
    j["residual_rms_GHz"] = report.residual_rms;
    j["residuals_GHz"] = report.residuals;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["flux_offset_rad"] = report.flux_offset;
    j["flux_scale"] = report.flux_scale;
    return j.dump(2);
}

std::string loss_fit_to_json(const QualityFactorFit& fit) {
    json j;
    j["Q_L"] = fit.model.q_l;
    j["Q_C"] = fit.model.q_c;
    j["T_K"] = fit.model.temperature;
    j["residual_rms_log"] = fit.residual_rms;
    j["residuals_log"] = fit.residuals;
    j["covariance"] = {{fit.covariance(0, 0), fit.covariance(0, 1)},
                       {fit.covariance(1, 0), fit.covariance(1, 1)}};
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    j["degenerate"] = fit.degenerate;
    return j.dump(2);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace fluxline::io
