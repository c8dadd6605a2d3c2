#pragma once

// File formats: device JSON records with unit-suffixed keys, and CSV outputs
// carrying a single '#'-prefixed JSON provenance line.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluxline/dynamics.hpp"
#include "fluxline/fitting.hpp"
#include "fluxline/loss.hpp"
#include "fluxline/nanowire.hpp"

namespace fluxline::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a_hash(const std::string& text);
std::string format_double(double v); // shortest round-trip decimal

struct Provenance {
    std::string version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string created_utc; // honors SOURCE_DATE_EPOCH for reproducible output
    std::string extra_json;  // optional object merged into the header
};

std::string provenance_line(const Provenance& p);

struct DeviceFile {
    std::optional<SingleModeParams> single_mode;
    std::optional<CircuitTopology> topology;
    std::optional<NanowireGeometry> geometry;
    std::optional<ResonatorParams> resonator;
    std::optional<LossModel> loss;
    std::vector<DriveTone> drives;
    std::vector<PulseSpec> pulses;
};

DeviceFile load_device(const std::string& path);
std::string device_to_json(const DeviceFile& d);
void save_device(const DeviceFile& d, const std::string& path);

// Generic CSV with an optional provenance header.
struct CsvTable {
    std::string provenance; // raw '#' line, empty when absent
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;
};

void write_csv(const std::string& path, const Provenance& prov,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);
CsvTable read_csv(const std::string& path);

// Typed writers/readers for the pipeline artifacts.
void write_sweep_csv(const std::string& path, const Provenance& prov, const SweepResult& sweep);
void write_t1_curve_csv(const std::string& path, const Provenance& prov,
                        const std::vector<T1Point>& curve);
void write_modes_csv(const std::string& path, const Provenance& prov,
                     const std::vector<ModeRecord>& modes);
void write_map_csv(const std::string& path, const Provenance& prov, const PopulationMap& map);
void write_pulse_trace_csv(const std::string& path, const Provenance& prov,
                           const PulseT1Result& result);

void write_dataset_csv(const std::string& path, const Provenance& prov,
                       const SpectroscopyDataset& data);
SpectroscopyDataset read_dataset_csv(const std::string& path);
std::vector<T1Datum> read_t1_data_csv(const std::string& path);

std::string fit_report_to_json(const FitReport& report);
std::string loss_fit_to_json(const QualityFactorFit& fit);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

} // namespace fluxline::io
