#pragma once

// File-based command surface. Every command reads a device JSON, writes one
// artifact with a provenance header, and returns a process exit code:
// 0 success, 2 config error, 3 numerical failure, 4 I/O error.

#include <cmath>
#include <cstdint>
#include <string>

namespace fluxline::cli {

struct RunConfig {
    std::string command;
    std::string device_path;
    std::string data_path;
    std::string out_path;
    int threads = 1;
    std::uint64_t seed = 1;

    double flux_start = -M_PI;
    double flux_stop = M_PI;
    int flux_points = 101;
    int levels = 8;
    int max_photon = 2;
    bool two_mode = false;
    bool flux_cal = true;

    double phi_ext = -0.46 * M_PI; // single-point commands
    int grid = 41;                 // drive-map points per axis
    double span1 = 0.25;           // GHz, half-width of axis 1
    double span2 = 0.25;           // GHz, half-width of axis 2
    int sweep_tone_1 = 0;
    int sweep_tone_2 = 1;
    std::string targets = "g-1,e-1";

    double wait_min = 2e-6;  // s
    double wait_max = 8e-5;  // s
    int wait_points = 41;
    double fluxon_rate = 0.0;  // 1/s, overrides the loss model when > 0
    double plasmon_rate = 0.0; // 1/s
};

int run(const RunConfig& config);

} // namespace fluxline::cli
