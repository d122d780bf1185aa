#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "edcssm/grid.hpp"
#include "edcssm/kernels.hpp"

namespace edcssm {

// Analog crossbar model: inputs become voltages (p_v volts per intensity
// unit), kernel entries become conductances (p_g siemens per kernel unit,
// signed idealization), and each output is the transimpedance readout
// -r_k1 * sum(G*V). Conductances are optionally quantized to a uniform grid;
// readouts optionally carry additive uniform noise that is averaged over
// several samples per output pulse.
struct CrossbarConfig {
    double p_v = 1e-2;            // volts per intensity unit
    double p_g = 1e-4;            // siemens per kernel unit
    double r_k1 = 1e5;            // feedback resistance, ohms
    int conductance_levels = 256; // uniform levels across +/- max|k|*p_g; 0 = off
    double noise_level = 0.0;     // noise amplitude as a fraction of full scale
    int samples_per_pulse = 1;    // averaged readouts per output
    std::uint64_t rng_seed = 0x0edc55f1u;

    friend bool operator==(const CrossbarConfig&, const CrossbarConfig&) = default;
};

// Throws std::invalid_argument when scales are non-positive, noise_level is
// negative, samples_per_pulse < 1, or conductance_levels is 1 or negative.
void validate_config(const CrossbarConfig& config);

Grid map_to_voltages(const Grid& x, const CrossbarConfig& config);
Kernel3 map_to_conductances(const Kernel3& kernel, const CrossbarConfig& config);

struct CrossbarOutput {
    Grid volts;   // measured (possibly noisy, sample-averaged) output voltages
    Grid decoded; // volts / (-r_k1 * p_v * p_g), back in algorithm units
};

// Valid-region 3x3 correlation through the analog model. Noise draws come
// from `rng` in row-major output order (samples_per_pulse draws per output);
// the overload without an engine seeds one from config.rng_seed.
CrossbarOutput crossbar_convolve(const Grid& x, const Kernel3& kernel,
                                 const CrossbarConfig& config,
                                 std::mt19937_64& rng);
CrossbarOutput crossbar_convolve(const Grid& x, const Kernel3& kernel,
                                 const CrossbarConfig& config);

struct ReadoutErrorStats {
    double mean_rel_error = 0.0;
    double max_rel_error = 0.0;
};

// Monte-Carlo estimate of the decoded-value error against the ideal digital
// convolution, on random 7x7 inputs with the Sobel derivative kernel. Errors
// are measured relative to each trial's full-scale output. Requires
// trials >= 100.
ReadoutErrorStats readout_error(const CrossbarConfig& config, int trials);

// Piecewise-linear time-cost model calibrated on (pixel_count, seconds)
// anchors: interpolation between anchors, a line through the origin below the
// first anchor, and extrapolation with the final segment's slope above the
// last one.
struct ThroughputModel {
    std::vector<std::pair<double, double>> anchors; // (pixel_count, seconds)
    int crossbar_count = 2000;
    int memristors_per_crossbar = 4000;
    double cycle_seconds = 1e-5;
    double duty = 0.5;
};

// The 20-point calibration shipped with the simulator (640x480 through
// 16877x13107).
ThroughputModel default_throughput_model();

struct ThroughputEstimate {
    double seconds = 0.0;
    double fps = 0.0;
};

// Throws std::invalid_argument when pixel_count is 0 or the model is
// malformed (fewer than two anchors, or anchors not strictly increasing in
// both coordinates).
ThroughputEstimate estimate_throughput(std::uint64_t pixel_count,
                                       const ThroughputModel& model);

} // namespace edcssm
