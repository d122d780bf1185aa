#pragma once

#include <optional>

#include "edcssm/crossbar.hpp"
#include "edcssm/grid.hpp"
#include "edcssm/postproc.hpp"
#include "edcssm/saim.hpp"
#include "edcssm/wind_erosion.hpp"

namespace edcssm {

// Full detection pipeline: scan (optionally through the analog crossbar
// backend) -> gradient magnitude (optionally normalized to [0,255]) ->
// direction -> non-maximum suppression -> hysteresis -> optional erosion
// clean-up.
struct PipelineConfig {
    ScanConfig scan{};
    bool normalize_magnitude = true;
    HysteresisParams hysteresis{};
    bool erosion_enabled = true;
    ErosionParams erosion{};
    bool crossbar_enabled = false;
    CrossbarConfig crossbar{};

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct PipelineResult {
    GradientField gradients; // fused scan output
    Grid magnitude;          // after optional normalization
    Grid direction;
    Grid suppressed;         // magnitude after non-maximum suppression
    BinaryMap edges;         // after hysteresis
    BinaryMap final_edges;   // after optional erosion (== edges when disabled)
    std::optional<ErosionTrace> erosion_trace;
};

// The scan backend implied by the config: plain digital convolution, or the
// crossbar simulator driven by `rng` (noise draws are consumed in scan
// order, so results are deterministic for a given seed).
ConvolveFn make_backend(const PipelineConfig& config, std::mt19937_64& rng);

// Runs the pipeline up to non-maximum suppression and returns the suppressed
// magnitude map (the input that hysteresis thresholds act on).
Grid suppressed_magnitude(const Grid& image, const PipelineConfig& config);

PipelineResult run_pipeline(const Grid& image, const PipelineConfig& config);

} // namespace edcssm
