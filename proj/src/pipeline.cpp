#include "edcssm/pipeline.hpp"

#include <utility>

namespace edcssm {

ConvolveFn make_backend(const PipelineConfig& config, std::mt19937_64& rng) {
    if (!config.crossbar_enabled)
        return valid_convolve;
    const CrossbarConfig crossbar = config.crossbar;
    return [crossbar, &rng](const Grid& x, const Kernel3& k) {
        return crossbar_convolve(x, k, crossbar, rng).decoded;
    };
}

namespace {

struct ScanOutputs {
    GradientField gradients;
    Grid magnitude;
    Grid direction;
    Grid suppressed;
};

ScanOutputs run_to_suppressed(const Grid& image, const PipelineConfig& config) {
    std::mt19937_64 rng(config.crossbar.rng_seed);
    const ConvolveFn backend = make_backend(config, rng);
    ScanOutputs out{scan_with_flips(image, config.scan, backend), Grid{}, Grid{},
                    Grid{}};
    out.magnitude = gradient_magnitude(out.gradients);
    if (config.normalize_magnitude)
        out.magnitude = normalize_magnitude(out.magnitude);
    out.direction = gradient_direction(out.gradients);
    out.suppressed = non_max_suppress(out.magnitude, out.direction);
    return out;
}

} // namespace

Grid suppressed_magnitude(const Grid& image, const PipelineConfig& config) {
    return run_to_suppressed(image, config).suppressed;
}

PipelineResult run_pipeline(const Grid& image, const PipelineConfig& config) {
    ScanOutputs stage = run_to_suppressed(image, config);
    PipelineResult result{std::move(stage.gradients), std::move(stage.magnitude),
                          std::move(stage.direction), std::move(stage.suppressed),
                          BinaryMap{},           BinaryMap{},
                          std::nullopt};
    result.edges = hysteresis_threshold(result.suppressed, config.hysteresis);
    if (config.erosion_enabled) {
        WindErosionResult eroded = wind_erosion(result.edges, config.erosion);
        result.final_edges = std::move(eroded.output);
        result.erosion_trace = std::move(eroded.trace);
    } else {
        result.final_edges = result.edges;
    }
    return result;
}

} // namespace edcssm
