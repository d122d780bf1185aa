#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "edcssm/grid.hpp"
#include "edcssm/kernels.hpp"

namespace edcssm {

// Scan weights (a: state mixing, b: input drive, c: state feedback,
// d: direct path). Each must lie in [0, 2], the sweep range.
struct SaimWeights {
    double a = 0.8;
    double b = 1.0;
    // c = 0.8 makes the linear state chain divergent in IEEE arithmetic
    // (per-step growth factor ~2.11); c = 0.3 is the largest stable value on
    // the 0.1 sweep grid with a = 0.8 (growth factor ~0.79). See README
    // "Numerical stability".
    double c = 0.3;
    double d = 1.0;

    friend bool operator==(const SaimWeights&, const SaimWeights&) = default;
};

enum class BorderPolicy { zero, reflect, replicate };

enum class FlipKind { horizontal, vertical };

enum class FusionMode { max_magnitude, average };

struct FlipSet {
    bool horizontal = false;
    bool vertical = false;

    friend bool operator==(const FlipSet&, const FlipSet&) = default;
};

struct ScanConfig {
    SaimWeights weights;
    BorderPolicy border = BorderPolicy::reflect;
    FlipSet flips;
    FusionMode fusion = FusionMode::max_magnitude;
    double kernel_v = 1.3;

    friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

// Gradient pair produced by one full scan (gx: horizontal derivative chain,
// gy: vertical). Same dimensions as the scanned image.
struct GradientField {
    Grid gx;
    Grid gy;
};

// One axis's kernel quadruple.
struct AxisKernels {
    Kernel3 a, b, c, d;
};

struct SaimStepResult {
    double y = 0.0;
    Grid next_state; // 5x5
};

// Pluggable convolution implementation; the default performs the exact
// arithmetic, the crossbar simulator provides an analog replacement.
using ConvolveFn = std::function<Grid(const Grid&, const Kernel3&)>;

// Valid 3x3 cross-correlation (no kernel flip): output is (rows-2, cols-2).
// Throws if the input is smaller than 3x3.
Grid valid_convolve(const Grid& input, const Kernel3& kernel);

// Zero-pads `input` centrally to (rows, cols). Throws if the target is
// smaller than the input or the margin is odd.
Grid zero_pad(const Grid& input, int rows, int cols);

// Center element of an odd-dimensioned grid.
double center_sample(const Grid& grid);

// 7x7 neighborhood of (row, col) with the given border policy.
Grid extract_tile(const Grid& image, int row, int col, BorderPolicy border);

// One recurrence step of a single axis chain:
//   xbar = a * A * p(state) + b * B * tile
//   y    = f(C * xbar) + D * tile_center
//   next = c * xbar + d * D * tile
// where p zero-pads the 5x5 state to 7x7, * is valid cross-correlation and
// f samples the center. `state` must be 5x5 and `tile` 7x7.
SaimStepResult saim_step(const Grid& state, const Grid& tile,
                         const SaimWeights& weights, const AxisKernels& kernels,
                         const ConvolveFn& convolve);
SaimStepResult saim_step(const Grid& state, const Grid& tile,
                         const SaimWeights& weights, const AxisKernels& kernels);

// Row-major raster scan of the whole image with two independent state chains
// (one per axis). State starts at zero and carries across row boundaries.
GradientField scan_image(const Grid& image, const ScanConfig& config,
                         const ConvolveFn& convolve);
GradientField scan_image(const Grid& image, const ScanConfig& config);

// Maps a field scanned on a flipped image back to base orientation:
// horizontal flips reverse columns and negate gx, vertical flips reverse rows
// and negate gy.
GradientField correct_flipped_field(FlipKind kind, const GradientField& field);

// Fuses the base field with already-corrected flip fields. max_magnitude
// keeps, per pixel, the (gx, gy) pair of largest magnitude (ties keep the
// earliest field); average takes the component-wise mean.
GradientField fuse_scans(const GradientField& base,
                         const std::vector<std::pair<FlipKind, GradientField>>& flipped,
                         FusionMode fusion);

// Runs the base scan plus one extra scan per enabled flip and fuses them.
GradientField scan_with_flips(const Grid& image, const ScanConfig& config,
                              const ConvolveFn& convolve);
GradientField scan_with_flips(const Grid& image, const ScanConfig& config);

} // namespace edcssm
