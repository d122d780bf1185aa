#pragma once

#include "edcssm/grid.hpp"
#include "edcssm/saim.hpp"

namespace edcssm {

// Hysteresis thresholds on the normalized magnitude scale; both lie in
// [0, 255] and low must not exceed high.
struct HysteresisParams {
    double high = 100.0;
    double low = 95.0;

    friend bool operator==(const HysteresisParams&, const HysteresisParams&) = default;
};

// Pixel-wise sqrt(gx^2 + gy^2).
Grid gradient_magnitude(const GradientField& field);

// Direction theta = arctan(gx / gy), folded into (-pi/2, pi/2]; gy == 0 maps
// to pi/2. Note the deliberately swapped ratio: theta measures the gradient
// vector's angle from the row axis.
Grid gradient_direction(const GradientField& field);

// Rescales so the maximum becomes 255. Left untouched when the maximum is
// not finite or not above `floor` (flat or degenerate maps must not have
// numerical dust amplified into edges).
Grid normalize_magnitude(const Grid& magnitude, double floor = 1e-6);

// Directional non-maximum suppression with 4 direction bins. A pixel is kept
// when its magnitude is >= both neighbors along the quantized gradient
// direction (ties retained); border pixels compare against in-bounds
// neighbors only. Suppressed pixels become 0.
Grid non_max_suppress(const Grid& magnitude, const Grid& direction);

// Double-threshold hysteresis: values > high are strong (255), values < low
// are zero, the band between is weak (50); then a single pass promotes weak
// pixels 8-adjacent to an *initially* strong pixel and zeroes the rest.
// There is no transitive flood fill.
BinaryMap hysteresis_threshold(const Grid& magnitude, const HysteresisParams& params);

} // namespace edcssm
