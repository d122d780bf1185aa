#include "edcssm/postproc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace edcssm {

namespace {

void validate_field(const GradientField& field) {
    if (field.gx.empty() || !field.gx.same_shape(field.gy))
        throw std::invalid_argument("gradient field: gx/gy must be non-empty and same shape");
}

void validate_params(const HysteresisParams& p) {
    if (!(p.high >= 0.0 && p.high <= 255.0) || !(p.low >= 0.0 && p.low <= 255.0))
        throw std::invalid_argument("HysteresisParams: thresholds must lie in [0, 255]");
    if (p.low > p.high)
        throw std::invalid_argument("HysteresisParams: low must not exceed high");
}

} // namespace

Grid gradient_magnitude(const GradientField& field) {
    validate_field(field);
    Grid out(field.gx.rows(), field.gx.cols());
    for (int r = 0; r < out.rows(); ++r)
        for (int c = 0; c < out.cols(); ++c)
            out(r, c) = std::hypot(field.gx(r, c), field.gy(r, c));
    return out;
}

Grid gradient_direction(const GradientField& field) {
    validate_field(field);
    constexpr double half_pi = std::numbers::pi / 2.0;
    Grid out(field.gx.rows(), field.gx.cols());
    for (int r = 0; r < out.rows(); ++r) {
        for (int c = 0; c < out.cols(); ++c) {
            const double gy = field.gy(r, c);
            out(r, c) = (gy == 0.0) ? half_pi : std::atan(field.gx(r, c) / gy);
        }
    }
    return out;
}

Grid normalize_magnitude(const Grid& magnitude, double floor) {
    if (magnitude.empty())
        throw std::invalid_argument("normalize_magnitude: empty map");
    double max = 0.0;
    for (double v : magnitude.data())
        if (std::isfinite(v) && v > max) max = v;
    if (!(max > floor))
        return magnitude;
    Grid out(magnitude.rows(), magnitude.cols());
    const double scale = 255.0 / max;
    for (int r = 0; r < out.rows(); ++r)
        for (int c = 0; c < out.cols(); ++c)
            out(r, c) = magnitude(r, c) * scale;
    return out;
}

Grid non_max_suppress(const Grid& magnitude, const Grid& direction) {
    if (magnitude.empty() || !magnitude.same_shape(direction))
        throw std::invalid_argument("non_max_suppress: magnitude/direction shape mismatch");

    constexpr double pi = std::numbers::pi;
    Grid out(magnitude.rows(), magnitude.cols(), 0.0);
    for (int r = 0; r < magnitude.rows(); ++r) {
        for (int c = 0; c < magnitude.cols(); ++c) {
            double theta = direction(r, c);
            // Fold into (-pi/2, pi/2] (directions are modulo pi).
            if (std::isnan(theta)) {
                continue; // undirected non-finite pixel: suppress
            }
            while (theta > pi / 2.0) theta -= pi;
            while (theta <= -pi / 2.0) theta += pi;

            // Quantize to the nearest of {0, pi/4, pi/2, -pi/4(=3pi/4)} and map
            // to the neighbor offsets along the gradient vector (row, col) =
            // (gy, gx): 0 -> vertical neighbors, pi/2 -> horizontal,
            // pi/4 -> main diagonal, 3pi/4 -> anti-diagonal.
            int dr, dc;
            if (theta >= -pi / 8.0 && theta < pi / 8.0) {
                dr = 1; dc = 0;
            } else if (theta >= pi / 8.0 && theta < 3.0 * pi / 8.0) {
                dr = 1; dc = 1;
            } else if (theta >= 3.0 * pi / 8.0 || theta < -3.0 * pi / 8.0) {
                dr = 0; dc = 1;
            } else {
                dr = 1; dc = -1;
            }

            const double m = magnitude(r, c);
            bool keep = true;
            for (int s : {-1, 1}) {
                const int rr = r + s * dr;
                const int cc = c + s * dc;
                if (magnitude.in_bounds(rr, cc) && !(m >= magnitude(rr, cc)))
                    keep = false;
            }
            if (keep)
                out(r, c) = m;
        }
    }
    return out;
}

BinaryMap hysteresis_threshold(const Grid& magnitude, const HysteresisParams& params) {
    if (magnitude.empty())
        throw std::invalid_argument("hysteresis_threshold: empty map");
    validate_params(params);

    constexpr std::uint8_t kStrong = 255;
    constexpr std::uint8_t kWeak = 50;

    // Three-level labeling. Non-finite values compare false on both sides and
    // land in the weak band; they are dropped below unless adjacent to a
    // genuine strong pixel, which cannot have non-finite magnitude.
    std::vector<std::uint8_t> label(static_cast<std::size_t>(magnitude.rows()) *
                                    magnitude.cols());
    for (int r = 0; r < magnitude.rows(); ++r) {
        for (int c = 0; c < magnitude.cols(); ++c) {
            const double m = magnitude(r, c);
            std::uint8_t v = kWeak;
            if (std::isfinite(m) && m > params.high) v = kStrong;
            else if (!(m >= params.low)) v = 0;
            label[static_cast<std::size_t>(r) * magnitude.cols() + c] = v;
        }
    }

    const auto lab = [&](int r, int c) {
        return label[static_cast<std::size_t>(r) * magnitude.cols() + c];
    };

    BinaryMap out(magnitude.rows(), magnitude.cols());
    for (int r = 0; r < magnitude.rows(); ++r) {
        for (int c = 0; c < magnitude.cols(); ++c) {
            if (lab(r, c) == kStrong) {
                out.set(r, c, 255);
            } else if (lab(r, c) == kWeak) {
                bool promoted = false;
                for (int dr = -1; dr <= 1 && !promoted; ++dr)
                    for (int dc = -1; dc <= 1 && !promoted; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int rr = r + dr;
                        const int cc = c + dc;
                        if (out.in_bounds(rr, cc) && lab(rr, cc) == kStrong)
                            promoted = true;
                    }
                if (promoted)
                    out.set(r, c, 255);
            }
        }
    }
    return out;
}

} // namespace edcssm
