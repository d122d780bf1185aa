#include "edcssm/saim.hpp"

#include <cmath>
#include <stdexcept>

namespace edcssm {

namespace {

void validate_weights(const SaimWeights& w) {
    for (double x : {w.a, w.b, w.c, w.d}) {
        if (!(x >= 0.0 && x <= 2.0))
            throw std::invalid_argument("SaimWeights: each weight must lie in [0, 2]");
    }
}

int fold_index(int i, int n, BorderPolicy border) {
    switch (border) {
    case BorderPolicy::zero:
        return -1; // caller substitutes zero
    case BorderPolicy::replicate:
        return i < 0 ? 0 : (i >= n ? n - 1 : i);
    case BorderPolicy::reflect:
        // Symmetric, edge-inclusive: -1 -> 0, -2 -> 1, n -> n-1, n+1 -> n-2.
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - i - 1;
        }
        return i;
    }
    return -1;
}

Grid central3(const Grid& g) {
    if (g.rows() < 3 || g.cols() < 3 || g.rows() % 2 == 0 || g.cols() % 2 == 0)
        throw std::invalid_argument("central3: grid must be odd-sized and at least 3x3");
    const int r0 = g.rows() / 2 - 1;
    const int c0 = g.cols() / 2 - 1;
    Grid out(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out(r, c) = g(r0 + r, c0 + c);
    return out;
}

const ConvolveFn& exact_convolve() {
    static const ConvolveFn fn = [](const Grid& g, const Kernel3& k) {
        return valid_convolve(g, k);
    };
    return fn;
}

struct AxisChain {
    AxisKernels kernels;
    Grid state{5, 5};
};

} // namespace

Grid valid_convolve(const Grid& input, const Kernel3& kernel) {
    if (input.rows() < 3 || input.cols() < 3)
        throw std::invalid_argument("valid_convolve: input must be at least 3x3");
    Grid out(input.rows() - 2, input.cols() - 2);
    for (int r = 0; r < out.rows(); ++r) {
        for (int c = 0; c < out.cols(); ++c) {
            double acc = 0.0;
            for (int u = 0; u < 3; ++u)
                for (int v = 0; v < 3; ++v)
                    acc += kernel(u, v) * input(r + u, c + v);
            out(r, c) = acc;
        }
    }
    return out;
}

Grid zero_pad(const Grid& input, int rows, int cols) {
    if (rows < input.rows() || cols < input.cols())
        throw std::invalid_argument("zero_pad: target smaller than input");
    if ((rows - input.rows()) % 2 != 0 || (cols - input.cols()) % 2 != 0)
        throw std::invalid_argument("zero_pad: margin must be even for central padding");
    Grid out(rows, cols, 0.0);
    const int r0 = (rows - input.rows()) / 2;
    const int c0 = (cols - input.cols()) / 2;
    for (int r = 0; r < input.rows(); ++r)
        for (int c = 0; c < input.cols(); ++c)
            out(r0 + r, c0 + c) = input(r, c);
    return out;
}

double center_sample(const Grid& grid) {
    if (grid.empty() || grid.rows() % 2 == 0 || grid.cols() % 2 == 0)
        throw std::invalid_argument("center_sample: grid must have odd dimensions");
    return grid(grid.rows() / 2, grid.cols() / 2);
}

Grid extract_tile(const Grid& image, int row, int col, BorderPolicy border) {
    if (image.empty())
        throw std::invalid_argument("extract_tile: empty image");
    if (!image.in_bounds(row, col))
        throw std::out_of_range("extract_tile: center out of bounds");
    Grid tile(7, 7);
    for (int dr = -3; dr <= 3; ++dr) {
        for (int dc = -3; dc <= 3; ++dc) {
            const int r = row + dr;
            const int c = col + dc;
            if (image.in_bounds(r, c)) {
                tile(dr + 3, dc + 3) = image(r, c);
            } else if (border == BorderPolicy::zero) {
                tile(dr + 3, dc + 3) = 0.0;
            } else {
                tile(dr + 3, dc + 3) = image(fold_index(r, image.rows(), border),
                                             fold_index(c, image.cols(), border));
            }
        }
    }
    return tile;
}

SaimStepResult saim_step(const Grid& state, const Grid& tile,
                         const SaimWeights& weights, const AxisKernels& kernels,
                         const ConvolveFn& convolve) {
    validate_weights(weights);
    if (state.rows() != 5 || state.cols() != 5)
        throw std::invalid_argument("saim_step: state must be 5x5");
    if (tile.rows() != 7 || tile.cols() != 7)
        throw std::invalid_argument("saim_step: tile must be 7x7");

    const Grid mixed = convolve(zero_pad(state, 7, 7), kernels.a); // 5x5
    const Grid driven = convolve(tile, kernels.b);                 // 5x5

    Grid xbar(5, 5);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            xbar(r, c) = weights.a * mixed(r, c) + weights.b * driven(r, c);

    const double readout = center_sample(convolve(xbar, kernels.c));
    const double direct = center_sample(convolve(central3(tile), kernels.d));

    const Grid direct_field = convolve(tile, kernels.d); // 5x5
    SaimStepResult result;
    result.y = readout + direct;
    result.next_state = Grid(5, 5);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            result.next_state(r, c) = weights.c * xbar(r, c) + weights.d * direct_field(r, c);
    return result;
}

SaimStepResult saim_step(const Grid& state, const Grid& tile,
                         const SaimWeights& weights, const AxisKernels& kernels) {
    return saim_step(state, tile, weights, kernels, exact_convolve());
}

GradientField scan_image(const Grid& image, const ScanConfig& config,
                         const ConvolveFn& convolve) {
    validate_weights(config.weights);
    if (image.empty())
        throw std::invalid_argument("scan_image: empty image");

    const KernelSet ks = build_kernel_set(config.kernel_v);
    AxisChain x{{ks.ax, ks.bx, ks.cx, ks.dx}};
    AxisChain y{{ks.ay, ks.by, ks.cy, ks.dy}};

    GradientField field{Grid(image.rows(), image.cols()),
                        Grid(image.rows(), image.cols())};

    for (int r = 0; r < image.rows(); ++r) {
        for (int c = 0; c < image.cols(); ++c) {
            const Grid tile = extract_tile(image, r, c, config.border);
            SaimStepResult sx = saim_step(x.state, tile, config.weights, x.kernels, convolve);
            SaimStepResult sy = saim_step(y.state, tile, config.weights, y.kernels, convolve);
            field.gx(r, c) = sx.y;
            field.gy(r, c) = sy.y;
            x.state = std::move(sx.next_state);
            y.state = std::move(sy.next_state);
        }
    }
    return field;
}

GradientField scan_image(const Grid& image, const ScanConfig& config) {
    return scan_image(image, config, exact_convolve());
}

namespace {

Grid flip_horizontal(const Grid& g, double sign) {
    Grid out(g.rows(), g.cols());
    for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c)
            out(r, c) = sign * g(r, g.cols() - 1 - c);
    return out;
}

Grid flip_vertical(const Grid& g, double sign) {
    Grid out(g.rows(), g.cols());
    for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c)
            out(r, c) = sign * g(g.rows() - 1 - r, c);
    return out;
}

} // namespace

GradientField correct_flipped_field(FlipKind kind, const GradientField& field) {
    if (!field.gx.same_shape(field.gy))
        throw std::invalid_argument("correct_flipped_field: gx/gy shape mismatch");
    if (kind == FlipKind::horizontal)
        return {flip_horizontal(field.gx, -1.0), flip_horizontal(field.gy, 1.0)};
    return {flip_vertical(field.gx, 1.0), flip_vertical(field.gy, -1.0)};
}

GradientField fuse_scans(const GradientField& base,
                         const std::vector<std::pair<FlipKind, GradientField>>& flipped,
                         FusionMode fusion) {
    if (!base.gx.same_shape(base.gy))
        throw std::invalid_argument("fuse_scans: gx/gy shape mismatch");
    for (const auto& [kind, f] : flipped) {
        (void)kind;
        if (!f.gx.same_shape(base.gx) || !f.gy.same_shape(base.gy))
            throw std::invalid_argument("fuse_scans: field dimensions differ");
    }

    GradientField out{base.gx, base.gy};
    if (fusion == FusionMode::max_magnitude) {
        for (int r = 0; r < out.gx.rows(); ++r) {
            for (int c = 0; c < out.gx.cols(); ++c) {
                double best = out.gx(r, c) * out.gx(r, c) + out.gy(r, c) * out.gy(r, c);
                for (const auto& [kind, f] : flipped) {
                    (void)kind;
                    const double m = f.gx(r, c) * f.gx(r, c) + f.gy(r, c) * f.gy(r, c);
                    if (m > best) {
                        best = m;
                        out.gx(r, c) = f.gx(r, c);
                        out.gy(r, c) = f.gy(r, c);
                    }
                }
            }
        }
    } else {
        const double n = 1.0 + static_cast<double>(flipped.size());
        for (int r = 0; r < out.gx.rows(); ++r) {
            for (int c = 0; c < out.gx.cols(); ++c) {
                double sx = base.gx(r, c);
                double sy = base.gy(r, c);
                for (const auto& [kind, f] : flipped) {
                    (void)kind;
                    sx += f.gx(r, c);
                    sy += f.gy(r, c);
                }
                out.gx(r, c) = sx / n;
                out.gy(r, c) = sy / n;
            }
        }
    }
    return out;
}

GradientField scan_with_flips(const Grid& image, const ScanConfig& config,
                              const ConvolveFn& convolve) {
    const GradientField base = scan_image(image, config, convolve);
    std::vector<std::pair<FlipKind, GradientField>> flipped;
    if (config.flips.horizontal) {
        const GradientField f = scan_image(flip_horizontal(image, 1.0), config, convolve);
        flipped.emplace_back(FlipKind::horizontal,
                             correct_flipped_field(FlipKind::horizontal, f));
    }
    if (config.flips.vertical) {
        const GradientField f = scan_image(flip_vertical(image, 1.0), config, convolve);
        flipped.emplace_back(FlipKind::vertical,
                             correct_flipped_field(FlipKind::vertical, f));
    }
    return fuse_scans(base, flipped, config.fusion);
}

GradientField scan_with_flips(const Grid& image, const ScanConfig& config) {
    return scan_with_flips(image, config, exact_convolve());
}

} // namespace edcssm
