#pragma once

#include <array>

#include "edcssm/grid.hpp"

namespace edcssm {

// Fixed 3x3 convolution kernel.
class Kernel3 {
public:
    Kernel3() : k_{} {}
    explicit Kernel3(const std::array<double, 9>& values) : k_(values) {}

    // Row-major access, u = row in [0,3), v = col in [0,3).
    double at(int u, int v) const { return k_[static_cast<std::size_t>(u) * 3 + v]; }
    double operator()(int u, int v) const { return at(u, v); }

    double sum() const {
        double s = 0.0;
        for (double x : k_) s += x;
        return s;
    }

    Kernel3 transposed() const {
        Kernel3 t;
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v)
                t.k_[static_cast<std::size_t>(v) * 3 + u] = at(u, v);
        return t;
    }

    const std::array<double, 9>& values() const { return k_; }

    friend bool operator==(const Kernel3&, const Kernel3&) = default;

private:
    std::array<double, 9> k_;
};

// The four kernel pairs of the scanner: state mixing (A), input drive (B),
// state readout (C) and the Sobel-style direct path (D). The x member of each
// pair serves the horizontal-gradient chain, y the vertical one; y is always
// the transpose of x.
struct KernelSet {
    Kernel3 ax, ay;
    Kernel3 bx, by;
    Kernel3 cx, cy;
    Kernel3 dx, dy;
};

// Builds the fixed kernel set. `v` parameterizes the input-drive kernel's
// first two columns (v - v^2 and 2v); the default operating point is v=1.3.
KernelSet build_kernel_set(double v = 1.3);

} // namespace edcssm
