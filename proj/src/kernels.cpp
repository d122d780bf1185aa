#include "edcssm/kernels.hpp"

namespace edcssm {

KernelSet build_kernel_set(double v) {
    KernelSet ks;

    // State-mixing kernel: symmetric cross-diagonal decay. Its transpose
    // equals itself, so both chains share the same state mixing.
    ks.ax = Kernel3({-1.0, -0.5, 0.0,
                     -0.5, 0.0, -0.5,
                     0.0, -0.5, -1.0});
    ks.ay = ks.ax.transposed();

    // Input-drive kernel: columns (v - v^2, 2v, [-1 -2 -1]).
    const double c0 = v - v * v;
    const double c1 = 2.0 * v;
    ks.bx = Kernel3({c0, c1, -1.0,
                     c0, c1, -2.0,
                     c0, c1, -1.0});
    ks.by = ks.bx.transposed();

    // Direct path: Sobel derivative. The readout kernel C equals D.
    ks.dx = Kernel3({-1.0, 0.0, 1.0,
                     -2.0, 0.0, 2.0,
                     -1.0, 0.0, 1.0});
    ks.dy = ks.dx.transposed();
    ks.cx = ks.dx;
    ks.cy = ks.dy;

    return ks;
}

} // namespace edcssm
