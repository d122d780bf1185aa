// Frozen values and algebraic properties of the fixed 3x3 kernel set.
#include <doctest.h>

#include "edcssm/kernels.hpp"

#include <array>

using namespace edcssm;

namespace {

Kernel3 make(const std::array<double, 9>& v) { return Kernel3(v); }

void check_equal(const Kernel3& got, const Kernel3& want) {
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) {
            INFO("entry (", u, ",", v, ")");
            CHECK(got.at(u, v) == doctest::Approx(want.at(u, v)).epsilon(1e-15));
        }
}

} // namespace

TEST_CASE("state kernel has the frozen anti-diagonal weights") {
    const KernelSet k = build_kernel_set();
    check_equal(k.ax, make({-1.0, -0.5, 0.0, -0.5, 0.0, -0.5, 0.0, -0.5, -1.0}));
    CHECK(k.ax.sum() == doctest::Approx(-4.0).epsilon(1e-15));
    // The x-variant is symmetric, so its transpose (the y-variant) matches it.
    check_equal(k.ay, k.ax.transposed());
    check_equal(k.ay, k.ax);
}

TEST_CASE("input-drive kernel columns follow v - v^2, 2v, and the fixed third column") {
    const KernelSet k = build_kernel_set(1.3);
    // v = 1.3: first column -0.39, second column 2.6, third column -1,-2,-1.
    check_equal(k.bx, make({-0.39, 2.6, -1.0, -0.39, 2.6, -2.0, -0.39, 2.6, -1.0}));
    CHECK(k.bx.sum() == doctest::Approx(2.63).epsilon(1e-12));
    check_equal(k.by, k.bx.transposed());

    const KernelSet k2 = build_kernel_set(2.0);
    check_equal(k2.bx, make({-2.0, 4.0, -1.0, -2.0, 4.0, -2.0, -2.0, 4.0, -1.0}));
}

TEST_CASE("derivative kernel is the horizontal Sobel operator and the readout kernel equals it") {
    const KernelSet k = build_kernel_set();
    check_equal(k.dx, make({-1.0, 0.0, 1.0, -2.0, 0.0, 2.0, -1.0, 0.0, 1.0}));
    CHECK(k.dx.sum() == doctest::Approx(0.0).epsilon(1e-15));
    check_equal(k.dy, k.dx.transposed());
    check_equal(k.dy, make({-1.0, -2.0, -1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 1.0}));
    check_equal(k.cx, k.dx);
    check_equal(k.cy, k.dy);
}

TEST_CASE("transpose is an involution and swaps off-diagonal entries") {
    const Kernel3 k = make({1, 2, 3, 4, 5, 6, 7, 8, 9});
    const Kernel3 t = k.transposed();
    CHECK(t.at(0, 1) == 4.0);
    CHECK(t.at(1, 0) == 2.0);
    CHECK(t.at(2, 0) == 3.0);
    check_equal(t.transposed(), k);
    CHECK(t.sum() == k.sum());
}
