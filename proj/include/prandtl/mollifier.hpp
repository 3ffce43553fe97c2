#pragma once

#include <utility>

#include "prandtl/grid.hpp"
#include "prandtl/shear_flow.hpp"

namespace prandtl {

/// C^inf bump rho(s) = c exp(-1/(1-s^2)) on |s|<1, zero outside, with c
/// fixed once so the integral is 1.
struct BumpKernel {
    static double value(double s);
    static double integral_check(); // quadrature of the normalized bump, ~1
};

/// theta_n = sqrt(theta0^2 + n); returns (theta_n, theta_{n+1} - theta_n).
std::pair<double, double> theta_step(int n, double theta0);

struct SmoothInfo {
    int taps_t = 0, taps_x = 0, taps_y = 0;
    int shift_cells_t = 0, shift_cells_y = 0;
    bool under_resolved = false;
};

/// Smoothing at scale 1/theta: separable discrete convolution against the
/// sampled bump, x periodic, t and y with the sampling point shifted forward
/// by theta^{-1} (rounded to whole cells). Below t=0 and y=0 the field is
/// extended by zero (those are physical boundaries); above t=T and y=Y the
/// edge value is clamped, since those ends truncate unbounded directions.
/// Per-axis weights are renormalized to unit mass, so constants survive away
/// from the wall influence. Degrades to a (shifted) identity and warns when
/// an axis sees fewer than 5 taps.
Field smooth(const Field& f, double theta, SmoothInfo* info = nullptr);

/// S_{theta_n} f - S_{theta_{n-1}} f for the sqrt schedule based at theta0.
Field smooth_difference(const Field& f, int n, double theta0, SmoothInfo* info = nullptr);

enum class CommutatorVariant { c1, c2 };

/// Weighted commutators against 1/d_y u^s:
///   c1: (1/d) S_theta(d_y f) - S_theta(d_y f / d)
///   c2: d_y [ (1/d) d_y S_theta f - d_y S_theta(f/d) ]
/// Requires d_y u^s > 0 everywhere and theta^{-1} <= T/2.
Field commutator_weighted(const Field& f, const ShearFlow& shear, double theta,
                          CommutatorVariant variant);

} // namespace prandtl
