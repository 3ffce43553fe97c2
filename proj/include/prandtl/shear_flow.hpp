#pragma once

#include <functional>
#include <utility>

#include "prandtl/grid.hpp"

namespace prandtl {

/// Monotone initial profile u0(y) with u0(0)=0, u0 -> 1, and analytic
/// derivatives up to order 4.
struct ShearProfile {
    enum class Kind { erf_canonical, exp_saturating, custom_table };

    Kind kind = Kind::erf_canonical;
    /// erf_canonical: u0(y) = erf(y/width); exp_saturating: u0 = 1 - e^{-rate y}.
    double width = 2.0;
    double rate = 1.0;
    /// custom_table: evaluator (p, y) -> d^p u0 / dy^p, p <= 4.
    std::function<double(int, double)> custom;

    double deriv(int p, double y) const;
    double value(double y) const { return deriv(0, y); }

    /// Even y-derivatives at the wall vanish up to order 2j (so the odd
    /// extension stays smooth). exp_saturating fails this at order 2.
    bool compatible_to(int j_max) const;

    /// Checks monotonicity, wall value, far-field limit at y = Y.
    void validate(const GridSpec& spec) const;
};

/// Heat evolution of a monotone profile: u^s(t,y) and its first three
/// y-derivatives (kernel-accurate), alpha = d2/d1, broadcast over x.
struct ShearFlow {
    GridSpec spec;
    ShearProfile profile;
    Field u_s;
    Field d_y_u_s;
    Field d2_y_u_s;
    Field d3_y_u_s;
    Field alpha;
    double min_dy = 0.0;         // min of d_y_u_s over the lattice
    double heat_residual = 0.0;  // L2 of the stencil residual d_t u^s - d_yy u^s
};

struct KernelOptions {
    double xi_max = 8.0; // Gaussian tail beyond is < 1e-27
    int panels = 100;
    int points = 5; // Gauss-Legendre points per panel
};

/// Exact-kernel construction: u^s and d^p_y u^s from Gaussian quadrature of
/// the half-line heat kernel (odd/even extensions of the profile
/// derivatives), t=0 row copied from the profile.
ShearFlow solve_heat_kernel(const ShearProfile& profile, const GridSpec& spec,
                            const KernelOptions& opts = {});

/// L2 over the interior of  d_t alpha - d_yy alpha - 2 alpha d_y alpha.
double burgers_residual(const ShearFlow& flow);

/// (max_y,t of d_y u^s(t, y+y_bar)/d_y u^s(t,y),
///  max of d_y u^s(t+t_bar, y)/d_y u^s(t,y)); shifted samples by linear
/// interpolation, clamped at the top in y, restricted to t+t_bar <= T.
/// Shifts must lie in [0, R0] with R0 = T/2.
std::pair<double, double> shift_ratio_diagnostics(const ShearFlow& flow, double y_bar,
                                                  double t_bar);

} // namespace prandtl
