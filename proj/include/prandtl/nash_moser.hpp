#pragma once

#include <string>
#include <vector>

#include "prandtl/linearized.hpp"

namespace prandtl {

struct IterationConfig {
    double epsilon = 0.01; // perturbation amplitude (recorded, not used directly)
    int k0 = 2;            // Taylor/compatibility order of the zero-th approximation
    double theta0 = 10.0;
    int n_max = 8;
    enum class Inner { via_w, direct_uv } inner = Inner::via_w;
    std::vector<std::pair<int, double>> monitor_orders = {{0, 1.0}, {1, 1.0}};
    double ell = 1.0;
    double tolerance_residual = 0.0; // 0: run to n_max

    void validate() const;
};

struct StepRecord {
    int n = 0;
    double theta = 0.0, dtheta = 0.0;
    std::vector<double> w_norms; // one per monitor order
    double du_norm = 0.0;        // ||delta u||_A^1_ell
    double dv_norm = 0.0;        // ||delta v||_D^0_0
    double e_norm = 0.0;         // ||e_n||_A^0_ell
    double residual = 0.0;       // ||P(u^{n+1}, v^{n+1})||_A^0_ell
    double lambda3 = 0.0;
    double identity_defect = 0.0;    // relative, exact-algebra check
    double telescoping_defect = 0.0; // relative, exact-algebra check
    double e2_form_gap = 0.0;        // four-term vs d_y-factored form, stencil-level
    double div_defect_mollified = 0.0;
    double min_dy_gate = 0.0;
    double inner_residual = 0.0; // stencil residual of the inner solve
};

struct IterationState {
    int n = 0;
    Field p; // u^n - u^s
    Field v; // v^n
    Field f_a;
    Field e_sum_older; // sum of e_j, j <= n-2
    Field e_last;      // e_{n-1}
    Field f_sum;       // sum of f^j, j <= n-1
    Field delta_u, delta_v, w_n, f_n, e1, e2;
    double residual = 0.0;
};

struct ZerothResult {
    Field p0;
    Field v0;
    Field f_a;
    std::vector<double> compat_defect; // || d_t^j f_a |_{t=0} ||_{L2(x,y)}, j < k0
};

/// Initial data is a t-constant Field holding the perturbation of the wall
/// profile; the default family is eps sin(2 pi x / L_x) y e^{-y^2}.
Field sine_gaussian_data(const GridSpec& spec, double eps);

/// Taylor polynomial in t built from the compatibility recursion at t=0,
/// plus the residual it leaves in the nonlinear operator.
ZerothResult zeroth_approximation(const Field& u0_tilde, const ShearFlow& shear, int k0);

/// One step: mollify the iterate, assemble the recursive source, solve the
/// linearized problem for the increment, form the Newton and mollification
/// errors, advance. Throws GateError when the mollified background loses
/// monotonicity.
StepRecord iterate_once(IterationState& state, const IterationConfig& cfg,
                        const ShearFlow& shear);

struct RunResult {
    IterationState state;
    std::vector<StepRecord> trace;
    std::string stop_reason; // "n_max", "converged", or "gate_failure: ..."
    double residual0 = 0.0;
};

RunResult run(const IterationConfig& cfg, const ShearFlow& shear, const Field& u0_tilde);

/// (||u1-u2||_A^0_ell + ||v1-v2||_D^0_0) / ||d_y((u1_0-u2_0)/d_y u0^s)||_{A^0_ell at t=0};
/// 0 when the data coincide.
double stability_experiment(const IterationConfig& cfg, const ShearFlow& shear,
                            const Field& u0_a, const Field& u0_b);

} // namespace prandtl
