#pragma once

#include <utility>

#include "prandtl/shear_flow.hpp"

namespace prandtl {

struct OracleConfig {
    int picard_max = 8;
    double picard_tol = 1e-10; // relative increment
    void validate() const {
        if (picard_max < 1) throw ValidationError("OracleConfig: picard_max must be >= 1");
        if (!(picard_tol > 0.0)) throw ValidationError("OracleConfig: picard_tol must be > 0");
    }
};

struct OracleResult {
    Field u;
    Field v;
    int max_picard_iters = 0; // worst step
    double min_dy = 0.0;      // min d_y u over the march (monotonicity report)
};

/// Direct semi-implicit nonlinear marching with Picard iteration per step:
/// coefficients frozen at the previous Picard iterate, implicit diffusion,
/// upwind x-transport, v rebuilt from the divergence constraint each pass.
/// Walls: u(0)=0, u(Y)=u^s(t,Y). Optional manufactured source.
OracleResult solve_nonlinear(const Field& u0_tilde, const ShearFlow& shear,
                             const OracleConfig& cfg = {}, const Field* source = nullptr);

} // namespace prandtl
