#pragma once

#include <string>
#include <vector>

#include "prandtl/grid.hpp"
#include "prandtl/nash_moser.hpp"
#include "prandtl/norms.hpp"
#include "prandtl/oracle.hpp"
#include "prandtl/shear_flow.hpp"

namespace prandtl {

/// Full experiment configuration. Every key has a documented default; a
/// minimal (even empty) file is valid, unknown keys are hard errors.
struct RunConfig {
    GridSpec grid{0.25, 12.0, 6.283185307179586, 32, 32, 96};

    std::string shear_profile = "erf_canonical"; // or "exp_saturating"
    double shear_width = 2.0;
    double shear_rate = 2.0;

    std::string perturbation_family = "sine_gaussian"; // or "none"
    double epsilon = 0.01;

    double theta0 = 10.0;
    int n_max = 8;
    int k0 = 2;

    std::vector<std::pair<int, double>> track = {{0, 1.0}, {1, 1.0}};
    double ell = 1.0;
    double lambda = 0.0;
    std::string tangential_index_mode = "sum"; // or "max"

    std::string inner_solver = "via_w"; // or "direct_uv"
    double tolerance_residual = 0.0;
    int picard_max = 8;
    double picard_tol = 1e-10;

    std::vector<double> stability_epsilons = {0.002, 0.005, 0.01, 0.015, 0.02};
    std::vector<double> sweep_epsilons = {0.0, 0.005, 0.01, 0.02};

    std::string output_dir = "out";
    unsigned long long seed = 12345;

    ShearProfile make_profile() const;
    IterationConfig make_iteration_config() const;
    OracleConfig make_oracle_config() const;
    TangentialIndexMode index_mode() const;
    void validate() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
/// Canonical `[section]` / `key = value` text; parse_config_text of the
/// output reproduces the config exactly.
std::string emit_config(const RunConfig& cfg);

} // namespace prandtl
