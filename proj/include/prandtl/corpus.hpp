#pragma once

#include <random>

#include "prandtl/grid.hpp"

namespace prandtl {

struct RandomFieldOptions {
    int terms = 5;
    bool wall_zero = false; // force u(y=0) = 0 factors
    bool t_ramp = false;    // force u(t=0) = 0 factors
};

/// Random separable combination of smooth modes. Only parameters are drawn,
/// so the same rng state evaluated on a finer grid samples the same
/// continuum function (refinement-stable corpora).
Field random_smooth_field(const GridSpec& spec, std::mt19937_64& rng,
                          const RandomFieldOptions& opts = {});

/// Nodewise iid U[-1,1]; saturates smoothing-operator bounds.
Field random_rough_field(const GridSpec& spec, std::mt19937_64& rng);

/// Random-phase product of waves at angular frequency ~omega in each
/// direction; concentrates norm content at one scale.
Field oscillatory_field(const GridSpec& spec, double omega, std::mt19937_64& rng);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace prandtl
