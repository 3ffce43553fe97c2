#pragma once

#include <stdexcept>
#include <string>

namespace prandtl {

/// Malformed input: bad config values, mismatched grids, out-of-range
/// arguments. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical gate failed: monotonicity lost, CFL violated, Picard stalled,
/// kernel quadrature broke down. This is the method leaving its validity
/// regime, not a usage error. The CLI maps this to exit code 2.
class GateError : public std::runtime_error {
public:
    explicit GateError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace prandtl
