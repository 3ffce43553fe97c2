#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "prandtl/errors.hpp"

namespace prandtl {

enum class Axis { t, x, y };

/// Uniform lattice over [0,T] x T_x x [0,Y]. The x direction is periodic
/// with period L_x (n_x samples, no duplicated endpoint); t and y include
/// both endpoints.
struct GridSpec {
    double T = 1.0;
    double Y = 12.0;
    double L_x = 6.283185307179586;
    int n_t = 33;
    int n_x = 16;
    int n_y = 97;

    double dt() const { return T / (n_t - 1); }
    double dx() const { return L_x / n_x; }
    double dy() const { return Y / (n_y - 1); }
    double t(int i) const { return T * i / (n_t - 1); }
    double x(int j) const { return L_x * j / n_x; }
    double y(int k) const { return Y * k / (n_y - 1); }

    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Analytic boundary conditions a field claims to satisfy. Informational,
/// but a set wall flag is a hard promise: samples at y=0 are exactly zero.
struct BoundaryMeta {
    bool vanishes_at_wall = false; // u(.,.,0) = 0
    bool vanishes_at_top = false;  // decays toward y -> infinity
};

/// Sampled scalar function on the lattice. Storage is row-major with t
/// slowest, then x, then y, matching the CSV layout.
struct Field {
    GridSpec spec;
    std::vector<double> data;
    BoundaryMeta meta;

    Field() = default;
    explicit Field(const GridSpec& s, double fill = 0.0)
        : spec(s), data(static_cast<size_t>(s.n_t) * s.n_x * s.n_y, fill) {
        spec.validate();
    }

    size_t idx(int it, int ix, int iy) const {
        return (static_cast<size_t>(it) * spec.n_x + ix) * spec.n_y + iy;
    }
    double& at(int it, int ix, int iy) { return data[idx(it, ix, iy)]; }
    double at(int it, int ix, int iy) const { return data[idx(it, ix, iy)]; }

    size_t size() const { return data.size(); }

    /// Max |value| over the lattice.
    double max_abs() const;

    /// Zero the y=0 plane and set the wall flag.
    void enforce_wall_zero();

    template <class F>
    static Field from_function(const GridSpec& s, F&& f) {
        Field out(s);
        for (int it = 0; it < s.n_t; ++it)
            for (int ix = 0; ix < s.n_x; ++ix)
                for (int iy = 0; iy < s.n_y; ++iy)
                    out.at(it, ix, iy) = f(s.t(it), s.x(ix), s.y(iy));
        return out;
    }
};

void require_same_spec(const Field& a, const Field& b, const char* where);

/// Throws GateError naming the first non-finite node.
void require_finite(const Field& f, const char* what);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
Field& operator+=(Field& a, const Field& b);
Field& operator-=(Field& a, const Field& b);

/// Pointwise product.
Field pointwise(const Field& a, const Field& b);
/// Pointwise quotient; caller guarantees b is bounded away from zero.
Field pointwise_div(const Field& a, const Field& b);

/// Second-order finite difference along one axis. Central in the interior,
/// one-sided second-order at the t and y ends, periodic wrap in x.
/// Exact on polynomials of degree <= 2 along the axis.
Field derivative(const Field& f, Axis axis, int order);

/// Repeated y-derivative of order q, realized as floor(q/2) second-order
/// stencils followed by one first-order stencil when q is odd.
Field y_derivative_composed(const Field& f, int q);

/// Trapezoidal cumulative integral from y=0. Output vanishes at the wall.
Field cumulative_integral_y(const Field& f);

/// Trapezoid in t and y, periodic rectangle rule in x.
double integral_txy(const Field& f);
/// Same spatial rule on a single time slab.
double integral_xy(const Field& f, int it);

/// CSV with header `t,x,y,value`, 17 significant digits, plus a JSON
/// sidecar holding the GridSpec (path with .csv swapped for .json).
void write_field_csv(const Field& f, const std::string& path);
Field read_field_csv(const std::string& path);

} // namespace prandtl
