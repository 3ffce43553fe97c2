#pragma once

#include <map>
#include <string>

#include "prandtl/grid.hpp"

namespace prandtl {

struct Background;
struct ShearFlow;

/// How the family of tangential derivatives of one total order enters a
/// norm: summed over all multi-indices (default), or collapsed to the
/// largest piece per order (sensitivity-study mode).
enum class TangentialIndexMode { sum_multi_indices, max_per_order };

/// Squared atomic seminorm  || e^{-lambda t} <y>^ell  d_t^bt d_x^bx d_y^q f ||_{L2(t,x,y)}^2
/// with derivatives realized by the grid stencils (y-order composed 2+2+...+1).
double seminorm_sq(const Field& f, int bt, int bx, int q, double ell, double lambda = 0.0);

double norm_A(const Field& f, int k, double ell,
              TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);
double norm_A_dot(const Field& f, int k, double ell,
                  TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);

double norm_B(const Field& f, int k1, int k2, double lambda, double ell,
              TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);
/// sup_t variant of the B norm (L^inf in t instead of L^2).
double norm_B_sup_t(const Field& f, int k1, int k2, double lambda, double ell);

double norm_C(const Field& f, int k, double ell,
              TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);
double norm_C_dot(const Field& f, int k, double ell,
                  TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);
double norm_D(const Field& f, int k, double ell,
              TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);
double norm_D_dot(const Field& f, int k, double ell,
                  TangentialIndexMode mode = TangentialIndexMode::sum_multi_indices);

/// max over the lattice of <y>^ell |f|.
double norm_Linf(const Field& f, double ell = 0.0);

/// Weighted L2 over a single (x,y) slab: || <y>^ell g(t_i) ||_{L2(x,y)}.
double slab_l2_weighted(const Field& f, int it, double ell);

/// ||f g||_A / (||f||_A ||g||_inf + ||f||_inf ||g||_Adot); 0 when the
/// denominator vanishes.
double morse_check(const Field& f, const Field& g, int k, double ell);

/// The six-term background-size diagnostic at order k:
///   ||u~ - u^s||_A^k_0 + ||u^s||_C^k_0 + ||v~||_D^k_0
///   + ||eta_bar||_C^k_0 + ||eta - eta_bar||_A^k_0 + ||zeta||_A^k_ell.
double lambda_diagnostic(const Background& bg, const ShearFlow& shear, int k, double ell);

/// Named norm values for one field, JSON-serializable.
struct NormReport {
    std::map<std::string, double> values;
    double lambda_k_diag = 0.0;
    std::string to_json() const;
};

} // namespace prandtl
