#include "prandtl/linearized.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "prandtl/norms.hpp"
#include "tridiag.hpp"

namespace prandtl {

namespace {

void check_monotone(const Field& d_y_u, const GridSpec& s) {
    for (int it = 0; it < s.n_t; ++it)
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy)
                if (!(d_y_u.at(it, ix, iy) > 0.0)) {
                    std::ostringstream msg;
                    msg << "background not monotone: d_y u~ = " << d_y_u.at(it, ix, iy)
                        << " at (t,x,y)=(" << s.t(it) << "," << s.x(ix) << "," << s.y(iy)
                        << ") index (" << it << "," << ix << "," << iy << ")";
                    throw GateError(msg.str());
                }
}

Background assemble_impl(const Field& p, const Field* v_explicit, const ShearFlow& shear) {
    require_same_spec(p, shear.u_s, "assemble_background");
    const GridSpec& s = p.spec;

    Background bg;
    bg.spec = s;
    bg.shear = &shear;
    bg.p = p;

    const Field dp = derivative(p, Axis::y, 1);
    const Field d2p = derivative(p, Axis::y, 2);
    bg.d_y_u_tilde = shear.d_y_u_s + dp;
    bg.d2_y_u_tilde = shear.d2_y_u_s + d2p;
    check_monotone(bg.d_y_u_tilde, s);
    bg.min_d_y = bg.d_y_u_tilde.data[0];
    for (double v : bg.d_y_u_tilde.data) bg.min_d_y = std::min(bg.min_d_y, v);

    const Field dxp = derivative(p, Axis::x, 1);
    Field v_derived = -1.0 * cumulative_integral_y(dxp);
    if (v_explicit) {
        require_same_spec(*v_explicit, p, "assemble_background (v)");
        bg.v_tilde = *v_explicit;
        const Field defect = bg.v_tilde - v_derived;
        bg.div_defect = std::sqrt(integral_txy(pointwise(defect, defect)));
        for (int it = 0; it < s.n_t; ++it)
            for (int ix = 0; ix < s.n_x; ++ix)
                bg.wall_defect = std::max(bg.wall_defect, std::abs(bg.v_tilde.at(it, ix, 0)));
    } else {
        bg.v_tilde = std::move(v_derived);
        bg.v_tilde.meta.vanishes_at_wall = true;
    }

    bg.eta = pointwise_div(bg.d2_y_u_tilde, bg.d_y_u_tilde);
    bg.eta_bar = pointwise_div(shear.d2_y_u_s, bg.d_y_u_tilde);

    // zeta numerator: the heat part (d_t - d_yy) d_y u^s vanishes
    // identically, leaving only perturbation terms.
    Field num = derivative(dp, Axis::t, 1) - derivative(dp, Axis::y, 2);
    num += pointwise(shear.u_s + p, derivative(dp, Axis::x, 1));
    num += pointwise(bg.v_tilde, shear.d2_y_u_s + d2p);
    bg.zeta = pointwise_div(num, bg.d_y_u_tilde);

    require_finite(bg.zeta, "assemble_background zeta");
    return bg;
}

} // namespace

Background assemble_background(const Field& u_tilde_full, const ShearFlow& shear) {
    require_same_spec(u_tilde_full, shear.u_s, "assemble_background");
    return assemble_impl(u_tilde_full - shear.u_s, nullptr, shear);
}

Background assemble_background_perturbation(const Field& p, const ShearFlow& shear) {
    return assemble_impl(p, nullptr, shear);
}

Background assemble_background_with_v(const Field& p, const Field& v_tilde,
                                      const ShearFlow& shear) {
    return assemble_impl(p, &v_tilde, shear);
}

namespace {

void check_cfl(const Field& u_coeff, const GridSpec& s) {
    double umax = u_coeff.max_abs();
    const double cfl = umax * s.dt() / s.dx();
    if (cfl > 0.9) {
        std::ostringstream msg;
        msg << "explicit transport unstable: max|u~| dt/dx = " << cfl
            << " > 0.9; reduce dt (increase n_t)";
        throw GateError(msg.str());
    }
}

// First-order upwind d_x of one slab row, direction per node sign of c.
inline double upwind_dx(const double* w, int j, int n_x, long stride, double dx, double c) {
    const int jm = (j + n_x - 1) % n_x;
    const int jp = (j + 1) % n_x;
    if (c >= 0.0) return (w[static_cast<long>(j) * stride] - w[static_cast<long>(jm) * stride]) / dx;
    return (w[static_cast<long>(jp) * stride] - w[static_cast<long>(j) * stride]) / dx;
}

} // namespace

LinearizedSolution solve_w(const Background& bg, const Field& f, double ell,
                           const WSolveOptions& opts) {
    const GridSpec& s = bg.spec;
    require_same_spec(f, bg.p, "solve_w");
    const ShearFlow& shear = *bg.shear;

    const Field u_full = shear.u_s + bg.p;
    check_cfl(u_full, s);

    LinearizedSolution sol;
    sol.f_tilde = pointwise_div(f, bg.d_y_u_tilde);
    require_finite(sol.f_tilde, "solve_w f_tilde");
    const Field dy_f_tilde = derivative(sol.f_tilde, Axis::y, 1);

    const Field dx_u = derivative(bg.p, Axis::x, 1); // d_x u~ (shear part is x-constant)

    sol.w = Field(s);
    if (opts.w0) {
        require_same_spec(*opts.w0, bg.p, "solve_w w0");
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy)
                sol.w.at(0, ix, iy) = opts.w0->at(0, ix, iy);
    }

    const int ny = s.n_y;
    const double dt = s.dt();
    const double dy = s.dy();
    const double nu = 1.0 / (dy * dy);

    std::vector<double> a(ny), b(ny), c(ny), r(ny), col(ny);
    std::vector<double> q(ny); // cumulative integral of w in y for the nonlocal term

    for (int m = 0; m + 1 < s.n_t; ++m) {
        const int mp = m + 1;
        for (int ix = 0; ix < s.n_x; ++ix) {
            // Explicit terms at level m, per column.
            // work arrays over iy: transport + eta + zeta contributions
            // d_x(u~ w) = u~ d_x^up w + (d_x u~) w
            // d_y applied to products uses the interior-centered stencil of
            // a locally assembled line.
            static thread_local std::vector<double> ex, prod_v, prod_eta, prod_zeta;
            ex.assign(ny, 0.0);
            prod_v.assign(ny, 0.0);
            prod_eta.assign(ny, 0.0);
            prod_zeta.assign(ny, 0.0);

            // cumulative integral of w at level m for this column
            q[0] = 0.0;
            for (int iy = 1; iy < ny; ++iy)
                q[iy] = q[iy - 1] +
                        0.5 * dy * (sol.w.at(m, ix, iy - 1) + sol.w.at(m, ix, iy));

            for (int iy = 0; iy < ny; ++iy) {
                const double wv = sol.w.at(m, ix, iy);
                prod_v[iy] = bg.v_tilde.at(m, ix, iy) * wv;
                prod_eta[iy] = opts.include_eta ? bg.eta.at(m, ix, iy) * wv : 0.0;
                prod_zeta[iy] = opts.include_zeta ? bg.zeta.at(m, ix, iy) * q[iy] : 0.0;
            }

            auto dy_line = [&](const std::vector<double>& g, int iy) {
                if (iy == 0) return (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * dy);
                if (iy == ny - 1)
                    return (3.0 * g[ny - 1] - 4.0 * g[ny - 2] + g[ny - 3]) / (2.0 * dy);
                return (g[iy + 1] - g[iy - 1]) / (2.0 * dy);
            };

            for (int iy = 0; iy < ny; ++iy) {
                const double uc = u_full.at(m, ix, iy);
                const double adv_x =
                    uc * upwind_dx(&sol.w.data[sol.w.idx(m, 0, iy)], ix, s.n_x, s.n_y, s.dx(), uc) +
                    dx_u.at(m, ix, iy) * sol.w.at(m, ix, iy);
                ex[iy] = -adv_x - dy_line(prod_v, iy) + 2.0 * dy_line(prod_eta, iy) -
                         dy_line(prod_zeta, iy);
            }

            // Implicit system rows.
            for (int iy = 1; iy < ny - 1; ++iy) {
                a[iy] = -nu;
                b[iy] = 1.0 / dt + 2.0 * nu;
                c[iy] = -nu;
                r[iy] = sol.w.at(m, ix, iy) / dt + ex[iy] + dy_f_tilde.at(mp, ix, iy);
            }
            // Robin row: (-3w0 + 4w1 - w2)/(2dy) + 2 eta0 w0 = -f~0, with the
            // w2 entry eliminated against the first interior row.
            const double eta0 = opts.include_eta ? bg.eta.at(mp, ix, 0) : 0.0;
            double b0 = -3.0 / (2.0 * dy) + 2.0 * eta0;
            double c0 = 2.0 / dy;
            const double d0 = -1.0 / (2.0 * dy);
            double r0 = -sol.f_tilde.at(mp, ix, 0);
            const double factor = d0 / c[1];
            b0 -= factor * a[1];
            c0 -= factor * b[1];
            r0 -= factor * r[1];
            if (std::abs(b0) < 1e-12 * (std::abs(c0) + nu))
                throw GateError("solve_w: degenerate Robin wall row");
            a[0] = 0.0;
            b[0] = b0;
            c[0] = c0;
            r[0] = r0;
            // Far field: Dirichlet zero.
            a[ny - 1] = 0.0;
            b[ny - 1] = 1.0;
            c[ny - 1] = 0.0;
            r[ny - 1] = 0.0;

            thomas_solve(a, b, c, r, col);
            for (int iy = 0; iy < ny; ++iy) sol.w.at(mp, ix, iy) = col[iy];
        }
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < ny; ++iy)
                if (!std::isfinite(sol.w.at(mp, ix, iy))) {
                    std::ostringstream msg;
                    msg << "solve_w: march diverged at step " << mp << " (t=" << s.t(mp) << ")";
                    throw GateError(msg.str());
                }
    }

    // Reconstruction.
    sol.u = pointwise(bg.d_y_u_tilde, cumulative_integral_y(sol.w));
    sol.u.enforce_wall_zero();
    sol.v = -1.0 * cumulative_integral_y(derivative(sol.u, Axis::x, 1));
    sol.v.meta.vanishes_at_wall = true;

    sol.energy_trace.resize(s.n_t);
    for (int it = 0; it < s.n_t; ++it) {
        const double v = slab_l2_weighted(sol.w, it, ell);
        sol.energy_trace[it] = v * v;
    }

    // Stencil residual of the transformed equation over the interior.
    {
        const Field q3 = cumulative_integral_y(sol.w);
        Field flux = pointwise(u_full, sol.w);
        const Field dt_w = derivative(sol.w, Axis::t, 1);
        const Field dx_flux = derivative(flux, Axis::x, 1);
        const Field dy_vw = derivative(pointwise(bg.v_tilde, sol.w), Axis::y, 1);
        const Field dy_etaw = derivative(pointwise(bg.eta, sol.w), Axis::y, 1);
        const Field dy_zq = derivative(pointwise(bg.zeta, q3), Axis::y, 1);
        const Field dyy_w = derivative(sol.w, Axis::y, 2);
        double sq = 0.0;
        for (int it = 1; it < s.n_t - 1; ++it)
            for (int ix = 0; ix < s.n_x; ++ix)
                for (int iy = 1; iy < s.n_y - 1; ++iy) {
                    const double res = dt_w.at(it, ix, iy) + dx_flux.at(it, ix, iy) +
                                       dy_vw.at(it, ix, iy) -
                                       (opts.include_eta ? 2.0 * dy_etaw.at(it, ix, iy) : 0.0) +
                                       (opts.include_zeta ? dy_zq.at(it, ix, iy) : 0.0) -
                                       dyy_w.at(it, ix, iy) - dy_f_tilde.at(it, ix, iy);
                    sq += res * res;
                }
        sol.residual_w = std::sqrt(sq * s.dt() * s.dx() * s.dy());
    }

    // Stencil residual of u in the primitive equation.
    {
        const Field lin = linearized_apply(shear, bg.p, bg.v_tilde, sol.u, sol.v);
        const Field res = lin - f;
        double sq = 0.0;
        for (int it = 1; it < s.n_t - 1; ++it)
            for (int ix = 0; ix < s.n_x; ++ix)
                for (int iy = 1; iy < s.n_y - 1; ++iy) {
                    const double v = res.at(it, ix, iy);
                    sq += v * v;
                }
        sol.residual_uv = std::sqrt(sq * s.dt() * s.dx() * s.dy());
    }

    require_finite(sol.u, "solve_w u");
    require_finite(sol.v, "solve_w v");
    return sol;
}

std::pair<Field, Field> solve_uv_direct(const Background& bg, const Field& f) {
    const GridSpec& s = bg.spec;
    require_same_spec(f, bg.p, "solve_uv_direct");
    const ShearFlow& shear = *bg.shear;

    const Field u_full = shear.u_s + bg.p;
    check_cfl(u_full, s);
    const Field dx_u = derivative(bg.p, Axis::x, 1);

    Field u(s), v(s);
    const int ny = s.n_y;
    const double dt = s.dt();
    const double dy = s.dy();
    const double nu = 1.0 / (dy * dy);

    std::vector<double> a(ny), b(ny), c(ny), r(ny), col(ny);

    for (int m = 0; m + 1 < s.n_t; ++m) {
        const int mp = m + 1;
        for (int ix = 0; ix < s.n_x; ++ix) {
            for (int iy = 1; iy < ny - 1; ++iy) {
                const double uc = u_full.at(m, ix, iy);
                const double dyu =
                    (u.at(m, ix, iy + 1) - u.at(m, ix, iy - 1)) / (2.0 * dy);
                const double adv =
                    uc * upwind_dx(&u.data[u.idx(m, 0, iy)], ix, s.n_x, s.n_y, s.dx(), uc) +
                    bg.v_tilde.at(m, ix, iy) * dyu + u.at(m, ix, iy) * dx_u.at(m, ix, iy) +
                    v.at(m, ix, iy) * bg.d_y_u_tilde.at(m, ix, iy);
                a[iy] = -nu;
                b[iy] = 1.0 / dt + 2.0 * nu;
                c[iy] = -nu;
                r[iy] = u.at(m, ix, iy) / dt - adv + f.at(mp, ix, iy);
            }
            a[0] = 0.0; b[0] = 1.0; c[0] = 0.0; r[0] = 0.0;
            a[ny - 1] = 0.0; b[ny - 1] = 1.0; c[ny - 1] = 0.0; r[ny - 1] = 0.0;
            thomas_solve(a, b, c, r, col);
            for (int iy = 0; iy < ny; ++iy) u.at(mp, ix, iy) = col[iy];
        }
        // v at the new level from the divergence constraint.
        static thread_local std::vector<double> dxu_row;
        dxu_row.assign(static_cast<size_t>(s.n_x) * ny, 0.0);
        for (int ix = 0; ix < s.n_x; ++ix) {
            const int xm = (ix + s.n_x - 1) % s.n_x;
            const int xp = (ix + 1) % s.n_x;
            for (int iy = 0; iy < ny; ++iy)
                dxu_row[static_cast<size_t>(ix) * ny + iy] =
                    (u.at(mp, xp, iy) - u.at(mp, xm, iy)) / (2.0 * s.dx());
        }
        for (int ix = 0; ix < s.n_x; ++ix) {
            v.at(mp, ix, 0) = 0.0;
            for (int iy = 1; iy < ny; ++iy)
                v.at(mp, ix, iy) = v.at(mp, ix, iy - 1) -
                                   0.5 * dy * (dxu_row[static_cast<size_t>(ix) * ny + iy - 1] +
                                               dxu_row[static_cast<size_t>(ix) * ny + iy]);
        }
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < ny; ++iy)
                if (!std::isfinite(u.at(mp, ix, iy))) {
                    std::ostringstream msg;
                    msg << "solve_uv_direct: march diverged at step " << mp;
                    throw GateError(msg.str());
                }
    }
    u.enforce_wall_zero();
    v.meta.vanishes_at_wall = true;
    require_finite(u, "solve_uv_direct u");
    require_finite(v, "solve_uv_direct v");
    return {std::move(u), std::move(v)};
}

EnergyProbeResult energy_probe(const LinearizedSolution& sol, const Background& bg, double lambda,
                               double ell) {
    EnergyProbeResult out;
    out.lambda_used = lambda;
    out.lambda_gate = lambda_gate_value(bg, ell);
    out.gate_cleared = lambda >= out.lambda_gate;

    const Field dyw = derivative(sol.w, Axis::y, 1);
    double sup = 0.0;
    const GridSpec& s = bg.spec;
    for (int it = 0; it < s.n_t; ++it) {
        const double v = slab_l2_weighted(sol.w, it, ell);
        sup = std::max(sup, std::exp(-2.0 * lambda * s.t(it)) * v * v);
    }
    const double b_w = seminorm_sq(sol.w, 0, 0, 0, ell, lambda);
    const double b_dyw = seminorm_sq(dyw, 0, 0, 0, ell, lambda);
    out.lhs = sup + lambda * b_w + b_dyw;
    out.rhs = seminorm_sq(sol.f_tilde, 0, 0, 0, ell, lambda);
    return out;
}

double lambda_gate_value(const Background& bg, double ell) {
    const double l3 = lambda_diagnostic(bg, *bg.shear, 3, ell);
    const double g = 4.0 * ell * (1.0 + l3);
    return g * g;
}

double lambda_diagnostic(const Background& bg, const ShearFlow& shear, int k, double ell) {
    if (&shear != bg.shear)
        throw ValidationError("lambda_diagnostic: background was built over a different shear");
    return norm_A(bg.p, k, 0.0) + norm_C(shear.u_s, k, 0.0) + norm_D(bg.v_tilde, k, 0.0) +
           norm_C(bg.eta_bar, k, 0.0) + norm_A(bg.eta - bg.eta_bar, k, 0.0) +
           norm_A(bg.zeta, k, ell);
}

Field residual_field(const ShearFlow& shear, const Field& p, const Field& v) {
    require_same_spec(p, shear.u_s, "residual_field");
    require_same_spec(v, shear.u_s, "residual_field");
    Field out = derivative(p, Axis::t, 1);
    out += pointwise(shear.u_s + p, derivative(p, Axis::x, 1));
    out += pointwise(v, shear.d_y_u_s + derivative(p, Axis::y, 1));
    out -= derivative(p, Axis::y, 2);
    return out;
}

Field linearized_apply(const ShearFlow& shear, const Field& p_b, const Field& v_b,
                       const Field& du, const Field& dv) {
    Field out = derivative(du, Axis::t, 1);
    out += pointwise(shear.u_s + p_b, derivative(du, Axis::x, 1));
    out += pointwise(v_b, derivative(du, Axis::y, 1));
    out += pointwise(du, derivative(p_b, Axis::x, 1));
    out += pointwise(dv, shear.d_y_u_s + derivative(p_b, Axis::y, 1));
    out -= derivative(du, Axis::y, 2);
    return out;
}

} // namespace prandtl
