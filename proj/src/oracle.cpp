#include "prandtl/oracle.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "tridiag.hpp"

namespace prandtl {

OracleResult solve_nonlinear(const Field& u0_tilde, const ShearFlow& shear,
                             const OracleConfig& cfg, const Field* source) {
    cfg.validate();
    require_same_spec(u0_tilde, shear.u_s, "solve_nonlinear");
    const GridSpec& s = shear.spec;
    if (source) require_same_spec(*source, shear.u_s, "solve_nonlinear source");

    {
        const double umax = 1.1 + u0_tilde.max_abs();
        if (umax * s.dt() / s.dx() > 0.9) {
            std::ostringstream msg;
            msg << "solve_nonlinear: max|u| dt/dx = " << umax * s.dt() / s.dx()
                << " > 0.9; reduce dt";
            throw GateError(msg.str());
        }
    }

    OracleResult out;
    out.u = Field(s);
    out.v = Field(s);
    const int ny = s.n_y;
    const int nx = s.n_x;
    const double dt = s.dt();
    const double dy = s.dy();
    const double nu = 1.0 / (dy * dy);

    auto lin = [&](int ix, int iy) { return static_cast<size_t>(ix) * ny + iy; };

    // v from the divergence constraint for one slab of tangential velocity.
    auto rebuild_v = [&](const std::vector<double>& u_slab, std::vector<double>& v_slab) {
        for (int ix = 0; ix < nx; ++ix) {
            const int xm = (ix + nx - 1) % nx;
            const int xp = (ix + 1) % nx;
            v_slab[lin(ix, 0)] = 0.0;
            for (int iy = 1; iy < ny; ++iy) {
                const double gm = (u_slab[lin(xp, iy - 1)] - u_slab[lin(xm, iy - 1)]) / (2.0 * s.dx());
                const double gp = (u_slab[lin(xp, iy)] - u_slab[lin(xm, iy)]) / (2.0 * s.dx());
                v_slab[lin(ix, iy)] = v_slab[lin(ix, iy - 1)] - 0.5 * dy * (gm + gp);
            }
        }
    };

    std::vector<double> u_prev(static_cast<size_t>(nx) * ny), v_slab(u_prev.size());
    std::vector<double> u_iter(u_prev.size()), u_next(u_prev.size());
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            u_prev[lin(ix, iy)] = shear.u_s.at(0, ix, iy) + u0_tilde.at(0, ix, iy);
    rebuild_v(u_prev, v_slab);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            out.u.at(0, ix, iy) = u_prev[lin(ix, iy)];
            out.v.at(0, ix, iy) = v_slab[lin(ix, iy)];
        }

    std::vector<double> a(ny), b(ny), c(ny), r(ny), col(ny);
    double min_dy_all = 1e300;

    for (int m = 0; m + 1 < s.n_t; ++m) {
        const int mp = m + 1;
        u_iter = u_prev; // Picard start: previous time level

        bool converged = false;
        int iters = 0;
        for (int p = 0; p < cfg.picard_max; ++p) {
            for (int ix = 0; ix < nx; ++ix) {
                const int xm = (ix + nx - 1) % nx;
                const int xp = (ix + 1) % nx;
                for (int iy = 1; iy < ny - 1; ++iy) {
                    const double uc = u_iter[lin(ix, iy)];
                    const double dxu = (uc >= 0.0)
                        ? (u_iter[lin(ix, iy)] - u_iter[lin(xm, iy)]) / s.dx()
                        : (u_iter[lin(xp, iy)] - u_iter[lin(ix, iy)]) / s.dx();
                    const double dyu = (u_iter[lin(ix, iy + 1)] - u_iter[lin(ix, iy - 1)]) / (2.0 * dy);
                    double rhs = u_prev[lin(ix, iy)] / dt - uc * dxu - v_slab[lin(ix, iy)] * dyu;
                    if (source) rhs += source->at(mp, ix, iy);
                    a[iy] = -nu;
                    b[iy] = 1.0 / dt + 2.0 * nu;
                    c[iy] = -nu;
                    r[iy] = rhs;
                }
                a[0] = 0.0; b[0] = 1.0; c[0] = 0.0; r[0] = 0.0;
                a[ny - 1] = 0.0; b[ny - 1] = 1.0; c[ny - 1] = 0.0;
                r[ny - 1] = shear.u_s.at(mp, ix, ny - 1);
                thomas_solve(a, b, c, r, col);
                for (int iy = 0; iy < ny; ++iy) u_next[lin(ix, iy)] = col[iy];
            }

            double inc = 0.0, scale = 1.0;
            for (size_t i = 0; i < u_next.size(); ++i) {
                inc = std::max(inc, std::abs(u_next[i] - u_iter[i]));
                scale = std::max(scale, std::abs(u_next[i]));
            }
            u_iter.swap(u_next);
            rebuild_v(u_iter, v_slab);
            iters = p + 1;
            if (inc <= cfg.picard_tol * scale) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "solve_nonlinear: Picard iteration did not converge within " << cfg.picard_max
                << " iterations at step " << mp << " (t=" << s.t(mp)
                << "); data may be outside the small-perturbation regime";
            throw GateError(msg.str());
        }
        out.max_picard_iters = std::max(out.max_picard_iters, iters);

        u_prev = u_iter;
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy) {
                out.u.at(mp, ix, iy) = u_prev[lin(ix, iy)];
                out.v.at(mp, ix, iy) = v_slab[lin(ix, iy)];
                if (iy + 1 < ny)
                    min_dy_all = std::min(min_dy_all,
                                          (u_prev[lin(ix, iy + 1)] - u_prev[lin(ix, iy)]) / dy);
            }
        if (!std::isfinite(u_prev[0])) {
            std::ostringstream msg;
            msg << "solve_nonlinear: march diverged at step " << mp;
            throw GateError(msg.str());
        }
    }
    out.min_dy = min_dy_all;
    require_finite(out.u, "solve_nonlinear u");
    require_finite(out.v, "solve_nonlinear v");
    return out;
}

} // namespace prandtl
