#include "prandtl/nash_moser.hpp"

#include <cmath>
#include <sstream>

#include "prandtl/mollifier.hpp"
#include "prandtl/norms.hpp"

namespace prandtl {

void IterationConfig::validate() const {
    if (!(epsilon >= 0.0)) throw ValidationError("IterationConfig: epsilon must be >= 0");
    if (k0 < 1 || k0 > 2)
        throw ValidationError("IterationConfig: k0 must be 1 or 2 (profile derivatives reach order 4)");
    if (!(theta0 >= 4.0)) throw ValidationError("IterationConfig: theta0 must be >= 4");
    if (n_max < 1) throw ValidationError("IterationConfig: n_max must be >= 1");
    if (monitor_orders.empty()) throw ValidationError("IterationConfig: no monitor orders");
}

Field sine_gaussian_data(const GridSpec& spec, double eps) {
    const double k = 2.0 * M_PI / spec.L_x;
    Field out = Field::from_function(spec, [&](double, double x, double y) {
        return eps * std::sin(k * x) * y * std::exp(-y * y);
    });
    out.meta.vanishes_at_wall = true;
    out.meta.vanishes_at_top = true;
    return out;
}

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Broadcast a y-profile callback to a t-constant field.
template <class F>
Field profile_field(const GridSpec& spec, F&& f) {
    return Field::from_function(spec, [&](double, double, double y) { return f(y); });
}

// Keep only the t=0 slab, copied across t.
Field t_constant(const Field& f) {
    Field out(f.spec);
    for (int it = 0; it < f.spec.n_t; ++it)
        for (int ix = 0; ix < f.spec.n_x; ++ix)
            for (int iy = 0; iy < f.spec.n_y; ++iy)
                out.at(it, ix, iy) = f.at(0, ix, iy);
    out.meta = f.meta;
    return out;
}

} // namespace

ZerothResult zeroth_approximation(const Field& u0_tilde, const ShearFlow& shear, int k0) {
    if (k0 < 1 || k0 > 2) throw ValidationError("zeroth_approximation: k0 must be 1 or 2");
    require_same_spec(u0_tilde, shear.u_s, "zeroth_approximation");
    const GridSpec& s = u0_tilde.spec;
    const ShearProfile& prof = shear.profile;

    Field data = t_constant(u0_tilde);

    double wall = 0.0;
    for (int ix = 0; ix < s.n_x; ++ix) wall = std::max(wall, std::abs(data.at(0, ix, 0)));
    if (wall > 1e-12 * std::max(1.0, data.max_abs()))
        throw ValidationError("zeroth_approximation: initial perturbation must vanish at y=0");

    // Monotone total data gate.
    {
        const Field dyp = derivative(data, Axis::y, 1);
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy) {
                const double d = prof.deriv(1, s.y(iy)) + dyp.at(0, ix, iy);
                if (!(d > 0.0)) {
                    std::ostringstream msg;
                    msg << "zeroth_approximation: total data not monotone at (x,y)=(" << s.x(ix)
                        << "," << s.y(iy) << ")";
                    throw GateError(msg.str());
                }
            }
    }

    // Time-derivative slabs from the compatibility recursion (full velocities).
    std::vector<Field> U(k0 + 1), V(k0 + 1), shear_t(k0 + 1);
    for (int j = 0; j <= k0; ++j)
        shear_t[j] = profile_field(s, [&](double y) { return prof.deriv(2 * j, y); });
    U[0] = shear_t[0] + data;
    V[0] = -1.0 * cumulative_integral_y(derivative(U[0], Axis::x, 1));
    for (int j = 1; j <= k0; ++j) {
        Field acc = derivative(U[j - 1], Axis::y, 2);
        for (int k = 0; k < j; ++k) {
            const double c = binom(j - 1, k);
            acc -= c * (pointwise(U[k], derivative(U[j - 1 - k], Axis::x, 1)) +
                        pointwise(V[k], derivative(U[j - 1 - k], Axis::y, 1)));
        }
        U[j] = std::move(acc);
        V[j] = -1.0 * cumulative_integral_y(derivative(U[j], Axis::x, 1));
    }

    ZerothResult out;
    out.p0 = Field(s);
    out.v0 = Field(s);
    std::vector<double> fact(k0 + 1, 1.0);
    for (int j = 1; j <= k0; ++j) fact[j] = fact[j - 1] * j;
    for (int it = 0; it < s.n_t; ++it) {
        const double t = s.t(it);
        double tj = 1.0;
        for (int j = 0; j <= k0; ++j) {
            const double c = tj / fact[j];
            for (int ix = 0; ix < s.n_x; ++ix)
                for (int iy = 0; iy < s.n_y; ++iy) {
                    out.p0.at(it, ix, iy) += c * (U[j].at(0, ix, iy) - shear_t[j].at(0, ix, iy));
                    out.v0.at(it, ix, iy) += c * V[j].at(0, ix, iy);
                }
            tj *= t;
        }
    }
    out.p0.enforce_wall_zero();
    out.v0.meta.vanishes_at_wall = true;

    out.f_a = residual_field(shear, out.p0, out.v0);
    require_finite(out.f_a, "zeroth_approximation f_a");

    Field dtj = out.f_a;
    out.compat_defect.push_back(slab_l2_weighted(dtj, 0, 0.0));
    for (int j = 1; j < k0; ++j) {
        dtj = derivative(dtj, Axis::t, 1);
        out.compat_defect.push_back(slab_l2_weighted(dtj, 0, 0.0));
    }
    return out;
}

namespace {

double rel_norm(const Field& defect, double scale) {
    const double n = std::sqrt(integral_txy(pointwise(defect, defect)));
    return (scale > 0.0) ? n / scale : n;
}

} // namespace

StepRecord iterate_once(IterationState& state, const IterationConfig& cfg,
                        const ShearFlow& shear) {
    cfg.validate();
    const int n = state.n;
    const auto [theta_n, dtheta_n] = theta_step(n, cfg.theta0);

    StepRecord rec;
    rec.n = n;
    rec.theta = theta_n;
    rec.dtheta = dtheta_n;

    // (1) Mollified iterate.
    const Field p_theta = smooth(state.p, theta_n);
    const Field v_theta = smooth(state.v, theta_n);

    // (2) Recursive source.
    if (n == 0) {
        state.f_n = -1.0 * smooth(state.f_a, theta_n);
    } else {
        const double theta_prev = theta_step(n - 1, cfg.theta0).first;
        // (S_{n-1} - S_n) acting on the accumulated errors up to e_{n-2}
        // plus f^a, and -S_n on e_{n-1}; the n = 1 case has no older errors.
        Field base = state.e_sum_older + state.f_a;
        state.f_n = smooth(base, theta_prev) - smooth(base, theta_n) -
                    smooth(state.e_last, theta_n);
    }

    // Telescoping law: sum of f^j equals -S_{theta_n}(sum of e_j + f^a).
    {
        Field f_sum_new = state.f_sum + state.f_n;
        Field closure = state.e_sum_older + state.e_last + state.f_a;
        const Field defect = f_sum_new + smooth(closure, theta_n);
        const double scale =
            std::sqrt(integral_txy(pointwise(f_sum_new, f_sum_new))) + 1e-300;
        rec.telescoping_defect = rel_norm(defect, scale);
        state.f_sum = std::move(f_sum_new);
    }

    // (3) Inner linearized solve over the mollified background (monotone
    // gate lives in the assembly).
    Background bg = assemble_background_with_v(p_theta, v_theta, shear);
    rec.min_dy_gate = bg.min_d_y;
    rec.div_defect_mollified = bg.div_defect;

    if (cfg.inner == IterationConfig::Inner::via_w) {
        LinearizedSolution sol = solve_w(bg, state.f_n, cfg.ell);
        state.delta_u = sol.u;
        state.delta_v = sol.v;
        state.w_n = sol.w;
        rec.inner_residual = sol.residual_uv;
    } else {
        auto [du, dv] = solve_uv_direct(bg, state.f_n);
        state.delta_u = std::move(du);
        state.delta_v = std::move(dv);
        state.w_n = derivative(pointwise_div(state.delta_u, bg.d_y_u_tilde), Axis::y, 1);
        const Field res = linearized_apply(shear, p_theta, v_theta, state.delta_u,
                                           state.delta_v) - state.f_n;
        rec.inner_residual = std::sqrt(integral_txy(pointwise(res, res)));
    }

    // (4) Newton and mollification errors.
    const Field dx_du = derivative(state.delta_u, Axis::x, 1);
    const Field dy_du = derivative(state.delta_u, Axis::y, 1);
    state.e1 = pointwise(state.delta_u, dx_du) + pointwise(state.delta_v, dy_du);
    const Field g = state.p - p_theta;
    const Field h = state.v - v_theta;
    state.e2 = pointwise(g, dx_du) + pointwise(state.delta_u, derivative(g, Axis::x, 1)) +
               pointwise(state.delta_v, derivative(g, Axis::y, 1)) + pointwise(h, dy_du);
    Field e_n = state.e1 + state.e2;

    // d_y-factored form of the mollification error; it differs from the
    // four-term product form by 2 d_x(g delta_u) plus stencil product-rule
    // remainders, so the gap is a consistency diagnostic, not an identity.
    {
        const Field factored = derivative(pointwise(state.delta_v, g) + pointwise(h, state.delta_u),
                                          Axis::y, 1) +
                               2.0 * derivative(pointwise(g, state.delta_u), Axis::x, 1);
        const double scale = std::sqrt(integral_txy(pointwise(state.e2, state.e2))) + 1e-300;
        rec.e2_form_gap = rel_norm(state.e2 - factored, scale);
    }

    // (5) Advance and check the exact decomposition of the residual change.
    Field p_next = state.p + state.delta_u;
    Field v_next = state.v + state.delta_v;
    {
        const Field lhs = residual_field(shear, p_next, v_next) -
                          residual_field(shear, state.p, state.v);
        const Field rhs =
            linearized_apply(shear, p_theta, v_theta, state.delta_u, state.delta_v) + e_n;
        const double scale = std::sqrt(integral_txy(pointwise(rhs, rhs))) + 1e-300;
        rec.identity_defect = rel_norm(lhs - rhs, scale);
    }

    state.p = std::move(p_next);
    state.v = std::move(v_next);
    state.e_sum_older += state.e_last;
    state.e_last = std::move(e_n);
    state.n = n + 1;

    const Field res_next = residual_field(shear, state.p, state.v);
    state.residual = norm_A(res_next, 0, cfg.ell);
    rec.residual = state.residual;

    rec.lambda3 = lambda_diagnostic(bg, shear, 3, cfg.ell);
    for (const auto& [k, ell] : cfg.monitor_orders)
        rec.w_norms.push_back(norm_A(state.w_n, k, ell));
    rec.du_norm = norm_A(state.delta_u, 1, cfg.ell);
    rec.dv_norm = norm_D(state.delta_v, 0, 0.0);
    rec.e_norm = norm_A(state.e_last, 0, cfg.ell);
    return rec;
}

RunResult run(const IterationConfig& cfg, const ShearFlow& shear, const Field& u0_tilde) {
    cfg.validate();
    RunResult out;

    ZerothResult z = zeroth_approximation(u0_tilde, shear, cfg.k0);
    IterationState& st = out.state;
    st.p = std::move(z.p0);
    st.v = std::move(z.v0);
    st.f_a = std::move(z.f_a);
    st.e_sum_older = Field(shear.spec);
    st.e_last = Field(shear.spec);
    st.f_sum = Field(shear.spec);
    st.residual = norm_A(st.f_a, 0, cfg.ell);
    out.residual0 = st.residual;

    out.stop_reason = "n_max";
    for (int n = 0; n < cfg.n_max; ++n) {
        try {
            out.trace.push_back(iterate_once(st, cfg, shear));
        } catch (const GateError& e) {
            out.stop_reason = std::string("gate_failure: ") + e.what();
            break;
        }
        if (cfg.tolerance_residual > 0.0 && st.residual < cfg.tolerance_residual) {
            out.stop_reason = "converged";
            break;
        }
    }
    return out;
}

double stability_experiment(const IterationConfig& cfg, const ShearFlow& shear,
                            const Field& u0_a, const Field& u0_b) {
    require_same_spec(u0_a, u0_b, "stability_experiment");
    const GridSpec& s = shear.spec;

    // Denominator: || d_y((u1_0 - u2_0)/d_y u0^s) ||_{A^0_ell} on the t=0 slab.
    Field diff0 = u0_a - u0_b;
    Field d1_0 = Field::from_function(s, [&](double, double, double y) {
        return shear.profile.deriv(1, y);
    });
    const Field den_field = derivative(pointwise_div(t_constant(diff0), d1_0), Axis::y, 1);
    const double den = slab_l2_weighted(den_field, 0, cfg.ell);

    RunResult ra = run(cfg, shear, u0_a);
    RunResult rb = run(cfg, shear, u0_b);

    const double num = norm_A(ra.state.p - rb.state.p, 0, cfg.ell) +
                       norm_D(ra.state.v - rb.state.v, 0, 0.0);
    if (den == 0.0) return 0.0;
    return num / den;
}

} // namespace prandtl
