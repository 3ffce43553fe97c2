#include "prandtl/shear_flow.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace prandtl {

namespace {

constexpr double k_sqrt_pi = 1.7724538509055160273;

double erf_profile_deriv(int p, double y, double c) {
    // u0 = erf(y/c); derivatives are Hermite polynomials times the Gaussian.
    const double s = y / c;
    const double g = 2.0 / (c * k_sqrt_pi) * std::exp(-s * s);
    switch (p) {
        case 0: return std::erf(s);
        case 1: return g;
        case 2: return g * (-2.0 * s) / c;
        case 3: return g * (4.0 * s * s - 2.0) / (c * c);
        case 4: return g * (-8.0 * s * s * s + 12.0 * s) / (c * c * c);
        default: throw ValidationError("ShearProfile: derivative order > 4");
    }
}

double exp_profile_deriv(int p, double y, double a) {
    if (p == 0) return 1.0 - std::exp(-a * y);
    if (p > 4) throw ValidationError("ShearProfile: derivative order > 4");
    double sign = (p % 2 == 1) ? 1.0 : -1.0;
    return sign * std::pow(a, p) * std::exp(-a * y);
}

} // namespace

double ShearProfile::deriv(int p, double y) const {
    switch (kind) {
        case Kind::erf_canonical: return erf_profile_deriv(p, y, width);
        case Kind::exp_saturating: return exp_profile_deriv(p, y, rate);
        case Kind::custom_table:
            if (!custom) throw ValidationError("ShearProfile: custom evaluator not set");
            return custom(p, y);
    }
    throw ValidationError("ShearProfile: unknown kind");
}

bool ShearProfile::compatible_to(int j_max) const {
    for (int j = 0; j <= j_max && 2 * j <= 4; ++j)
        if (std::abs(deriv(2 * j, 0.0)) > 1e-12) return false;
    return true;
}

void ShearProfile::validate(const GridSpec& spec) const {
    if (std::abs(value(0.0)) > 1e-14)
        throw ValidationError("ShearProfile: u0(0) must vanish");
    if (std::abs(value(spec.Y) - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "ShearProfile: |u0(Y) - 1| = " << std::abs(value(spec.Y) - 1.0)
            << " at Y = " << spec.Y << " exceeds 1e-10; enlarge Y or sharpen the profile";
        throw ValidationError(msg.str());
    }
    for (int iy = 0; iy < spec.n_y; ++iy)
        if (!(deriv(1, spec.y(iy)) > 0.0)) {
            std::ostringstream msg;
            msg << "ShearProfile: d_y u0 <= 0 at y = " << spec.y(iy);
            throw GateError(msg.str());
        }
}

namespace {

// Composite Gauss-Legendre nodes/weights on [-xi_max, xi_max], premultiplied
// by the Gaussian kernel weight e^{-xi^2}.
struct KernelRule {
    std::vector<double> xi;
    std::vector<double> w; // includes e^{-xi^2} / sqrt(pi)
};

KernelRule build_rule(const KernelOptions& opts) {
    static const double gl5_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
    static const double gl5_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};
    static const double gl3_x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gl3_w[3] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};

    const double* px = gl5_x;
    const double* pw = gl5_w;
    int np = 5;
    if (opts.points <= 3) {
        px = gl3_x;
        pw = gl3_w;
        np = 3;
    }

    KernelRule rule;
    const double h = 2.0 * opts.xi_max / opts.panels;
    rule.xi.reserve(static_cast<size_t>(opts.panels) * np);
    rule.w.reserve(static_cast<size_t>(opts.panels) * np);
    for (int p = 0; p < opts.panels; ++p) {
        const double a = -opts.xi_max + p * h;
        const double mid = a + 0.5 * h;
        for (int q = 0; q < np; ++q) {
            const double xi = mid + 0.5 * h * px[q];
            rule.xi.push_back(xi);
            rule.w.push_back(0.5 * h * pw[q] * std::exp(-xi * xi) / k_sqrt_pi);
        }
    }
    return rule;
}

// d^p u0 of the odd-extended profile: parity alternates with p.
double extended_deriv(const ShearProfile& prof, int p, double z) {
    if (z >= 0.0) return prof.deriv(p, z);
    const double sign = (p % 2 == 0) ? -1.0 : 1.0;
    return sign * prof.deriv(p, -z);
}

} // namespace

ShearFlow solve_heat_kernel(const ShearProfile& profile, const GridSpec& spec,
                            const KernelOptions& opts) {
    spec.validate();
    profile.validate(spec);

    const KernelRule rule = build_rule(opts);
    const size_t nq = rule.xi.size();
    if (static_cast<int>(nq) < 200)
        throw ValidationError("solve_heat_kernel: need at least 200 quadrature nodes");

    ShearFlow flow;
    flow.spec = spec;
    flow.profile = profile;
    flow.u_s = Field(spec);
    flow.d_y_u_s = Field(spec);
    flow.d2_y_u_s = Field(spec);
    flow.d3_y_u_s = Field(spec);
    flow.alpha = Field(spec);

    // (t,y) tables, broadcast over x afterwards.
    std::vector<std::vector<double>> table(4, std::vector<double>(
        static_cast<size_t>(spec.n_t) * spec.n_y, 0.0));
    for (int it = 0; it < spec.n_t; ++it) {
        const double t = spec.t(it);
        for (int iy = 0; iy < spec.n_y; ++iy) {
            const double y = spec.y(iy);
            const size_t node = static_cast<size_t>(it) * spec.n_y + iy;
            if (it == 0) {
                for (int p = 0; p < 4; ++p) table[p][node] = profile.deriv(p, y);
                continue;
            }
            const double spread = 2.0 * std::sqrt(t);
            for (int p = 0; p < 4; ++p) {
                double acc = 0.0;
                for (size_t q = 0; q < nq; ++q)
                    acc += rule.w[q] * extended_deriv(profile, p, y + spread * rule.xi[q]);
                table[p][node] = acc;
            }
        }
    }

    double min_dy = table[1][0];
    for (double v : table[1]) min_dy = std::min(min_dy, v);
    if (!(min_dy > 0.0)) {
        std::ostringstream msg;
        msg << "solve_heat_kernel: d_y u^s = " << min_dy
            << " <= 0 after quadrature (quadrature failure or bad profile)";
        throw GateError(msg.str());
    }
    flow.min_dy = min_dy;

    for (int it = 0; it < spec.n_t; ++it)
        for (int iy = 0; iy < spec.n_y; ++iy) {
            const size_t node = static_cast<size_t>(it) * spec.n_y + iy;
            const double a = table[2][node] / table[1][node];
            for (int ix = 0; ix < spec.n_x; ++ix) {
                flow.u_s.at(it, ix, iy) = table[0][node];
                flow.d_y_u_s.at(it, ix, iy) = table[1][node];
                flow.d2_y_u_s.at(it, ix, iy) = table[2][node];
                flow.d3_y_u_s.at(it, ix, iy) = table[3][node];
                flow.alpha.at(it, ix, iy) = a;
            }
        }

    const Field res = derivative(flow.u_s, Axis::t, 1) - flow.d2_y_u_s;
    flow.heat_residual = std::sqrt(integral_txy(pointwise(res, res)));

    require_finite(flow.u_s, "solve_heat_kernel u_s");
    require_finite(flow.alpha, "solve_heat_kernel alpha");
    return flow;
}

double burgers_residual(const ShearFlow& flow) {
    const GridSpec& s = flow.spec;
    const Field dt_a = derivative(flow.alpha, Axis::t, 1);
    const Field dyy_a = derivative(flow.alpha, Axis::y, 2);
    const Field dy_a = derivative(flow.alpha, Axis::y, 1);
    double sq = 0.0;
    for (int it = 1; it < s.n_t - 1; ++it)
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 1; iy < s.n_y - 1; ++iy) {
                const double r = dt_a.at(it, ix, iy) - dyy_a.at(it, ix, iy) -
                                 2.0 * flow.alpha.at(it, ix, iy) * dy_a.at(it, ix, iy);
                sq += r * r;
            }
    return std::sqrt(sq * s.dt() * s.dx() * s.dy());
}

std::pair<double, double> shift_ratio_diagnostics(const ShearFlow& flow, double y_bar,
                                                  double t_bar) {
    const GridSpec& s = flow.spec;
    const double R0 = 0.5 * s.T;
    if (y_bar < 0.0 || t_bar < 0.0 || y_bar > R0 || t_bar > R0) {
        std::ostringstream msg;
        msg << "shift_ratio_diagnostics: shifts must lie in [0, " << R0 << "] (= T/2)";
        throw ValidationError(msg.str());
    }

    auto d1 = [&](int it, int iy) { return flow.d_y_u_s.at(it, 0, iy); };
    for (int it = 0; it < s.n_t; ++it)
        for (int iy = 0; iy < s.n_y; ++iy)
            if (!(d1(it, iy) > 0.0))
                throw GateError("shift_ratio_diagnostics: d_y u^s has a non-positive node");

    auto sample_y = [&](int it, double y) {
        const double r = y / s.dy();
        const int k = std::min(static_cast<int>(r), s.n_y - 2);
        const double f = r - k;
        return (1.0 - f) * d1(it, k) + f * d1(it, k + 1);
    };
    auto sample_t = [&](double t, int iy) {
        const double r = t / s.dt();
        const int k = std::min(static_cast<int>(r), s.n_t - 2);
        const double f = r - k;
        return (1.0 - f) * d1(k, iy) + f * d1(k + 1, iy);
    };

    // Only nodes whose shifted sample stays inside the domain count; the
    // truncated lattice cannot measure the ratio beyond Y.
    double ratio_y = 0.0;
    for (int it = 0; it < s.n_t; ++it)
        for (int iy = 0; iy < s.n_y; ++iy) {
            const double ys = s.y(iy) + y_bar;
            if (ys > s.Y) continue;
            ratio_y = std::max(ratio_y, sample_y(it, ys) / d1(it, iy));
        }

    double ratio_t = 0.0;
    for (int it = 0; it < s.n_t; ++it) {
        const double t = s.t(it) + t_bar;
        if (t > s.T) break;
        for (int iy = 0; iy < s.n_y; ++iy)
            ratio_t = std::max(ratio_t, sample_t(t, iy) / d1(it, iy));
    }
    return {ratio_y, ratio_t};
}

} // namespace prandtl
