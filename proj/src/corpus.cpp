#include "prandtl/corpus.hpp"

#include <cmath>

namespace prandtl {

Field random_smooth_field(const GridSpec& spec, std::mt19937_64& rng,
                          const RandomFieldOptions& opts) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> mode_x(1, 3);
    std::uniform_int_distribution<int> mode_q(1, 2);

    struct Term {
        double a, phase_x, phase_t, decay;
        int mx, qt, ky;
        int t_kind, y_kind;
    };
    std::vector<Term> terms(opts.terms);
    for (Term& tm : terms) {
        tm.a = amp(rng);
        tm.phase_x = 2.0 * M_PI * unit(rng);
        tm.phase_t = 2.0 * M_PI * unit(rng);
        tm.decay = 0.5 + 1.5 * unit(rng);
        tm.mx = mode_x(rng);
        tm.qt = mode_q(rng);
        tm.ky = mode_q(rng);
        tm.t_kind = opts.t_ramp ? 1 : static_cast<int>(unit(rng) * 3.0);
        tm.y_kind = static_cast<int>(unit(rng) * 3.0);
    }

    const double kx = 2.0 * M_PI / spec.L_x;
    Field out = Field::from_function(spec, [&](double t, double x, double y) {
        double v = 0.0;
        for (const Term& tm : terms) {
            double ft = 1.0;
            switch (tm.t_kind) {
                case 0: ft = 1.0; break;
                case 1: ft = t / spec.T; break;
                default: ft = std::sin(M_PI * tm.qt * t / spec.T + tm.phase_t); break;
            }
            if (opts.t_ramp && tm.t_kind == 2) ft = std::sin(M_PI * tm.qt * t / spec.T);
            const double fx = std::sin(kx * tm.mx * x + tm.phase_x);
            double fy = 1.0;
            if (opts.wall_zero) {
                switch (tm.y_kind) {
                    case 0: fy = y * std::exp(-tm.decay * y * y); break;
                    case 1: fy = std::sin(M_PI * tm.ky * y / spec.Y) * std::exp(-0.5 * y); break;
                    default: fy = y * std::exp(-tm.decay * y); break;
                }
            } else {
                switch (tm.y_kind) {
                    case 0: fy = std::exp(-tm.decay * y); break;
                    case 1: fy = std::cos(M_PI * tm.ky * y / spec.Y) * std::exp(-y / 3.0); break;
                    default: fy = 1.0 / (1.0 + y * y); break;
                }
            }
            v += tm.a * ft * fx * fy;
        }
        return v;
    });
    if (opts.wall_zero) out.meta.vanishes_at_wall = true;
    return out;
}

Field random_rough_field(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Field out(spec);
    for (double& v : out.data) v = amp(rng);
    return out;
}

Field oscillatory_field(const GridSpec& spec, double omega, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pt = 2.0 * M_PI * unit(rng);
    const double px = 2.0 * M_PI * unit(rng);
    const double py = 2.0 * M_PI * unit(rng);
    // x frequency snapped to the torus so the wave is periodic
    const double kx = 2.0 * M_PI / spec.L_x * std::max(1.0, std::round(omega * spec.L_x / (2.0 * M_PI)));
    return Field::from_function(spec, [&](double t, double x, double y) {
        return std::sin(omega * t + pt) * std::sin(kx * x + px) * std::sin(omega * y + py);
    });
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("fit_loglog_slope: need at least two points");
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace prandtl
