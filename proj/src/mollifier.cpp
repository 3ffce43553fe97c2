#include "prandtl/mollifier.hpp"

#include <cmath>
#include <iostream>
#include <vector>

namespace prandtl {

namespace {

double bump_raw(double s) {
    const double r = 1.0 - s * s;
    if (r <= 0.0) return 0.0;
    return std::exp(-1.0 / r);
}

// integral of the raw bump over [-1,1], composite Simpson, cached.
double bump_mass() {
    static const double mass = [] {
        const int n = 20000; // even
        const double h = 2.0 / n;
        double acc = bump_raw(-1.0) + bump_raw(1.0);
        for (int i = 1; i < n; ++i) acc += ((i % 2) ? 4.0 : 2.0) * bump_raw(-1.0 + i * h);
        return acc * h / 3.0;
    }();
    return mass;
}

} // namespace

double BumpKernel::value(double s) { return bump_raw(s) / bump_mass(); }

double BumpKernel::integral_check() {
    const int n = 40000;
    const double h = 2.0 / n;
    double acc = value(-1.0) + value(1.0);
    for (int i = 1; i < n; ++i) acc += ((i % 2) ? 4.0 : 2.0) * value(-1.0 + i * h);
    return acc * h / 3.0;
}

std::pair<double, double> theta_step(int n, double theta0) {
    if (!(theta0 > 0.0) || n < 0) throw ValidationError("theta_step: need theta0 > 0, n >= 0");
    const double theta = std::sqrt(theta0 * theta0 + n);
    const double next = std::sqrt(theta0 * theta0 + n + 1);
    return {theta, next - theta};
}

namespace {

struct AxisKernel {
    std::vector<double> c; // normalized weights, index j-(-m) for j in [-m, m]
    int m = 0;
    int shift = 0;
};

AxisKernel build_axis_kernel(double theta, double h, bool shifted) {
    AxisKernel k;
    k.m = static_cast<int>(std::floor(1.0 / (theta * h) - 1e-12));
    if (k.m < 0) k.m = 0;
    k.c.resize(2 * k.m + 1);
    double mass = 0.0;
    for (int j = -k.m; j <= k.m; ++j) {
        // cell average of rho_theta over [(j-1/2)h, (j+1/2)h]: keeps the
        // kernel moments accurate even with few taps
        const double a = theta * (j - 0.5) * h;
        const double b = theta * (j + 0.5) * h;
        const int nq = 16;
        double acc = 0.5 * (BumpKernel::value(a) + BumpKernel::value(b));
        for (int q = 1; q < nq; ++q)
            acc += BumpKernel::value(a + (b - a) * q / nq);
        const double w = theta * acc * (b - a) / nq / (theta * h); // mean value over the cell
        k.c[j + k.m] = w;
        mass += w;
    }
    // Renormalize so the discrete mass is exactly 1 (constants preserved).
    for (double& w : k.c) w /= mass;
    k.shift = shifted ? static_cast<int>(std::lround(1.0 / (theta * h))) : 0;
    return k;
}

// Half-line pass along a strided line: out[i] = sum_j c_j in[i - j + shift],
// reading zero below index 0 (the physical boundary) and the clamped edge
// value above n-1 (the truncation of an unbounded direction).
void convolve_halfline(const double* src, double* dst, int n, long stride, const AxisKernel& k) {
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -k.m; j <= k.m; ++j) {
            const int p = i - j + k.shift;
            if (p < 0) continue;
            const int pc = p < n ? p : n - 1;
            acc += k.c[j + k.m] * src[static_cast<long>(pc) * stride];
        }
        dst[static_cast<long>(i) * stride] = acc;
    }
}

void convolve_periodic(const double* src, double* dst, int n, long stride, const AxisKernel& k) {
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -k.m; j <= k.m; ++j) {
            int p = (i - j) % n;
            if (p < 0) p += n;
            acc += k.c[j + k.m] * src[static_cast<long>(p) * stride];
        }
        dst[static_cast<long>(i) * stride] = acc;
    }
}

} // namespace

Field smooth(const Field& f, double theta, SmoothInfo* info) {
    if (!(theta > 0.0)) throw ValidationError("smooth: theta must be positive");
    const GridSpec& s = f.spec;

    const AxisKernel kt = build_axis_kernel(theta, s.dt(), true);
    const AxisKernel kx = build_axis_kernel(theta, s.dx(), false);
    const AxisKernel ky = build_axis_kernel(theta, s.dy(), true);

    SmoothInfo local;
    local.taps_t = 2 * kt.m + 1;
    local.taps_x = 2 * kx.m + 1;
    local.taps_y = 2 * ky.m + 1;
    local.shift_cells_t = kt.shift;
    local.shift_cells_y = ky.shift;
    local.under_resolved = local.taps_t < 5 || local.taps_x < 5 || local.taps_y < 5;
    if (local.under_resolved)
        std::cerr << "[smooth] warning: kernel under-resolved at theta=" << theta << " (taps t/x/y = "
                  << local.taps_t << "/" << local.taps_x << "/" << local.taps_y
                  << "); operator degrades toward a shifted identity\n";
    if (info) *info = local;

    Field a = f;
    Field b(s);

    // y pass (contiguous)
    for (int it = 0; it < s.n_t; ++it)
        for (int ix = 0; ix < s.n_x; ++ix)
            convolve_halfline(&a.data[a.idx(it, ix, 0)], &b.data[b.idx(it, ix, 0)], s.n_y, 1, ky);
    std::swap(a.data, b.data);

    // x pass (periodic)
    for (int it = 0; it < s.n_t; ++it)
        for (int iy = 0; iy < s.n_y; ++iy)
            convolve_periodic(&a.data[a.idx(it, 0, iy)], &b.data[b.idx(it, 0, iy)], s.n_x, s.n_y,
                              kx);
    std::swap(a.data, b.data);

    // t pass
    const long tstride = static_cast<long>(s.n_x) * s.n_y;
    for (int ix = 0; ix < s.n_x; ++ix)
        for (int iy = 0; iy < s.n_y; ++iy)
            convolve_halfline(&a.data[a.idx(0, ix, iy)], &b.data[b.idx(0, ix, iy)], s.n_t, tstride, kt);
    std::swap(a.data, b.data);

    a.meta = BoundaryMeta{};
    return a;
}

Field smooth_difference(const Field& f, int n, double theta0, SmoothInfo* info) {
    if (n < 1) throw ValidationError("smooth_difference: n must be >= 1");
    const double tn = theta_step(n, theta0).first;
    const double tp = theta_step(n - 1, theta0).first;
    Field out = smooth(f, tn, info);
    out -= smooth(f, tp);
    return out;
}

Field commutator_weighted(const Field& f, const ShearFlow& shear, double theta,
                          CommutatorVariant variant) {
    require_same_spec(f, shear.d_y_u_s, "commutator_weighted");
    if (!(shear.min_dy > 0.0))
        throw GateError("commutator_weighted: d_y u^s has a non-positive node");
    if (1.0 / theta > 0.5 * shear.spec.T)
        throw ValidationError("commutator_weighted: theta^{-1} exceeds T/2");

    const Field& d = shear.d_y_u_s;
    if (variant == CommutatorVariant::c1) {
        const Field dyf = derivative(f, Axis::y, 1);
        return pointwise_div(smooth(dyf, theta), d) - smooth(pointwise_div(dyf, d), theta);
    }
    const Field a = pointwise_div(derivative(smooth(f, theta), Axis::y, 1), d) -
                    derivative(smooth(pointwise_div(f, d), theta), Axis::y, 1);
    return derivative(a, Axis::y, 1);
}

} // namespace prandtl
