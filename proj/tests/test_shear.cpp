#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prandtl/corpus.hpp"
#include "prandtl/shear_flow.hpp"

using namespace prandtl;

namespace {
GridSpec shear_spec(int nt, int ny) {
    GridSpec s;
    s.T = 1.0;
    s.Y = 12.0;
    s.L_x = 6.283185307179586;
    s.n_t = nt;
    s.n_x = 4;
    s.n_y = ny;
    return s;
}

double erf_exact(double t, double y) { return std::erf(y / (2.0 * std::sqrt(1.0 + t))); }
} // namespace

TEST_CASE("profile validation") {
    const GridSpec s = shear_spec(9, 129);
    ShearProfile erf_p;
    CHECK_NOTHROW(erf_p.validate(s));
    CHECK(erf_p.compatible_to(2));

    ShearProfile exp_p;
    exp_p.kind = ShearProfile::Kind::exp_saturating;
    exp_p.rate = 1.0; // 1-e^{-12} misses the far-field limit at Y=12
    CHECK_THROWS_AS(exp_p.validate(s), ValidationError);
    exp_p.rate = 2.0;
    CHECK_NOTHROW(exp_p.validate(s));
    CHECK_FALSE(exp_p.compatible_to(2)); // d2_y u0(0) = rate^2 != 0

    ShearProfile bad;
    bad.kind = ShearProfile::Kind::custom_table;
    bad.custom = [](int p, double y) {
        // erf profile with a dip strong enough to break monotonicity near y=0.5
        const double g = std::exp(-y * y);
        if (p == 0) return std::erf(y / 2.0) - 2.0 * y * g;
        if (p == 1) return std::exp(-y * y / 4.0) / 1.7724538509055160 - 2.0 * (1.0 - 2.0 * y * y) * g;
        return 0.0;
    };
    CHECK_THROWS_AS(bad.validate(s), GateError);
}

TEST_CASE("kernel solution matches the closed-form heat evolution of erf") {
    const GridSpec s = shear_spec(17, 129);
    const ShearFlow flow = solve_heat_kernel(ShearProfile{}, s);

    SUBCASE("t = 0 row copies the profile exactly") {
        for (int iy = 0; iy < s.n_y; ++iy)
            CHECK(flow.u_s.at(0, 0, iy) == std::erf(s.y(iy) / 2.0));
    }
    SUBCASE("interior matches erf(y / (2 sqrt(1+t))) to 1e-8") {
        double worst = 0.0;
        for (int it = 0; it < s.n_t; ++it)
            for (int iy = 0; iy < s.n_y; ++iy)
                worst = std::max(worst,
                                 std::abs(flow.u_s.at(it, 1, iy) - erf_exact(s.t(it), s.y(iy))));
        CHECK(worst < 1e-8);
    }
    SUBCASE("monotonicity holds at every node") { CHECK(flow.min_dy > 0.0); }
    SUBCASE("alpha is -y/(2(1+t))") {
        double worst = 0.0;
        for (int it = 0; it < s.n_t; ++it)
            for (int iy = 0; iy < s.n_y; ++iy)
                worst = std::max(worst, std::abs(flow.alpha.at(it, 2, iy) +
                                                 s.y(iy) / (2.0 * (1.0 + s.t(it)))));
        CHECK(worst < 1e-6);
    }
    SUBCASE("spot values: alpha(0,1) = -1/2 and u^s(3,4) = erf(1)") {
        GridSpec s3 = shear_spec(17, 145); // dy = 1/12 puts y=1 and y=4 on the lattice
        s3.T = 3.0;
        const ShearFlow f3 = solve_heat_kernel(ShearProfile{}, s3);
        CHECK(f3.alpha.at(0, 0, 12) == doctest::Approx(-0.5).epsilon(1e-7));
        CHECK(std::abs(f3.u_s.at(s3.n_t - 1, 0, 48) - 0.8427007929497149) < 1e-8);
    }
}

TEST_CASE("heat residual decreases under refinement at order >= 1.8") {
    std::vector<double> h, err;
    for (int n : {33, 65, 129}) {
        const ShearFlow flow = solve_heat_kernel(ShearProfile{}, shear_spec(n, n));
        h.push_back(flow.spec.dt());
        err.push_back(flow.heat_residual);
    }
    CHECK(fit_loglog_slope(h, err) >= 1.8);
}

TEST_CASE("burgers residual") {
    SUBCASE("vanishes under refinement for the erf flow") {
        std::vector<double> h, err;
        for (int n : {33, 65, 129}) {
            const ShearFlow flow = solve_heat_kernel(ShearProfile{}, shear_spec(n, n));
            h.push_back(flow.spec.dy());
            err.push_back(burgers_residual(flow));
        }
        CHECK(fit_loglog_slope(h, err) >= 1.8);
    }
    SUBCASE("zero alpha gives zero residual") {
        ShearFlow flow = solve_heat_kernel(ShearProfile{}, shear_spec(17, 65));
        flow.alpha = Field(flow.spec, 0.0);
        CHECK(burgers_residual(flow) == 0.0);
    }
    SUBCASE("constant offset is a negative control") {
        ShearFlow flow = solve_heat_kernel(ShearProfile{}, shear_spec(17, 65));
        Field shifted = flow.alpha;
        for (double& v : shifted.data) v += 0.1;
        flow.alpha = shifted;
        // residual = || -2 (alpha+0.1) d_y alpha + burgers(alpha) || stays O(0.1)
        CHECK(burgers_residual(flow) > 0.05);
    }
}

TEST_CASE("shift ratio diagnostics") {
    const GridSpec s = shear_spec(17, 129);
    GridSpec s4 = s;
    s4.T = 4.0; // R0 = 2 admits y_bar = 1
    const ShearFlow flow = solve_heat_kernel(ShearProfile{}, s4);

    SUBCASE("identity shift") {
        auto [ry, rt] = shift_ratio_diagnostics(flow, 0.0, 0.0);
        CHECK(ry == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rt == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("gaussian ratio peaks at the wall at the final time") {
        auto [ry, rt] = shift_ratio_diagnostics(flow, 1.0, 0.0);
        // d_y u^s(t, y+1)/d_y u^s(t, y) = exp(-(2y+1)/(4(1+t))) <= e^{-1/(4(1+T))}
        const double expected = std::exp(-1.0 / (4.0 * (1.0 + s4.T)));
        CHECK(ry == doctest::Approx(expected).epsilon(2e-3));
        CHECK(std::isfinite(rt));
    }
    SUBCASE("t shift ratio blows up at the gaussian tail") {
        auto [ry, rt] = shift_ratio_diagnostics(flow, 0.0, 1.0);
        // d1(t+1,y)/d1(t,y) peaks at t=0, y=Y:
        //   sqrt(1/2) exp(Y^2/8) for the erf flow; finite but huge.
        const double expected = std::sqrt(0.5) * std::exp(s4.Y * s4.Y / 8.0);
        CHECK(rt == doctest::Approx(expected).epsilon(1e-2));
        CHECK(ry == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("out-of-range shift rejected") {
        CHECK_THROWS_AS(shift_ratio_diagnostics(flow, 3.0, 0.0), ValidationError);
    }
    SUBCASE("doctored flow with a vanishing gradient errors") {
        ShearFlow bad = flow;
        bad.d_y_u_s.at(3, 0, 5) = 0.0;
        CHECK_THROWS_AS(shift_ratio_diagnostics(bad, 0.5, 0.0), GateError);
    }
}
