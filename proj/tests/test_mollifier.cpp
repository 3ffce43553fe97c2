#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prandtl/corpus.hpp"
#include "prandtl/mollifier.hpp"
#include "prandtl/norms.hpp"

using namespace prandtl;

namespace {
GridSpec moll_spec() {
    GridSpec s;
    s.T = 1.0;
    s.Y = 1.0;
    s.L_x = 1.0; // dx = dt = dy = 1/64: kernels resolved up to theta ~ 32
    s.n_t = 65;
    s.n_x = 64;
    s.n_y = 65;
    return s;
}

Field interior_bump(const GridSpec& s) {
    // smooth, compactly supported away from every boundary
    auto bump1 = [](double u) {
        const double r = 1.0 - u * u;
        return r > 0.0 ? std::exp(-1.0 / r) * std::exp(1.0) : 0.0;
    };
    return Field::from_function(s, [&](double t, double x, double y) {
        return bump1((t - 0.5) * 4.0) * std::sin(2.0 * x) * bump1((y - 0.5) * 4.0);
    });
}
} // namespace

TEST_CASE("bump kernel basics") {
    CHECK(BumpKernel::value(1.0) == 0.0);
    CHECK(BumpKernel::value(-1.2) == 0.0);
    CHECK(BumpKernel::value(0.0) > 0.0);
    CHECK(std::abs(BumpKernel::integral_check() - 1.0) < 1e-12);
}

TEST_CASE("theta schedule") {
    auto [t0, d0] = theta_step(0, 10.0);
    CHECK(t0 == 10.0);
    CHECK(d0 == doctest::Approx(std::sqrt(101.0) - 10.0).epsilon(1e-14));
    CHECK(theta_step(21, 10.0).first == doctest::Approx(11.0).epsilon(1e-14));
    double prev = d0;
    for (int n = 1; n <= 100; ++n) {
        const double d = theta_step(n, 10.0).second;
        CHECK(d > 0.0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("smoothing basics") {
    const GridSpec s = moll_spec();
    SUBCASE("zero maps to zero") {
        CHECK(smooth(Field(s), 16.0).max_abs() == 0.0);
    }
    SUBCASE("constants survive in the deep interior") {
        Field f(s, 2.5);
        SmoothInfo info;
        const Field g = smooth(f, 16.0, &info);
        CHECK_FALSE(info.under_resolved);
        // interior: indices beyond kernel reach + shift from every face
        const int it = s.n_t / 2, iy = s.n_y / 2;
        for (int ix = 0; ix < s.n_x; ++ix)
            CHECK(g.at(it, ix, iy) == doctest::Approx(2.5).epsilon(1e-13));
    }
    SUBCASE("positivity and max principle") {
        std::mt19937_64 rng(23);
        Field f = random_smooth_field(s, rng);
        for (double& v : f.data) v = std::abs(v);
        const Field g = smooth(f, 16.0);
        double mn = 1e300;
        for (double v : g.data) mn = std::min(mn, v);
        CHECK(mn >= 0.0);
        CHECK(g.max_abs() <= f.max_abs() * (1.0 + 1e-12));
    }
    SUBCASE("commutes with the x derivative") {
        std::mt19937_64 rng(29);
        const Field f = random_smooth_field(s, rng);
        const Field a = derivative(smooth(f, 16.0), Axis::x, 1);
        const Field b = smooth(derivative(f, Axis::x, 1), 16.0);
        CHECK((a - b).max_abs() < 1e-11 * std::max(1.0, b.max_abs()));
    }
    SUBCASE("linear in the field") {
        std::mt19937_64 rng(31);
        const Field f = random_smooth_field(s, rng);
        const Field g = random_smooth_field(s, rng);
        const Field lhs = smooth(f + (-0.7) * g, 16.0);
        const Field rhs = smooth(f, 16.0) + (-0.7) * smooth(g, 16.0);
        CHECK((lhs - rhs).max_abs() < 1e-12);
    }
    SUBCASE("under-resolved kernel warns but returns") {
        SmoothInfo info;
        const Field g = smooth(Field(s, 1.0), 200.0, &info);
        CHECK(info.under_resolved);
        CHECK(g.max_abs() > 0.0);
    }
}

TEST_CASE("telescoping sum of smoothing differences") {
    std::mt19937_64 rng(37);
    const Field f = random_smooth_field(moll_spec(), rng);
    const double theta0 = 10.0;
    Field acc = smooth_difference(f, 1, theta0);
    for (int m = 2; m <= 6; ++m) acc += smooth_difference(f, m, theta0);
    const Field direct = smooth(f, theta_step(6, theta0).first) - smooth(f, theta0);
    CHECK((acc - direct).max_abs() < 1e-12 * std::max(1.0, direct.max_abs() + f.max_abs()));
}

TEST_CASE("smoothing error decays like 1/theta for interior-supported fields") {
    const GridSpec s = moll_spec();
    const Field f = interior_bump(s);
    const double e16 = norm_A(f - smooth(f, 16.0), 0, 0.0);
    const double e32 = norm_A(f - smooth(f, 32.0), 0, 0.0);
    // rate -1: doubling theta should halve the error within 25%
    CHECK(e16 / e32 > 1.5);
    CHECK(e16 / e32 < 2.5);
}

TEST_CASE("smoothing gain bound saturates on an oscillatory corpus") {
    const GridSpec s = moll_spec();
    std::vector<double> kappas;
    for (double theta : {8.0, 16.0, 32.0}) {
        double kappa = 0.0;
        std::mt19937_64 rng(41);
        for (double omega : {8.0, 16.0, 32.0})
            for (int i = 0; i < 3; ++i) {
                const Field f = oscillatory_field(s, omega, rng);
                kappa = std::max(kappa, norm_A(smooth(f, theta), 2, 0.0) /
                                            (theta * theta * norm_A(f, 0, 0.0)));
            }
        kappas.push_back(kappa);
    }
    const double lo = *std::min_element(kappas.begin(), kappas.end());
    const double hi = *std::max_element(kappas.begin(), kappas.end());
    CHECK(hi / lo < 2.0);
}

TEST_CASE("difference bound tracks theta^{-1} dtheta at order one") {
    const GridSpec s = moll_spec();
    std::mt19937_64 rng(43);
    const double theta0 = 10.0;
    std::vector<double> ratios;
    for (int i = 0; i < 5; ++i) {
        const Field f = random_smooth_field(s, rng);
        const double a1 = norm_A(f, 1, 0.0);
        for (int n : {1, 5, 10, 20}) {
            const auto [tn, dtn] = theta_step(n, theta0);
            const double lhs = norm_A(smooth_difference(f, n, theta0), 0, 0.0);
            ratios.push_back(lhs / (dtn / tn * a1));
        }
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(std::isfinite(hi));
    CHECK(hi / std::max(lo, 1e-300) < 25.0); // one usable fitted constant
}

TEST_CASE("delta-theta sum inequality with constant 2") {
    const double theta0 = 10.0;
    for (int diff : {-4, -2, 0, 2}) {
        double acc = 0.0;
        for (int j = 1; j <= 200; ++j) {
            const auto [tp, dtp] = theta_step(j - 1, theta0);
            acc += std::pow(tp, diff) * dtp;
            const double tj = theta_step(j, theta0).first;
            if (diff >= 0) {
                CHECK(acc <= 2.0 * std::pow(tj, diff + 1));
            } else if (diff <= -2) {
                CHECK(acc <= 2.0);
            }
        }
    }
}

TEST_CASE("weighted commutators") {
    GridSpec s = moll_spec();
    s.Y = 2.0;
    s.n_y = 129; // dy stays 1/64
    ShearProfile narrow;
    narrow.width = 0.4; // erf(y/0.4) reaches the far field within Y = 2
    const ShearFlow flow = solve_heat_kernel(narrow, s);
    std::mt19937_64 rng(47);
    const Field f = random_smooth_field(s, rng);

    SUBCASE("zero field") {
        CHECK(commutator_weighted(Field(s), flow, 16.0, CommutatorVariant::c1).max_abs() == 0.0);
        CHECK(commutator_weighted(Field(s), flow, 16.0, CommutatorVariant::c2).max_abs() == 0.0);
    }
    SUBCASE("c1 is theta-uniform, c2 grows linearly") {
        const Field fd = pointwise_div(f, flow.d_y_u_s);
        const double ref1 = norm_A(fd, 1, 1.0);
        std::vector<double> k1, k2, thetas{8.0, 16.0, 32.0};
        for (double theta : thetas) {
            k1.push_back(norm_A(commutator_weighted(f, flow, theta, CommutatorVariant::c1), 1, 1.0) / ref1);
            k2.push_back(norm_A(commutator_weighted(f, flow, theta, CommutatorVariant::c2), 1, 1.0) / ref1);
        }
        CHECK(*std::max_element(k1.begin(), k1.end()) /
                  *std::min_element(k1.begin(), k1.end()) < 2.0);
        const double expo = fit_loglog_slope(thetas, k2);
        CHECK(expo > 0.75);
        CHECK(expo < 1.25);
    }
    SUBCASE("theta below the shift-regime bound is rejected") {
        CHECK_THROWS_AS(commutator_weighted(f, flow, 1.5, CommutatorVariant::c1),
                        ValidationError);
    }
}
