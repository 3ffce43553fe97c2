#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "prandtl/corpus.hpp"
#include "prandtl/grid.hpp"

using namespace prandtl;

namespace {
GridSpec small_spec() {
    GridSpec s;
    s.T = 1.0;
    s.Y = 4.0;
    s.L_x = 6.283185307179586;
    s.n_t = 9;
    s.n_x = 16;
    s.n_y = 33;
    return s;
}
} // namespace

TEST_CASE("grid spec validation") {
    GridSpec s = small_spec();
    CHECK_NOTHROW(s.validate());
    s.n_y = 4;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = small_spec();
    s.T = -1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = small_spec();
    s.n_y = 9; // dy = 0.5 < 1 fine; force dy >= 1
    s.Y = 10.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("derivative of a constant vanishes") {
    Field f(small_spec(), 3.25);
    for (Axis ax : {Axis::t, Axis::x, Axis::y}) {
        const Field d = derivative(f, ax, 1);
        CHECK(d.max_abs() < 1e-13);
        const Field d2 = derivative(f, ax, 2);
        CHECK(d2.max_abs() < 1e-12);
    }
}

TEST_CASE("second y-derivative exact on quadratics, boundaries included") {
    Field f = Field::from_function(small_spec(), [](double, double, double y) { return y * y; });
    const Field d2 = derivative(f, Axis::y, 2);
    for (double v : d2.data) CHECK(v == doctest::Approx(2.0).epsilon(1e-11));
    const Field d1 = derivative(f, Axis::y, 1);
    const GridSpec& s = f.spec;
    for (int iy = 0; iy < s.n_y; ++iy)
        CHECK(d1.at(3, 5, iy) == doctest::Approx(2.0 * s.y(iy)).epsilon(1e-11));
}

TEST_CASE("x derivative converges at second order") {
    std::vector<double> h, err;
    for (int nx : {32, 64, 128}) {
        GridSpec s = small_spec();
        s.n_x = nx;
        const double k = 2.0 * M_PI / s.L_x;
        Field f = Field::from_function(s, [&](double, double x, double) { return std::sin(k * x); });
        const Field d = derivative(f, Axis::x, 1);
        double e = 0.0;
        for (int ix = 0; ix < s.n_x; ++ix)
            e = std::max(e, std::abs(d.at(0, ix, 0) - k * std::cos(k * s.x(ix))));
        h.push_back(s.dx());
        err.push_back(e);
    }
    CHECK(err[0] / err[1] > 3.3); // ~4x per halving
    CHECK(err[1] / err[2] > 3.3);
}

TEST_CASE("derivative rejects bad order") {
    Field f(small_spec());
    CHECK_THROWS_AS(derivative(f, Axis::y, 3), ValidationError);
    CHECK_THROWS_AS(derivative(f, Axis::y, 0), ValidationError);
}

TEST_CASE("cumulative integral in y") {
    const GridSpec s = small_spec();
    SUBCASE("of one is y") {
        Field f(s, 1.0);
        const Field q = cumulative_integral_y(f);
        CHECK(q.meta.vanishes_at_wall);
        for (int iy = 0; iy < s.n_y; ++iy)
            CHECK(q.at(2, 3, iy) == doctest::Approx(s.y(iy)).epsilon(1e-13));
    }
    SUBCASE("of zero is zero") {
        Field f(s, 0.0);
        CHECK(cumulative_integral_y(f).max_abs() == 0.0);
    }
    SUBCASE("exact on linear integrands") {
        Field f = Field::from_function(s, [](double, double, double y) { return 2.0 * y; });
        const Field q = cumulative_integral_y(f);
        for (int iy = 0; iy < s.n_y; ++iy)
            CHECK(std::abs(q.at(1, 1, iy) - s.y(iy) * s.y(iy)) < 1e-10);
    }
}

TEST_CASE("domain integral") {
    GridSpec s = small_spec();
    SUBCASE("volume of the domain") {
        Field f(s, 1.0);
        CHECK(integral_txy(f) == doctest::Approx(s.T * s.L_x * s.Y).epsilon(1e-12));
        CHECK(integral_xy(f, 0) == doctest::Approx(s.L_x * s.Y).epsilon(1e-12));
    }
    SUBCASE("zero integrand") { CHECK(integral_txy(Field(s, 0.0)) == 0.0); }
    SUBCASE("e^{-y} against the closed form") {
        GridSpec s2 = small_spec();
        s2.Y = 8.0;
        s2.n_y = 256;
        Field f = Field::from_function(s2, [](double, double, double y) { return std::exp(-y); });
        const double exact = s2.T * s2.L_x * (1.0 - std::exp(-8.0));
        CHECK(std::abs(integral_txy(f) - exact) / exact < 1e-4);
    }
}

TEST_CASE("derivative is linear and leaves inputs unmodified") {
    std::mt19937_64 rng(7);
    const GridSpec s = small_spec();
    const Field f = random_smooth_field(s, rng);
    const Field g = random_smooth_field(s, rng);
    const std::vector<double> f_copy = f.data;
    const double a = 1.7, b = -0.3;
    const Field lhs = derivative(a * f + b * g, Axis::y, 1);
    const Field rhs = a * derivative(f, Axis::y, 1) + b * derivative(g, Axis::y, 1);
    double scale = rhs.max_abs();
    CHECK((lhs - rhs).max_abs() < 1e-12 * std::max(1.0, scale));
    CHECK(f.data == f_copy);
}

TEST_CASE("cumulative integral then derivative recovers the integrand") {
    // grid-refinement slope of the max interior error should be ~2
    std::vector<double> h, err;
    for (int ny : {33, 65, 129}) {
        GridSpec s = small_spec();
        s.n_y = ny;
        Field f = Field::from_function(s, [](double, double, double y) { return std::exp(-y) * std::sin(y); });
        const Field rec = derivative(cumulative_integral_y(f), Axis::y, 1);
        double e = 0.0;
        for (int iy = 1; iy < s.n_y - 1; ++iy)
            e = std::max(e, std::abs(rec.at(4, 3, iy) - f.at(4, 3, iy)));
        h.push_back(s.dy());
        err.push_back(e);
    }
    const double slope = fit_loglog_slope(h, err);
    CHECK(slope >= 1.8);
}

TEST_CASE("csv round trip is bit exact") {
    std::mt19937_64 rng(11);
    const GridSpec s = small_spec();
    const Field f = random_smooth_field(s, rng);
    const std::string path = (std::filesystem::temp_directory_path() / "prandtl_rt.csv").string();
    write_field_csv(f, path);
    const Field g = read_field_csv(path);
    REQUIRE(g.spec == f.spec);
    CHECK(g.data == f.data);
    std::filesystem::remove(path);
    std::filesystem::remove((std::filesystem::temp_directory_path() / "prandtl_rt.json").string());
}

TEST_CASE("finite check names the offending node") {
    Field f(small_spec());
    f.at(1, 2, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(require_finite(f, "probe"), GateError);
}
