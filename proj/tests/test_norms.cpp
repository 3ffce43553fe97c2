#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prandtl/corpus.hpp"
#include "prandtl/norms.hpp"

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

TEST_CASE("zero field has zero norms") {
    Field z(small_spec());
    CHECK(norm_A(z, 2, 1.0) == 0.0);
    CHECK(norm_B(z, 1, 2, 0.5, 1.0) == 0.0);
    CHECK(norm_C(z, 1, 0.0) == 0.0);
    CHECK(norm_D(z, 1, 0.0) == 0.0);
}

TEST_CASE("constant field norms collapse to the surviving term") {
    const GridSpec s = small_spec();
    Field f(s, 1.0);
    CHECK(norm_A(f, 0, 0.0) == doctest::Approx(std::sqrt(s.T * s.L_x * s.Y)).epsilon(1e-12));
    CHECK(norm_D(f, 0, 0.0) == doctest::Approx(std::sqrt(s.T * s.L_x)).epsilon(1e-12));
    CHECK(norm_C(f, 0, 0.0) == doctest::Approx(std::sqrt(s.Y)).epsilon(1e-12));
}

TEST_CASE("A norm of e^{-y} at k=1 matches the closed-form sum") {
    GridSpec s = small_spec();
    s.Y = 12.0;
    s.n_y = 257;
    Field f = Field::from_function(s, [](double, double, double y) { return std::exp(-y); });
    // index set at k=1: (beta,q) in {(0,0),(0,1),(0,2)}; t,x derivatives vanish.
    // each squared seminorm integrates T*L_x*(1-e^{-2Y})/2.
    const double piece = s.T * s.L_x * 0.5 * (1.0 - std::exp(-2.0 * s.Y));
    const double exact = std::sqrt(3.0 * piece);
    CHECK(norm_A(f, 1, 0.0) == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("time damping in the B norm cancels matching growth") {
    const GridSpec s = small_spec();
    Field f = Field::from_function(s, [](double t, double, double) { return std::exp(t); });
    CHECK(norm_B(f, 0, 0, 1.0, 0.0) ==
          doctest::Approx(std::sqrt(s.T * s.L_x * s.Y)).epsilon(1e-12));
}

TEST_CASE("decomposition of the A norm into B pieces is exact") {
    std::mt19937_64 rng(3);
    const GridSpec s = small_spec();
    for (int trial = 0; trial < 5; ++trial) {
        const Field f = random_smooth_field(s, rng);
        for (int k : {1, 2, 3}) {
            const double a = norm_A(f, k, 1.0);
            // pieces grouped by j = ceil(q/2): q in {2j-1, 2j}, |beta| <= k-j
            double sq = 0.0;
            for (int j = 0; j <= k; ++j) {
                for (int q = (j == 0 ? 0 : 2 * j - 1); q <= 2 * j; ++q) {
                    if (j == 0 && q > 0) continue;
                    for (int m = 0; m + j <= k; ++m)
                        for (int bt = 0; bt <= m; ++bt)
                            sq += seminorm_sq(f, bt, m - bt, q, 1.0);
                }
            }
            CHECK(std::abs(a * a - sq) <= 1e-12 * std::max(a * a, 1e-30));
        }
    }
}

TEST_CASE("homogeneity and triangle inequality") {
    std::mt19937_64 rng(5);
    const GridSpec s = small_spec();
    for (int trial = 0; trial < 10; ++trial) {
        const Field f = random_smooth_field(s, rng);
        const Field g = random_smooth_field(s, rng);
        const double c = -2.75;
        for (int k : {0, 2}) {
            CHECK(norm_A(c * f, k, 1.0) ==
                  doctest::Approx(std::abs(c) * norm_A(f, k, 1.0)).epsilon(1e-12));
            CHECK(norm_A(f + g, k, 1.0) <=
                  norm_A(f, k, 1.0) + norm_A(g, k, 1.0) + 1e-12);
            CHECK(norm_C(f + g, k, 0.0) <= norm_C(f, k, 0.0) + norm_C(g, k, 0.0) + 1e-12);
            CHECK(norm_D(f + g, k, 0.0) <= norm_D(f, k, 0.0) + norm_D(g, k, 0.0) + 1e-12);
        }
    }
}

TEST_CASE("monotonicity in k and in the weight") {
    std::mt19937_64 rng(9);
    const GridSpec s = small_spec();
    const Field f = random_smooth_field(s, rng);
    CHECK(norm_A(f, 0, 1.0) <= norm_A(f, 1, 1.0));
    CHECK(norm_A(f, 1, 1.0) <= norm_A(f, 2, 1.0));
    Field pos = f;
    for (double& v : pos.data) v = std::abs(v);
    CHECK(norm_A(pos, 1, 0.5) <= norm_A(pos, 1, 1.5));
}

TEST_CASE("dotted norm drops exactly the order-zero term") {
    std::mt19937_64 rng(13);
    const Field f = random_smooth_field(small_spec(), rng);
    const double full = norm_A(f, 2, 1.0);
    const double dot = norm_A_dot(f, 2, 1.0);
    const double base = seminorm_sq(f, 0, 0, 0, 1.0);
    CHECK(full * full == doctest::Approx(dot * dot + base).epsilon(1e-12));
    Field c(small_spec(), 4.0);
    CHECK(norm_A_dot(c, 2, 0.0) < 1e-10);
}

TEST_CASE("max-per-order mode is bounded by the summed mode") {
    std::mt19937_64 rng(17);
    const Field f = random_smooth_field(small_spec(), rng);
    CHECK(norm_A(f, 2, 1.0, TangentialIndexMode::max_per_order) <= norm_A(f, 2, 1.0));
}

TEST_CASE("morse ratio") {
    const GridSpec s = small_spec();
    SUBCASE("both zero") {
        Field z(s);
        CHECK(morse_check(z, z, 1, 1.0) == 0.0);
    }
    SUBCASE("unit g collapses the inequality") {
        std::mt19937_64 rng(21);
        const Field f = random_smooth_field(s, rng);
        Field one(s, 1.0);
        CHECK(morse_check(f, one, 2, 1.0) <= 1.0 + 1e-9);
    }
    SUBCASE("random corpus stays bounded and refinement-stable") {
        auto max_ratio = [](const GridSpec& spec, int seed) {
            std::mt19937_64 rng(seed);
            double worst = 0.0;
            for (int i = 0; i < 25; ++i) {
                const Field f = random_smooth_field(spec, rng);
                const Field g = random_smooth_field(spec, rng);
                worst = std::max(worst, morse_check(f, g, 2, 1.0));
            }
            return worst;
        };
        const double coarse = max_ratio(small_spec(), 77);
        GridSpec fine = small_spec();
        fine.n_t = 17;
        fine.n_x = 32;
        fine.n_y = 65;
        const double refined = max_ratio(fine, 77);
        CHECK(coarse < 10.0);
        CHECK(std::abs(refined - coarse) / coarse < 0.2);
    }
}

TEST_CASE("mixed-norm embedding constant over a corpus") {
    std::mt19937_64 rng(31);
    const GridSpec s = small_spec();
    double kappa = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Field f = random_smooth_field(s, rng);
        kappa = std::max(kappa, norm_C(f, 1, 1.0) / norm_A(f, 3, 1.0));
    }
    CHECK(kappa > 0.0);
    CHECK(kappa < 50.0);
}
