#include "prandtl/norms.hpp"

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace prandtl {

namespace {

// Memoized derivative fields of one base field. Canonical composition
// order: x first, then t, then y (2+2+...+1 for the y order), so every
// norm built on the same table shares identical derivative values.
class DerivTable {
public:
    explicit DerivTable(const Field& f) : base_(&f) {}

    const Field& get(int bt, int bx, int q) {
        const std::array<int, 3> key{bt, bx, q};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        Field value;
        if (q >= 2) {
            value = derivative(get(bt, bx, q - 2), Axis::y, 2);
        } else if (q == 1) {
            value = derivative(get(bt, bx, 0), Axis::y, 1);
        } else if (bt > 0) {
            value = derivative(get(bt - 1, bx, 0), Axis::t, 1);
        } else if (bx > 0) {
            value = derivative(get(0, bx - 1, 0), Axis::x, 1);
        } else {
            value = *base_;
        }
        return memo_.emplace(key, std::move(value)).first->second;
    }

private:
    const Field* base_;
    std::map<std::array<int, 3>, Field> memo_;
};

double weight(double y, double ell) { return std::pow(1.0 + y * y, 0.5 * ell); }

// || e^{-lambda t} <y>^ell g ||_{L2}^2 by the domain quadrature.
double weighted_l2_sq(const Field& g, double ell, double lambda) {
    const GridSpec& s = g.spec;
    std::vector<double> wy(s.n_y);
    for (int iy = 0; iy < s.n_y; ++iy) wy[iy] = weight(s.y(iy), ell);
    double total = 0.0;
    for (int it = 0; it < s.n_t; ++it) {
        const double qt = (it == 0 || it == s.n_t - 1) ? 0.5 : 1.0;
        const double damp = std::exp(-2.0 * lambda * s.t(it));
        double slab = 0.0;
        for (int ix = 0; ix < s.n_x; ++ix) {
            const double* src = &g.data[g.idx(it, ix, 0)];
            double col = 0.0;
            for (int iy = 0; iy < s.n_y; ++iy) {
                const double qy = (iy == 0 || iy == s.n_y - 1) ? 0.5 : 1.0;
                const double v = wy[iy] * src[iy];
                col += qy * v * v;
            }
            slab += col;
        }
        total += qt * damp * slab;
    }
    return total * s.dt() * s.dx() * s.dy();
}

// sup_t of e^{-2 lambda t} || <y>^ell g(t) ||_{L2(x,y)}^2.
double weighted_l2_sq_sup_t(const Field& g, double ell, double lambda) {
    const GridSpec& s = g.spec;
    std::vector<double> wy(s.n_y);
    for (int iy = 0; iy < s.n_y; ++iy) wy[iy] = weight(s.y(iy), ell);
    double best = 0.0;
    for (int it = 0; it < s.n_t; ++it) {
        const double damp = std::exp(-2.0 * lambda * s.t(it));
        double slab = 0.0;
        for (int ix = 0; ix < s.n_x; ++ix) {
            const double* src = &g.data[g.idx(it, ix, 0)];
            for (int iy = 0; iy < s.n_y; ++iy) {
                const double qy = (iy == 0 || iy == s.n_y - 1) ? 0.5 : 1.0;
                const double v = wy[iy] * src[iy];
                slab += qy * v * v;
            }
        }
        best = std::max(best, damp * slab * s.dx() * s.dy());
    }
    return best;
}

// L2_y(Linf_{t,x}) with the weight inside: sqrt( int ( <y>^ell max_{t,x}|g| )^2 dy ).
double mixed_C_norm(const Field& g, double ell) {
    const GridSpec& s = g.spec;
    double total = 0.0;
    for (int iy = 0; iy < s.n_y; ++iy) {
        double m = 0.0;
        for (int it = 0; it < s.n_t; ++it)
            for (int ix = 0; ix < s.n_x; ++ix)
                m = std::max(m, std::abs(g.at(it, ix, iy)));
        const double v = weight(s.y(iy), ell) * m;
        const double qy = (iy == 0 || iy == s.n_y - 1) ? 0.5 : 1.0;
        total += qy * v * v;
    }
    return std::sqrt(total * s.dy());
}

// Linf_y(L2_{t,x}): max_y <y>^ell sqrt( int int g^2 dt dx ).
double mixed_D_norm(const Field& g, double ell) {
    const GridSpec& s = g.spec;
    double best = 0.0;
    for (int iy = 0; iy < s.n_y; ++iy) {
        double sq = 0.0;
        for (int it = 0; it < s.n_t; ++it) {
            const double qt = (it == 0 || it == s.n_t - 1) ? 0.5 : 1.0;
            for (int ix = 0; ix < s.n_x; ++ix) {
                const double v = g.at(it, ix, iy);
                sq += qt * v * v;
            }
        }
        best = std::max(best, weight(s.y(iy), ell) * std::sqrt(sq * s.dt() * s.dx()));
    }
    return best;
}

int half_up(int q) { return (q + 1) / 2; }

void check_order(const Field& f, int k) {
    if (k < 0) throw ValidationError("norm order k must be >= 0");
    // Highest composed stencil: y-order 2k needs n_y wide enough; the t/x
    // orders need k first-order stencils.
    if (k > 3) throw ValidationError("norm order k > 3 is not supported by the stencils");
    (void)f;
}

// Accumulate one index group (fixed tangential order m, fixed q) over all
// multi-indices (bt, bx) with bt+bx = m, either summed or maxed.
template <class PerAtom>
double group_value(DerivTable& table, int m, int q, TangentialIndexMode mode, PerAtom&& atom) {
    double acc = 0.0;
    bool first = true;
    for (int bt = 0; bt <= m; ++bt) {
        const int bx = m - bt;
        const double v = atom(table.get(bt, bx, q));
        if (mode == TangentialIndexMode::sum_multi_indices) {
            acc += v;
        } else {
            acc = first ? v : std::max(acc, v);
            first = false;
        }
    }
    return acc;
}

} // namespace

double seminorm_sq(const Field& f, int bt, int bx, int q, double ell, double lambda) {
    DerivTable table(f);
    return weighted_l2_sq(table.get(bt, bx, q), ell, lambda);
}

double norm_A(const Field& f, int k, double ell, TangentialIndexMode mode) {
    check_order(f, k);
    DerivTable table(f);
    double sq = 0.0;
    for (int q = 0; half_up(q) <= k; ++q)
        for (int m = 0; m + half_up(q) <= k; ++m)
            sq += group_value(table, m, q, mode,
                              [&](const Field& g) { return weighted_l2_sq(g, ell, 0.0); });
    return std::sqrt(sq);
}

double norm_A_dot(const Field& f, int k, double ell, TangentialIndexMode mode) {
    check_order(f, k);
    DerivTable table(f);
    double sq = 0.0;
    for (int q = 0; half_up(q) <= k; ++q)
        for (int m = 0; m + half_up(q) <= k; ++m) {
            if (m + half_up(q) == 0) continue;
            sq += group_value(table, m, q, mode,
                              [&](const Field& g) { return weighted_l2_sq(g, ell, 0.0); });
        }
    return std::sqrt(sq);
}

double norm_B(const Field& f, int k1, int k2, double lambda, double ell,
              TangentialIndexMode mode) {
    check_order(f, std::max(k1, half_up(k2)));
    DerivTable table(f);
    double sq = 0.0;
    for (int q = 0; q <= k2; ++q)
        for (int m = 0; m <= k1; ++m)
            sq += group_value(table, m, q, mode,
                              [&](const Field& g) { return weighted_l2_sq(g, ell, lambda); });
    return std::sqrt(sq);
}

double norm_B_sup_t(const Field& f, int k1, int k2, double lambda, double ell) {
    check_order(f, std::max(k1, half_up(k2)));
    DerivTable table(f);
    double sq = 0.0;
    for (int q = 0; q <= k2; ++q)
        for (int m = 0; m <= k1; ++m)
            sq += group_value(table, m, q, TangentialIndexMode::sum_multi_indices,
                              [&](const Field& g) { return weighted_l2_sq_sup_t(g, ell, lambda); });
    return std::sqrt(sq);
}

double norm_C(const Field& f, int k, double ell, TangentialIndexMode mode) {
    check_order(f, k);
    DerivTable table(f);
    double total = 0.0;
    for (int q = 0; half_up(q) <= k; ++q)
        for (int m = 0; m + half_up(q) <= k; ++m)
            total += group_value(table, m, q, mode,
                                 [&](const Field& g) { return mixed_C_norm(g, ell); });
    return total;
}

double norm_C_dot(const Field& f, int k, double ell, TangentialIndexMode mode) {
    check_order(f, k);
    DerivTable table(f);
    double total = 0.0;
    for (int q = 0; half_up(q) <= k; ++q)
        for (int m = 0; m + half_up(q) <= k; ++m) {
            if (m + half_up(q) == 0) continue;
            total += group_value(table, m, q, mode,
                                 [&](const Field& g) { return mixed_C_norm(g, ell); });
        }
    return total;
}

double norm_D(const Field& f, int k, double ell, TangentialIndexMode mode) {
    check_order(f, k);
    DerivTable table(f);
    double total = 0.0;
    for (int q = 0; half_up(q) <= k; ++q)
        for (int m = 0; m + half_up(q) <= k; ++m)
            total += group_value(table, m, q, mode,
                                 [&](const Field& g) { return mixed_D_norm(g, ell); });
    return total;
}

double norm_D_dot(const Field& f, int k, double ell, TangentialIndexMode mode) {
    check_order(f, k);
    DerivTable table(f);
    double total = 0.0;
    for (int q = 0; half_up(q) <= k; ++q)
        for (int m = 0; m + half_up(q) <= k; ++m) {
            if (m + half_up(q) == 0) continue;
            total += group_value(table, m, q, mode,
                                 [&](const Field& g) { return mixed_D_norm(g, ell); });
        }
    return total;
}

double norm_Linf(const Field& f, double ell) {
    const GridSpec& s = f.spec;
    double m = 0.0;
    for (int it = 0; it < s.n_t; ++it)
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy)
                m = std::max(m, weight(s.y(iy), ell) * std::abs(f.at(it, ix, iy)));
    return m;
}

double slab_l2_weighted(const Field& f, int it, double ell) {
    const GridSpec& s = f.spec;
    if (it < 0 || it >= s.n_t) throw ValidationError("slab_l2_weighted: bad time index");
    double sq = 0.0;
    for (int ix = 0; ix < s.n_x; ++ix)
        for (int iy = 0; iy < s.n_y; ++iy) {
            const double qy = (iy == 0 || iy == s.n_y - 1) ? 0.5 : 1.0;
            const double v = weight(s.y(iy), ell) * f.at(it, ix, iy);
            sq += qy * v * v;
        }
    return std::sqrt(sq * s.dx() * s.dy());
}

double morse_check(const Field& f, const Field& g, int k, double ell) {
    require_same_spec(f, g, "morse_check");
    const double num = norm_A(pointwise(f, g), k, ell);
    const double den = norm_A(f, k, ell) * norm_Linf(g) + norm_Linf(f) * norm_A_dot(g, k, ell);
    if (den == 0.0) return 0.0;
    return num / den;
}

std::string NormReport::to_json() const {
    nlohmann::json j;
    for (const auto& [name, value] : values) j[name] = value;
    j["lambda_k_diag"] = lambda_k_diag;
    return j.dump(2);
}

} // namespace prandtl
