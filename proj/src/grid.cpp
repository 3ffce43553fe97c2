#include "prandtl/grid.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace prandtl {

void GridSpec::validate() const {
    if (!(T > 0.0) || !(Y > 0.0) || !(L_x > 0.0))
        throw ValidationError("GridSpec: T, Y, L_x must be positive");
    if (n_t < 4) throw ValidationError("GridSpec: n_t must be >= 4");
    if (n_x < 4) throw ValidationError("GridSpec: n_x must be >= 4");
    if (n_y < 8) throw ValidationError("GridSpec: n_y must be >= 8");
    if (!(dy() < 1.0))
        throw ValidationError("GridSpec: dy must be < 1 to resolve the unit-scale layer");
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

void Field::enforce_wall_zero() {
    for (int it = 0; it < spec.n_t; ++it)
        for (int ix = 0; ix < spec.n_x; ++ix)
            at(it, ix, 0) = 0.0;
    meta.vanishes_at_wall = true;
}

void require_same_spec(const Field& a, const Field& b, const char* where) {
    if (!(a.spec == b.spec))
        throw ValidationError(std::string(where) + ": grid specs differ");
}

void require_finite(const Field& f, const char* what) {
    const auto& s = f.spec;
    for (int it = 0; it < s.n_t; ++it)
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy) {
                double v = f.at(it, ix, iy);
                if (!std::isfinite(v)) {
                    std::ostringstream msg;
                    msg << what << ": non-finite value " << v << " at (t,x,y)=("
                        << s.t(it) << "," << s.x(ix) << "," << s.y(iy) << ")"
                        << " index (" << it << "," << ix << "," << iy << ")";
                    throw GateError(msg.str());
                }
            }
}

Field operator+(const Field& a, const Field& b) {
    require_same_spec(a, b, "operator+");
    Field out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    out.meta.vanishes_at_wall = a.meta.vanishes_at_wall && b.meta.vanishes_at_wall;
    out.meta.vanishes_at_top = a.meta.vanishes_at_top && b.meta.vanishes_at_top;
    return out;
}

Field operator-(const Field& a, const Field& b) {
    require_same_spec(a, b, "operator-");
    Field out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    out.meta.vanishes_at_wall = a.meta.vanishes_at_wall && b.meta.vanishes_at_wall;
    out.meta.vanishes_at_top = a.meta.vanishes_at_top && b.meta.vanishes_at_top;
    return out;
}

Field operator*(double c, const Field& a) {
    Field out = a;
    for (double& v : out.data) v *= c;
    return out;
}

Field& operator+=(Field& a, const Field& b) {
    require_same_spec(a, b, "operator+=");
    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
    a.meta.vanishes_at_wall = a.meta.vanishes_at_wall && b.meta.vanishes_at_wall;
    a.meta.vanishes_at_top = a.meta.vanishes_at_top && b.meta.vanishes_at_top;
    return a;
}

Field& operator-=(Field& a, const Field& b) {
    require_same_spec(a, b, "operator-=");
    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] -= b.data[i];
    a.meta.vanishes_at_wall = a.meta.vanishes_at_wall && b.meta.vanishes_at_wall;
    a.meta.vanishes_at_top = a.meta.vanishes_at_top && b.meta.vanishes_at_top;
    return a;
}

Field pointwise(const Field& a, const Field& b) {
    require_same_spec(a, b, "pointwise");
    Field out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
    out.meta.vanishes_at_wall = a.meta.vanishes_at_wall || b.meta.vanishes_at_wall;
    out.meta.vanishes_at_top = a.meta.vanishes_at_top || b.meta.vanishes_at_top;
    return out;
}

Field pointwise_div(const Field& a, const Field& b) {
    require_same_spec(a, b, "pointwise_div");
    Field out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] /= b.data[i];
    out.meta = BoundaryMeta{};
    return out;
}

namespace {

// One line along a non-periodic axis: central interior, one-sided
// second-order ends.
void line_d1(const double* src, double* dst, int n, long stride, double h) {
    const double i2h = 1.0 / (2.0 * h);
    dst[0] = (-3.0 * src[0] + 4.0 * src[stride] - src[2 * stride]) * i2h;
    for (int i = 1; i < n - 1; ++i)
        dst[static_cast<long>(i) * stride] =
            (src[(i + 1) * stride] - src[(i - 1) * stride]) * i2h;
    dst[static_cast<long>(n - 1) * stride] =
        (3.0 * src[(n - 1) * stride] - 4.0 * src[(n - 2) * stride] + src[(n - 3) * stride]) * i2h;
}

void line_d2(const double* src, double* dst, int n, long stride, double h) {
    const double ih2 = 1.0 / (h * h);
    dst[0] = (2.0 * src[0] - 5.0 * src[stride] + 4.0 * src[2 * stride] - src[3 * stride]) * ih2;
    for (int i = 1; i < n - 1; ++i)
        dst[static_cast<long>(i) * stride] =
            (src[(i + 1) * stride] - 2.0 * src[static_cast<long>(i) * stride] + src[(i - 1) * stride]) * ih2;
    dst[static_cast<long>(n - 1) * stride] =
        (2.0 * src[(n - 1) * stride] - 5.0 * src[(n - 2) * stride] + 4.0 * src[(n - 3) * stride] -
         src[(n - 4) * stride]) * ih2;
}

void line_d1_periodic(const double* src, double* dst, int n, long stride, double h) {
    const double i2h = 1.0 / (2.0 * h);
    for (int i = 0; i < n; ++i) {
        int ip = (i + 1) % n;
        int im = (i + n - 1) % n;
        dst[static_cast<long>(i) * stride] = (src[ip * stride] - src[im * stride]) * i2h;
    }
}

void line_d2_periodic(const double* src, double* dst, int n, long stride, double h) {
    const double ih2 = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
        int ip = (i + 1) % n;
        int im = (i + n - 1) % n;
        dst[static_cast<long>(i) * stride] =
            (src[ip * stride] - 2.0 * src[static_cast<long>(i) * stride] + src[im * stride]) * ih2;
    }
}

} // namespace

Field derivative(const Field& f, Axis axis, int order) {
    if (order != 1 && order != 2)
        throw ValidationError("derivative: order must be 1 or 2");
    const GridSpec& s = f.spec;
    const int min_n = (order == 1) ? 3 : 4;
    Field out(s);
    out.meta = BoundaryMeta{};

    if (axis == Axis::y) {
        if (s.n_y < min_n) throw ValidationError("derivative: n_y below stencil width");
        for (int it = 0; it < s.n_t; ++it)
            for (int ix = 0; ix < s.n_x; ++ix) {
                const double* src = &f.data[f.idx(it, ix, 0)];
                double* dst = &out.data[out.idx(it, ix, 0)];
                if (order == 1) line_d1(src, dst, s.n_y, 1, s.dy());
                else line_d2(src, dst, s.n_y, 1, s.dy());
            }
    } else if (axis == Axis::x) {
        if (s.n_x < min_n) throw ValidationError("derivative: n_x below stencil width");
        for (int it = 0; it < s.n_t; ++it)
            for (int iy = 0; iy < s.n_y; ++iy) {
                const double* src = &f.data[f.idx(it, 0, iy)];
                double* dst = &out.data[out.idx(it, 0, iy)];
                if (order == 1) line_d1_periodic(src, dst, s.n_x, s.n_y, s.dx());
                else line_d2_periodic(src, dst, s.n_x, s.n_y, s.dx());
            }
    } else {
        if (s.n_t < min_n) throw ValidationError("derivative: n_t below stencil width");
        const long stride = static_cast<long>(s.n_x) * s.n_y;
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy) {
                const double* src = &f.data[f.idx(0, ix, iy)];
                double* dst = &out.data[out.idx(0, ix, iy)];
                if (order == 1) line_d1(src, dst, s.n_t, stride, s.dt());
                else line_d2(src, dst, s.n_t, stride, s.dt());
            }
    }
    return out;
}

Field y_derivative_composed(const Field& f, int q) {
    if (q < 0) throw ValidationError("y_derivative_composed: negative order");
    Field g = f;
    while (q >= 2) {
        g = derivative(g, Axis::y, 2);
        q -= 2;
    }
    if (q == 1) g = derivative(g, Axis::y, 1);
    return g;
}

Field cumulative_integral_y(const Field& f) {
    const GridSpec& s = f.spec;
    Field out(s);
    const double half_dy = 0.5 * s.dy();
    for (int it = 0; it < s.n_t; ++it)
        for (int ix = 0; ix < s.n_x; ++ix) {
            const double* src = &f.data[f.idx(it, ix, 0)];
            double* dst = &out.data[out.idx(it, ix, 0)];
            dst[0] = 0.0;
            for (int iy = 1; iy < s.n_y; ++iy)
                dst[iy] = dst[iy - 1] + half_dy * (src[iy - 1] + src[iy]);
        }
    out.meta.vanishes_at_wall = true;
    return out;
}

double integral_txy(const Field& f) {
    const GridSpec& s = f.spec;
    double total = 0.0;
    for (int it = 0; it < s.n_t; ++it) {
        const double wt = (it == 0 || it == s.n_t - 1) ? 0.5 : 1.0;
        double slab = 0.0;
        for (int ix = 0; ix < s.n_x; ++ix) {
            const double* src = &f.data[f.idx(it, ix, 0)];
            double col = 0.5 * (src[0] + src[s.n_y - 1]);
            for (int iy = 1; iy < s.n_y - 1; ++iy) col += src[iy];
            slab += col;
        }
        total += wt * slab;
    }
    return total * s.dt() * s.dx() * s.dy();
}

double integral_xy(const Field& f, int it) {
    const GridSpec& s = f.spec;
    if (it < 0 || it >= s.n_t) throw ValidationError("integral_xy: time index out of range");
    double slab = 0.0;
    for (int ix = 0; ix < s.n_x; ++ix) {
        const double* src = &f.data[f.idx(it, ix, 0)];
        double col = 0.5 * (src[0] + src[s.n_y - 1]);
        for (int iy = 1; iy < s.n_y - 1; ++iy) col += src[iy];
        slab += col;
    }
    return slab * s.dx() * s.dy();
}

namespace {

std::string sidecar_path(const std::string& path) {
    std::filesystem::path p(path);
    if (p.extension() == ".csv") {
        p.replace_extension(".json");
        return p.string();
    }
    return path + ".json";
}

} // namespace

void write_field_csv(const Field& f, const std::string& path) {
    const GridSpec& s = f.spec;
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ValidationError("write_field_csv: cannot open " + path);
    std::fputs("t,x,y,value\n", fp);
    for (int it = 0; it < s.n_t; ++it)
        for (int ix = 0; ix < s.n_x; ++ix)
            for (int iy = 0; iy < s.n_y; ++iy)
                std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", s.t(it), s.x(ix), s.y(iy),
                             f.at(it, ix, iy));
    std::fclose(fp);

    nlohmann::json j;
    j["T"] = s.T;
    j["Y"] = s.Y;
    j["L_x"] = s.L_x;
    j["n_t"] = s.n_t;
    j["n_x"] = s.n_x;
    j["n_y"] = s.n_y;
    std::ofstream sj(sidecar_path(path));
    if (!sj) throw ValidationError("write_field_csv: cannot open " + sidecar_path(path));
    sj << j.dump(2) << "\n";
}

Field read_field_csv(const std::string& path) {
    std::ifstream sj(sidecar_path(path));
    if (!sj) throw ValidationError("read_field_csv: missing sidecar " + sidecar_path(path));
    nlohmann::json j;
    sj >> j;
    GridSpec s;
    s.T = j.at("T").get<double>();
    s.Y = j.at("Y").get<double>();
    s.L_x = j.at("L_x").get<double>();
    s.n_t = j.at("n_t").get<int>();
    s.n_x = j.at("n_x").get<int>();
    s.n_y = j.at("n_y").get<int>();
    Field out(s);

    std::ifstream in(path);
    if (!in) throw ValidationError("read_field_csv: cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t p = line.rfind(',');
        if (p == std::string::npos)
            throw ValidationError("read_field_csv: malformed line in " + path);
        if (count >= out.data.size())
            throw ValidationError("read_field_csv: too many rows in " + path);
        out.data[count++] = std::strtod(line.c_str() + p + 1, nullptr);
    }
    if (count != out.data.size())
        throw ValidationError("read_field_csv: row count does not match sidecar spec");
    return out;
}

} // namespace prandtl
