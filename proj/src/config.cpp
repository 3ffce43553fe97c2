#include "prandtl/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace prandtl {

ShearProfile RunConfig::make_profile() const {
    ShearProfile p;
    if (shear_profile == "erf_canonical") {
        p.kind = ShearProfile::Kind::erf_canonical;
        p.width = shear_width;
    } else if (shear_profile == "exp_saturating") {
        p.kind = ShearProfile::Kind::exp_saturating;
        p.rate = shear_rate;
    } else {
        throw ValidationError("config: unknown shear profile '" + shear_profile + "'");
    }
    return p;
}

IterationConfig RunConfig::make_iteration_config() const {
    IterationConfig c;
    c.epsilon = epsilon;
    c.k0 = k0;
    c.theta0 = theta0;
    c.n_max = n_max;
    c.inner = (inner_solver == "direct_uv") ? IterationConfig::Inner::direct_uv
                                            : IterationConfig::Inner::via_w;
    c.monitor_orders = track;
    c.ell = ell;
    c.tolerance_residual = tolerance_residual;
    return c;
}

OracleConfig RunConfig::make_oracle_config() const {
    OracleConfig c;
    c.picard_max = picard_max;
    c.picard_tol = picard_tol;
    return c;
}

TangentialIndexMode RunConfig::index_mode() const {
    if (tangential_index_mode == "sum") return TangentialIndexMode::sum_multi_indices;
    if (tangential_index_mode == "max") return TangentialIndexMode::max_per_order;
    throw ValidationError("config: tangential_index_mode must be 'sum' or 'max'");
}

void RunConfig::validate() const {
    grid.validate();
    (void)make_profile();
    (void)index_mode();
    if (perturbation_family != "sine_gaussian" && perturbation_family != "none")
        throw ValidationError("config: unknown perturbation family '" + perturbation_family + "'");
    if (!(epsilon >= 0.0)) throw ValidationError("config: epsilon must be >= 0");
    if (inner_solver != "via_w" && inner_solver != "direct_uv")
        throw ValidationError("config: inner must be 'via_w' or 'direct_uv'");
    make_iteration_config().validate();
    make_oracle_config().validate();
}

namespace {

struct Cursor {
    std::string origin;
    int line = 0;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg) {
    std::ostringstream out;
    out << at.origin << ":" << at.line << ": " << msg;
    throw ValidationError(out.str());
}

double parse_double(const Cursor& at, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(at, "value for '" + key + "' is not a number: '" + v + "'");
    }
}

long long parse_int(const Cursor& at, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(at, "value for '" + key + "' is not an integer: '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// "k:ell,k:ell" pairs.
std::vector<std::pair<int, double>> parse_track(const Cursor& at, const std::string& v) {
    std::vector<std::pair<int, double>> out;
    for (const std::string& item : split(v, ',')) {
        if (item.empty()) continue;
        const auto parts = split(item, ':');
        if (parts.size() != 2) fail(at, "track entries must look like 'k:ell', got '" + item + "'");
        out.emplace_back(static_cast<int>(parse_int(at, "track", parts[0])),
                         parse_double(at, "track", parts[1]));
    }
    if (out.empty()) fail(at, "track list is empty");
    return out;
}

std::vector<double> parse_list(const Cursor& at, const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& item : split(v, ','))
        if (!item.empty()) out.push_back(parse_double(at, key, item));
    if (out.empty()) fail(at, "list for '" + key + "' is empty");
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    Cursor at{origin, 0};

    while (std::getline(in, line)) {
        ++at.line;
        std::string body = line;
        const size_t hash = body.find('#');
        if (hash != std::string::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']') fail(at, "unterminated section header");
            section = trim(body.substr(1, body.size() - 2));
            static const char* known[] = {"grid",  "shear",    "perturbation", "schedule",
                                          "norms", "solver",   "stability",    "sweep",
                                          "output"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) fail(at, "unknown section [" + section + "]");
            continue;
        }

        const size_t eq = body.find('=');
        if (eq == std::string::npos) fail(at, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) fail(at, "empty key");
        if (section.empty()) fail(at, "key '" + key + "' appears before any [section]");

        auto unknown = [&]() { fail(at, "unknown key '" + key + "' in [" + section + "]"); };

        if (section == "grid") {
            if (key == "T") cfg.grid.T = parse_double(at, key, value);
            else if (key == "Y") cfg.grid.Y = parse_double(at, key, value);
            else if (key == "L_x") cfg.grid.L_x = parse_double(at, key, value);
            else if (key == "n_t") cfg.grid.n_t = static_cast<int>(parse_int(at, key, value));
            else if (key == "n_x") cfg.grid.n_x = static_cast<int>(parse_int(at, key, value));
            else if (key == "n_y") cfg.grid.n_y = static_cast<int>(parse_int(at, key, value));
            else unknown();
        } else if (section == "shear") {
            if (key == "profile") cfg.shear_profile = value;
            else if (key == "width") cfg.shear_width = parse_double(at, key, value);
            else if (key == "rate") cfg.shear_rate = parse_double(at, key, value);
            else unknown();
        } else if (section == "perturbation") {
            if (key == "family") cfg.perturbation_family = value;
            else if (key == "epsilon") cfg.epsilon = parse_double(at, key, value);
            else unknown();
        } else if (section == "schedule") {
            if (key == "theta0") cfg.theta0 = parse_double(at, key, value);
            else if (key == "n_max") cfg.n_max = static_cast<int>(parse_int(at, key, value));
            else if (key == "k0") cfg.k0 = static_cast<int>(parse_int(at, key, value));
            else unknown();
        } else if (section == "norms") {
            if (key == "track") cfg.track = parse_track(at, value);
            else if (key == "ell") cfg.ell = parse_double(at, key, value);
            else if (key == "lambda") cfg.lambda = parse_double(at, key, value);
            else if (key == "tangential_index_mode") cfg.tangential_index_mode = value;
            else unknown();
        } else if (section == "solver") {
            if (key == "inner") cfg.inner_solver = value;
            else if (key == "tolerance_residual") cfg.tolerance_residual = parse_double(at, key, value);
            else if (key == "picard_max") cfg.picard_max = static_cast<int>(parse_int(at, key, value));
            else if (key == "picard_tol") cfg.picard_tol = parse_double(at, key, value);
            else unknown();
        } else if (section == "stability") {
            if (key == "epsilons") cfg.stability_epsilons = parse_list(at, key, value);
            else unknown();
        } else if (section == "sweep") {
            if (key == "epsilons") cfg.sweep_epsilons = parse_list(at, key, value);
            else unknown();
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = value;
            else if (key == "seed") cfg.seed = static_cast<unsigned long long>(parse_int(at, key, value));
            else unknown();
        }
    }

    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config file not found: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return parse_config_text(body.str(), path);
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "[grid]\n";
    out << "T = " << num(cfg.grid.T) << "\n";
    out << "Y = " << num(cfg.grid.Y) << "\n";
    out << "L_x = " << num(cfg.grid.L_x) << "\n";
    out << "n_t = " << cfg.grid.n_t << "\n";
    out << "n_x = " << cfg.grid.n_x << "\n";
    out << "n_y = " << cfg.grid.n_y << "\n";
    out << "\n[shear]\n";
    out << "profile = " << cfg.shear_profile << "\n";
    out << "width = " << num(cfg.shear_width) << "\n";
    out << "rate = " << num(cfg.shear_rate) << "\n";
    out << "\n[perturbation]\n";
    out << "family = " << cfg.perturbation_family << "\n";
    out << "epsilon = " << num(cfg.epsilon) << "\n";
    out << "\n[schedule]\n";
    out << "theta0 = " << num(cfg.theta0) << "\n";
    out << "n_max = " << cfg.n_max << "\n";
    out << "k0 = " << cfg.k0 << "\n";
    out << "\n[norms]\n";
    out << "track = ";
    for (size_t i = 0; i < cfg.track.size(); ++i)
        out << (i ? "," : "") << cfg.track[i].first << ":" << num(cfg.track[i].second);
    out << "\n";
    out << "ell = " << num(cfg.ell) << "\n";
    out << "lambda = " << num(cfg.lambda) << "\n";
    out << "tangential_index_mode = " << cfg.tangential_index_mode << "\n";
    out << "\n[solver]\n";
    out << "inner = " << cfg.inner_solver << "\n";
    out << "tolerance_residual = " << num(cfg.tolerance_residual) << "\n";
    out << "picard_max = " << cfg.picard_max << "\n";
    out << "picard_tol = " << num(cfg.picard_tol) << "\n";
    out << "\n[stability]\n";
    out << "epsilons = ";
    for (size_t i = 0; i < cfg.stability_epsilons.size(); ++i)
        out << (i ? "," : "") << num(cfg.stability_epsilons[i]);
    out << "\n";
    out << "\n[sweep]\n";
    out << "epsilons = ";
    for (size_t i = 0; i < cfg.sweep_epsilons.size(); ++i)
        out << (i ? "," : "") << num(cfg.sweep_epsilons[i]);
    out << "\n";
    out << "\n[output]\n";
    out << "dir = " << cfg.output_dir << "\n";
    out << "seed = " << cfg.seed << "\n";
    return out.str();
}

} // namespace prandtl
