// config.cpp — dotted key=value parsing and ProblemSpec (de)serialization.

#include "config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nodal/errors.hpp"

namespace nodal::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("config: key '" + key + "' is not a number: " + text);
}

}  // namespace

void ConfigMap::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& ConfigMap::raw(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end())
        throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key) const {
    std::string v = raw(key);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        v = v.substr(1, v.size() - 2);
    return v;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double ConfigMap::get_double(const std::string& key) const {
    return parse_double(key, raw(key));
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int ConfigMap::get_int(const std::string& key) const {
    const double v = get_double(key);
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v)
        throw ConfigError("config: key '" + key + "' must be an integer");
    return n;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' is not a boolean: " + v);
}

std::vector<double> ConfigMap::get_list(const std::string& key) const {
    std::string v = trim(raw(key));
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError("config: key '" + key + "' must be a [..] list");
    v = v.substr(1, v.size() - 2);
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::vector<double> ConfigMap::get_list(
    const std::string& key, const std::vector<double>& fallback) const {
    return has(key) ? get_list(key) : fallback;
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value': " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " has an empty key");
        cfg.set(key, value);
    }
    return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ProblemSpec problem_from_config(const ConfigMap& cfg) {
    ProblemSpec pb;

    const std::string hk = cfg.get_string("problem.h.kind", "identity");
    if (hk == "identity")
        pb.h = HomeoSpec::identity();
    else if (hk == "power")
        pb.h = HomeoSpec::power(cfg.get_double("problem.h.q"));
    else if (hk == "minkowski")
        pb.h = HomeoSpec::minkowski();
    else if (hk == "relativistic")
        pb.h = HomeoSpec::relativistic();
    else if (hk == "rational_cubic")
        pb.h = HomeoSpec::rational_cubic();
    else if (hk == "log_barrier")
        pb.h = HomeoSpec::log_barrier(cfg.get_double("problem.h.rho_plus"));
    else
        throw ConfigError("config: unknown problem.h.kind '" + hk + "'");

    const std::string gk = cfg.get_string("problem.g.kind", "power");
    if (gk == "power")
        pb.g = NonlinSpec::power(cfg.get_double("problem.g.p"));
    else if (gk == "exp_minus_one")
        pb.g = NonlinSpec::exp_minus_one();
    else
        throw ConfigError("config: unknown problem.g.kind '" + gk + "'");

    pb.lambda = cfg.get_double("problem.lambda");
    pb.weight.breakpoints = cfg.get_list("problem.weight.breakpoints");
    pb.weight.heights = cfg.get_list("problem.weight.heights");
    pb.r0 = arc_from_config(cfg, "problem.r0", ArcKind::positive_y_axis);
    pb.rL = arc_from_config(cfg, "problem.rL", ArcKind::negative_y_axis);
    return pb;
}

BoundaryArc arc_from_config(const ConfigMap& cfg, const std::string& prefix,
                            ArcKind fallback) {
    const std::string kind = cfg.get_string(prefix + ".kind", "");
    if (kind.empty()) return BoundaryArc::axis(fallback);
    if (kind == "positive_y_axis") return BoundaryArc::axis(ArcKind::positive_y_axis);
    if (kind == "negative_y_axis") return BoundaryArc::axis(ArcKind::negative_y_axis);
    if (kind == "positive_x_axis") return BoundaryArc::axis(ArcKind::positive_x_axis);
    if (kind == "negative_x_axis") return BoundaryArc::axis(ArcKind::negative_x_axis);
    if (kind == "ray")
        return BoundaryArc::from_ray(cfg.get_double(prefix + ".angle"));
    if (kind == "param_curve") {
        const std::vector<double> flat = cfg.get_list(prefix + ".samples");
        if (flat.size() < 2 || flat.size() % 2 != 0)
            throw ConfigError("config: " + prefix +
                              ".samples needs [x, y, x, y, ...] pairs");
        std::vector<PhasePoint> pts;
        for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
            pts.push_back(PhasePoint{flat[i], flat[i + 1]});
        return BoundaryArc::from_samples(std::move(pts));
    }
    throw ConfigError("config: unknown arc kind '" + kind + "' for " + prefix);
}

namespace {

const char* h_kind_token(const HomeoSpec& h) {
    switch (h.kind) {
        case HomeoKind::identity: return "identity";
        case HomeoKind::power_q: return "power";
        case HomeoKind::minkowski_inverse: return "minkowski";
        case HomeoKind::relativistic_inverse: return "relativistic";
        case HomeoKind::rational_cubic: return "rational_cubic";
        default: return "log_barrier";
    }
}

const char* arc_kind_token(ArcKind k) {
    switch (k) {
        case ArcKind::positive_y_axis: return "positive_y_axis";
        case ArcKind::negative_y_axis: return "negative_y_axis";
        case ArcKind::positive_x_axis: return "positive_x_axis";
        case ArcKind::negative_x_axis: return "negative_x_axis";
        case ArcKind::ray: return "ray";
        default: return "param_curve";
    }
}

void emit_list(std::ostringstream& out, const std::string& key,
               const std::vector<double>& vals) {
    out << key << " = [";
    for (std::size_t i = 0; i < vals.size(); ++i)
        out << (i ? ", " : "") << fmt17(vals[i]);
    out << "]\n";
}

void emit_arc(std::ostringstream& out, const std::string& prefix,
              const BoundaryArc& arc) {
    out << prefix << ".kind = " << arc_kind_token(arc.kind) << "\n";
    if (arc.kind == ArcKind::ray)
        out << prefix << ".angle = " << fmt17(arc.angle) << "\n";
    if (arc.kind == ArcKind::param_curve) {
        std::vector<double> flat;
        for (const PhasePoint& z : arc.samples) {
            flat.push_back(z.x);
            flat.push_back(z.y);
        }
        emit_list(out, prefix + ".samples", flat);
    }
}

}  // namespace

std::string problem_to_config(const ProblemSpec& pb) {
    std::ostringstream out;
    out << "problem.h.kind = " << h_kind_token(pb.h) << "\n";
    if (pb.h.kind == HomeoKind::power_q)
        out << "problem.h.q = " << fmt17(pb.h.q) << "\n";
    if (pb.h.kind == HomeoKind::log_barrier)
        out << "problem.h.rho_plus = " << fmt17(pb.h.rho_plus) << "\n";
    out << "problem.g.kind = "
        << (pb.g.kind == NonlinKind::power_p ? "power" : "exp_minus_one") << "\n";
    if (pb.g.kind == NonlinKind::power_p)
        out << "problem.g.p = " << fmt17(pb.g.p) << "\n";
    out << "problem.lambda = " << fmt17(pb.lambda) << "\n";
    emit_list(out, "problem.weight.breakpoints", pb.weight.breakpoints);
    emit_list(out, "problem.weight.heights", pb.weight.heights);
    emit_arc(out, "problem.r0", pb.r0);
    emit_arc(out, "problem.rL", pb.rL);
    return out.str();
}

}  // namespace nodal::cli
