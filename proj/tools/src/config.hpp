// config.hpp — dotted key=value experiment files: parsing, typed access, and
// the ProblemSpec (de)serialization used by every CLI task.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nodal/model.hpp"

namespace nodal::cli {

// Flat view of a config file: full dotted key -> raw value text.  Values may
// be scalars, quoted strings, or bracketed numeric lists.
class ConfigMap {
  public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    const std::string& raw(const std::string& key) const;
    std::map<std::string, std::string> kv_;
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

// problem.* keys -> ProblemSpec (throws ConfigError on missing/bad fields).
ProblemSpec problem_from_config(const ConfigMap& cfg);

// ProblemSpec -> problem.* config text; parsing it back reproduces the spec
// field-for-field (17-significant-digit round trip).
std::string problem_to_config(const ProblemSpec& pb);

// problem.r0.* / problem.rL.* -> arc (axis kinds, ray with angle, or a
// param_curve with flattened [x, y, x, y, ...] samples).
BoundaryArc arc_from_config(const ConfigMap& cfg, const std::string& prefix,
                            ArcKind fallback);

}  // namespace nodal::cli
