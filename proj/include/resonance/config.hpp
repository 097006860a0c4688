#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "resonance/errors.hpp"
#include "resonance/semiflow.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

namespace detail {

[[nodiscard]] inline std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[nodiscard]] inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    if (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

}  // namespace detail

/// Parsed INI document.  Keys remember their source line so diagnostics can
/// point at the offending text, and reads are tracked so unrecognized keys
/// can be reported at the end instead of being silently ignored.
class Ini {
  public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };

    static Ini parse_string(const std::string& text, const std::string& origin = "<string>") {
        Ini ini;
        ini.origin_ = origin;
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string line = detail::trim(raw);
            if (line.empty() || line.front() == ';' || line.front() == '#') continue;
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3) {
                    throw ConfigError(origin + ": malformed section header '" + line + "'",
                                      line_no);
                }
                section = detail::trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(origin + ": expected 'key = value', got '" + line + "'",
                                  line_no);
            }
            if (section.empty()) {
                throw ConfigError(origin + ": key outside any section", line_no);
            }
            Entry e;
            e.section = section;
            e.key = detail::trim(line.substr(0, eq));
            e.value = detail::trim(line.substr(eq + 1));
            e.line = line_no;
            if (e.key.empty()) throw ConfigError(origin + ": empty key", line_no);
            if (const Entry* prior = ini.find(e.section, e.key)) {
                throw ConfigError(origin + ": duplicate key '" + e.key + "' in [" + section +
                                      "] (first set on line " + std::to_string(prior->line) + ")",
                                  line_no);
            }
            ini.entries_.push_back(std::move(e));
        }
        return ini;
    }

    static Ini parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str(), path);
    }

    [[nodiscard]] const Entry* find(const std::string& section, const std::string& key) const {
        for (const auto& e : entries_) {
            if (e.section == section && e.key == key) return &e;
        }
        return nullptr;
    }

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (e) e->consumed = true;
        return e != nullptr;
    }

    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) {
            throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section + "]",
                              0);
        }
        e->consumed = true;
        return e->value;
    }

    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key,
                                         const std::string& fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        e->consumed = true;
        return e->value;
    }

    [[nodiscard]] double get_double(const std::string& section, const std::string& key) const {
        return parse_double(*require(section, key));
    }

    [[nodiscard]] double get_double(const std::string& section, const std::string& key,
                                    double fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        e->consumed = true;
        return parse_double(*e);
    }

    [[nodiscard]] long get_int(const std::string& section, const std::string& key) const {
        return parse_int(*require(section, key));
    }

    [[nodiscard]] long get_int(const std::string& section, const std::string& key,
                               long fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        e->consumed = true;
        return parse_int(*e);
    }

    [[nodiscard]] bool get_bool(const std::string& section, const std::string& key,
                                bool fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        e->consumed = true;
        const std::string v = e->value;
        if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
        if (v == "false" || v == "no" || v == "off" || v == "0") return false;
        throw ConfigError(origin_ + ": '" + v + "' is not a boolean", e->line);
    }

    [[nodiscard]] std::vector<double> get_doubles(const std::string& section,
                                                  const std::string& key) const {
        const Entry* e = require(section, key);
        std::vector<double> out;
        for (const auto& tok : detail::split_csv(e->value)) {
            out.push_back(parse_double_token(tok, e->line));
        }
        if (out.empty()) throw ConfigError(origin_ + ": empty list for '" + key + "'", e->line);
        return out;
    }

    /// Throws if any key was never read; catches typos and stale settings.
    void require_consumed() const {
        std::string bad;
        for (const auto& e : entries_) {
            if (!e.consumed) {
                if (!bad.empty()) bad += ", ";
                bad += "[" + e.section + "] " + e.key + " (line " + std::to_string(e.line) + ")";
            }
        }
        if (!bad.empty()) throw ConfigError(origin_ + ": unrecognized keys: " + bad, 0);
    }

    [[nodiscard]] const std::string& origin() const noexcept { return origin_; }

  private:
    [[nodiscard]] const Entry* require(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e) {
            throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section + "]",
                              0);
        }
        e->consumed = true;
        return e;
    }

    [[nodiscard]] double parse_double_token(const std::string& tok, int line) const {
        if (tok == "pi") return EigenSystem::pi();
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": '" + tok + "' is not a number", line);
        }
    }

    [[nodiscard]] double parse_double(const Entry& e) const {
        return parse_double_token(e.value, e.line);
    }

    [[nodiscard]] long parse_int(const Entry& e) const {
        try {
            std::size_t used = 0;
            const long v = std::stol(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument(e.value);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": '" + e.value + "' is not an integer", e.line);
        }
    }

    std::vector<Entry> entries_;
    std::string origin_;
};

// ---------------------------------------------------------------------------
// Experiment schema
// ---------------------------------------------------------------------------

struct OperatorConfig {
    std::string kind = "laplacian_1d";  // or "abstract"
    double length = EigenSystem::pi();
    int n_modes = 16;
    int k = 2;
    std::vector<double> eigenvalues;  // abstract operators only
    std::vector<double> multiplicities;
};

struct NonlinearityConfig {
    std::string name;        // builtin name, empty when a table is used
    std::vector<double> params;
    std::string table_path;  // CSV sample table, empty for builtins
    std::optional<double> expected_nu;
};

struct ConstantsConfig {
    double alpha = 0.8;
    double delta = 0.0;
};

struct ChecksConfig {
    int quadrature_order = 10;
    int quadrature_panels = 64;
    int n_sphere_samples = 32;
    int n_ball_samples = 64;
    int n_radii = 32;
    double radius_r_min = 0.25;
    double radius_factor = 2.0;
    int radius_steps = 14;
    std::uint64_t seed = 2026;
};

struct IntegrationSettings {
    Scheme scheme = Scheme::ETD2;
    double step = 1e-2;
    double t_end = 50.0;
    int save_stride = 10;
};

struct OrbitSettings {
    bool enabled = true;
    int n_starts = 32;
    double shot_epsilon = 1e-4;
    double t_end = 80.0;
    int n_block_samples = 16;
    std::uint64_t seed = 2026;
};

struct ExperimentConfig {
    std::string name;
    std::string description;
    OperatorConfig op;
    NonlinearityConfig nonlinearity;
    ConstantsConfig constants;
    ChecksConfig checks;
    IntegrationSettings integration;
    OrbitSettings orbit;
};

[[nodiscard]] inline ExperimentConfig parse_experiment(const Ini& ini) {
    ExperimentConfig cfg;
    cfg.name = ini.get_string("experiment", "name");
    cfg.description = ini.get_string("experiment", "description", "");

    cfg.op.kind = ini.get_string("operator", "kind", "laplacian_1d");
    if (cfg.op.kind != "laplacian_1d" && cfg.op.kind != "abstract") {
        throw ConfigError(ini.origin() + ": unknown operator kind '" + cfg.op.kind + "'", 0);
    }
    cfg.op.n_modes = static_cast<int>(ini.get_int("operator", "n_modes", 16));
    cfg.op.k = static_cast<int>(ini.get_int("operator", "k", 2));
    if (cfg.op.kind == "laplacian_1d") {
        cfg.op.length = ini.get_double("operator", "length", EigenSystem::pi());
    } else {
        cfg.op.eigenvalues = ini.get_doubles("operator", "eigenvalues");
        cfg.op.multiplicities = ini.get_doubles("operator", "multiplicities");
    }

    if (ini.has("nonlinearity", "table")) {
        cfg.nonlinearity.table_path = ini.get_string("nonlinearity", "table");
    } else {
        cfg.nonlinearity.name = ini.get_string("nonlinearity", "name");
    }
    if (ini.has("nonlinearity", "params")) {
        cfg.nonlinearity.params = ini.get_doubles("nonlinearity", "params");
    }
    if (ini.has("nonlinearity", "expected_nu")) {
        cfg.nonlinearity.expected_nu = ini.get_double("nonlinearity", "expected_nu");
    }

    cfg.constants.alpha = ini.get_double("constants", "alpha", 0.8);
    cfg.constants.delta = ini.get_double("constants", "delta", 0.0);

    cfg.checks.quadrature_order = static_cast<int>(ini.get_int("checks", "quadrature_order", 10));
    cfg.checks.quadrature_panels = static_cast<int>(ini.get_int("checks", "quadrature_panels", 64));
    cfg.checks.n_sphere_samples = static_cast<int>(ini.get_int("checks", "n_sphere_samples", 32));
    cfg.checks.n_ball_samples = static_cast<int>(ini.get_int("checks", "n_ball_samples", 64));
    cfg.checks.n_radii = static_cast<int>(ini.get_int("checks", "n_radii", 32));
    cfg.checks.radius_r_min = ini.get_double("checks", "radius_r_min", 0.25);
    cfg.checks.radius_factor = ini.get_double("checks", "radius_factor", 2.0);
    cfg.checks.radius_steps = static_cast<int>(ini.get_int("checks", "radius_steps", 14));
    cfg.checks.seed = static_cast<std::uint64_t>(ini.get_int("checks", "seed", 2026));

    const std::string scheme = ini.get_string("integration", "scheme", "etd2");
    if (scheme == "etd1") {
        cfg.integration.scheme = Scheme::ETD1;
    } else if (scheme == "etd2") {
        cfg.integration.scheme = Scheme::ETD2;
    } else {
        throw ConfigError(ini.origin() + ": unknown scheme '" + scheme + "'", 0);
    }
    cfg.integration.step = ini.get_double("integration", "step", 1e-2);
    cfg.integration.t_end = ini.get_double("integration", "t_end", 50.0);
    cfg.integration.save_stride = static_cast<int>(ini.get_int("integration", "save_stride", 10));

    cfg.orbit.enabled = ini.get_bool("orbit", "enabled", true);
    cfg.orbit.n_starts = static_cast<int>(ini.get_int("orbit", "n_starts", 32));
    cfg.orbit.shot_epsilon = ini.get_double("orbit", "shot_epsilon", 1e-4);
    cfg.orbit.t_end = ini.get_double("orbit", "t_end", 80.0);
    cfg.orbit.n_block_samples = static_cast<int>(ini.get_int("orbit", "n_block_samples", 16));
    cfg.orbit.seed = static_cast<std::uint64_t>(ini.get_int("orbit", "seed", 2026));

    ini.require_consumed();

    if (cfg.op.n_modes < 1) throw ConfigError("n_modes must be >= 1", 0);
    if (cfg.op.k < 1) throw ConfigError("k must be >= 1", 0);
    if (!(cfg.integration.step > 0.0)) throw ConfigError("integration step must be > 0", 0);
    if (!(cfg.integration.t_end > 0.0)) throw ConfigError("integration horizon must be > 0", 0);
    return cfg;
}

[[nodiscard]] inline ExperimentConfig load_experiment_file(const std::string& path) {
    return parse_experiment(Ini::parse_file(path));
}

[[nodiscard]] inline ExperimentConfig load_experiment_string(const std::string& text,
                                                             const std::string& origin) {
    return parse_experiment(Ini::parse_string(text, origin));
}

}  // namespace resonance
