#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "resonance/config.hpp"
#include "resonance/errors.hpp"

namespace resonance {

[[nodiscard]] inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

/// Flat, insertion-ordered key/value summary of a run.  Everything is stored
/// as text so emitted files parse back to an identical report.
class Report {
  public:
    void put(const std::string& key, const std::string& value) {
        for (auto& kv : rows_) {
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        }
        rows_.emplace_back(key, value);
    }

    void put(const std::string& key, const char* value) { put(key, std::string(value)); }
    void put(const std::string& key, double value) { put(key, format_double(value)); }
    void put(const std::string& key, int value) { put(key, std::to_string(value)); }
    void put(const std::string& key, long value) { put(key, std::to_string(value)); }
    void put(const std::string& key, std::size_t value) { put(key, std::to_string(value)); }
    void put(const std::string& key, bool value) { put(key, value ? "true" : "false"); }

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
        for (const auto& kv : rows_) {
            if (kv.first == key) return kv.second;
        }
        return std::nullopt;
    }

    [[nodiscard]] double get_double(const std::string& key) const {
        const auto v = get(key);
        if (!v) throw std::invalid_argument("report has no key '" + key + "'");
        return std::stod(*v);
    }

    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& rows() const noexcept {
        return rows_;
    }

    void emit(std::ostream& out) const {
        for (const auto& kv : rows_) out << kv.first << " = " << kv.second << "\n";
    }

    [[nodiscard]] std::string to_string() const {
        std::ostringstream out;
        emit(out);
        return out.str();
    }

    void write_file(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
        emit(out);
    }

    static Report parse(std::istream& in) {
        Report rep;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = detail::trim(line);
            if (t.empty() || t.front() == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("report line without '=': '" + t + "'", line_no);
            }
            rep.rows_.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
        }
        return rep;
    }

    static Report parse_string(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    static Report parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read report from '" + path + "'");
        return parse(in);
    }

  private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

/// Companion plot script for a trajectory CSV written by
/// write_trajectory_csv: one pane for the two norms, one for selected
/// coefficients.  Column 1 is t, columns 2..n+1 the coefficients.
inline void write_gnuplot_script(const std::string& path, const std::string& csv_name,
                                 int n_modes, const std::vector<int>& plot_modes,
                                 const std::string& title) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot script to '" + path + "'");
    out << "set datafile separator comma\n";
    out << "set key autotitle columnhead\n";
    out << "set multiplot layout 2,1 title '" << title << "'\n";
    out << "set xlabel 't'\n";
    out << "set ylabel 'norm'\n";
    out << "plot '" << csv_name << "' using 1:" << (n_modes + 2)
        << " with lines title 'alpha norm', '' using 1:" << (n_modes + 3)
        << " with lines title 'kernel norm'\n";
    out << "set ylabel 'coefficient'\n";
    out << "plot ";
    bool first = true;
    for (int m : plot_modes) {
        if (m < 0 || m >= n_modes) continue;
        if (!first) out << ", ";
        out << (first ? std::string("'") + csv_name + "'" : std::string("''")) << " using 1:"
            << (m + 2) << " with lines title 'c_" << (m + 1) << "'";
        first = false;
    }
    if (first) {
        out << "'" << csv_name << "' using 1:2 with lines title 'c_1'";
    }
    out << "\n";
    out << "unset multiplot\n";
}

}  // namespace resonance
