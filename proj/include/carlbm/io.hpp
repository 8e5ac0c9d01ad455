#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace carlbm::io {

/// Flat key=value configuration with '#' comments. Unknown keys are
/// rejected (typo protection); parse errors carry line numbers.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text,
                                       const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    long get_int(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<long> get_int_list(const std::string& key,
                                   const std::vector<long>& fallback) const;

    /// Throws std::runtime_error naming the first unknown key and its line.
    void require_known(const std::set<std::string>& allowed) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

/// Deterministic shortest-faithful double formatting ("%.17g").
std::string format_double(double v);
/// Deterministic reduced-precision formatting ("%.12g") for derived
/// quantities in reports.
std::string format_double12(double v);

void write_text_file(const std::string& path, const std::string& content);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x = false;
    bool log_y = false;
};

/// Static single-file SVG line chart with the data embedded as comments.
std::string render_line_chart(const std::vector<Series>& series, const PlotOptions& opts);

}  // namespace carlbm::io
