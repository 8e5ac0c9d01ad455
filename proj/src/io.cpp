#include "carlbm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace carlbm::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.entries_.count(key))
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                     key + "'");
        cfg.entries_[key] = {value, lineno};
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

long KeyValueConfig::get_int(const std::string& key, long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(origin_ + ":" + std::to_string(it->second.line) +
                                 ": expected integer for '" + key + "', got '" + it->second.value +
                                 "'");
    }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(origin_ + ":" + std::to_string(it->second.line) +
                                 ": expected number for '" + key + "', got '" + it->second.value +
                                 "'");
    }
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key,
                                                    const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<double> out;
    std::istringstream ss(it->second.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::runtime_error(origin_ + ":" + std::to_string(it->second.line) +
                                     ": expected number list for '" + key + "', bad item '" + tok +
                                     "'");
        }
    }
    return out;
}

std::vector<long> KeyValueConfig::get_int_list(const std::string& key,
                                               const std::vector<long>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<long> out;
    for (double v : get_double_list(key, {})) {
        const long l = static_cast<long>(std::llround(v));
        if (std::abs(v - static_cast<double>(l)) > 1e-9)
            throw std::runtime_error(origin_ + ":" + std::to_string(it->second.line) +
                                     ": expected integer list for '" + key + "'");
        out.push_back(l);
    }
    return out;
}

void KeyValueConfig::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, entry] : entries_)
        if (!allowed.count(key))
            throw std::runtime_error(origin_ + ":" + std::to_string(entry.line) +
                                     ": unknown key '" + key + "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_double12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

double axis_transform(double v, bool log) { return log ? std::log10(v) : v; }

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::vector<Series>& series, const PlotOptions& opts) {
    const int width = 640, height = 440;
    const int ml = 70, mr = 20, mt = 40, mb = 50;  // margins
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            double xv = s.x[k], yv = s.y[k];
            if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
            if ((opts.log_x && xv <= 0.0) || (opts.log_y && yv <= 0.0)) continue;
            xv = axis_transform(xv, opts.log_x);
            yv = axis_transform(yv, opts.log_y);
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (ymin > ymax) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + (ymin == 0.0 ? 1.0 : std::abs(ymin) * 0.1);

    auto px = [&](double v) {
        return ml + (axis_transform(v, opts.log_x) - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto py = [&](double v) {
        return height - mb -
               (axis_transform(v, opts.log_y) - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<!-- " << opts.title << " -->\n";
    for (const auto& s : series) {
        svg << "<!-- data " << s.name << ":";
        for (std::size_t k = 0; k < s.x.size(); ++k)
            svg << " (" << format_double12(s.x[k]) << "," << format_double12(s.y[k]) << ")";
        svg << " -->\n";
    }
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << opts.title << "</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    const int nticks = 5;
    for (int t = 0; t <= nticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / nticks;
        const double fy = ymin + (ymax - ymin) * t / nticks;
        const double gx = ml + static_cast<double>(width - ml - mr) * t / nticks;
        const double gy = height - mb - static_cast<double>(height - mt - mb) * t / nticks;
        const double vx = opts.log_x ? std::pow(10.0, fx) : fx;
        const double vy = opts.log_y ? std::pow(10.0, fy) : fy;
        svg << "<line x1=\"" << gx << "\" y1=\"" << height - mb << "\" x2=\"" << gx << "\" y2=\""
            << height - mb + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << gx << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << fmt_tick(vx) << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << fmt_tick(vy) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << opts.xlabel
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << (mt + height - mb) / 2 << ")\">" << opts.ylabel
        << "</text>\n";

    int color = 0;
    for (const auto& s : series) {
        const char* stroke = palette[color % 6];
        std::ostringstream pts;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            if ((opts.log_x && s.x[k] <= 0.0) || (opts.log_y && s.y[k] <= 0.0)) continue;
            pts << px(s.x[k]) << "," << py(s.y[k]) << " ";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\""
            << pts.str() << "\"/>\n";
        svg << "<text x=\"" << width - mr - 6 << "\" y=\"" << mt + 16 * color + 12
            << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
            << stroke << "\">" << s.name << "</text>\n";
        ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace carlbm::io
