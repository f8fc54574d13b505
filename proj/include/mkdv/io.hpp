#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mkdv {

// Shortest round-trip decimal form, stable across runs and platforms.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

inline LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MKDV_LOG");
        const std::string s = env ? env : "";
        if (s == "debug") return LogLevel::debug;
        if (s == "info") return LogLevel::info;
        if (s == "warn") return LogLevel::warn;
        return LogLevel::error;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color;
};

struct SvgMarker {
    double x;
    double y;
    std::string color;
};

inline const char* palette_color(std::size_t i) {
    static const char* colors[] = {"#1f6fb2", "#d1495b", "#2e8540", "#8e6fae",
                                   "#c87f0a", "#4ba3a5", "#6b6b6b", "#a23e8c"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

class SvgPlot {
public:
    SvgPlot(int width, int height, std::string x_label, std::string y_label)
        : width_(width), height_(height), x_label_(std::move(x_label)),
          y_label_(std::move(y_label)) {}

    void add_series(std::vector<std::pair<double, double>> pts, std::string color) {
        series_.push_back({std::move(pts), std::move(color)});
    }

    void add_marker(double x, double y, std::string color) {
        markers_.push_back({x, y, std::move(color)});
    }

    void write(std::ostream& os) const {
        double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
        bool first = true;
        auto absorb = [&](double x, double y) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        };
        for (const auto& s : series_)
            for (const auto& [x, y] : s.points) absorb(x, y);
        for (const auto& m : markers_) absorb(m.x, m.y);
        if (x_max - x_min < 1e-300) {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if (y_max - y_min < 1e-300) {
            y_min -= 0.5;
            y_max += 0.5;
        }
        const double x_pad = 0.04 * (x_max - x_min);
        const double y_pad = 0.04 * (y_max - y_min);
        x_min -= x_pad;
        x_max += x_pad;
        y_min -= y_pad;
        y_max += y_pad;

        const double left = 60.0, right = 20.0, top = 20.0, bottom = 40.0;
        const double pw = width_ - left - right;
        const double ph = height_ - top - bottom;
        auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
        auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * ph; };
        auto num = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6g", v);
            return std::string(buf);
        };
        auto tick_label = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3g", v);
            return std::string(buf);
        };

        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_
           << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_
           << "\">\n";
        os << "  <rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_
           << "\" fill=\"#ffffff\"/>\n";

        const int n_ticks = 5;
        os << "  <g stroke=\"#d8d8d8\" stroke-width=\"1\">\n";
        for (int i = 0; i <= n_ticks; ++i) {
            const double xv = x_min + (x_max - x_min) * i / n_ticks;
            const double yv = y_min + (y_max - y_min) * i / n_ticks;
            os << "    <line x1=\"" << num(px(xv)) << "\" y1=\"" << num(top) << "\" x2=\""
               << num(px(xv)) << "\" y2=\"" << num(top + ph) << "\"/>\n";
            os << "    <line x1=\"" << num(left) << "\" y1=\"" << num(py(yv)) << "\" x2=\""
               << num(left + pw) << "\" y2=\"" << num(py(yv)) << "\"/>\n";
        }
        os << "  </g>\n";

        os << "  <g fill=\"#333333\" font-family=\"sans-serif\" font-size=\"11\">\n";
        for (int i = 0; i <= n_ticks; ++i) {
            const double xv = x_min + (x_max - x_min) * i / n_ticks;
            const double yv = y_min + (y_max - y_min) * i / n_ticks;
            os << "    <text x=\"" << num(px(xv)) << "\" y=\"" << num(top + ph + 16)
               << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
            os << "    <text x=\"" << num(left - 6) << "\" y=\"" << num(py(yv) + 4)
               << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
        }
        os << "    <text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height_ - 6)
           << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n";
        os << "    <text x=\"14\" y=\"" << num(top + ph / 2)
           << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
           << num(top + ph / 2) << ")\">" << y_label_ << "</text>\n";
        os << "  </g>\n";

        os << "  <rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
           << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333333\""
           << " stroke-width=\"1\"/>\n";

        for (const auto& s : series_) {
            if (s.points.empty()) continue;
            os << "  <polyline fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                if (i) os << " ";
                os << num(px(s.points[i].first)) << "," << num(py(s.points[i].second));
            }
            os << "\"/>\n";
        }
        for (const auto& m : markers_) {
            os << "  <circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y))
               << "\" r=\"3.5\" fill=\"" << m.color << "\"/>\n";
        }
        os << "</svg>\n";
    }

private:
    int width_;
    int height_;
    std::string x_label_;
    std::string y_label_;
    std::vector<SvgSeries> series_;
    std::vector<SvgMarker> markers_;
};

} // namespace mkdv
