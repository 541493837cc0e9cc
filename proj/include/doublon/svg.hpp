// svg.hpp — static SVG line/scatter rendering; plots are best-effort artifacts,
// the CSV files are the contract

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace doublon::svg {

struct Figure {
    int width{720};
    int height{480};
    double margin{56.0};
    double x_min{0}, x_max{1}, y_min{0}, y_max{1};
    std::string x_label, y_label, title;
    bool log_x{false};
    std::string body;

    double tx(double x) const {
        const double u = log_x ? (std::log10(x) - std::log10(x_min)) /
                                     (std::log10(x_max) - std::log10(x_min))
                               : (x - x_min) / (x_max - x_min);
        return margin + u * (width - 2 * margin);
    }
    double ty(double y) const {
        const double u = (y - y_min) / (y_max - y_min);
        return height - margin - u * (height - 2 * margin);
    }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& color, double stroke = 1.5, bool dashed = false) {
        std::string pts;
        char buf[64];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", tx(xs[i]), ty(ys[i]));
            pts += buf;
        }
        body += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                std::to_string(stroke) + "\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") +
                " points=\"" + pts + "\"/>\n";
    }

    void scatter(const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<std::string>& colors, double r = 2.0) {
        char buf[160];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>\n", tx(xs[i]),
                          ty(ys[i]), r, colors[i].c_str());
            body += buf;
        }
    }

    void hline(double y, const std::string& color, bool dashed = true) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                      "stroke-width=\"1.2\"%s/>\n",
                      tx(x_min), ty(y), tx(x_max), ty(y), color.c_str(),
                      dashed ? " stroke-dasharray=\"6,4\"" : "");
        body += buf;
    }

    void vline(double x, const std::string& color, bool dashed = true) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                      "stroke-width=\"1.2\"%s/>\n",
                      tx(x), ty(y_min), tx(x), ty(y_max), color.c_str(),
                      dashed ? " stroke-dasharray=\"6,4\"" : "");
        body += buf;
    }

    std::string render() const {
        char buf[256];
        std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                        std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
        s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        // frame
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                      "stroke=\"black\"/>\n",
                      margin, margin, width - 2 * margin, height - 2 * margin);
        s += buf;
        // ticks
        for (int i = 0; i <= 4; ++i) {
            const double fx = x_min + (x_max - x_min) * i / 4.0;
            const double fy = y_min + (y_max - y_min) * i / 4.0;
            const double px = log_x ? std::pow(10.0, std::log10(x_min) +
                                                         (std::log10(x_max) - std::log10(x_min)) *
                                                             i / 4.0)
                                    : fx;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n",
                          tx(px), height - margin + 16, px);
            s += buf;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                          margin - 6, ty(fy) + 4, fy);
            s += buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                      width / 2.0, height - 12.0, x_label.c_str());
        s += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"14\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                      "transform=\"rotate(-90 14 %.1f)\">%s</text>\n",
                      height / 2.0, height / 2.0, y_label.c_str());
        s += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                      width / 2.0, margin - 14.0, title.c_str());
        s += buf;
        s += body;
        s += "</svg>\n";
        return s;
    }
};

// blue (extended) through gray to red (localized)
inline std::string fd_color(double fd) {
    const double t = std::clamp(fd, 0.0, 1.0);
    const int r = static_cast<int>(220 * (1.0 - t) + 30 * t);
    const int g = static_cast<int>(60 * (1.0 - t) + 90 * t);
    const int b = static_cast<int>(40 * (1.0 - t) + 200 * t);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace doublon::svg
