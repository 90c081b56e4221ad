#pragma once
// Minimal self-contained SVG plotting: axes with tick labels, polylines,
// scatter markers, 3-sigma error bars and a legend. No external process or
// library; output is a single standalone .svg file.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sliceadc {

class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_line(std::vector<std::pair<double, double>> pts, const std::string& label) {
        series_.push_back({std::move(pts), {}, next_color(), label, Style::line});
    }

    void add_scatter(std::vector<std::pair<double, double>> pts, const std::string& label) {
        series_.push_back({std::move(pts), {}, next_color(), label, Style::scatter});
    }

    /// Markers with vertical error bars of the given half-widths.
    void add_errorbars(std::vector<std::pair<double, double>> pts, std::vector<double> half,
                       const std::string& label) {
        if (half.size() != pts.size())
            throw std::invalid_argument("SvgPlot: one error half-width per point");
        series_.push_back({std::move(pts), std::move(half), next_color(), label, Style::bars});
    }

    void write(const std::string& path) const {
        double x0, x1, y0, y1;
        data_range(x0, x1, y0, y1);

        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\""
            << h_ << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n";
        out << "<rect width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << w_ / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title_) << "</text>\n";

        axes(out, x0, x1, y0, y1);

        out << "<clipPath id=\"plot\"><rect x=\"" << ml_ << "\" y=\"" << mt_ << "\" width=\""
            << plot_w() << "\" height=\"" << plot_h() << "\"/></clipPath>\n";
        out << "<g clip-path=\"url(#plot)\">\n";
        for (const auto& s : series_) draw_series(out, s, x0, x1, y0, y1);
        out << "</g>\n";

        legend(out);
        out << "</svg>\n";

        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << out.str();
    }

private:
    enum class Style { line, scatter, bars };
    struct Series {
        std::vector<std::pair<double, double>> pts;
        std::vector<double> half;
        std::string color;
        std::string label;
        Style style;
    };

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    int w_ = 880, h_ = 540;
    int ml_ = 72, mr_ = 24, mt_ = 44, mb_ = 56;

    int plot_w() const { return w_ - ml_ - mr_; }
    int plot_h() const { return h_ - mt_ - mb_; }

    std::string next_color() const {
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                        "#ff7f0e", "#9467bd", "#7f7f7f"};
        return palette[series_.size() % 6];
    }

    static std::string escape(const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '&') o += "&amp;";
            else if (c == '<') o += "&lt;";
            else if (c == '>') o += "&gt;";
            else o += c;
        }
        return o;
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

    void data_range(double& x0, double& x1, double& y0, double& y1) const {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -std::numeric_limits<double>::infinity();
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.pts.size(); ++i) {
                const auto& [x, y] = s.pts[i];
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                const double hw = s.style == Style::bars ? s.half[i] : 0.0;
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y - hw);
                y1 = std::max(y1, y + hw);
            }
        if (!(x0 < x1)) {
            x0 -= 1.0;
            x1 += 1.0;
        }
        if (!(y0 < y1)) {
            y0 -= 1.0;
            y1 += 1.0;
        }
        const double xp = 0.03 * (x1 - x0), yp = 0.06 * (y1 - y0);
        x0 -= xp;
        x1 += xp;
        y0 -= yp;
        y1 += yp;
    }

    double sx(double x, double x0, double x1) const {
        return ml_ + (x - x0) / (x1 - x0) * plot_w();
    }
    double sy(double y, double y0, double y1) const {
        return mt_ + (y1 - y) / (y1 - y0) * plot_h();
    }

    static double nice_step(double span) {
        const double raw = span / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        const double r = raw / mag;
        if (r < 1.5) return mag;
        if (r < 3.5) return 2.0 * mag;
        if (r < 7.5) return 5.0 * mag;
        return 10.0 * mag;
    }

    void axes(std::ostringstream& out, double x0, double x1, double y0, double y1) const {
        out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
        const double xs = nice_step(x1 - x0), ys = nice_step(y1 - y0);
        for (double x = std::ceil(x0 / xs) * xs; x <= x1 + 1e-9 * xs; x += xs) {
            const double px = sx(x, x0, x1);
            out << "<line x1=\"" << num(px) << "\" y1=\"" << mt_ << "\" x2=\"" << num(px)
                << "\" y2=\"" << mt_ + plot_h() << "\" stroke=\"#ddd\"/>\n";
            out << "<text x=\"" << num(px) << "\" y=\"" << mt_ + plot_h() + 18
                << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
        }
        for (double y = std::ceil(y0 / ys) * ys; y <= y1 + 1e-9 * ys; y += ys) {
            const double py = sy(y, y0, y1);
            out << "<line x1=\"" << ml_ << "\" y1=\"" << num(py) << "\" x2=\"" << ml_ + plot_w()
                << "\" y2=\"" << num(py) << "\" stroke=\"#ddd\"/>\n";
            out << "<text x=\"" << ml_ - 8 << "\" y=\"" << num(py + 4)
                << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
        }
        out << "<rect x=\"" << ml_ << "\" y=\"" << mt_ << "\" width=\"" << plot_w()
            << "\" height=\"" << plot_h() << "\" fill=\"none\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << ml_ + plot_w() / 2 << "\" y=\"" << h_ - 14
            << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
        out << "<text x=\"18\" y=\"" << mt_ + plot_h() / 2
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt_ + plot_h() / 2
            << ")\">" << escape(y_label_) << "</text>\n";
        out << "</g>\n";
    }

    void draw_series(std::ostringstream& out, const Series& s, double x0, double x1, double y0,
                     double y1) const {
        if (s.style == Style::line) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.6\" points=\"";
            for (const auto& [x, y] : s.pts) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                out << num(sx(x, x0, x1)) << "," << num(sy(y, y0, y1)) << " ";
            }
            out << "\"/>\n";
            return;
        }
        for (std::size_t i = 0; i < s.pts.size(); ++i) {
            const auto& [x, y] = s.pts[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            const double px = sx(x, x0, x1), py = sy(y, y0, y1);
            if (s.style == Style::bars) {
                const double lo = sy(y - s.half[i], y0, y1), hi = sy(y + s.half[i], y0, y1);
                out << "<line x1=\"" << num(px) << "\" y1=\"" << num(lo) << "\" x2=\"" << num(px)
                    << "\" y2=\"" << num(hi) << "\" stroke=\"" << s.color << "\"/>\n";
                out << "<line x1=\"" << num(px - 4) << "\" y1=\"" << num(lo) << "\" x2=\""
                    << num(px + 4) << "\" y2=\"" << num(lo) << "\" stroke=\"" << s.color
                    << "\"/>\n";
                out << "<line x1=\"" << num(px - 4) << "\" y1=\"" << num(hi) << "\" x2=\""
                    << num(px + 4) << "\" y2=\"" << num(hi) << "\" stroke=\"" << s.color
                    << "\"/>\n";
            }
            const double r = s.style == Style::scatter ? 1.6 : 3.0;
            out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"" << r
                << "\" fill=\"" << s.color << "\"/>\n";
        }
    }

    void legend(std::ostringstream& out) const {
        out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
        int y = mt_ + 16;
        for (const auto& s : series_) {
            if (s.label.empty()) continue;
            const int x = ml_ + plot_w() - 190;
            out << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 22
                << "\" y2=\"" << y - 4 << "\" stroke=\"" << s.color
                << "\" stroke-width=\"3\"/>\n";
            out << "<text x=\"" << x + 28 << "\" y=\"" << y << "\">" << escape(s.label)
                << "</text>\n";
            y += 18;
        }
        out << "</g>\n";
    }
};

} // namespace sliceadc
