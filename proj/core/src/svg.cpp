#include "qtf/svg.hpp"

#include "qtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace qtf {

namespace {
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 28.0;
constexpr double kBottom = 36.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
}  // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::set_view(double xmin, double xmax, double ymin, double ymax) {
    if (!(xmax > xmin)) {
        xmax = xmin + 1.0;
    }
    if (!(ymax > ymin)) {
        ymax = ymin + 1.0;
    }
    xmin_ = xmin;
    xmax_ = xmax;
    ymin_ = ymin;
    ymax_ = ymax;
    view_set_ = true;
}

void SvgCanvas::include(std::span<const double> xs, std::span<const double> ys) {
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            continue;
        }
        if (!view_set_) {
            xmin_ = xmax_ = xs[i];
            ymin_ = ymax_ = ys[i];
            view_set_ = true;
        } else {
            xmin_ = std::min(xmin_, xs[i]);
            xmax_ = std::max(xmax_, xs[i]);
            ymin_ = std::min(ymin_, ys[i]);
            ymax_ = std::max(ymax_, ys[i]);
        }
    }
}

double SvgCanvas::px(double x) const {
    const double span = (xmax_ > xmin_) ? xmax_ - xmin_ : 1.0;
    return kLeft + (x - xmin_) / span * (width_ - kLeft - kRight);
}

double SvgCanvas::py(double y) const {
    const double span = (ymax_ > ymin_) ? ymax_ - ymin_ : 1.0;
    return height_ - kBottom - (y - ymin_) / span * (height_ - kTop - kBottom);
}

void SvgCanvas::polyline(std::span<const double> xs, std::span<const double> ys,
                         const std::string& color, double stroke_width,
                         const std::string& dash) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(ys[i])) {
            continue;
        }
        pts += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             fmt(stroke_width) + "\"";
    if (!dash.empty()) {
        body_ += " stroke-dasharray=\"" + dash + "\"";
    }
    body_ += " points=\"" + pts + "\"/>\n";
}

void SvgCanvas::points(std::span<const double> xs, std::span<const double> ys,
                       const std::string& color, double radius) {
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(ys[i])) {
            continue;
        }
        body_ += "<circle cx=\"" + fmt(px(xs[i])) + "\" cy=\"" + fmt(py(ys[i])) +
                 "\" r=\"" + fmt(radius) + "\" fill=\"" + color + "\"/>\n";
    }
}

void SvgCanvas::hline(double y, const std::string& color, const std::string& dash) {
    body_ += "<line x1=\"" + fmt(kLeft) + "\" x2=\"" + fmt(width_ - kRight) + "\" y1=\"" +
             fmt(py(y)) + "\" y2=\"" + fmt(py(y)) + "\" stroke=\"" + color + "\"";
    if (!dash.empty()) {
        body_ += " stroke-dasharray=\"" + dash + "\"";
    }
    body_ += "/>\n";
}

void SvgCanvas::rug(std::span<const double> xs, const std::string& color) {
    const double y0 = height_ - kBottom;
    for (double x : xs) {
        body_ += "<line x1=\"" + fmt(px(x)) + "\" x2=\"" + fmt(px(x)) + "\" y1=\"" +
                 fmt(y0) + "\" y2=\"" + fmt(y0 - 8.0) + "\" stroke=\"" + color +
                 "\" stroke-width=\"1\"/>\n";
    }
}

void SvgCanvas::title(const std::string& text) { title_ = text; }

void SvgCanvas::legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kTop + 12.0;
    for (const auto& [label, color] : entries) {
        body_ += "<line x1=\"" + fmt(kLeft + 8.0) + "\" x2=\"" + fmt(kLeft + 28.0) +
                 "\" y1=\"" + fmt(y - 4.0) + "\" y2=\"" + fmt(y - 4.0) + "\" stroke=\"" +
                 color + "\" stroke-width=\"2\"/>\n";
        body_ += "<text x=\"" + fmt(kLeft + 34.0) + "\" y=\"" + fmt(y) +
                 "\" font-size=\"11\" font-family=\"sans-serif\">" + label + "</text>\n";
        y += 14.0;
    }
}

void SvgCanvas::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
    out << "<rect width=\"" << width_ << "\" height=\"" << height_ << "\" fill=\"white\"/>\n";
    // frame
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << width_ - kLeft - kRight << "\" height=\"" << height_ - kTop - kBottom
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    // min/max tick labels
    out << "<text x=\"" << kLeft << "\" y=\"" << height_ - kBottom + 16.0
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(xmin_) << "</text>\n";
    out << "<text x=\"" << width_ - kRight - 40.0 << "\" y=\"" << height_ - kBottom + 16.0
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(xmax_) << "</text>\n";
    out << "<text x=\"4\" y=\"" << height_ - kBottom << "\" font-size=\"10\" "
        << "font-family=\"sans-serif\">" << fmt(ymin_) << "</text>\n";
    out << "<text x=\"4\" y=\"" << kTop + 10.0 << "\" font-size=\"10\" "
        << "font-family=\"sans-serif\">" << fmt(ymax_) << "</text>\n";
    if (!title_.empty()) {
        out << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"13\" "
            << "font-family=\"sans-serif\">" << title_ << "</text>\n";
    }
    out << body_;
    out << "</svg>\n";
}

}  // namespace qtf
