#ifndef QTF_SVG_HPP
#define QTF_SVG_HPP

#include <span>
#include <string>
#include <vector>

namespace qtf {

/*
 * Minimal static SVG plotting: a framed data area with min/max tick
 * labels, polylines, points, dashed threshold lines, and rug marks.
 * Coordinates are data units; set_view fixes the mapping.
 */
class SvgCanvas {
public:
    SvgCanvas(double width = 720.0, double height = 360.0);

    void set_view(double xmin, double xmax, double ymin, double ymax);

    /// Expands the view to cover the data (call before drawing).
    void include(std::span<const double> xs, std::span<const double> ys);

    void polyline(std::span<const double> xs, std::span<const double> ys,
                  const std::string& color, double stroke_width = 1.0,
                  const std::string& dash = "");
    void points(std::span<const double> xs, std::span<const double> ys,
                const std::string& color, double radius = 1.5);
    void hline(double y, const std::string& color, const std::string& dash = "6,4");
    /// Short vertical marks along the bottom edge.
    void rug(std::span<const double> xs, const std::string& color);
    void title(const std::string& text);
    /// Small color-keyed label lines in the top-left corner.
    void legend(const std::vector<std::pair<std::string, std::string>>& entries);

    void write(const std::string& path) const;

private:
    double px(double x) const;
    double py(double y) const;

    double width_, height_;
    double xmin_ = 0.0, xmax_ = 1.0, ymin_ = 0.0, ymax_ = 1.0;
    bool view_set_ = false;
    std::string body_;
    std::string title_;
};

}  // namespace qtf

#endif
