#pragma once

#include <string>
#include <vector>

#include "hv/measure.hpp"

namespace hv {

/// Dependency-free SVG emission for the overlay plots.
class SvgWriter {
   public:
    SvgWriter(double xmin, double xmax, double ymin, double ymax, int width = 900);

    void add_measure(const DiscreteMeasure& mu, const std::string& color = "#3558a0",
                     double radius_px = 1.2);
    void add_ball(const Ball& b, const std::string& color = "#c04040");
    void add_segment(cpx a, cpx b, const std::string& color = "#208020", double width_px = 1.0);
    void add_polyline(const std::vector<cpx>& pts, const std::string& color = "#c07000",
                      double width_px = 1.5);
    void add_label(cpx at, const std::string& text, const std::string& color = "#404040");

    void save(const std::string& path) const;

   private:
    double xmin_, xmax_, ymin_, ymax_;
    int width_, height_;
    std::string body_;

    double sx(double x) const;
    double sy(double y) const;
};

}  // namespace hv
