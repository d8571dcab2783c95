#include "hv/svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hv {

SvgWriter::SvgWriter(double xmin, double xmax, double ymin, double ymax, int width)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width) {
    double aspect = (ymax_ - ymin_) / (xmax_ - xmin_);
    height_ = static_cast<int>(width_ * aspect);
    if (height_ < 60) height_ = 60;
    if (height_ > 4000) height_ = 4000;
}

double SvgWriter::sx(double x) const { return (x - xmin_) / (xmax_ - xmin_) * width_; }
double SvgWriter::sy(double y) const { return height_ - (y - ymin_) / (ymax_ - ymin_) * height_; }

void SvgWriter::add_measure(const DiscreteMeasure& mu, const std::string& color, double radius_px) {
    char buf[256];
    // cap the element count so large corpora stay viewable
    size_t stride = std::max<size_t>(1, mu.atoms.size() / 20000);
    for (size_t i = 0; i < mu.atoms.size(); i += stride) {
        const Atom& a = mu.atoms[i];
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\" fill-opacity=\"0.7\"/>\n",
                      sx(a.pos.real()), sy(a.pos.imag()), radius_px, color.c_str());
        body_ += buf;
    }
}

void SvgWriter::add_ball(const Ball& b, const std::string& color) {
    char buf[256];
    double rx = b.radius / (xmax_ - xmin_) * width_;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" stroke=\"%s\" "
                  "stroke-width=\"1\"/>\n",
                  sx(b.center.real()), sy(b.center.imag()), rx, color.c_str());
    body_ += buf;
}

void SvgWriter::add_segment(cpx a, cpx b, const std::string& color, double width_px) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                  "stroke-width=\"%.2f\"/>\n",
                  sx(a.real()), sy(a.imag()), sx(b.real()), sy(b.imag()), color.c_str(), width_px);
    body_ += buf;
}

void SvgWriter::add_polyline(const std::vector<cpx>& pts, const std::string& color,
                             double width_px) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             std::to_string(width_px) + "\" points=\"";
    char buf[64];
    size_t stride = std::max<size_t>(1, pts.size() / 8000);
    for (size_t i = 0; i < pts.size(); i += stride) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(pts[i].real()), sy(pts[i].imag()));
        body_ += buf;
    }
    body_ += "\"/>\n";
}

void SvgWriter::add_label(cpx at, const std::string& text, const std::string& color) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" fill=\"%s\">",
                  sx(at.real()), sy(at.imag()), color.c_str());
    body_ += buf;
    body_ += text + "</text>\n";
}

void SvgWriter::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("SvgWriter: cannot open " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
      << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_ << "</svg>\n";
}

}  // namespace hv
