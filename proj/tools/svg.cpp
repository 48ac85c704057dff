#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace regext::cli {

namespace {

constexpr double kW = 640, kH = 420, kL = 60, kR = 150, kT = 40, kB = 50;

void header(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
}

void axes(std::ostream& os, double x0, double x1, double y0, double y1, const std::string& xl,
          const std::string& yl) {
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = kL + pw * t / 4.0, fy = kT + ph * (1.0 - t / 4.0);
    os << "<text x=\"" << fx << "\" y=\"" << kT + ph + 16 << "\" text-anchor=\"middle\">"
       << x0 + (x1 - x0) * t / 4.0 << "</text>\n";
    os << "<text x=\"" << kL - 6 << "\" y=\"" << fy + 4 << "\" text-anchor=\"end\">"
       << y0 + (y1 - y0) * t / 4.0 << "</text>\n";
  }
  os << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << xl
     << "</text>\n";
  if (!yl.empty()) {
    os << "<text x=\"14\" y=\"" << kT + ph / 2 << "\" transform=\"rotate(-90 14 " << kT + ph / 2
       << ")\" text-anchor=\"middle\">" << yl << "</text>\n";
  }
}

}  // namespace

void write_line_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                    const std::vector<double>& x, const std::vector<Series>& series) {
  double x0 = x.empty() ? 0.0 : x.front(), x1 = x.empty() ? 1.0 : x.back();
  double y0 = 0.0, y1 = 1.0;
  for (const auto& s : series) {
    for (double v : s.y) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  header(os, title);
  axes(os, x0, x1, y0, y1, xlabel, "");
  int row = 0;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
    for (std::size_t k = 0; k < x.size() && k < s.y.size(); ++k) {
      os << kL + pw * (x[k] - x0) / (x1 - x0) << ',' << kT + ph * (1.0 - (s.y[k] - y0) / (y1 - y0))
         << ' ';
    }
    os << "\"/>\n";
    const double ly = kT + 14 + 18 * row++;
    os << "<line x1=\"" << kW - kR + 10 << "\" y1=\"" << ly << "\" x2=\"" << kW - kR + 34 << "\" y2=\""
       << ly << "\" stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"5,4\"" : "")
       << "/>\n<text x=\"" << kW - kR + 40 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

void write_raster_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, int nx, int ny, double x0, double x1, double y0,
                      double y1, const std::vector<char>& cells) {
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  const double cw = pw / nx, ch = ph / ny;
  header(os, title);
  for (int j = 0; j < ny; ++j) {
    for (int k = 0; k < nx; ++k) {
      const char c = cells[static_cast<std::size_t>(j) * nx + k];
      if (c == 'I') continue;
      os << "<rect x=\"" << kL + cw * k << "\" y=\"" << kT + ph - ch * (j + 1) << "\" width=\""
         << cw + 0.05 << "\" height=\"" << ch + 0.05 << "\" fill=\"" << (c == 'F' ? "#999999" : "#cc3333")
         << "\"/>\n";
    }
  }
  axes(os, x0, x1, y0, y1, xlabel, ylabel);
  os << "</svg>\n";
}

}  // namespace regext::cli
