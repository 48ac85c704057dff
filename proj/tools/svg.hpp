#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regext::cli {

struct Series {
  std::string label;
  std::vector<double> y;
  std::string color;
  bool dashed = false;
};

// Static line chart over a shared abscissa; no external renderer involved.
void write_line_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                    const std::vector<double>& x, const std::vector<Series>& series);

// Raster of cell states on a regular grid: 'F' feasible, 'I' infeasible, 'B' single boundary.
// cells[j * nx + k] is the cell at column k (first axis) and row j (second axis).
void write_raster_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, int nx, int ny, double x0, double x1, double y0,
                      double y1, const std::vector<char>& cells);

}  // namespace regext::cli
