#include "modvar/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modvar/report.hpp"

namespace modvar {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

struct Range {
  double lo, hi;
  double map(double v, double out_lo, double out_hi) const {
    const double t = (v - lo) / (hi - lo);
    return out_lo + t * (out_hi - out_lo);
  }
};

Range padded_range(const std::vector<double>& v) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  double lo = *mn, hi = *mx;
  if (hi - lo < 1e-300) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void frame(std::ostringstream& svg, const std::string& title, const Range& xr, const Range& yr,
           const std::string& x_label, const std::string& y_label) {
  svg << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << kWidth - kLeft - kRight
      << "' height='" << kHeight - kTop - kBottom
      << "' fill='none' stroke='black' stroke-width='1'/>\n";
  svg << "<text x='" << kWidth / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
  svg << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
      << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
  svg << "<text x='16' y='" << kHeight / 2 << "' text-anchor='middle' font-size='12' "
      << "transform='rotate(-90 16 " << kHeight / 2 << ")'>" << y_label << "</text>\n";
  svg << "<text x='" << kLeft << "' y='" << kHeight - kBottom + 16
      << "' text-anchor='middle' font-size='11'>" << fmt(xr.lo) << "</text>\n";
  svg << "<text x='" << kWidth - kRight << "' y='" << kHeight - kBottom + 16
      << "' text-anchor='middle' font-size='11'>" << fmt(xr.hi) << "</text>\n";
  svg << "<text x='" << kLeft - 6 << "' y='" << kHeight - kBottom
      << "' text-anchor='end' font-size='11'>" << fmt(yr.lo) << "</text>\n";
  svg << "<text x='" << kLeft - 6 << "' y='" << kTop + 6 << "' text-anchor='end' font-size='11'>"
      << fmt(yr.hi) << "</text>\n";
  // zero line when the range straddles it
  if (yr.lo < 0.0 && yr.hi > 0.0) {
    const double y0 = yr.map(0.0, kHeight - kBottom, kTop);
    svg << "<line x1='" << kLeft << "' y1='" << y0 << "' x2='" << kWidth - kRight << "' y2='" << y0
        << "' stroke='gray' stroke-dasharray='4 3'/>\n";
  }
}

}  // namespace

void write_svg_line_chart(const std::string& path, const std::vector<double>& xs,
                          const std::vector<double>& ys, const std::string& title,
                          const std::string& x_label, const std::string& y_label) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("write_svg_line_chart: need equal non-empty x/y");
  const Range xr = padded_range(xs), yr = padded_range(ys);
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  frame(svg, title, xr, yr, x_label, y_label);
  svg << "<polyline fill='none' stroke='#c22' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < xs.size(); ++i)
    svg << xr.map(xs[i], kLeft, kWidth - kRight) << ',' << yr.map(ys[i], kHeight - kBottom, kTop)
        << ' ';
  svg << "'/>\n</svg>\n";
  write_text_atomic(path, svg.str());
}

void write_svg_bar_chart(const std::string& path, const std::vector<std::string>& labels,
                         const std::vector<double>& values, const std::string& title) {
  if (labels.size() != values.size() || values.empty())
    throw std::invalid_argument("write_svg_bar_chart: need equal non-empty labels/values");
  std::vector<double> padded = values;
  padded.push_back(0.0);
  const Range yr = padded_range(padded);
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  frame(svg, title, {0.0, double(values.size())}, yr, "", "violation");
  const double span = kWidth - kLeft - kRight;
  const double slot = span / double(values.size());
  const double y0 = yr.map(0.0, kHeight - kBottom, kTop);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double yv = yr.map(values[i], kHeight - kBottom, kTop);
    const double x = kLeft + slot * (double(i) + 0.2);
    svg << "<rect x='" << x << "' y='" << std::min(yv, y0) << "' width='" << 0.6 * slot
        << "' height='" << std::abs(yv - y0) << "' fill='#c22'/>\n";
    svg << "<text x='" << kLeft + slot * (double(i) + 0.5) << "' y='" << kHeight - kBottom + 16
        << "' text-anchor='middle' font-size='11'>" << labels[i] << "</text>\n";
  }
  svg << "</svg>\n";
  write_text_atomic(path, svg.str());
}

}  // namespace modvar
