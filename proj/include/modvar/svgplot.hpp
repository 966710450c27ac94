#pragma once

#include <string>
#include <vector>

namespace modvar {

/// Minimal self-contained SVG charts for scan curves and witness summaries.
void write_svg_line_chart(const std::string& path, const std::vector<double>& xs,
                          const std::vector<double>& ys, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

void write_svg_bar_chart(const std::string& path, const std::vector<std::string>& labels,
                         const std::vector<double>& values, const std::string& title);

}  // namespace modvar
