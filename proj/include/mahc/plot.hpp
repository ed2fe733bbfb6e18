#pragma once

#include <string>
#include <vector>

namespace mahc {

// Minimal standalone SVG charts for the emitted CSV data.
std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values, const std::string& y_label);
std::string svg_line_chart(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::string& x_label, const std::string& y_label);

}  // namespace mahc
