#include "mahc/plot.hpp"

#include <algorithm>
#include <sstream>

#include "mahc/errors.hpp"
#include "mahc/format.hpp"

namespace mahc {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& svg, const std::string& title, const std::string& y_label, double y_max) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
      << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n"
      << "<text x=\"14\" y=\"" << kHeight / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << kHeight / 2
      << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n"
      << "<text x=\"" << kLeft - 4 << "\" y=\"" << kTop + 4 << "\" font-size=\"10\" text-anchor=\"end\">"
      << format_double(y_max) << "</text>\n";
}

}  // namespace

std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values, const std::string& y_label) {
  if (labels.size() != values.size() || values.empty()) throw InvalidInput("svg_bar_chart: bad series");
  const double y_max = std::max(*std::max_element(values.begin(), values.end()), 1e-12);
  std::ostringstream svg;
  header(svg, title, y_label, y_max);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double slot = plot_w / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = plot_h * std::max(values[i], 0.0) / y_max;
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
    svg << "<rect x=\"" << x << "\" y=\"" << kHeight - kBottom - h << "\" width=\"" << slot * 0.7 << "\" height=\"" << h
        << "\" fill=\"steelblue\"/>\n"
        << "<text x=\"" << x + slot * 0.35 << "\" y=\"" << kHeight - kBottom + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << escape(labels[i]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_line_chart(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::string& x_label, const std::string& y_label) {
  if (xs.size() != ys.size() || xs.empty()) throw InvalidInput("svg_line_chart: bad series");
  const auto [x_lo, x_hi] = std::minmax_element(xs.begin(), xs.end());
  const auto [y_lo, y_hi] = std::minmax_element(ys.begin(), ys.end());
  const double x_span = std::max(*x_hi - *x_lo, 1e-12);
  const double y_span = std::max(*y_hi - *y_lo, 1e-12);
  std::ostringstream svg;
  header(svg, title, y_label, *y_hi);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double px = kLeft + plot_w * (xs[i] - *x_lo) / x_span;
    const double py = kHeight - kBottom - plot_h * (ys[i] - *y_lo) / y_span;
    svg << px << "," << py << " ";
  }
  svg << "\"/>\n"
      << "<text x=\"" << kLeft - 4 << "\" y=\"" << kHeight - kBottom << "\" font-size=\"10\" text-anchor=\"end\">"
      << format_double(*y_lo) << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" font-size=\"12\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace mahc
