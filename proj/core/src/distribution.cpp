#include "relmine/distribution.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace relmine {
namespace {

constexpr int kLeft = 70;
constexpr int kRight = 20;
constexpr int kTop = 50;
constexpr int kPlotHeight = 240;
constexpr int kGroupWidth = 56;
constexpr int kBarWidth = 20;
constexpr const char* kPositiveColor = "#4c72b0";
constexpr const char* kNegativeColor = "#dd8452";

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2, 5 x 10^k step giving at most five ticks.
std::uint64_t tick_step(std::uint64_t max) {
  std::uint64_t step = 1;
  while (true) {
    for (std::uint64_t m : {1u, 2u, 5u}) {
      if (max / (step * m) <= 5) return step * m;
    }
    step *= 10;
  }
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string render_distribution_svg(const LabelStats& stats, std::string_view title) {
  const auto& langs = stats.per_language();
  const int groups = static_cast<int>(langs.size());
  const int width = kLeft + std::max(groups, 1) * kGroupWidth + kRight;
  const int height = kTop + kPlotHeight + 60;
  std::uint64_t max = 0;
  for (const auto& [lang, c] : langs) max = std::max({max, c.positives, c.negatives});
  const std::uint64_t step = tick_step(std::max<std::uint64_t>(max, 1));
  const std::uint64_t top = ((std::max<std::uint64_t>(max, 1) + step - 1) / step) * step;
  const auto y_of = [&](std::uint64_t v) {
    return kTop + kPlotHeight - static_cast<double>(v) * kPlotHeight / static_cast<double>(top);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n";
  }
  for (std::uint64_t v = 0; v <= top; v += step) {
    const std::string y = fixed(y_of(v));
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << width - kRight << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y << "\" text-anchor=\"end\" dominant-baseline=\"middle\">" << v
        << "</text>\n";
  }
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + kPlotHeight << "\" x2=\"" << width - kRight << "\" y2=\""
      << kTop + kPlotHeight << "\" stroke=\"#333333\"/>\n";

  int g = 0;
  for (const auto& [lang, c] : langs) {
    const int x0 = kLeft + g * kGroupWidth + (kGroupWidth - 2 * kBarWidth) / 2;
    const auto bar = [&](int x, std::uint64_t v, const char* color, const char* kind) {
      const double y = y_of(v);
      svg << "<rect class=\"" << kind << "\" data-language=\"" << code(lang) << "\" data-count=\"" << v << "\" x=\""
          << x << "\" y=\"" << fixed(y) << "\" width=\"" << kBarWidth << "\" height=\""
          << fixed(kTop + kPlotHeight - y) << "\" fill=\"" << color << "\"/>\n";
    };
    bar(x0, c.positives, kPositiveColor, "positive");
    bar(x0 + kBarWidth, c.negatives, kNegativeColor, "negative");
    svg << "<text x=\"" << x0 + kBarWidth << "\" y=\"" << kTop + kPlotHeight + 16 << "\" text-anchor=\"middle\">"
        << code(lang) << "</text>\n";
    ++g;
  }

  const int legend_y = height - 18;
  svg << "<rect x=\"" << kLeft << "\" y=\"" << legend_y - 9 << "\" width=\"10\" height=\"10\" fill=\""
      << kPositiveColor << "\"/>\n";
  svg << "<text x=\"" << kLeft + 14 << "\" y=\"" << legend_y << "\">positive</text>\n";
  svg << "<rect x=\"" << kLeft + 80 << "\" y=\"" << legend_y - 9 << "\" width=\"10\" height=\"10\" fill=\""
      << kNegativeColor << "\"/>\n";
  svg << "<text x=\"" << kLeft + 94 << "\" y=\"" << legend_y << "\">negative</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

DistributionReport distribution_report(std::span<const QCRecord> records, std::string_view title) {
  DistributionReport report{language_stats(records), {}};
  report.svg = render_distribution_svg(report.stats, title);
  return report;
}

DistributionReport distribution_report(std::span<const QIRecord> records, std::string_view title) {
  DistributionReport report{language_stats(records), {}};
  report.svg = render_distribution_svg(report.stats, title);
  return report;
}

}  // namespace relmine
