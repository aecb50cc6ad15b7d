#pragma once

#include <span>
#include <string>
#include <string_view>

#include "relmine/cleanse.hpp"
#include "relmine/records.hpp"

namespace relmine {

struct DistributionReport {
  LabelStats stats;
  std::string svg;
};

DistributionReport distribution_report(std::span<const QCRecord> records, std::string_view title = {});
DistributionReport distribution_report(std::span<const QIRecord> records, std::string_view title = {});

/// Static grouped bar chart: one group per language, positive and negative
/// bars side by side. Output is byte-stable for equal input.
std::string render_distribution_svg(const LabelStats& stats, std::string_view title = {});

}  // namespace relmine
