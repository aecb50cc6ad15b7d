#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace relmine {

/// Level separator used when reading or writing category paths.
enum class PathSeparator {
  kAngle,  // " > " (on-disk default)
  kComma,  // ", "
};

std::string_view separator_text(PathSeparator sep) noexcept;

/// Ordered category hierarchy, level 0 (root) first. Levels are non-empty,
/// trimmed, and never contain the " > " separator, a tab or a newline.
class CategoryPath {
 public:
  CategoryPath() = default;
  /// Throws ValidationError when any level breaks the invariants or the
  /// list is empty.
  explicit CategoryPath(std::vector<std::string> levels);

  /// Splits on the separator and trims each level.
  static CategoryPath parse(std::string_view text, PathSeparator sep = PathSeparator::kAngle);

  std::string render(PathSeparator sep = PathSeparator::kAngle) const;

  std::size_t depth() const noexcept { return levels_.size(); }
  bool empty() const noexcept { return levels_.empty(); }
  const std::string& level(std::size_t i) const { return levels_.at(i); }
  const std::string& leaf() const { return levels_.back(); }
  const std::vector<std::string>& levels() const noexcept { return levels_; }

  /// First `n` levels.
  CategoryPath prefix(std::size_t n) const;

  friend bool operator==(const CategoryPath&, const CategoryPath&) = default;
  friend auto operator<=>(const CategoryPath&, const CategoryPath&) = default;

 private:
  std::vector<std::string> levels_;
};

}  // namespace relmine
