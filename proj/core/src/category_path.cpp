#include "relmine/category_path.hpp"

#include "relmine/errors.hpp"
#include "relmine/text.hpp"

namespace relmine {

std::string_view separator_text(PathSeparator sep) noexcept {
  return sep == PathSeparator::kComma ? std::string_view(", ") : std::string_view(" > ");
}

CategoryPath::CategoryPath(std::vector<std::string> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw ValidationError("category path has no levels");
  for (const auto& level : levels_) {
    if (level.empty()) throw ValidationError("category path has an empty level");
    if (text::trim(level).size() != level.size()) {
      throw ValidationError("category level '" + level + "' has surrounding whitespace");
    }
    if (level.find(" > ") != std::string::npos) {
      throw ValidationError("category level '" + level + "' contains the level separator");
    }
    if (level.find_first_of("\t\n\r") != std::string::npos) {
      throw ValidationError("category level contains a control character");
    }
  }
}

CategoryPath CategoryPath::parse(std::string_view text, PathSeparator sep) {
  const std::string_view delim = separator_text(sep);
  std::vector<std::string> levels;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(delim, start);
    const std::string_view piece = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    levels.emplace_back(text::trim(piece));
    if (pos == std::string_view::npos) break;
    start = pos + delim.size();
  }
  return CategoryPath(std::move(levels));
}

std::string CategoryPath::render(PathSeparator sep) const {
  const std::string_view delim = separator_text(sep);
  std::string out;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (i > 0) out.append(delim);
    out.append(levels_[i]);
  }
  return out;
}

CategoryPath CategoryPath::prefix(std::size_t n) const {
  if (n == 0 || n > levels_.size()) throw PreconditionError("path prefix length out of range");
  return CategoryPath(std::vector<std::string>(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(n)));
}

}  // namespace relmine
