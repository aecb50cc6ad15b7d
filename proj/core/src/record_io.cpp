#include "relmine/record_io.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "relmine/errors.hpp"
#include "relmine/text.hpp"

namespace relmine {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Column name -> position, validated against the names a task accepts.
class Header {
 public:
  Header(std::string_view line, std::span<const std::string_view> allowed,
         std::span<const std::string_view> required) {
    const auto names = split_tabs(line);
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string_view name = names[i];
      if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
        throw FormatError("unknown header column '" + std::string(name) + "'");
      }
      if (!columns_.emplace(std::string(name), i).second) {
        throw FormatError("duplicate header column '" + std::string(name) + "'");
      }
    }
    for (std::string_view name : required) {
      if (!has(name)) throw FormatError("missing header column '" + std::string(name) + "'");
    }
    width_ = names.size();
  }

  bool has(std::string_view name) const { return columns_.count(std::string(name)) > 0; }
  std::size_t at(std::string_view name) const { return columns_.at(std::string(name)); }
  std::size_t width() const { return width_; }

 private:
  std::map<std::string, std::size_t> columns_;
  std::size_t width_ = 0;
};

// Iterates LF-terminated lines; a final unterminated line still counts.
class LineReader {
 public:
  explicit LineReader(std::string content) : content_(std::move(content)) {}

  bool next(std::string_view& line) {
    if (pos_ >= content_.size()) return false;
    const std::size_t end = content_.find('\n', pos_);
    const std::size_t stop = end == std::string::npos ? content_.size() : end;
    line = std::string_view(content_).substr(pos_, stop - pos_);
    pos_ = end == std::string::npos ? content_.size() : end + 1;
    ++number_;
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::string content_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

struct CommonFields {
  std::string query;
  Language language;
  Label label;
  Origin origin;
};

// Checks shared by both tasks. Returns the failure reason, or nullopt.
std::optional<std::string> read_common(std::string_view line, const std::vector<std::string_view>& fields,
                                       const Header& header, CommonFields& out) {
  if (!line.empty() && line.back() == '\r') return "CR line ending";
  if (fields.size() != header.width()) {
    return "expected " + std::to_string(header.width()) + " fields, found " + std::to_string(fields.size());
  }
  if (!text::is_valid_utf8(line)) return "invalid UTF-8";

  const std::string_view query = fields[header.at("query")];
  if (text::trim(query).empty()) return "empty query";

  const std::string_view lang = fields[header.at("language")];
  const auto language = parse_language(lang);
  if (!language) return "unknown language code '" + std::string(lang) + "'";

  const std::string_view label = fields[header.at("label")];
  if (label == "0") {
    out.label = Label::kNegative;
  } else if (label == "1") {
    out.label = Label::kPositive;
  } else if (!label.empty() && label.find_first_not_of("-0123456789") == std::string_view::npos) {
    return "label out of range";
  } else {
    return "invalid label '" + std::string(label) + "'";
  }

  out.origin = Origin::kOriginal;
  if (header.has("origin")) {
    const std::string_view origin = fields[header.at("origin")];
    const auto parsed = parse_origin(origin);
    if (!parsed) return "unknown origin '" + std::string(origin) + "'";
    out.origin = *parsed;
  }
  out.query = std::string(query);
  out.language = *language;
  return std::nullopt;
}

std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

void check_field(std::string_view value, std::string_view what) {
  if (value.find_first_of("\t\n\r") != std::string_view::npos) {
    throw ValidationError(std::string(what) + " contains a tab or line break and cannot be written");
  }
}

constexpr std::array<std::string_view, 5> kQcColumns = {"query", "language", "category_path", "label", "origin"};
constexpr std::array<std::string_view, 4> kQcRequired = {"query", "language", "category_path", "label"};
constexpr std::array<std::string_view, 6> kQiColumns = {"query", "language", "item_id", "item_title", "label", "origin"};
constexpr std::array<std::string_view, 4> kQiRequired = {"query", "language", "item_title", "label"};

}  // namespace

ParseResult<QCRecord> parse_qc(std::istream& in, const ParseOptions& options) {
  LineReader lines(slurp(in));
  std::string_view line;
  if (!lines.next(line)) throw FormatError("missing header row");
  const Header header(line, kQcColumns, kQcRequired);

  ParseResult<QCRecord> result;
  while (lines.next(line)) {
    ++result.data_lines;
    const auto fields = split_tabs(line);
    CommonFields common;
    auto failure = read_common(line, fields, header, common);
    if (!failure) {
      try {
        CategoryPath path = CategoryPath::parse(fields[header.at("category_path")], options.separator);
        result.records.push_back({std::move(common.query), common.language, std::move(path), common.label, common.origin});
        continue;
      } catch (const ValidationError& e) {
        failure = std::string("invalid category path: ") + e.what();
      }
    }
    result.diagnostics.push_back({lines.number(), std::move(*failure)});
  }
  return result;
}

ParseResult<QIRecord> parse_qi(std::istream& in, const ParseOptions&) {
  LineReader lines(slurp(in));
  std::string_view line;
  if (!lines.next(line)) throw FormatError("missing header row");
  const Header header(line, kQiColumns, kQiRequired);
  const bool has_ids = header.has("item_id");

  std::unordered_map<std::string, std::string> title_of_id;
  std::unordered_map<std::string, std::string> auto_id_of_title;

  ParseResult<QIRecord> result;
  while (lines.next(line)) {
    ++result.data_lines;
    const auto fields = split_tabs(line);
    CommonFields common;
    auto failure = read_common(line, fields, header, common);
    if (!failure) {
      const std::string_view title = fields[header.at("item_title")];
      if (text::trim(title).empty()) failure = "empty item_title";
      std::string id;
      if (!failure && has_ids) {
        id = std::string(fields[header.at("item_id")]);
        if (text::trim(id).empty()) {
          failure = "empty item_id";
        } else {
          auto [it, inserted] = title_of_id.emplace(id, std::string(title));
          if (!inserted && it->second != title) failure = "item_id '" + id + "' reused with a different title";
        }
      } else if (!failure) {
        auto [it, inserted] = auto_id_of_title.emplace(std::string(title), std::string());
        if (inserted) it->second = "auto-" + std::to_string(auto_id_of_title.size());
        id = it->second;
      }
      if (!failure) {
        result.records.push_back({std::move(common.query), common.language, std::move(id), std::string(title),
                                  common.label, common.origin});
        continue;
      }
    }
    result.diagnostics.push_back({lines.number(), std::move(*failure)});
  }
  return result;
}

ParseResult<QCRecord> parse_qc_file(const std::filesystem::path& path, const ParseOptions& options) {
  auto in = open_input(path);
  return parse_qc(in, options);
}

ParseResult<QIRecord> parse_qi_file(const std::filesystem::path& path, const ParseOptions& options) {
  auto in = open_input(path);
  return parse_qi(in, options);
}

void write_qc(std::ostream& out, std::span<const QCRecord> records, PathSeparator separator) {
  out << "query\tlanguage\tcategory_path\tlabel\torigin\n";
  for (const auto& r : records) {
    check_field(r.query, "query");
    out << r.query << '\t' << code(r.language) << '\t' << r.path.render(separator) << '\t' << to_int(r.label)
        << '\t' << origin_name(r.origin) << '\n';
  }
}

void write_qi(std::ostream& out, std::span<const QIRecord> records) {
  out << "query\tlanguage\titem_id\titem_title\tlabel\torigin\n";
  for (const auto& r : records) {
    check_field(r.query, "query");
    check_field(r.item_id, "item_id");
    check_field(r.item_title, "item_title");
    out << r.query << '\t' << code(r.language) << '\t' << r.item_id << '\t' << r.item_title << '\t'
        << to_int(r.label) << '\t' << origin_name(r.origin) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return slurp(in);
}

void write_qc_file(const std::filesystem::path& path, std::span<const QCRecord> records, PathSeparator separator) {
  std::ostringstream buffer;
  write_qc(buffer, records, separator);
  write_text_file(path, buffer.str());
}

void write_qi_file(const std::filesystem::path& path, std::span<const QIRecord> records) {
  std::ostringstream buffer;
  write_qi(buffer, records);
  write_text_file(path, buffer.str());
}

}  // namespace relmine
