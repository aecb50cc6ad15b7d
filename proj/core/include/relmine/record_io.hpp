#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relmine/category_path.hpp"
#include "relmine/records.hpp"

// Tab-separated record files. UTF-8, LF line endings, one header row:
//
//   QC: query  language  category_path  label  [origin]
//   QI: query  language  item_id  item_title  label  [origin]
//
// Columns are matched by name, so their order is free; a QI file may omit
// item_id, in which case ids are assigned per distinct title ("auto-1",
// "auto-2", ... in first-appearance order). Writers always emit the canonical
// column order with an origin column.
namespace relmine {

/// Something wrong at one position of an input: a 1-based line number for
/// text files, a record ordinal for binary files, a source record index for
/// batch operations.
struct Diagnostic {
  std::size_t position = 0;
  std::string reason;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseOptions {
  PathSeparator separator = PathSeparator::kAngle;
};

template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<Diagnostic> diagnostics;
  /// Number of non-header lines; always records + diagnostics.
  std::size_t data_lines = 0;
};

/// Throws FormatError on a missing or unusable header.
ParseResult<QCRecord> parse_qc(std::istream& in, const ParseOptions& options = {});
ParseResult<QIRecord> parse_qi(std::istream& in, const ParseOptions& options = {});

/// As above; throws IoError when the file cannot be opened.
ParseResult<QCRecord> parse_qc_file(const std::filesystem::path& path, const ParseOptions& options = {});
ParseResult<QIRecord> parse_qi_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Throws ValidationError when a field cannot be represented (embedded tab
/// or newline).
void write_qc(std::ostream& out, std::span<const QCRecord> records,
              PathSeparator separator = PathSeparator::kAngle);
void write_qi(std::ostream& out, std::span<const QIRecord> records);

void write_qc_file(const std::filesystem::path& path, std::span<const QCRecord> records,
                   PathSeparator separator = PathSeparator::kAngle);
void write_qi_file(const std::filesystem::path& path, std::span<const QIRecord> records);

/// Write `content` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace relmine
