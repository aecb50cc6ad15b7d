#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relmine/language.hpp"
#include "relmine/record_io.hpp"

namespace relmine {

/// Item-title vectors of one language, stored row-major.
class EmbeddingPartition {
 public:
  explicit EmbeddingPartition(std::size_t dimension) : dimension_(dimension) {}

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::string& id(std::size_t row) const { return ids_.at(row); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t r) const {
    return std::span<const float>(data_).subspan(r * dimension_, dimension_);
  }
  /// Row-major size() x dimension() block.
  const float* data() const noexcept { return data_.data(); }
  /// Row of `id`, or npos.
  std::size_t find(std::string_view id) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  friend class EmbeddingStore;
  std::size_t dimension_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Language-partitioned unit vectors. Immutable once loaded; safe for
/// concurrent readers.
class EmbeddingStore {
 public:
  /// Vectors within this distance of unit norm are kept bit-for-bit; others
  /// are rescaled. Rescaling lands well inside the tolerance, so loading a
  /// file written from a loaded store reproduces it exactly.
  static constexpr double kNormTolerance = 1e-5;

  explicit EmbeddingStore(std::size_t dimension);

  enum class AddStatus { kAdded, kZeroNorm, kNonFinite };

  /// Normalizes and appends. Zero or non-finite vectors are refused (status
  /// returned); a wrong dimension or an id already present in the language
  /// throws ValidationError.
  AddStatus add(Language lang, std::string id, std::span<const float> vector);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return order_.size(); }
  /// nullptr when the language has no vectors.
  const EmbeddingPartition* partition(Language lang) const;
  const std::map<Language, EmbeddingPartition>& partitions() const noexcept { return partitions_; }

  /// (language, row) pairs in insertion order; the writer follows it.
  const std::vector<std::pair<Language, std::size_t>>& order() const noexcept { return order_; }

 private:
  std::size_t dimension_;
  std::map<Language, EmbeddingPartition> partitions_;
  std::vector<std::pair<Language, std::size_t>> order_;
};

struct EmbeddingLoad {
  EmbeddingStore store;
  std::vector<Diagnostic> diagnostics;  // position = 1-based record ordinal
};

// EMBV1, little-endian:
//   "EMBV1\n" | u32 count | u32 dimension |
//   count x ( u8 len, language code | u16 len, item id | dimension x f32 )
//
// Throws FormatError on bad magic, zero dimension, truncation, trailing
// bytes, unknown language or a duplicate id within a language.
EmbeddingLoad read_embeddings(std::istream& in);
EmbeddingLoad load_embeddings(const std::filesystem::path& path);

void write_embeddings(std::ostream& out, const EmbeddingStore& store);
void save_embeddings(const std::filesystem::path& path, const EmbeddingStore& store);

/// Dot product of two unit vectors, accumulated in double, rounded to float
/// and clamped to [-1, 1]. Throws ValidationError on a dimension mismatch.
float cosine(std::span<const float> u, std::span<const float> v);

}  // namespace relmine
