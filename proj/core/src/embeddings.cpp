#include "relmine/embeddings.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "relmine/errors.hpp"
#include "relmine/similarity_kernel.hpp"

namespace relmine {
namespace {

constexpr std::string_view kMagic = "EMBV1\n";

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(std::string("EMBV1 payload truncated while reading ") + what);
    }
  }
  std::uint8_t u8(const char* what) {
    std::uint8_t b;
    bytes(&b, 1, what);
    return b;
  }
  std::uint16_t u16(const char* what) {
    std::array<std::uint8_t, 2> b;
    bytes(b.data(), 2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32(const char* what) {
    std::array<std::uint8_t, 4> b;
    bytes(b.data(), 4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::string text(std::size_t n, const char* what) {
    std::string s(n, '\0');
    if (n > 0) bytes(s.data(), n, what);
    return s;
  }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

void put_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }
void put_u16(std::ostream& out, std::uint16_t v) {
  put_u8(out, static_cast<std::uint8_t>(v));
  put_u8(out, static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::ostream& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) put_u8(out, static_cast<std::uint8_t>(v >> shift));
}

}  // namespace

std::size_t EmbeddingPartition::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? npos : it->second;
}

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw ValidationError("embedding dimension must be positive");
}

EmbeddingStore::AddStatus EmbeddingStore::add(Language lang, std::string id, std::span<const float> vector) {
  if (vector.size() != dimension_) {
    throw ValidationError("vector for '" + id + "' has dimension " + std::to_string(vector.size()) + ", expected " +
                          std::to_string(dimension_));
  }
  auto [it, created] = partitions_.try_emplace(lang, dimension_);
  EmbeddingPartition& part = it->second;
  if (part.index_.count(id) > 0) {
    throw ValidationError("duplicate item id '" + id + "' in language " + std::string(code(lang)));
  }

  double sum = 0.0;
  for (float x : vector) sum += static_cast<double>(x) * static_cast<double>(x);
  const double norm = std::sqrt(sum);
  if (!std::isfinite(norm)) {
    if (created) partitions_.erase(it);
    return AddStatus::kNonFinite;
  }
  if (norm == 0.0) {
    if (created) partitions_.erase(it);
    return AddStatus::kZeroNorm;
  }

  const std::size_t row = part.ids_.size();
  if (std::abs(norm - 1.0) <= kNormTolerance) {
    part.data_.insert(part.data_.end(), vector.begin(), vector.end());
  } else {
    for (float x : vector) part.data_.push_back(static_cast<float>(static_cast<double>(x) / norm));
  }
  part.index_.emplace(id, row);
  part.ids_.push_back(std::move(id));
  order_.emplace_back(lang, row);
  return AddStatus::kAdded;
}

const EmbeddingPartition* EmbeddingStore::partition(Language lang) const {
  const auto it = partitions_.find(lang);
  return it == partitions_.end() ? nullptr : &it->second;
}

EmbeddingLoad read_embeddings(std::istream& in) {
  Reader reader(in);
  std::string magic(kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (static_cast<std::size_t>(in.gcount()) != kMagic.size() || magic != kMagic) {
    throw FormatError("bad EMBV1 magic");
  }
  const std::uint32_t count = reader.u32("record count");
  const std::uint32_t dimension = reader.u32("dimension");
  if (dimension == 0) throw FormatError("EMBV1 dimension is zero");

  EmbeddingLoad load{EmbeddingStore(dimension), {}};
  std::set<std::pair<Language, std::string>> seen;
  std::vector<float> vector(dimension);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::string lang_code = reader.text(reader.u8("language length"), "language code");
    std::string id = reader.text(reader.u16("item id length"), "item id");
    for (auto& x : vector) {
      const std::uint32_t bits = reader.u32("vector");
      x = std::bit_cast<float>(bits);
    }
    const auto lang = parse_language(lang_code);
    if (!lang) throw FormatError("record " + std::to_string(r + 1) + ": unknown language '" + lang_code + "'");
    if (id.empty()) throw FormatError("record " + std::to_string(r + 1) + ": empty item id");
    if (!seen.emplace(*lang, id).second) {
      throw FormatError("record " + std::to_string(r + 1) + ": duplicate item id '" + id + "' in language " +
                        lang_code);
    }
    const std::size_t position = r + 1;
    switch (load.store.add(*lang, std::move(id), vector)) {
      case EmbeddingStore::AddStatus::kAdded: break;
      case EmbeddingStore::AddStatus::kZeroNorm: load.diagnostics.push_back({position, "zero-norm vector skipped"}); break;
      case EmbeddingStore::AddStatus::kNonFinite:
        load.diagnostics.push_back({position, "non-finite vector skipped"});
        break;
    }
  }
  if (!reader.at_end()) throw FormatError("trailing bytes after the last EMBV1 record");
  return load;
}

EmbeddingLoad load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingStore& store) {
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_u32(out, static_cast<std::uint32_t>(store.size()));
  put_u32(out, static_cast<std::uint32_t>(store.dimension()));
  for (const auto& [lang, row] : store.order()) {
    const EmbeddingPartition& part = *store.partition(lang);
    const std::string_view lang_code = code(lang);
    const std::string& id = part.id(row);
    if (id.size() > 0xFFFF) throw ValidationError("item id longer than 65535 bytes");
    put_u8(out, static_cast<std::uint8_t>(lang_code.size()));
    out.write(lang_code.data(), static_cast<std::streamsize>(lang_code.size()));
    put_u16(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    for (float x : part.row(row)) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingStore& store) {
  std::ostringstream buffer;
  write_embeddings(buffer, store);
  write_text_file(path, buffer.str());
}

float cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw ValidationError("cosine of vectors with dimensions " + std::to_string(u.size()) + " and " +
                          std::to_string(v.size()));
  }
  const std::vector<double> wide = kernel::widen(u);
  float sim = 0.0f;
  kernel::similarity_block(wide.data(), 1, v.data(), 1, v.size(), &sim);
  return sim;
}

}  // namespace relmine
