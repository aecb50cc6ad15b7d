#include "oracles.hpp"

#include <cctype>

namespace relmine::testing {

std::string ascii_normalize(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool ascii_is_numeric(const std::string& s) {
  bool any = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || std::ispunct(c)) continue;
    if (!std::isdigit(c)) return false;
    any = true;
  }
  return any;
}

ReferenceCleanse reference_cleanse(const std::vector<QCRecord>& records,
                                   const std::unordered_set<std::string>& allowlist) {
  ReferenceCleanse out;
  const std::size_t n = records.size();
  std::vector<std::string> queries(n), targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    queries[i] = ascii_normalize(records[i].query);
    targets[i] = ascii_normalize(records[i].path.render());
  }
  auto key_equal = [&](std::size_t i, std::size_t j) { return queries[i] == queries[j] && targets[i] == targets[j]; };

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    bool conflicted = false;
    for (std::size_t j = 0; j < n && !conflicted; ++j) {
      conflicted = records[j].label != records[i].label && key_equal(i, j);
    }
    if (conflicted) {
      ++out.conflicts_removed;
    } else {
      survivors.push_back(i);
    }
  }

  std::vector<std::size_t> unique;
  for (std::size_t a = 0; a < survivors.size(); ++a) {
    const std::size_t i = survivors[a];
    bool seen = false;
    for (std::size_t b = 0; b < a && !seen; ++b) {
      const std::size_t j = survivors[b];
      seen = records[j].label == records[i].label && key_equal(i, j);
    }
    if (seen) {
      ++out.duplicates_removed;
    } else {
      unique.push_back(i);
    }
  }

  for (std::size_t i : unique) {
    if (ascii_is_numeric(records[i].query)) {
      if (allowlist.count(queries[i])) {
        ++out.allowlisted_kept;
      } else {
        ++out.numeric_removed;
        continue;
      }
    }
    out.kept.push_back(records[i]);
  }
  return out;
}

double naive_dot(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

std::optional<OracleChoice> naive_mine(const std::string& positive, const std::vector<OracleCandidate>& items,
                                       bool hard, double tau) {
  const OracleCandidate* anchor = nullptr;
  for (const auto& it : items) {
    if (it.id == positive) anchor = &it;
  }
  if (anchor == nullptr) return std::nullopt;
  std::optional<OracleChoice> best;
  float best_f = 0.0f;
  for (const auto& it : items) {
    if (it.id == positive) continue;
    const double sim = naive_dot(anchor->vector, it.vector);
    float f = static_cast<float>(sim);
    f = f > 1.0f ? 1.0f : (f < -1.0f ? -1.0f : f);
    if (hard && !(f < static_cast<float>(tau))) continue;
    const bool better = !best || (hard ? f > best_f : f < best_f) || (f == best_f && it.id < best->id);
    if (better) {
      best = OracleChoice{it.id, sim};
      best_f = f;
    }
  }
  return best;
}

}  // namespace relmine::testing
