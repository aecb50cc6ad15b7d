#include "relmine/similarity_kernel.hpp"

#include <algorithm>
#include <cmath>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define RELMINE_KERNEL_AVX2 1
#endif

namespace relmine::kernel {
namespace {

constexpr std::size_t kLanes = 4;
// Queries sharing one candidate load in the inner loop.
constexpr std::size_t kQueryBlock = 8;

inline float to_similarity(double dot) noexcept { return std::clamp(static_cast<float>(dot), -1.0f, 1.0f); }

inline double tail_dot(const double* q, const float* c, std::size_t from, std::size_t d) noexcept {
  double tail = 0.0;
  for (std::size_t i = from; i < d; ++i) tail = std::fma(q[i], static_cast<double>(c[i]), tail);
  return tail;
}

#ifdef RELMINE_KERNEL_AVX2

inline double reduce(__m256d acc, double tail) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(acc);    // l0 l1
  const __m128d hi = _mm256_extractf128_pd(acc, 1);  // l2 l3
  const __m128d pairs = _mm_hadd_pd(lo, hi);         // l0+l1, l2+l3
  const double sum = _mm_cvtsd_f64(pairs) + _mm_cvtsd_f64(_mm_unpackhi_pd(pairs, pairs));
  return sum + tail;
}

double dot_impl(const double* q, const float* c, std::size_t d) noexcept {
  const std::size_t body = d - d % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(q + i), _mm256_cvtps_pd(_mm_loadu_ps(c + i)), acc);
  }
  return reduce(acc, tail_dot(q, c, body, d));
}

// kQueryBlock queries against one candidate.
void dot_block(const double* q, std::size_t d, const float* c, double* out) noexcept {
  const std::size_t body = d - d % kLanes;
  __m256d acc[kQueryBlock];
  for (auto& a : acc) a = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d cv = _mm256_cvtps_pd(_mm_loadu_ps(c + i));
    for (std::size_t k = 0; k < kQueryBlock; ++k) {
      acc[k] = _mm256_fmadd_pd(_mm256_loadu_pd(q + k * d + i), cv, acc[k]);
    }
  }
  for (std::size_t k = 0; k < kQueryBlock; ++k) out[k] = reduce(acc[k], tail_dot(q + k * d, c, body, d));
}

#else

double dot_impl(const double* q, const float* c, std::size_t d) noexcept {
  const std::size_t body = d - d % kLanes;
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < body; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) lane[l] = std::fma(q[i + l], static_cast<double>(c[i + l]), lane[l]);
  }
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail_dot(q, c, body, d);
}

void dot_block(const double* q, std::size_t d, const float* c, double* out) noexcept {
  for (std::size_t k = 0; k < kQueryBlock; ++k) out[k] = dot_impl(q + k * d, c, d);
}

#endif

}  // namespace

std::vector<double> widen(std::span<const float> values) {
  return std::vector<double>(values.begin(), values.end());
}

double dot(const double* query, const float* candidate, std::size_t dimension) noexcept {
  return dot_impl(query, candidate, dimension);
}

void similarity_block(const double* queries, std::size_t query_count, const float* candidates,
                      std::size_t candidate_count, std::size_t dimension, float* out) noexcept {
  std::size_t q = 0;
  for (; q + kQueryBlock <= query_count; q += kQueryBlock) {
    const double* qb = queries + q * dimension;
    for (std::size_t c = 0; c < candidate_count; ++c) {
      double sims[kQueryBlock];
      dot_block(qb, dimension, candidates + c * dimension, sims);
      for (std::size_t k = 0; k < kQueryBlock; ++k) {
        out[(q + k) * candidate_count + c] = to_similarity(sims[k]);
      }
    }
  }
  for (; q < query_count; ++q) {
    const double* qr = queries + q * dimension;
    for (std::size_t c = 0; c < candidate_count; ++c) {
      out[q * candidate_count + c] = to_similarity(dot_impl(qr, candidates + c * dimension, dimension));
    }
  }
}

bool simd_enabled() noexcept {
#ifdef RELMINE_KERNEL_AVX2
  return true;
#else
  return false;
#endif
}

}  // namespace relmine::kernel
