#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Brute-force inner-product kernel. Each pair's dot product is accumulated in
// double over four lanes (dimension i goes to lane i % 4, fused
// multiply-add), tail dimensions go to a fifth accumulator, and the lanes are
// summed as ((l0 + l1) + (l2 + l3)) + tail. Every pair therefore gets the same
// bits no matter how queries and candidates are blocked, which worker runs
// them, or whether the AVX2 or scalar path is compiled in.
namespace relmine::kernel {

/// Widened copy of `rows` row-major float vectors.
std::vector<double> widen(std::span<const float> values);

/// Dot product of a widened query row and a float candidate row.
double dot(const double* query, const float* candidate, std::size_t dimension) noexcept;

/// out[q * candidate_count + c] = float(dot(query q, candidate c)) clamped
/// to [-1, 1].
/// `queries` is widened row-major (query_count x dimension); `candidates`
/// is float row-major (candidate_count x dimension).
void similarity_block(const double* queries, std::size_t query_count, const float* candidates,
                      std::size_t candidate_count, std::size_t dimension, float* out) noexcept;

/// True when the AVX2 path is compiled in.
bool simd_enabled() noexcept;

}  // namespace relmine::kernel
