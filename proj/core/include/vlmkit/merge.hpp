#pragma once

#include <span>
#include <vector>

#include "vlmkit/tensor_map.hpp"

namespace vlmkit {

/// Elementwise mean of checkpoints sharing names and shapes.
///
/// Each element is accumulated in double, maps summed in argument order,
/// then rounded once to float, so the result is reproducible bit for bit.
/// Throws Errc::EmptyInput, Errc::NameSetMismatch or Errc::ShapeMismatch.
TensorMap average(std::span<const TensorMap> maps, unsigned jobs = 1);

/// Weighted mean, sum(w_i x_i) / sum(w_i). Weights must be finite,
/// non-negative and not all zero (Errc::InvalidInput otherwise).
TensorMap weighted_average(std::span<const TensorMap> maps, std::span<const double> weights,
                           unsigned jobs = 1);

/// Pairwise cosine similarity between checkpoint deltas from a shared base.
struct InterferenceReport {
  std::vector<std::vector<double>> pairwise;  // k x k
  std::vector<double> norms;                  // L2 norm of each delta
};

/// delta_i = flatten(maps[i] - base), flattened in name order and accumulated
/// in double. A zero delta has similarity 0 with every other delta and 1 with
/// itself.
InterferenceReport cosine_matrix(std::span<const TensorMap> maps, const TensorMap& base);

/// Throws Errc::NameSetMismatch / Errc::ShapeMismatch if `other` differs
/// from `reference` in names or shapes.
void check_compatible(const TensorMap& reference, const TensorMap& other);

}  // namespace vlmkit
