#include "vlmkit/merge.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"
#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

void check_all(std::span<const TensorMap> maps) {
  if (maps.empty()) throw Error(Errc::EmptyInput, "no checkpoints given");
  for (std::size_t i = 1; i < maps.size(); ++i) check_compatible(maps[0], maps[i]);
}

std::vector<const std::string*> names_of(const TensorMap& map) {
  std::vector<const std::string*> names;
  names.reserve(map.size());
  for (const auto& [name, _] : map) names.push_back(&name);
  return names;
}

}  // namespace

void check_compatible(const TensorMap& reference, const TensorMap& other) {
  if (reference.size() != other.size()) {
    throw Error(Errc::NameSetMismatch, "tensor counts differ: " + std::to_string(reference.size()) + " vs " +
                                           std::to_string(other.size()));
  }
  for (auto a = reference.begin(), b = other.begin(); a != reference.end(); ++a, ++b) {
    if (a->first != b->first) {
      throw Error(Errc::NameSetMismatch, "tensor names differ: '" + a->first + "' vs '" + b->first + "'");
    }
    if (a->second.shape != b->second.shape) throw Error(Errc::ShapeMismatch, "shape differs for '" + a->first + "'");
    if (a->second.data.size() != b->second.data.size()) {
      throw Error(Errc::ShapeMismatch, "data length differs for '" + a->first + "'");
    }
  }
}

TensorMap weighted_average(std::span<const TensorMap> maps, std::span<const double> weights, unsigned jobs) {
  check_all(maps);
  if (weights.size() != maps.size()) {
    throw Error(Errc::InvalidInput, "expected " + std::to_string(maps.size()) + " weights, got " +
                                        std::to_string(weights.size()));
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error(Errc::InvalidInput, "weights must be finite and non-negative");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw Error(Errc::InvalidInput, "weights sum to zero");

  TensorMap out;
  for (const auto& [name, tensor] : maps[0]) out[name].shape = tensor.shape;
  const auto names = names_of(maps[0]);

  // Each tensor is independent; the per-element summation order is fixed.
  detail::parallel_for(names.size(), jobs, [&](std::size_t t) {
    const auto& name = *names[t];
    const std::size_t n = maps[0].at(name).data.size();
    std::vector<double> acc(n, 0.0);
    for (std::size_t m = 0; m < maps.size(); ++m) {
      const auto& src = maps[m].at(name).data;
      const double w = weights[m];
      for (std::size_t i = 0; i < n; ++i) acc[i] += w * static_cast<double>(src[i]);
    }
    auto& dst = out.at(name).data;
    dst.resize(n);
    for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<float>(acc[i] / weight_sum);
  });
  return out;
}

TensorMap average(std::span<const TensorMap> maps, unsigned jobs) {
  const std::vector<double> uniform(maps.size(), 1.0);
  return weighted_average(maps, uniform, jobs);
}

InterferenceReport cosine_matrix(std::span<const TensorMap> maps, const TensorMap& base) {
  for (const auto& m : maps) check_compatible(base, m);
  const std::size_t k = maps.size();
  InterferenceReport report;
  report.pairwise.assign(k, std::vector<double>(k, 0.0));
  report.norms.assign(k, 0.0);

  std::vector<std::vector<double>> dot(k, std::vector<double>(k, 0.0));
  std::vector<double> delta(k);
  for (const auto& [name, base_tensor] : base) {
    const std::size_t n = base_tensor.data.size();
    for (std::size_t e = 0; e < n; ++e) {
      const double b = base_tensor.data[e];
      for (std::size_t i = 0; i < k; ++i) delta[i] = static_cast<double>(maps[i].at(name).data[e]) - b;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) dot[i][j] += delta[i] * delta[j];
      }
    }
  }

  for (std::size_t i = 0; i < k; ++i) report.norms[i] = std::sqrt(dot[i][i]);
  for (std::size_t i = 0; i < k; ++i) {
    report.pairwise[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      const double denom = report.norms[i] * report.norms[j];
      const double c = denom > 0.0 ? std::clamp(dot[i][j] / denom, -1.0, 1.0) : 0.0;
      report.pairwise[i][j] = report.pairwise[j][i] = c;
    }
  }
  return report;
}

}  // namespace vlmkit
