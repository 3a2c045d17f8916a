#ifndef HYPERBOX_METRICS_HPP
#define HYPERBOX_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "problems.hpp"

namespace hyperbox {

/// d(y, z) = max_i max(z_i - y_i, 0): how far z must move to be <= y.
inline double additive_distance(std::span<const double> y, std::span<const double> z) {
  detail::require(y.size() == z.size(), "additive_distance: dimension mismatch");
  double distance = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) distance = std::max(distance, z[i] - y[i]);
  return distance;
}

struct CoverageResult {
  double alpha = 0.0;
  std::size_t worst_sample = 0;
};

/// Smallest alpha such that every sample lies within additive distance alpha
/// of some representation point, together with the sample attaining it.
inline CoverageResult coverage(const std::vector<ObjectivePoint>& representation,
                               const std::vector<ObjectivePoint>& samples) {
  detail::require(!representation.empty() && !samples.empty(), "approximation_quality: empty input");
  CoverageResult result;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& z : representation) {
      nearest = std::min(nearest, additive_distance(samples[k], z));
      if (nearest <= result.alpha) break;
    }
    if (nearest > result.alpha) {
      result.alpha = nearest;
      result.worst_sample = k;
    }
  }
  return result;
}

inline double approximation_quality(const std::vector<ObjectivePoint>& representation,
                                    const std::vector<ObjectivePoint>& samples) {
  return coverage(representation, samples).alpha;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(total);
}

/// Minimum pairwise Euclidean distance; nullopt for fewer than two points.
inline std::optional<double> uniformity(const std::vector<ObjectivePoint>& points) {
  if (points.size() < 2) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) best = std::min(best, euclidean_distance(points[a], points[b]));
  }
  return best;
}

/// Largest nearest-neighbour distance inside a sample set: how far a front
/// point can be from the closest sample, estimated from the samples.
inline double covering_radius(const std::vector<ObjectivePoint>& samples) {
  if (samples.size() < 2) return 0.0;
  double radius = 0.0;
  for (std::size_t a = 0; a < samples.size(); ++a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < samples.size(); ++b) {
      if (a != b) nearest = std::min(nearest, euclidean_distance(samples[a], samples[b]));
    }
    radius = std::max(radius, nearest);
  }
  return radius;
}

struct QualityReport {
  std::size_t cardinality = 0;
  double empirical_alpha = 0.0;
  std::optional<double> uniformity;
  ObjectivePoint worst_sample;
  double covering_slack = 0.0;
  std::size_t samples = 0;
};

inline QualityReport quality_summary(const std::vector<ObjectivePoint>& representation, const ProblemSpec& spec,
                                     std::size_t n, std::uint64_t seed) {
  const auto samples = sample_front(spec, n, seed);
  QualityReport report;
  report.cardinality = representation.size();
  report.samples = samples.size();
  report.uniformity = uniformity(representation);
  report.covering_slack = covering_radius(samples);
  if (!representation.empty()) {
    const CoverageResult cov = coverage(representation, samples);
    report.empirical_alpha = cov.alpha;
    report.worst_sample = samples[cov.worst_sample];
  }
  return report;
}

}  // namespace hyperbox

#endif  // HYPERBOX_METRICS_HPP
