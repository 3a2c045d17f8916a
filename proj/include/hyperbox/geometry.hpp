#ifndef HYPERBOX_GEOMETRY_HPP
#define HYPERBOX_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace hyperbox {

/// A point in objective space (z, s, bound coordinates, query p and q).
using ObjectivePoint = std::vector<double>;

/// `absolute`: edges in objective units. `relative`: each edge divided by the
/// start box extent in that objective. `scaled`: every edge divided by the
/// shortest start box edge, so epsilon is a fraction of that edge.
enum class SizeMode { absolute, relative, scaled };

inline std::string_view to_string(SizeMode mode) {
  switch (mode) {
    case SizeMode::absolute: return "absolute";
    case SizeMode::relative: return "relative";
    case SizeMode::scaled: return "scaled";
  }
  return "unknown";
}

inline SizeMode parse_size_mode(std::string_view text) {
  if (text == "absolute") return SizeMode::absolute;
  if (text == "relative") return SizeMode::relative;
  if (text == "scaled") return SizeMode::scaled;
  throw ConfigurationError("unknown size mode '" + std::string(text) + "'");
}

enum class BoundKind { lower, upper };

/// Componentwise strict order: a_i < b_i for every i.
inline bool strictly_less(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "strictly_less: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] < b[i])) return false;
  }
  return true;
}

/// a_i <= b_i for every i.
inline bool weakly_less(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "weakly_less: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

/// Pareto dominance for minimization: a <= b and a != b.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "dominates: dimension mismatch");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

/// An axis-parallel box [lower, upper].
struct BoxDims {
  ObjectivePoint lower;
  ObjectivePoint upper;

  [[nodiscard]] std::size_t dimension() const { return lower.size(); }
  [[nodiscard]] bool valid() const {
    return lower.size() == upper.size() && lower.size() >= 2 && strictly_less(lower, upper);
  }
  friend bool operator==(const BoxDims&, const BoxDims&) = default;
};

/**
 * How box sizes are measured.
 *
 * The size of a box is its smallest edge length, with edge i divided by
 * scale()[i] unless the mode is absolute.
 */
class SizeMeasure {
 public:
  SizeMeasure() = default;

  SizeMeasure(SizeMode mode, std::vector<double> scale) : mode_(mode), scale_(std::move(scale)) {
    if (mode_ != SizeMode::absolute) {
      for (double value : scale_) {
        detail::require(std::isfinite(value) && value > 0.0,
                        "SizeMeasure: normalized modes need positive finite scale entries");
      }
    }
  }

  /// Measure whose scale is derived from the extents of `start_box`.
  static SizeMeasure for_start_box(SizeMode mode, const BoxDims& start_box) {
    std::vector<double> scale(start_box.dimension());
    for (std::size_t i = 0; i < scale.size(); ++i) {
      scale[i] = start_box.upper[i] - start_box.lower[i];
    }
    if (mode == SizeMode::scaled && !scale.empty()) {
      scale.assign(scale.size(), *std::min_element(scale.begin(), scale.end()));
    }
    return {mode, std::move(scale)};
  }

  [[nodiscard]] SizeMode mode() const { return mode_; }
  [[nodiscard]] const std::vector<double>& scale() const { return scale_; }

  /// Smallest (possibly normalized) edge length of [lower, upper].
  [[nodiscard]] double size(std::span<const double> lower, std::span<const double> upper) const {
    double best = std::numeric_limits<double>::infinity();
    if (mode_ == SizeMode::absolute) {
      for (std::size_t i = 0; i < lower.size(); ++i) {
        best = std::min(best, upper[i] - lower[i]);
      }
    } else {
      for (std::size_t i = 0; i < lower.size(); ++i) {
        best = std::min(best, (upper[i] - lower[i]) / scale_[i]);
      }
    }
    return best;
  }

  [[nodiscard]] double volume(std::span<const double> lower, std::span<const double> upper) const {
    double product = 1.0;
    if (mode_ == SizeMode::absolute) {
      for (std::size_t i = 0; i < lower.size(); ++i) product *= upper[i] - lower[i];
    } else {
      for (std::size_t i = 0; i < lower.size(); ++i) product *= (upper[i] - lower[i]) / scale_[i];
    }
    return product;
  }

 private:
  SizeMode mode_ = SizeMode::absolute;
  std::vector<double> scale_;
};

inline double box_size(const BoxDims& box, const SizeMeasure& measure) {
  detail::require(box.valid(), "box_size: invalid box");
  if (measure.mode() != SizeMode::absolute) {
    detail::require(measure.scale().size() == box.dimension(), "box_size: scale dimension mismatch");
  }
  return measure.size(box.lower, box.upper);
}

/**
 * Total order used to pick the next box.
 *
 * Larger size wins; equal sizes fall back to the larger volume and then to the
 * lexicographically larger (l_1..l_m, u_1..u_m) tuple. `size_a`/`size_b` are
 * the already computed sizes, so scans only pay for the volume on ties.
 * Returns `greater` when box a is preferred.
 */
inline std::strong_ordering compare_boxes(std::span<const double> lower_a, std::span<const double> upper_a,
                                          double size_a, std::span<const double> lower_b,
                                          std::span<const double> upper_b, double size_b,
                                          const SizeMeasure& measure) {
  if (size_a != size_b) {
    return size_a > size_b ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  const double volume_a = measure.volume(lower_a, upper_a);
  const double volume_b = measure.volume(lower_b, upper_b);
  if (volume_a != volume_b) {
    return volume_a > volume_b ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  for (std::size_t i = 0; i < lower_a.size(); ++i) {
    if (lower_a[i] != lower_b[i]) {
      return lower_a[i] > lower_b[i] ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  for (std::size_t i = 0; i < upper_a.size(); ++i) {
    if (upper_a[i] != upper_b[i]) {
      return upper_a[i] > upper_b[i] ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

inline std::strong_ordering compare_boxes(const BoxDims& a, const BoxDims& b, const SizeMeasure& measure) {
  detail::require(a.dimension() == b.dimension(), "compare_boxes: dimension mismatch");
  return compare_boxes(a.lower, a.upper, measure.size(a.lower, a.upper), b.lower, b.upper,
                       measure.size(b.lower, b.upper), measure);
}

}  // namespace hyperbox

#endif  // HYPERBOX_GEOMETRY_HPP
