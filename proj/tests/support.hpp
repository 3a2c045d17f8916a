#ifndef HYPERBOX_TESTS_SUPPORT_HPP
#define HYPERBOX_TESTS_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <vector>

#include <hyperbox/geometry.hpp>
#include <hyperbox/search_region.hpp>

namespace hyperbox::testing {

inline std::vector<ObjectivePoint> sorted(std::vector<ObjectivePoint> points) {
  std::sort(points.begin(), points.end());
  return points;
}

/// Up to `count` mutually nondominated points inside the unit box. With
/// `ties`, coordinates are drawn from a coarse lattice so equal values are
/// common.
inline std::vector<ObjectivePoint> random_nondominated(std::mt19937_64& rng, std::size_t m, std::size_t count,
                                                       bool ties) {
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  std::uniform_int_distribution<int> lattice(1, 9);
  std::vector<ObjectivePoint> points;
  for (std::size_t attempt = 0; attempt < 200 && points.size() < count; ++attempt) {
    ObjectivePoint candidate(m);
    for (auto& value : candidate) value = ties ? lattice(rng) / 10.0 : unit(rng);
    bool comparable = false;
    for (const auto& p : points) {
      if (weakly_less(p, candidate) || weakly_less(candidate, p)) {
        comparable = true;
        break;
      }
    }
    if (!comparable) points.push_back(std::move(candidate));
  }
  return points;
}

inline BoxDims unit_box(std::size_t m) { return {ObjectivePoint(m, 0.0), ObjectivePoint(m, 1.0)}; }

}  // namespace hyperbox::testing

#endif  // HYPERBOX_TESTS_SUPPORT_HPP
