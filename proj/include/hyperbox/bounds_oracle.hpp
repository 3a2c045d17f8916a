#ifndef HYPERBOX_BOUNDS_ORACLE_HPP
#define HYPERBOX_BOUNDS_ORACLE_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace hyperbox {

/// Brute-force local bounds of a small point set, for verification.
///
/// Upper bounds: every tuple whose j-th entry comes from {p_j} or the upper
/// start-box corner, that has no point strictly below it, reduced to its
/// maximal elements. Lower bounds mirror this with the lower corner, "strictly
/// above" and minimal elements. Exponential in the number of points; keep
/// inputs tiny.
inline std::vector<ObjectivePoint> bounds_oracle(const BoxDims& start_box, const std::vector<ObjectivePoint>& points,
                                                 BoundKind kind) {
  const std::size_t m = start_box.dimension();
  const bool upper = kind == BoundKind::upper;

  std::vector<std::vector<double>> values(m);
  for (std::size_t j = 0; j < m; ++j) {
    values[j].push_back(upper ? start_box.upper[j] : start_box.lower[j]);
    for (const auto& p : points) {
      detail::require(p.size() == m, "bounds_oracle: dimension mismatch");
      values[j].push_back(p[j]);
    }
    std::sort(values[j].begin(), values[j].end());
    values[j].erase(std::unique(values[j].begin(), values[j].end()), values[j].end());
  }

  std::vector<ObjectivePoint> candidates;
  std::vector<std::size_t> index(m, 0);
  ObjectivePoint tuple(m);
  while (true) {
    for (std::size_t j = 0; j < m; ++j) tuple[j] = values[j][index[j]];
    const bool inside = upper ? weakly_less(tuple, start_box.upper) && weakly_less(start_box.lower, tuple)
                              : weakly_less(start_box.lower, tuple) && weakly_less(tuple, start_box.upper);
    bool excluded = false;
    for (const auto& p : points) {
      if (upper ? strictly_less(p, tuple) : strictly_less(tuple, p)) {
        excluded = true;
        break;
      }
    }
    if (inside && !excluded) candidates.push_back(tuple);

    std::size_t j = 0;
    while (j < m && ++index[j] == values[j].size()) index[j++] = 0;
    if (j == m) break;
  }

  std::vector<ObjectivePoint> result;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < candidates.size() && !redundant; ++b) {
      if (a == b) continue;
      redundant = upper ? dominates(candidates[a], candidates[b]) : dominates(candidates[b], candidates[a]);
    }
    if (!redundant) result.push_back(candidates[a]);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace hyperbox

#endif  // HYPERBOX_BOUNDS_ORACLE_HPP
